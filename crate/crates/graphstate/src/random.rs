//! Seeded random instance generators, shared by the verification commands and
//! the test suites. Everything is deterministic given the seed.

use crate::graph::{Bipartition, Graph};
use crate::oracle::{LocalRotations, Rotation};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph with independent edge probability `edge_prob`.
pub fn graph(rng: &mut impl Rng, n: usize, edge_prob: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// Uniform angles: theta in [0, pi], phi in [0, 2pi).
pub fn rotations(rng: &mut impl Rng, n: usize) -> LocalRotations {
    LocalRotations::new(
        (0..n)
            .map(|_| Rotation {
                theta: rng.gen_range(0.0..=std::f64::consts::PI),
                phi: rng.gen_range(0.0..std::f64::consts::TAU),
            })
            .collect(),
    )
}

/// Random proper nonempty bipartition of `0..n`; requires `n >= 2`.
pub fn bipartition(rng: &mut impl Rng, n: usize) -> Bipartition {
    assert!(n >= 2);
    loop {
        let side_a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !side_a.is_empty() && side_a.len() < n {
            return Bipartition::from_side_a(n, &side_a).expect("proper sides");
        }
    }
}

pub fn outcome(rng: &mut impl Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(0.5)).collect()
}
