//! Amplitudes in poly(n, 2^width): GF(2)-signature dynamic programming over
//! a rank decomposition.
//!
//! The amplitude is an Ising-type sum
//! `⟨f|G⟩ = 2^{-n/2} sum_z prod_v f_v(z_v) (-1)^{#satisfied edges}`.
//! For a tree edge separating vertex set `S` from the rest, two partial
//! assignments on `S` interact identically with the outside whenever they
//! have the same image under the cut matrix, and that image lives in the
//! cut-matrix row space — dimension = cut rank `r`. Each assignment is
//! therefore binned into one of `2^r` signatures, the coefficient vector of
//! its effect row in a reduced-echelon basis of the cut matrix.
//!
//! Merging two children multiplies accumulators, applies the crossing-edge
//! phase `(-1)^{s1 K s2^T}` (the crossing submatrix factors through both
//! signature spaces), and re-projects onto the parent signature with linear
//! maps of `(s1, s2)`. A leaf contributes `f_v(0)` and `f_v(1)` at the two
//! signatures of its single row. At the root the cut is empty, the single
//! accumulator times `2^{-n/2}` is the amplitude.
//!
//! Marginals run the same tree with paired bra/ket signatures: summing a
//! qubit out forces its two assignments equal (unitarity of the rotation),
//! which is what makes chain-rule sampling exact.

use crate::bits::{rref, Gf2Vec};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{LocalRotations, MeasurementFunctional};
use crate::width::RankDecomposition;
use num_complex::Complex64;
use rand::Rng;
use std::collections::HashMap;

/// Signatures are machine words; cuts this wide are far past desk scale
/// anyway.
const MAX_RANK: usize = 24;
const MAX_RANK_DOUBLED: usize = 12;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Full-rank factorization of the cut matrix of `set`, kept in global
/// column indexing: `basis` rows span the cut rows, `pivots` are their
/// lowest-index pivot columns.
struct CutFactor {
    set: Gf2Vec,
    basis: Vec<Gf2Vec>,
    pivots: Vec<usize>,
}

impl CutFactor {
    fn build(g: &Graph, set: Gf2Vec) -> CutFactor {
        let comp = set.not();
        let (basis, pivots) = rref(set.iter_ones().map(|u| g.row(u).and(&comp)));
        CutFactor { set, basis, pivots }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coefficient mask of an effect row known to lie in the row space.
    fn coefficients(&self, row: &Gf2Vec) -> u32 {
        bits_at(row, &self.pivots)
    }

    /// Signature of the assignment putting 1 on exactly `vertex`.
    fn vertex_signature(&self, g: &Graph, vertex: usize) -> u32 {
        let comp = self.set.not();
        self.coefficients(&g.row(vertex).and(&comp))
    }
}

fn bits_at(v: &Gf2Vec, positions: &[usize]) -> u32 {
    positions
        .iter()
        .enumerate()
        .fold(0u32, |acc, (j, p)| acc | ((v.get(*p) as u32) << j))
}

/// `K[i]` = coefficients of child-1 basis row `i` restricted to `S2`,
/// expressed over the columns of child-2's coefficient matrix `F2`. Solved
/// by GF(2) elimination on span{columns of F2}; consistency is guaranteed
/// because the restriction lies in the crossing-matrix row space.
fn crossing_matrix(g: &Graph, f1: &CutFactor, f2: &CutFactor) -> Vec<u32> {
    let r2 = f2.rank();
    let comp2 = f2.set.not();
    // columns of F2 as vertex masks over S2
    let mut columns: Vec<(Gf2Vec, u32)> = Vec::with_capacity(r2);
    for j in 0..r2 {
        let mut col = Gf2Vec::zeros(g.n());
        for u in f2.set.iter_ones() {
            let coeff = bits_at(&g.row(u).and(&comp2), &f2.pivots);
            if coeff >> j & 1 == 1 {
                col.set(u, true);
            }
        }
        columns.push((col, 1u32 << j));
    }
    // echelonize the columns, tracking combinations
    let mut elim: Vec<(usize, Gf2Vec, u32)> = Vec::new();
    for (mut vec, mut combo) in columns {
        loop {
            let Some(pivot) = vec.iter_ones().next() else {
                break;
            };
            if let Some((_, bv, bc)) = elim.iter().find(|(p, _, _)| *p == pivot) {
                let (bv, bc) = (bv.clone(), *bc);
                vec.xor_assign(&bv);
                combo ^= bc;
            } else {
                elim.push((pivot, vec, combo));
                break;
            }
        }
    }
    f1.basis
        .iter()
        .map(|b| {
            let mut vec = b.and(&f2.set);
            let mut combo = 0u32;
            loop {
                let Some(pivot) = vec.iter_ones().next() else {
                    break;
                };
                let (_, bv, bc) = elim
                    .iter()
                    .find(|(p, _, _)| *p == pivot)
                    .expect("crossing row lies in the span of F2 columns");
                let (bv, bc) = (bv.clone(), *bc);
                vec.xor_assign(&bv);
                combo ^= bc;
            }
            combo
        })
        .collect()
}

/// Re-projection of a child signature space into the parent's: row `i` is
/// the parent coefficient mask of child basis row `i`.
fn projection(child: &CutFactor, parent: &CutFactor) -> Vec<u32> {
    child
        .basis
        .iter()
        .map(|b| bits_at(b, &parent.pivots))
        .collect()
}

/// Table over all signatures of `rows`-many mask rows: entry `s` is the XOR
/// of `rows[i]` over the bits `i` set in `s`.
fn xor_table(rows: &[u32]) -> Vec<u32> {
    let mut table = vec![0u32; 1usize << rows.len()];
    for s in 1..table.len() {
        let low = s.trailing_zeros() as usize;
        table[s] = table[s & (s - 1)] ^ rows[low];
    }
    table
}

/// Per-signature phase masks: entry `s2` has bit `i` set when
/// `parity(K[i] & s2)` is odd, so the crossing sign for `(s1, s2)` is
/// `parity(s1 & table[s2])`.
fn phase_table(k: &[u32], r2: usize) -> Vec<u32> {
    let cols: Vec<u32> = (0..r2)
        .map(|j| {
            k.iter()
                .enumerate()
                .fold(0u32, |acc, (i, ki)| acc | (((ki >> j & 1) as u32) << i))
        })
        .collect();
    xor_table(&cols)
}

struct Rooted {
    children: Vec<Vec<usize>>,
    vertex_of: Vec<Option<usize>>,
    root_children: (usize, usize),
}

fn root_tree(d: &RankDecomposition, n_nodes: usize) -> Rooted {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for (i, &(u, v)) in d.edges().iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut vertex_of = vec![None; n_nodes];
    for &(node, vertex) in d.leaves() {
        vertex_of[node] = Some(vertex);
    }
    // subdivide edge 0 with a virtual root
    let (a, b) = d.edges()[0];
    let mut children = vec![Vec::new(); n_nodes];
    let mut stack = vec![(a, 0usize), (b, 0usize)];
    let mut seen_edges = vec![false; d.edges().len()];
    seen_edges[0] = true;
    while let Some((node, via)) = stack.pop() {
        let _ = via;
        for &(next, ei) in &adj[node] {
            if !seen_edges[ei] {
                seen_edges[ei] = true;
                children[node].push(next);
                stack.push((next, ei));
            }
        }
        children[node].sort_unstable();
    }
    Rooted {
        children,
        vertex_of,
        root_children: (a, b),
    }
}

/// Post-order over the rooted tree.
fn post_order(rooted: &Rooted) -> Vec<usize> {
    let mut order = Vec::new();
    let mut stack = vec![(rooted.root_children.0, false), (rooted.root_children.1, false)];
    while let Some((node, expanded)) = stack.pop() {
        if expanded {
            order.push(node);
        } else {
            stack.push((node, true));
            for &c in &rooted.children[node] {
                stack.push((c, false));
            }
        }
    }
    order
}

#[derive(Clone, Copy, Debug, Default)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct DpStats {
    pub peak_live_cells: usize,
    pub max_rank: usize,
}

struct CellGauge {
    live: usize,
    peak: usize,
}

impl CellGauge {
    fn new() -> CellGauge {
        CellGauge { live: 0, peak: 0 }
    }
    fn alloc(&mut self, cells: usize) {
        self.live += cells;
        self.peak = self.peak.max(self.live);
    }
    fn free(&mut self, cells: usize) {
        self.live -= cells;
    }
}

struct EdgeState {
    factor: CutFactor,
    acc: Vec<Complex64>,
}

fn leaf_state(
    g: &Graph,
    vertex: usize,
    f: &MeasurementFunctional,
    gauge: &mut CellGauge,
) -> EdgeState {
    let set = Gf2Vec::from_indices(g.n(), [vertex]);
    let factor = CutFactor::build(g, set);
    let (a, b) = f.pair(vertex);
    let mut acc = vec![czero(); 1usize << factor.rank()];
    let sig1 = factor.vertex_signature(g, vertex) as usize;
    acc[0] += a;
    acc[sig1] += b;
    gauge.alloc(acc.len());
    EdgeState { factor, acc }
}

fn empty_state(g: &Graph, gauge: &mut CellGauge) -> EdgeState {
    let factor = CutFactor::build(g, Gf2Vec::zeros(g.n()));
    gauge.alloc(1);
    EdgeState {
        factor,
        acc: vec![Complex64::new(1.0, 0.0)],
    }
}

fn merge(
    g: &Graph,
    s1: EdgeState,
    s2: EdgeState,
    parent_set: Gf2Vec,
    gauge: &mut CellGauge,
) -> Result<EdgeState> {
    let parent = CutFactor::build(g, parent_set);
    let (r1, r2, r) = (s1.factor.rank(), s2.factor.rank(), parent.rank());
    if r1.max(r2).max(r) > MAX_RANK {
        return Err(Error::InvalidDecomposition(format!(
            "cut rank {} exceeds the signature limit {MAX_RANK}",
            r1.max(r2).max(r)
        )));
    }
    let k = crossing_matrix(g, &s1.factor, &s2.factor);
    let phase = phase_table(&k, r2);
    let map1 = xor_table(&projection(&s1.factor, &parent));
    let map2 = xor_table(&projection(&s2.factor, &parent));
    let mut acc = vec![czero(); 1usize << r];
    gauge.alloc(acc.len());
    for (sig2, amp2) in s2.acc.iter().enumerate() {
        if amp2.norm_sqr() == 0.0 {
            continue;
        }
        let ph = phase[sig2];
        let base = map2[sig2];
        for (sig1, amp1) in s1.acc.iter().enumerate() {
            let term = *amp1 * *amp2;
            let target = (map1[sig1] ^ base) as usize;
            if (sig1 as u32 & ph).count_ones() & 1 == 1 {
                acc[target] -= term;
            } else {
                acc[target] += term;
            }
        }
    }
    gauge.free(s1.acc.len());
    gauge.free(s2.acc.len());
    Ok(EdgeState {
        factor: parent,
        acc,
    })
}

fn run_tree(
    g: &Graph,
    d: &RankDecomposition,
    f: &MeasurementFunctional,
) -> Result<(Complex64, DpStats)> {
    let n = g.n();
    if n == 1 {
        let (a, b) = f.pair(0);
        return Ok((
            (a + b) * std::f64::consts::FRAC_1_SQRT_2,
            DpStats::default(),
        ));
    }
    let rooted = root_tree(d, d.num_nodes());
    let mut gauge = CellGauge::new();
    let mut states: HashMap<usize, EdgeState> = HashMap::new();
    let mut max_rank = 0usize;
    for node in post_order(&rooted) {
        let state = if let Some(vertex) = rooted.vertex_of[node] {
            leaf_state(g, vertex, f, &mut gauge)
        } else {
            let mut kids = rooted.children[node].clone();
            let c1 = states
                .remove(&kids.pop().expect("internal node has children"))
                .expect("post-order");
            let c2 = match kids.pop() {
                Some(k) => states.remove(&k).expect("post-order"),
                None => empty_state(g, &mut gauge),
            };
            let mut set = c1.factor.set.clone();
            set.xor_assign(&c2.factor.set);
            merge(g, c1, c2, set, &mut gauge)?
        };
        max_rank = max_rank.max(state.factor.rank());
        states.insert(node, state);
    }
    let (ca, cb) = rooted.root_children;
    let sa = states.remove(&ca).expect("root child evaluated");
    let sb = states.remove(&cb).expect("root child evaluated");
    let full = Gf2Vec::zeros(n).not();
    let final_state = merge(g, sa, sb, full, &mut gauge)?;
    let amp = final_state.acc[0] * std::f64::consts::FRAC_1_SQRT_2.powi(n as i32);
    Ok((
        amp,
        DpStats {
            peak_live_cells: gauge.peak,
            max_rank,
        },
    ))
}

fn validated<'a>(g: &Graph, d: &'a RankDecomposition) -> Result<&'a RankDecomposition> {
    d.validate(g)?;
    Ok(d)
}

/// Exact `⟨f|G⟩` contracted along the decomposition tree.
pub fn amplitude_via_decomposition(
    g: &Graph,
    d: &RankDecomposition,
    f: &MeasurementFunctional,
) -> Result<Complex64> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "functional on {} qubits for an {}-vertex graph",
            f.n(),
            g.n()
        )));
    }
    Ok(run_tree(g, validated(g, d)?, f)?.0)
}

#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn amplitude_with_stats(
    g: &Graph,
    d: &RankDecomposition,
    f: &MeasurementFunctional,
) -> Result<(Complex64, DpStats)> {
    run_tree(g, validated(g, d)?, f)
}

/// `p_x` through the decomposition engine.
pub fn probability_via_decomposition(
    g: &Graph,
    d: &RankDecomposition,
    rotations: &LocalRotations,
    x: &[bool],
) -> Result<f64> {
    let f = MeasurementFunctional::outcome_rows(rotations, x)?;
    Ok(amplitude_via_decomposition(g, d, &f)?.norm_sqr())
}

// ---- marginals: paired bra/ket signatures ----

struct PairState {
    factor: CutFactor,
    /// indexed by `sig_ket | sig_bra << r`
    acc: Vec<Complex64>,
}

fn pair_leaf(
    g: &Graph,
    vertex: usize,
    measured: Option<(Complex64, Complex64)>,
) -> PairState {
    let set = Gf2Vec::from_indices(g.n(), [vertex]);
    let factor = CutFactor::build(g, set);
    let r = factor.rank();
    let sig1 = factor.vertex_signature(g, vertex) as usize;
    let mut acc = vec![czero(); 1usize << (2 * r)];
    match measured {
        Some((a, b)) => {
            let vals = [a, b];
            for (z, sz) in [(0usize, 0usize), (1, sig1)] {
                for (zp, szp) in [(0usize, 0usize), (1, sig1)] {
                    acc[sz | (szp << r)] += vals[z] * vals[zp].conj();
                }
            }
        }
        None => {
            // summed-out qubit: unitarity forces the bra and ket bits equal
            acc[0] += Complex64::new(1.0, 0.0);
            acc[sig1 | (sig1 << r)] += Complex64::new(1.0, 0.0);
        }
    }
    PairState { factor, acc }
}

fn pair_empty(g: &Graph) -> PairState {
    PairState {
        factor: CutFactor::build(g, Gf2Vec::zeros(g.n())),
        acc: vec![Complex64::new(1.0, 0.0)],
    }
}

fn pair_merge(
    g: &Graph,
    s1: PairState,
    s2: PairState,
    parent_set: Gf2Vec,
) -> Result<PairState> {
    let parent = CutFactor::build(g, parent_set);
    let (r1, r2, r) = (s1.factor.rank(), s2.factor.rank(), parent.rank());
    if r1.max(r2).max(r) > MAX_RANK_DOUBLED {
        return Err(Error::InvalidDecomposition(format!(
            "cut rank {} exceeds the paired-signature limit {MAX_RANK_DOUBLED}",
            r1.max(r2).max(r)
        )));
    }
    let k = crossing_matrix(g, &s1.factor, &s2.factor);
    let phase = phase_table(&k, r2);
    let map1 = xor_table(&projection(&s1.factor, &parent));
    let map2 = xor_table(&projection(&s2.factor, &parent));
    let mut acc = vec![czero(); 1usize << (2 * r)];
    let m1 = (1usize << r1) - 1;
    let m2 = (1usize << r2) - 1;
    for (u2, amp2) in s2.acc.iter().enumerate() {
        if amp2.norm_sqr() == 0.0 {
            continue;
        }
        let (k2, b2) = (u2 & m2, u2 >> r2);
        for (u1, amp1) in s1.acc.iter().enumerate() {
            let (k1, b1) = (u1 & m1, u1 >> r1);
            let sign = ((k1 as u32 & phase[k2]).count_ones()
                + (b1 as u32 & phase[b2]).count_ones())
                & 1;
            let ket = (map1[k1] ^ map2[k2]) as usize;
            let bra = (map1[b1] ^ map2[b2]) as usize;
            let term = *amp1 * *amp2;
            if sign == 1 {
                acc[ket | (bra << r)] -= term;
            } else {
                acc[ket | (bra << r)] += term;
            }
        }
    }
    Ok(PairState {
        factor: parent,
        acc,
    })
}

/// Probability that the first `prefix.len()` qubits (ascending vertex id)
/// yield `prefix`, with every later qubit summed out.
pub fn marginal_probability(
    g: &Graph,
    d: &RankDecomposition,
    rotations: &LocalRotations,
    prefix: &[bool],
) -> Result<f64> {
    let n = g.n();
    if rotations.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} rotations for {n} vertices",
            rotations.len()
        )));
    }
    if prefix.len() > n {
        return Err(Error::DimensionMismatch(format!(
            "prefix of {} bits on {n} qubits",
            prefix.len()
        )));
    }
    let per_qubit: Vec<Option<(Complex64, Complex64)>> = (0..n)
        .map(|q| {
            prefix.get(q).map(|x| {
                let m = rotations.0[q].matrix();
                let row = m[*x as usize];
                (row[0], row[1])
            })
        })
        .collect();
    if n == 1 {
        let value = match per_qubit[0] {
            Some((a, b)) => (a + b).norm_sqr() * 0.5,
            None => 1.0,
        };
        return Ok(value);
    }
    validated(g, d)?;
    let rooted = root_tree(d, d.num_nodes());
    let mut states: HashMap<usize, PairState> = HashMap::new();
    for node in post_order(&rooted) {
        let state = if let Some(vertex) = rooted.vertex_of[node] {
            pair_leaf(g, vertex, per_qubit[vertex])
        } else {
            let mut kids = rooted.children[node].clone();
            let c1 = states
                .remove(&kids.pop().expect("internal node has children"))
                .expect("post-order");
            let c2 = match kids.pop() {
                Some(k) => states.remove(&k).expect("post-order"),
                None => pair_empty(g),
            };
            let mut set = c1.factor.set.clone();
            set.xor_assign(&c2.factor.set);
            pair_merge(g, c1, c2, set)?
        };
        states.insert(node, state);
    }
    let (ca, cb) = rooted.root_children;
    let sa = states.remove(&ca).expect("root child evaluated");
    let sb = states.remove(&cb).expect("root child evaluated");
    let full = Gf2Vec::zeros(n).not();
    let final_state = pair_merge(g, sa, sb, full)?;
    let raw = final_state.acc[0] * (0.5f64).powi(n as i32);
    debug_assert!(raw.im.abs() < 1e-9, "marginal has imaginary part {}", raw.im);
    Ok(raw.re.max(0.0))
}

/// Chain-rule sampler: draws each qubit from the exact conditional given by
/// marginal ratios, caching marginals across draws. Deterministic per seed.
pub fn sample_via_chain(
    g: &Graph,
    d: &RankDecomposition,
    rotations: &LocalRotations,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<bool>>> {
    let n = g.n();
    let mut cache: HashMap<Vec<bool>, f64> = HashMap::new();
    let mut marginal = |prefix: &[bool]| -> Result<f64> {
        if let Some(&v) = cache.get(prefix) {
            return Ok(v);
        }
        let v = marginal_probability(g, d, rotations, prefix)?;
        cache.insert(prefix.to_vec(), v);
        Ok(v)
    };
    let mut rng = crate::random::rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut prefix: Vec<bool> = Vec::with_capacity(n);
        let mut p_prefix = 1.0f64;
        for _ in 0..n {
            if p_prefix < 1e-300 {
                return Err(Error::VanishingMarginal);
            }
            prefix.push(false);
            let p0 = marginal(&prefix)?;
            let cond = (p0 / p_prefix).clamp(0.0, 1.0);
            let u: f64 = rng.gen();
            if u < cond {
                p_prefix = p0;
            } else {
                *prefix.last_mut().expect("nonempty") = true;
                p_prefix = marginal(&prefix)?;
            }
        }
        out.push(prefix);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle;
    use crate::width::{exact_rank_width, heuristic_rank_decomposition};

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn decomposition_for(g: &Graph) -> RankDecomposition {
        heuristic_rank_decomposition(g, 1, 5).decomposition
    }

    #[test]
    fn all_zero_functional_gives_plus_state_overlap() {
        let mut rng = crate::random::rng(103);
        for _ in 0..10 {
            let n = rand::Rng::gen_range(&mut rng, 2..=9);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let d = decomposition_for(&g);
            let f = MeasurementFunctional::all_zero(n);
            let amp = amplitude_via_decomposition(&g, &d, &f).unwrap();
            let expect = std::f64::consts::FRAC_1_SQRT_2.powi(n as i32);
            assert!((amp - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn single_edge_all_ones() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let d = decomposition_for(&g);
        let one = (czero(), Complex64::new(1.0, 0.0));
        let f = MeasurementFunctional::new(vec![one; 2]).unwrap();
        let amp = amplitude_via_decomposition(&g, &d, &f).unwrap();
        assert!((amp - Complex64::new(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn matches_oracle_on_random_instances() {
        let mut rng = crate::random::rng(107);
        for _ in 0..60 {
            let n = rand::Rng::gen_range(&mut rng, 2..=10);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let d = decomposition_for(&g);
            let rot = crate::random::rotations(&mut rng, n);
            let x = crate::random::outcome(&mut rng, n);
            let via_dp = probability_via_decomposition(&g, &d, &rot, &x).unwrap();
            let via_oracle = oracle::probability(&g, &rot, &x, 24).unwrap();
            assert!(
                (via_dp - via_oracle).abs() < 1e-9,
                "n={n} dp={via_dp} oracle={via_oracle}"
            );
        }
    }

    #[test]
    fn different_decompositions_agree() {
        let mut rng = crate::random::rng(109);
        for _ in 0..15 {
            let n = rand::Rng::gen_range(&mut rng, 3..=9);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let d1 = heuristic_rank_decomposition(&g, 0, 0).decomposition;
            let d2 = exact_rank_width(&g, 16).unwrap().decomposition;
            let rot = crate::random::rotations(&mut rng, n);
            let x = crate::random::outcome(&mut rng, n);
            let f = MeasurementFunctional::outcome_rows(&rot, &x).unwrap();
            let a1 = amplitude_via_decomposition(&g, &d1, &f).unwrap();
            let a2 = amplitude_via_decomposition(&g, &d2, &f).unwrap();
            assert!((a1 - a2).norm() < 1e-10);
        }
    }

    #[test]
    fn completeness_sums_to_one_at_n8() {
        let mut rng = crate::random::rng(113);
        let g = crate::random::graph(&mut rng, 8, 0.5);
        let d = decomposition_for(&g);
        let rot = crate::random::rotations(&mut rng, 8);
        let total: f64 = (0..256usize)
            .map(|z| {
                probability_via_decomposition(&g, &d, &rot, &oracle::bits_of(z, 8)).unwrap()
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_decompositions_are_rejected() {
        let g = cycle(5);
        let other = cycle(6);
        let d = decomposition_for(&other);
        let f = MeasurementFunctional::all_zero(5);
        assert!(matches!(
            amplitude_via_decomposition(&g, &d, &f),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn cost_accounting_stays_within_edge_budget() {
        let mut rng = crate::random::rng(127);
        for _ in 0..10 {
            let n = rand::Rng::gen_range(&mut rng, 4..=10);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let d = decomposition_for(&g);
            let f = MeasurementFunctional::all_zero(n);
            let (_, stats) = amplitude_with_stats(&g, &d, &f).unwrap();
            let widths = d.edge_widths(&g);
            let budget: usize = widths.iter().map(|w| 1usize << w).sum::<usize>()
                + (1usize << widths[0])
                + 1;
            assert!(
                stats.peak_live_cells <= budget,
                "peak {} over budget {budget}",
                stats.peak_live_cells
            );
        }
    }

    #[test]
    fn c40_with_width_two_witness_is_fast() {
        let g = cycle(40);
        let report = heuristic_rank_decomposition(&g, 0, 0);
        assert!(report.value <= 2);
        let mut rng = crate::random::rng(131);
        let rot = crate::random::rotations(&mut rng, 40);
        let x = crate::random::outcome(&mut rng, 40);
        let start = std::time::Instant::now();
        let p = probability_via_decomposition(&g, &report.decomposition, &rot, &x).unwrap();
        assert!(start.elapsed().as_secs_f64() < 10.0);
        assert!(p.is_finite() && (0.0..=1.0).contains(&p));
    }

    #[test]
    fn marginal_examples() {
        let mut rng = crate::random::rng(137);
        for _ in 0..20 {
            let n = rand::Rng::gen_range(&mut rng, 2..=9);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let d = decomposition_for(&g);
            let rot = crate::random::rotations(&mut rng, n);

            // empty prefix is certain
            assert!((marginal_probability(&g, &d, &rot, &[]).unwrap() - 1.0).abs() < 1e-9);

            // full prefix reduces to the plain probability
            let x = crate::random::outcome(&mut rng, n);
            let full = marginal_probability(&g, &d, &rot, &x).unwrap();
            let p = probability_via_decomposition(&g, &d, &rot, &x).unwrap();
            assert!((full - p).abs() < 1e-10);
        }
    }

    #[test]
    fn marginals_match_dense_summation() {
        let mut rng = crate::random::rng(139);
        for _ in 0..15 {
            let n = rand::Rng::gen_range(&mut rng, 2..=9);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let d = decomposition_for(&g);
            let rot = crate::random::rotations(&mut rng, n);
            let dist = oracle::distribution(&g, &rot, 24).unwrap();
            for len in 0..=n {
                let prefix = crate::random::outcome(&mut rng, len);
                let via_dp = marginal_probability(&g, &d, &rot, &prefix).unwrap();
                let via_dense = dist.marginal(&prefix);
                assert!(
                    (via_dp - via_dense).abs() < 1e-9,
                    "n={n} len={len} dp={via_dp} dense={via_dense}"
                );
            }
        }
    }

    #[test]
    fn chain_sampler_replays_per_seed() {
        let mut rng = crate::random::rng(149);
        let g = crate::random::graph(&mut rng, 6, 0.5);
        let d = decomposition_for(&g);
        let rot = crate::random::rotations(&mut rng, 6);
        let a = sample_via_chain(&g, &d, &rot, 200, 17).unwrap();
        let b = sample_via_chain(&g, &d, &rot, 200, 17).unwrap();
        assert_eq!(a, b);
        let c = sample_via_chain(&g, &d, &rot, 200, 18).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn chain_sampler_tracks_oracle_distribution() {
        let mut rng = crate::random::rng(151);
        let g = crate::random::graph(&mut rng, 6, 0.5);
        let d = decomposition_for(&g);
        let rot = crate::random::rotations(&mut rng, 6);
        let draws = sample_via_chain(&g, &d, &rot, 100_000, 23).unwrap();
        let emp = oracle::OutcomeDistribution::empirical(6, &draws);
        let exact = oracle::distribution(&g, &rot, 24).unwrap();
        let tv = exact.total_variation(&emp);
        assert!(tv <= 0.05, "tv = {tv}");
    }

    #[test]
    fn product_instance_bias_matches_per_qubit_probability() {
        let g = Graph::empty(5);
        let d = decomposition_for(&g);
        let mut rng = crate::random::rng(157);
        let rot = crate::random::rotations(&mut rng, 5);
        let draws = sample_via_chain(&g, &d, &rot, 50_000, 29).unwrap();
        for q in 0..5 {
            let ones = draws.iter().filter(|x| x[q]).count() as f64 / 5e4;
            // |⟨1| U |+⟩|^2 for this qubit
            let m = rot.0[q].matrix();
            let amp = (m[1][0] + m[1][1]) * std::f64::consts::FRAC_1_SQRT_2;
            let p1 = amp.norm_sqr();
            assert!((ones - p1).abs() < 0.01, "qubit {q}: {ones} vs {p1}");
        }
    }
}
