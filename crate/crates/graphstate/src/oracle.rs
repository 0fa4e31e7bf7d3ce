//! Dense statevector simulation: the ground-truth engine.
//!
//! Qubit `i` is bit `i` of the amplitude index (qubit 0 = least significant
//! bit), and outcome strings print qubit 0 first. Everything here is exact
//! up to f64 arithmetic and limited to `n <= limit` qubits; the rank-DP
//! engine covers larger instances.

use crate::bits::Gf2Vec;
use crate::eig::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};
use crate::transform::{delete_vertex, local_complement};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Default cap on dense simulation size (16M amplitudes at n = 24).
pub const DEFAULT_ORACLE_LIMIT: usize = 24;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One measurement-basis rotation, the matrix
/// `[[cos(t/2), -sin(t/2)], [e^{i phi} sin(t/2), e^{i phi} cos(t/2)]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub theta: f64,
    pub phi: f64,
}

impl Rotation {
    pub fn identity() -> Rotation {
        Rotation {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let (s, cos) = (0.5 * self.theta).sin_cos();
        let phase = Complex64::from_polar(1.0, self.phi);
        [
            [c(cos, 0.0), c(-s, 0.0)],
            [phase * s, phase * cos],
        ]
    }
}

/// The per-qubit rotation layer applied before the standard-basis
/// measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalRotations(pub Vec<Rotation>);

impl LocalRotations {
    pub fn new(rotations: Vec<Rotation>) -> LocalRotations {
        LocalRotations(rotations)
    }

    pub fn identity(n: usize) -> LocalRotations {
        LocalRotations(vec![Rotation::identity(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rotations serialize")
    }

    pub fn from_json(text: &str) -> Result<LocalRotations> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A product bra `⊗_i (a_i ⟨0| + b_i ⟨1|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementFunctional(Vec<(Complex64, Complex64)>);

impl MeasurementFunctional {
    pub fn new(pairs: Vec<(Complex64, Complex64)>) -> Result<MeasurementFunctional> {
        if pairs
            .iter()
            .any(|(a, b)| a.norm_sqr() == 0.0 && b.norm_sqr() == 0.0)
        {
            return Err(Error::Infeasible(
                "measurement functional has a (0, 0) qubit entry".into(),
            ));
        }
        Ok(MeasurementFunctional(pairs))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn pair(&self, i: usize) -> (Complex64, Complex64) {
        self.0[i]
    }

    /// `⟨0|` on every qubit.
    pub fn all_zero(n: usize) -> MeasurementFunctional {
        MeasurementFunctional(vec![(c(1.0, 0.0), c(0.0, 0.0)); n])
    }

    /// Row `x_i` of each rotation: the functional whose squared overlap with
    /// the state is exactly `p_x`.
    pub fn outcome_rows(rotations: &LocalRotations, x: &[bool]) -> Result<MeasurementFunctional> {
        if rotations.len() != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rotations vs {} outcome bits",
                rotations.len(),
                x.len()
            )));
        }
        Ok(MeasurementFunctional(
            rotations
                .0
                .iter()
                .zip(x)
                .map(|(r, xi)| {
                    let m = r.matrix();
                    let row = m[*xi as usize];
                    (row[0], row[1])
                })
                .collect(),
        ))
    }

    /// The bra `cos(t/2) e^{-i phi} ⟨0| + sin(t/2) ⟨1|` per qubit — the form
    /// the Hamming-weight recursion is usually written with. Note this is
    /// `e^{-i phi} ⟨0| U†` per qubit, not row 0 of `U`, so its squared
    /// overlap is a different convention from `p_{0^n}`.
    pub fn recursion_bra(rotations: &LocalRotations) -> MeasurementFunctional {
        MeasurementFunctional(
            rotations
                .0
                .iter()
                .map(|r| {
                    let (s, cos) = (0.5 * r.theta).sin_cos();
                    (Complex64::from_polar(cos, -r.phi), c(s, 0.0))
                })
                .collect(),
        )
    }
}

/// Dense register of `2^n` complex amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Prepare `|G⟩ = prod_{(i,j) in E} CZ_{i,j} |+⟩^{⊗n}`.
    pub fn graph_state(g: &Graph, limit: usize) -> Result<StateVector> {
        let n = g.n();
        if n > limit {
            return Err(Error::OverLimit {
                n,
                limit,
                advice: "use the rankdp engine for dense-infeasible sizes".into(),
            });
        }
        let dim = 1usize << n;
        let base = FRAC_1_SQRT_2.powi(n as i32);
        let mut amps = vec![c(base, 0.0); dim];
        for (i, j) in g.edges() {
            let mask = (1usize << i) | (1usize << j);
            for (z, a) in amps.iter_mut().enumerate() {
                if z & mask == mask {
                    *a = -*a;
                }
            }
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, z: usize) -> Complex64 {
        self.amps[z]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_single_qubit(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        assert!(q < self.n);
        let stride = 1usize << q;
        let dim = self.amps.len();
        let mut z = 0;
        while z < dim {
            for off in 0..stride {
                let i0 = z + off;
                let i1 = i0 + stride;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
            }
            z += stride << 1;
        }
    }

    pub fn apply_rotations(&mut self, rotations: &LocalRotations) -> Result<()> {
        if rotations.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} rotations for {} qubits",
                rotations.len(),
                self.n
            )));
        }
        for (q, r) in rotations.0.iter().enumerate() {
            self.apply_single_qubit(q, r.matrix());
        }
        Ok(())
    }

    /// `⟨self | other⟩` (conjugating `self`).
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `⟨f | self⟩` by contracting one qubit at a time from the top.
    pub fn functional_overlap(&self, f: &MeasurementFunctional) -> Result<Complex64> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "functional on {} qubits applied to {}-qubit state",
                f.n(),
                self.n
            )));
        }
        let mut work = self.amps.clone();
        let mut len = work.len();
        for q in (0..self.n).rev() {
            let (a, b) = f.pair(q);
            len >>= 1;
            for z in 0..len {
                work[z] = a * work[z] + b * work[z + len];
            }
        }
        Ok(work[0])
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Exact inner product `⟨f | G⟩`.
pub fn amplitude(g: &Graph, f: &MeasurementFunctional, limit: usize) -> Result<Complex64> {
    StateVector::graph_state(g, limit)?.functional_overlap(f)
}

/// `q_x = ⟨x| ⊗U_i |G⟩`.
pub fn amplitude_for_outcome(
    g: &Graph,
    rotations: &LocalRotations,
    x: &[bool],
    limit: usize,
) -> Result<Complex64> {
    amplitude(g, &MeasurementFunctional::outcome_rows(rotations, x)?, limit)
}

/// `p_x = |⟨x| ⊗U_i |G⟩|^2`.
pub fn probability(
    g: &Graph,
    rotations: &LocalRotations,
    x: &[bool],
    limit: usize,
) -> Result<f64> {
    Ok(amplitude_for_outcome(g, rotations, x, limit)?.norm_sqr())
}

/// The full output distribution over `{0,1}^n`.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> OutcomeDistribution {
        debug_assert_eq!(probs.len(), 1 << n);
        OutcomeDistribution { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob_of(&self, x: &[bool]) -> f64 {
        self.probs[index_of(x)]
    }

    /// Probability that qubits `0..prefix.len()` come out as `prefix`.
    pub fn marginal(&self, prefix: &[bool]) -> f64 {
        let p = prefix.len();
        assert!(p <= self.n);
        let idx = index_of(prefix);
        let mask = (1usize << p) - 1;
        self.probs
            .iter()
            .enumerate()
            .filter(|(z, _)| z & mask == idx)
            .map(|(_, pr)| pr)
            .sum()
    }

    pub fn total_variation(&self, other: &OutcomeDistribution) -> f64 {
        assert_eq!(self.n, other.n);
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    /// Empirical distribution of a sample set.
    pub fn empirical(n: usize, outcomes: &[Vec<bool>]) -> OutcomeDistribution {
        let mut probs = vec![0.0; 1 << n];
        for x in outcomes {
            probs[index_of(x)] += 1.0;
        }
        let total = outcomes.len().max(1) as f64;
        for p in &mut probs {
            *p /= total;
        }
        OutcomeDistribution { n, probs }
    }

    /// Seeded i.i.d. draws by inverse-CDF lookup.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<bool>> {
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for p in &self.probs {
            acc += p;
            cdf.push(acc);
        }
        let mut rng = crate::random::rng(seed);
        (0..count)
            .map(|_| {
                let r: f64 = rng.gen::<f64>() * acc;
                let z = cdf.partition_point(|&c| c <= r).min(self.probs.len() - 1);
                bits_of(z, self.n)
            })
            .collect()
    }
}

pub fn index_of(x: &[bool]) -> usize {
    x.iter()
        .enumerate()
        .fold(0usize, |acc, (i, b)| acc | ((*b as usize) << i))
}

pub fn bits_of(z: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| z >> i & 1 == 1).collect()
}

/// Outcome string with qubit 0 printed first.
pub fn outcome_to_string(x: &[bool]) -> String {
    x.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

pub fn parse_outcome(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse {
                line: 1,
                msg: format!("outcome strings are 0/1 characters, got {ch:?}"),
            }),
        })
        .collect()
}

pub fn distribution(
    g: &Graph,
    rotations: &LocalRotations,
    limit: usize,
) -> Result<OutcomeDistribution> {
    let mut sv = StateVector::graph_state(g, limit)?;
    sv.apply_rotations(rotations)?;
    Ok(OutcomeDistribution::new(g.n(), sv.probabilities()))
}

/// Seeded draws from `D(G, U)`.
pub fn sample(
    g: &Graph,
    rotations: &LocalRotations,
    count: usize,
    seed: u64,
    limit: usize,
) -> Result<Vec<Vec<bool>>> {
    Ok(distribution(g, rotations, limit)?.sample(count, seed))
}

/// Von Neumann entropy (in bits) of the reduced state on side A.
pub fn state_entropy(sv: &StateVector, p: &Bipartition) -> Result<f64> {
    if p.n() != sv.n() {
        return Err(Error::DimensionMismatch(format!(
            "bipartition of {} qubits against {}-qubit state",
            p.n(),
            sv.n()
        )));
    }
    let (small, big): (Vec<usize>, Vec<usize>) = {
        let a: Vec<usize> = p.side_a().iter_ones().collect();
        let b: Vec<usize> = p.side_b().iter_ones().collect();
        if a.len() <= b.len() {
            (a, b)
        } else {
            (b, a)
        }
    };
    let da = 1usize << small.len();
    let db = 1usize << big.len();
    // reduced density matrix on the smaller side
    let mut mat = vec![c(0.0, 0.0); da * db];
    for (z, amp) in sv.amps().iter().enumerate() {
        let mut ai = 0usize;
        for (t, q) in small.iter().enumerate() {
            ai |= (z >> q & 1) << t;
        }
        let mut bi = 0usize;
        for (t, q) in big.iter().enumerate() {
            bi |= (z >> q & 1) << t;
        }
        mat[ai * db + bi] = *amp;
    }
    let mut rho = vec![c(0.0, 0.0); da * da];
    for i in 0..da {
        for k in i..da {
            let mut acc = c(0.0, 0.0);
            for j in 0..db {
                acc += mat[i * db + j] * mat[k * db + j].conj();
            }
            rho[i * da + k] = acc;
            rho[k * da + i] = acc.conj();
        }
    }
    let evs = hermitian_eigenvalues(da, &rho);
    let mut s = 0.0;
    for ev in evs {
        if ev > 1e-12 {
            s -= ev * ev.log2();
        }
    }
    Ok(s)
}

/// Entropy of `|G⟩` across the bipartition.
pub fn entanglement_entropy(g: &Graph, p: &Bipartition, limit: usize) -> Result<f64> {
    state_entropy(&StateVector::graph_state(g, limit)?, p)
}

/// Fidelity `|⟨tau_v(G)| U_v |G⟩|` for the local-complementation Clifford
/// `U_v = exp(-i pi/4 X_v) prod_{u in N_v} exp(i pi/4 Z_u)`; the contract is
/// that it equals 1.
pub fn check_lc_unitary(g: &Graph, v: usize, limit: usize) -> Result<f64> {
    if v >= g.n() {
        return Err(Error::NoSuchVertex(v));
    }
    let mut sv = StateVector::graph_state(g, limit)?;
    let quarter = std::f64::consts::FRAC_PI_4;
    let z_rot = [
        [Complex64::from_polar(1.0, quarter), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, -quarter)],
    ];
    for u in g.neighbors(v) {
        sv.apply_single_qubit(u, z_rot);
    }
    let x_rot = [
        [c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)],
        [c(0.0, -FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)],
    ];
    sv.apply_single_qubit(v, x_rot);
    let tau = StateVector::graph_state(&local_complement(g, v)?, limit)?;
    Ok(tau.inner(&sv).norm())
}

/// Deletion-projector residual: the largest amplitude deviation across both
/// branch identities
/// `P_v^{Z,+}|G⟩ = 2^{-1/2} |0⟩_v |H⟩` and
/// `P_v^{Z,-}|G⟩ = 2^{-1/2} |1⟩_v (prod_{u in N_v} Z_u) |H⟩`,
/// where `H = G - v`. The contract is that it vanishes.
pub fn check_deletion_projector(g: &Graph, v: usize, limit: usize) -> Result<f64> {
    if v >= g.n() {
        return Err(Error::NoSuchVertex(v));
    }
    let sv = StateVector::graph_state(g, limit)?;
    let h = StateVector::graph_state(&delete_vertex(g, v)?, limit)?;
    let nv: &Gf2Vec = g.row(v);
    let nv_mask: usize = nv.iter_ones().fold(0, |acc, u| acc | 1 << u);
    let low_mask = (1usize << v) - 1;
    let mut worst = 0.0f64;
    for (z, amp) in sv.amps().iter().enumerate() {
        let compact = (z & low_mask) | ((z >> (v + 1)) << v);
        let rhs = if z >> v & 1 == 0 {
            FRAC_1_SQRT_2 * h.amp(compact)
        } else {
            let sign = if (z & nv_mask).count_ones() & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            FRAC_1_SQRT_2 * sign * h.amp(compact)
        };
        worst = worst.max((amp - rhs).norm());
    }
    Ok(worst)
}
