//! Polynomial-time output probabilities for the complete graph.
//!
//! The complete-graph state with edge phase `theta` (CZ at `theta = pi`) is
//! `2^{-n/2} sum_z beta^{sum_{i<j} z_i z_j} |z⟩` with `beta = e^{-i theta}`,
//! so an amplitude depends on `z` only through its Hamming weight: the phase
//! of every weight-`y` string is `c_y = beta^{y(y-1)/2}`. Peeling one qubit
//! at a time gives the recursion
//!
//! `Z[m, y] = a_m Z[m-1, y] + b_m beta^{y-1} Z[m-1, y-1]`
//!
//! over an `O(n^2)` table, where `(a_m, b_m)` are the bra coefficients of
//! qubit `m` and `beta^{y-1} = c_y / c_{y-1}`. Appending a 1 to a
//! weight-(y-1) string creates exactly `y-1` new pairs, hence the ratio.
//! `Z[0, 0] = 1` and every `Z[m, y]` with `y < 0` or `y > m` is an empty
//! sum, i.e. zero; the amplitude is `2^{-n/2} sum_y Z[n, y]`.

use crate::error::Result;
use crate::oracle::{LocalRotations, MeasurementFunctional};
use num_complex::Complex64;

/// Edge phase of a plain CZ.
pub const CZ_PHASE: f64 = std::f64::consts::PI;

/// The per-weight phases `c_y = beta^{y(y-1)/2}` for `y = 0..=n`.
#[derive(Clone, Debug)]
pub struct PhaseCoefficients {
    pub beta: Complex64,
    pub c: Vec<Complex64>,
}

pub fn coefficients(n: usize, theta: f64) -> PhaseCoefficients {
    let beta = Complex64::from_polar(1.0, -theta);
    let c = (0..=n)
        .map(|y| {
            let pairs = (y * y.saturating_sub(1) / 2) as f64;
            Complex64::from_polar(1.0, -theta * pairs)
        })
        .collect();
    PhaseCoefficients { beta, c }
}

/// `⟨f | G_complete(theta)⟩` in `O(n^2)` time and memory.
pub fn z_value(f: &MeasurementFunctional, theta: f64) -> Complex64 {
    z_table(f, theta).0
}

/// The recursion with its evaluated-cell count, for cost assertions.
pub(crate) fn z_table(f: &MeasurementFunctional, theta: f64) -> (Complex64, usize) {
    let n = f.n();
    let zero = Complex64::new(0.0, 0.0);
    // ratios[y] = c_{y+1} / c_y = beta^y
    let ratios: Vec<Complex64> = (0..n)
        .map(|y| Complex64::from_polar(1.0, -theta * y as f64))
        .collect();
    let mut prev = vec![Complex64::new(1.0, 0.0)]; // Z[0, 0]
    let mut cells = 1usize;
    for m in 1..=n {
        let (a, b) = f.pair(m - 1);
        let mut cur = vec![zero; m + 1];
        for (y, slot) in cur.iter_mut().enumerate() {
            let stay = if y < prev.len() { a * prev[y] } else { zero };
            let step = if y >= 1 && y - 1 < prev.len() {
                b * ratios[y - 1] * prev[y - 1]
            } else {
                zero
            };
            *slot = stay + step;
            cells += 1;
        }
        prev = cur;
    }
    let total: Complex64 = prev.iter().sum();
    let scale = std::f64::consts::FRAC_1_SQRT_2.powi(n as i32);
    (total * scale, cells)
}

/// `p_x` for the complete graph with edge phase `theta`, via the functional
/// row `⟨x_i| U_i` and the weight recursion. Polynomial in `n`.
pub fn probability_complete(
    rotations: &LocalRotations,
    x: &[bool],
    theta: f64,
) -> Result<f64> {
    let f = MeasurementFunctional::outcome_rows(rotations, x)?;
    Ok(z_value(&f, theta).norm_sqr())
}
