//! Eigenvalues of small Hermitian matrices.
//!
//! A Hermitian `X + iY` embeds into the real symmetric
//! `[[X, -Y], [Y, X]]`, whose spectrum is the Hermitian spectrum with every
//! eigenvalue doubled. Cyclic Jacobi sweeps on the embedding avoid complex
//! rotation bookkeeping entirely; the reduced density matrices this is used
//! on are tiny, so the doubled dimension is irrelevant.

use num_complex::Complex64;

/// Eigenvalues of a Hermitian `dim x dim` matrix in row-major order,
/// descending.
pub fn hermitian_eigenvalues(dim: usize, a: &[Complex64]) -> Vec<f64> {
    assert_eq!(a.len(), dim * dim);
    if dim == 0 {
        return vec![];
    }
    let n = 2 * dim;
    let mut m = vec![0.0f64; n * n];
    for i in 0..dim {
        for j in 0..dim {
            let z = a[i * dim + j];
            m[i * n + j] = z.re;
            m[(i + dim) * n + (j + dim)] = z.re;
            m[i * n + (j + dim)] = -z.im;
            m[(i + dim) * n + j] = z.im;
        }
    }
    let mut evs = jacobi_symmetric(n, m);
    evs.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    // the embedding doubles every eigenvalue; average the pairs
    (0..dim).map(|i| 0.5 * (evs[2 * i] + evs[2 * i + 1])).collect()
}

/// Cyclic Jacobi on a dense symmetric matrix; returns the diagonal.
fn jacobi_symmetric(n: usize, mut m: Vec<f64>) -> Vec<f64> {
    let scale = m
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let tol = scale * 1e-15;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= tol {
                    continue;
                }
                rotated = true;
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let a = vec![
            c(3.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-1.0, 0.0),
        ];
        let evs = hermitian_eigenvalues(2, &a);
        assert!((evs[0] - 3.0).abs() < 1e-12);
        assert!((evs[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_y_spectrum() {
        // eigenvalues of [[0, -i], [i, 0]] are +-1
        let a = vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let evs = hermitian_eigenvalues(2, &a);
        assert!((evs[0] - 1.0).abs() < 1e-12);
        assert!((evs[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_preserved_on_random_hermitian() {
        let mut rng = crate::random::rng(2);
        for _ in 0..20 {
            let dim = rand::Rng::gen_range(&mut rng, 1..=8);
            let mut a = vec![c(0.0, 0.0); dim * dim];
            for i in 0..dim {
                for j in i..dim {
                    let z = c(
                        rand::Rng::gen_range(&mut rng, -1.0..1.0),
                        if i == j {
                            0.0
                        } else {
                            rand::Rng::gen_range(&mut rng, -1.0..1.0)
                        },
                    );
                    a[i * dim + j] = z;
                    a[j * dim + i] = z.conj();
                }
            }
            let trace: f64 = (0..dim).map(|i| a[i * dim + i].re).sum();
            let evs = hermitian_eigenvalues(dim, &a);
            let sum: f64 = evs.iter().sum();
            assert!((sum - trace).abs() < 1e-10, "trace {trace} vs sum {sum}");
            // spectrum must reproduce the Frobenius norm as well
            let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            let ev2: f64 = evs.iter().map(|x| x * x).sum();
            assert!((frob - ev2).abs() < 1e-10);
        }
    }
}
