//! Cyclic Jacobi eigenvalue solver for dense real symmetric matrices.
//!
//! Shared by the random-matrix spectra, the Hankel positivity check and the
//! group Gram-matrix tests.

use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius threshold for convergence.
pub const JACOBI_TOL: f64 = 1e-12;
/// Sweep limit before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of the symmetric `n x n` row-major matrix `a`, sorted ascending.
///
/// Runs cyclic sweeps of Jacobi rotations over all `(p, q)`, `p < q`, until
/// the off-diagonal Frobenius norm drops below `JACOBI_TOL * ||A||_F`.
/// Only the upper triangle is trusted to be symmetric with the lower one; the
/// caller is responsible for symmetry.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "matrix buffer does not match dimension");
    let mut m = a.to_vec();
    let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || n <= 1 {
        return Ok(sorted_diagonal(&m, n));
    }
    let threshold = JACOBI_TOL * norm;
    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[i * n + j] * m[i * n + j];
            }
        }
        s.sqrt()
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&m) < threshold {
            return Ok(sorted_diagonal(&m, n));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m[r * n + p];
                    let arq = m[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    m[r * n + p] = new_rp;
                    m[p * n + r] = new_rp;
                    m[r * n + q] = new_rq;
                    m[q * n + r] = new_rq;
                }
            }
        }
    }
    let off = off_norm(&m);
    if off < threshold {
        Ok(sorted_diagonal(&m, n))
    } else {
        Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_norm: off,
        })
    }
}

fn sorted_diagonal(m: &[f64], n: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Result of a positive-semidefiniteness test `lambda_min >= -tol * (1 + max|a_ij|)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// `1 + max|a_ij|`, the scale the tolerance is applied to.
    pub scale: f64,
}

pub fn psd_check(a: &[f64], n: usize, tol: f64) -> Result<PsdReport> {
    let eig = symmetric_eigenvalues(a, n)?;
    let scale = 1.0 + a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    Ok(PsdReport {
        psd: min_eigenvalue >= -tol * scale,
        min_eigenvalue,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_swap() {
        let d = [1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0];
        assert_eq!(symmetric_eigenvalues(&d, 3).unwrap(), vec![1.0, 2.0, 3.0]);
        let s = symmetric_eigenvalues(&[0.0, 1.0, 1.0, 0.0], 2).unwrap();
        assert!((s[0] + 1.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_and_scalar() {
        assert_eq!(symmetric_eigenvalues(&[0.0; 4], 2).unwrap(), vec![0.0, 0.0]);
        assert_eq!(symmetric_eigenvalues(&[5.0], 1).unwrap(), vec![5.0]);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        // deterministic pseudo-random symmetric matrix
        let n = 17;
        let mut a = vec![0.0; n * n];
        let mut x = 0.123456789f64;
        for i in 0..n {
            for j in i..n {
                x = (x * 997.0 + 0.31).fract();
                a[i * n + j] = x - 0.5;
                a[j * n + i] = x - 0.5;
            }
        }
        let eig = symmetric_eigenvalues(&a, n).unwrap();
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        assert!((eig.iter().sum::<f64>() - trace).abs() < 1e-9);
        let fro: f64 = a.iter().map(|v| v * v).sum();
        assert!((eig.iter().map(|v| v * v).sum::<f64>() - fro).abs() < 1e-9);
        assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn psd_tolerance_scaling() {
        let r = psd_check(&[1.0, 1.0, 1.0, 1.0], 2, 1e-8).unwrap();
        assert!(r.psd);
        assert_eq!(r.scale, 2.0);
        let r = psd_check(&[0.0, 1.0, 1.0, 0.0], 2, 1e-8).unwrap();
        assert!(!r.psd);
    }
}
