//! Gauss rules from the Golub-Welsch eigenproblem.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::gamma::gamma_fn;
use crate::{Error, Result};

/// Nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Jacobi rule for the weight `(1 - x)^a (1 + x)^b` on `[-1, 1]`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidQuadrature("rule needs at least one node".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidQuadrature(format!("Jacobi exponents ({a}, {b}) must exceed -1")));
    }
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (b - a) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let t = 2.0 * kf + ab;
        diag[k] = (b * b - a * a) / (t * (t + 2.0));
    }
    for k in 1..n {
        let kf = k as f64;
        let t = 2.0 * kf + ab;
        let beta = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (t * t * (t + 1.0) * (t - 1.0))
        };
        off[k - 1] = libm::sqrt(beta);
    }
    let mu0 = libm::pow(2.0, ab + 1.0) * gamma_fn(a + 1.0)? * gamma_fn(b + 1.0)? / gamma_fn(ab + 2.0)?;
    let first = tridiagonal_eigen(&mut diag, &mut off)?;
    let mut pairs: Vec<(f64, f64)> = diag.iter().zip(&first).map(|(&x, &z)| (x, mu0 * z * z)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// On return `diag` holds the eigenvalues; the result holds the first
/// component of each normalized eigenvector. `off[k]` couples rows `k` and
/// `k + 1`; its last entry is ignored.
fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    if n > 0 {
        off[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(diag[m]) + libm::fabs(diag[m + 1]);
                if libm::fabs(off[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::InvalidQuadrature("QL iteration did not converge".into()));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = libm::sqrt(g * g + 1.0);
            g = diag[m] - diag[l] + off[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = libm::sqrt(f * f + g * g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_legendre() {
        let r = gauss_legendre(3).unwrap();
        let x = libm::sqrt(0.6);
        assert!((r.nodes[0] + x).abs() < 1e-15 && r.nodes[1].abs() < 1e-15 && (r.nodes[2] - x).abs() < 1e-15);
        assert!((r.weights[0] - 5.0 / 9.0).abs() < 1e-15 && (r.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(gauss_jacobi(4, -1.0, 0.0).is_err());
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
    }
}
