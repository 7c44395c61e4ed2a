//! Dense complex least squares by Householder QR.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Solution of `min ||A x - b||` for several right-hand sides.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    /// One solution vector per right-hand side.
    pub solutions: Vec<Vec<Complex64>>,
    /// `max |R_ii| / min |R_ii|`, a cheap lower bound on the 2-norm condition.
    pub condition: f64,
}

/// Solves `min ||A x - b_k||` for each column `b_k` of `rhs`. `a` is row-major
/// with `m >= n` rows; `rhs[k]` has length `m`. Fails when the condition
/// estimate exceeds `max_condition`.
pub fn complex_lstsq(a: &[Vec<Complex64>], rhs: &[Vec<Complex64>], max_condition: f64) -> Result<LeastSquares> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if n == 0 || m < n || a.iter().any(|r| r.len() != n) || rhs.iter().any(|b| b.len() != m) {
        return Err(Error::InvalidConfig("least squares needs a full m x n matrix with m >= n".into()));
    }
    // column-major working copies
    let mut r: Vec<Vec<Complex64>> = (0..n).map(|j| a.iter().map(|row| row[j]).collect()).collect();
    let mut b: Vec<Vec<Complex64>> = rhs.to_vec();
    for k in 0..n {
        let norm = libm::sqrt(r[k][k..].iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        let x0 = r[k][k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        // v = x + phase |x| e_1 avoids cancellation in the first entry
        let mut v: Vec<Complex64> = r[k][k..].to_vec();
        v[0] += phase * norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let reflect = |col: &mut [Complex64]| {
            let dot: Complex64 = v.iter().zip(col.iter()).map(|(vi, ci)| vi.conj() * ci).sum();
            let s = dot * (2.0 / vnorm2);
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= vi * s;
            }
        };
        for col in r.iter_mut().skip(k) {
            reflect(&mut col[k..]);
        }
        for col in b.iter_mut() {
            reflect(&mut col[k..]);
        }
    }
    let diag: Vec<f64> = (0..n).map(|k| r[k][k].norm()).collect();
    let dmax = diag.iter().fold(0.0f64, |m, d| m.max(*d));
    let dmin = diag.iter().fold(f64::INFINITY, |m, d| m.min(*d));
    let condition = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned(condition));
    }
    let solutions = b
        .iter()
        .map(|col| {
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            for i in (0..n).rev() {
                let mut s = col[i];
                for j in i + 1..n {
                    s -= r[j][i] * x[j];
                }
                x[i] = s / r[i][i];
            }
            x
        })
        .collect();
    Ok(LeastSquares { solutions, condition })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_system_is_solved_exactly() {
        let a = vec![vec![c(2.0, 1.0), c(0.0, -1.0)], vec![c(1.0, 0.0), c(3.0, 2.0)]];
        let x = [c(0.5, -1.0), c(2.0, 0.25)];
        let b: Vec<Complex64> = a.iter().map(|row| row[0] * x[0] + row[1] * x[1]).collect();
        let sol = complex_lstsq(&a, &[b], 1e12).unwrap();
        for (s, t) in sol.solutions[0].iter().zip(&x) {
            assert!((s - t).norm() < 1e-14);
        }
    }

    #[test]
    fn residual_is_orthogonal_to_columns() {
        let a: Vec<Vec<Complex64>> = (0..7).map(|k| vec![c(1.0, 0.0), c(k as f64, 0.5 * k as f64)]).collect();
        let b: Vec<Complex64> = (0..7).map(|k| c((k * k) as f64, -(k as f64))).collect();
        let sol = complex_lstsq(&a, &[b.clone()], 1e12).unwrap();
        let x = &sol.solutions[0];
        for j in 0..2 {
            let dot: Complex64 = a.iter().zip(&b).map(|(row, bi)| row[j].conj() * (row[0] * x[0] + row[1] * x[1] - bi)).sum();
            assert!(dot.norm() < 1e-11, "{dot}");
        }
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let a = vec![vec![c(1.0, 0.0), c(2.0, 0.0)]; 3];
        assert!(matches!(complex_lstsq(&a, &[vec![c(1.0, 0.0); 3]], 1e12), Err(Error::IllConditioned(_))));
    }
}
