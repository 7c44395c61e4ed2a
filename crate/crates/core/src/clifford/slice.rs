use num_complex::Complex64;
use rand_core::RngCore;

use super::{Algebra, Multivector, MAX_GENERATORS};
use crate::{Error, Result};

/// Tolerance on `|I|^2 - 1` accepted by [`UnitImaginary::new`].
pub const UNIT_TOL: f64 = 1e-12;

/// `x0 + x_1 e_1 + ... + x_n e_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paravector {
    alg: Algebra,
    pub x0: f64,
    x: [f64; MAX_GENERATORS],
}

impl Paravector {
    pub fn new(alg: Algebra, x0: f64, vec: &[f64]) -> Result<Self> {
        if vec.len() != alg.n() {
            return Err(Error::CoefficientCount { expected: alg.n(), got: vec.len() });
        }
        let mut x = [0.0; MAX_GENERATORS];
        x[..vec.len()].copy_from_slice(vec);
        Ok(Self { alg, x0, x })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn vec(&self) -> &[f64] {
        &self.x[..self.alg.n()]
    }

    pub fn vector_norm(&self) -> f64 {
        libm::sqrt(self.vec().iter().map(|x| x * x).sum())
    }

    pub fn norm(&self) -> f64 {
        libm::hypot(self.x0, self.vector_norm())
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut m = self.alg.vector(self.vec()).expect("length checked");
        m.coeffs_mut()[0] = self.x0;
        m
    }

    /// Polar decomposition `x = u + I v`; a real `x` takes `default_dir`.
    pub fn to_slice(&self, default_dir: &UnitImaginary) -> SlicePoint {
        let r = self.vector_norm();
        if r > 1e-14 {
            let mut dir = [0.0; MAX_GENERATORS];
            for (d, x) in dir.iter_mut().zip(self.vec()) {
                *d = x / r;
            }
            SlicePoint { u: self.x0, v: r, dir: UnitImaginary { alg: self.alg, dir } }
        } else {
            SlicePoint { u: self.x0, v: 0.0, dir: *default_dir }
        }
    }
}

/// A unit 1-vector `I`, so that `I^2 = -1` and `{u + I v}` is a copy of the
/// complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitImaginary {
    alg: Algebra,
    dir: [f64; MAX_GENERATORS],
}

impl UnitImaginary {
    /// Accepts `dir` only if it is already a unit vector.
    pub fn new(alg: Algebra, dir: &[f64]) -> Result<Self> {
        let u = Self::raw(alg, dir)?;
        let n2 = u.norm_sq();
        if libm::fabs(n2 - 1.0) > UNIT_TOL {
            return Err(Error::NotUnit(n2));
        }
        Ok(u)
    }

    /// Normalizes `dir`; fails on a (near) zero vector.
    pub fn normalized(alg: Algebra, dir: &[f64]) -> Result<Self> {
        let mut u = Self::raw(alg, dir)?;
        let r = libm::sqrt(u.norm_sq());
        if !(r > 1e-14) || !r.is_finite() {
            return Err(Error::NotUnit(r * r));
        }
        u.dir.iter_mut().for_each(|x| *x /= r);
        Ok(u)
    }

    fn raw(alg: Algebra, dir: &[f64]) -> Result<Self> {
        if dir.len() != alg.n() {
            return Err(Error::CoefficientCount { expected: alg.n(), got: dir.len() });
        }
        let mut d = [0.0; MAX_GENERATORS];
        d[..dir.len()].copy_from_slice(dir);
        Ok(Self { alg, dir: d })
    }

    /// Generator `e_i` (1-based).
    pub fn basis(alg: Algebra, i: usize) -> Self {
        assert!(i >= 1 && i <= alg.n(), "generator e_{i} not in R_{}", alg.n());
        let mut dir = [0.0; MAX_GENERATORS];
        dir[i - 1] = 1.0;
        Self { alg, dir }
    }

    /// Uniform sample from the unit sphere of 1-vectors.
    pub fn random<R: RngCore + ?Sized>(alg: Algebra, rng: &mut R) -> Self {
        loop {
            let mut dir = [0.0; MAX_GENERATORS];
            for d in dir.iter_mut().take(alg.n()) {
                *d = crate::clifford::uniform(rng, -1.0, 1.0);
            }
            let r2: f64 = dir.iter().map(|x| x * x).sum();
            if r2 > 1e-4 && r2 <= 1.0 {
                let r = libm::sqrt(r2);
                dir.iter_mut().for_each(|x| *x /= r);
                return Self { alg, dir };
            }
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn dir(&self) -> &[f64] {
        &self.dir[..self.alg.n()]
    }

    fn norm_sq(&self) -> f64 {
        self.dir().iter().map(|x| x * x).sum()
    }

    pub fn dot(&self, other: &UnitImaginary) -> f64 {
        self.dir().iter().zip(other.dir()).map(|(x, y)| x * y).sum()
    }

    pub fn neg(&self) -> Self {
        let mut u = *self;
        u.dir.iter_mut().for_each(|x| *x = -*x);
        u
    }

    pub fn to_multivector(&self) -> Multivector {
        self.alg.vector(self.dir()).expect("length checked")
    }

    /// `re + I im` as an element of `R_n`.
    pub fn embed(&self, z: Complex64) -> Multivector {
        let mut m = self.to_multivector() * z.im;
        m.coeffs_mut()[0] = z.re;
        m
    }

    /// Whether two units agree to `tol` in max norm.
    pub fn approx_eq(&self, other: &UnitImaginary, tol: f64) -> bool {
        self.alg == other.alg
            && self.dir().iter().zip(other.dir()).all(|(x, y)| libm::fabs(x - y) <= tol)
    }
}

/// `u + I v` with `v >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint {
    pub u: f64,
    pub v: f64,
    pub dir: UnitImaginary,
}

impl SlicePoint {
    pub fn new(u: f64, v: f64, dir: UnitImaginary) -> Result<Self> {
        if !(v >= 0.0) || !u.is_finite() || !v.is_finite() {
            return Err(Error::InvalidDomain(alloc::format!("slice point needs finite u and v >= 0, got ({u}, {v})")));
        }
        Ok(Self { u, v, dir })
    }

    /// Coordinates in `C_I` as a complex number.
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    pub fn to_multivector(&self) -> Multivector {
        self.dir.embed(self.complex())
    }

    pub fn to_paravector(&self) -> Paravector {
        let mut x = [0.0; MAX_GENERATORS];
        for (xk, d) in x.iter_mut().zip(self.dir.dir()) {
            *xk = d * self.v;
        }
        Paravector { alg: self.dir.alg, x0: self.u, x }
    }
}

/// `(w - z)^{-1}` computed in `C_I` and embedded in `R_n`.
pub fn slice_inverse(w: &SlicePoint, z: &SlicePoint) -> Result<Multivector> {
    if !w.dir.approx_eq(&z.dir, 1e-12) {
        return Err(Error::InvalidDomain("slice points on different slices".into()));
    }
    let d = w.complex() - z.complex();
    if d.norm() <= 1e-14 {
        return Err(Error::SingularInverse);
    }
    Ok(w.dir.embed(d.inv()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> Algebra {
        Algebra::new(n).unwrap()
    }

    #[test]
    fn to_slice_examples() {
        let a = alg(3);
        let e1 = UnitImaginary::basis(a, 1);
        let p = Paravector::new(a, 0.0, &[3.0, 4.0, 0.0]).unwrap().to_slice(&e1);
        assert_eq!((p.u, p.v), (0.0, 5.0));
        assert!((p.dir.dir()[0] - 0.6).abs() < 1e-15 && (p.dir.dir()[1] - 0.8).abs() < 1e-15);
        let q = Paravector::new(a, 7.0, &[0.0; 3]).unwrap().to_slice(&e1);
        assert_eq!((q.u, q.v, q.dir), (7.0, 0.0, e1));
    }

    #[test]
    fn unit_square_is_minus_one() {
        let a = alg(4);
        let i = UnitImaginary::normalized(a, &[0.3, -1.2, 0.7, 2.0]).unwrap();
        let m = i.to_multivector();
        assert!((m * m - a.scalar(-1.0)).norm_max() < 1e-15);
        assert!(UnitImaginary::new(a, &[1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn slice_inverse_examples() {
        let a = alg(3);
        let i = UnitImaginary::normalized(a, &[1.0, 2.0, 2.0]).unwrap();
        let z = SlicePoint::new(0.5, 0.25, i).unwrap();
        let w = SlicePoint::new(0.5, 1.25, i).unwrap();
        assert!((slice_inverse(&w, &z).unwrap() + i.to_multivector()).norm_max() < 1e-15);
        let w2 = SlicePoint::new(2.5, 0.25, i).unwrap();
        assert!((slice_inverse(&w2, &z).unwrap() - a.scalar(0.5)).norm_max() < 1e-15);
        assert_eq!(slice_inverse(&z, &z), Err(Error::SingularInverse));
    }
}
