use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::{Error, Linear, Result};

pub const MAX_GENERATORS: usize = 6;
pub const MAX_BLADES: usize = 1 << MAX_GENERATORS;

/// Sign of `e_A e_B` relative to `e_{A xor B}`: reordering parity times the
/// metric factor `(-1)^{|A and B|}` from `e_i^2 = -1`.
const fn blade_sign(a: usize, b: usize) -> i8 {
    let mut swaps = 0u32;
    let mut t = a >> 1;
    while t != 0 {
        swaps += (t & b).count_ones();
        t >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

const fn build_sign_table() -> [[i8; MAX_BLADES]; MAX_BLADES] {
    let mut table = [[0i8; MAX_BLADES]; MAX_BLADES];
    let mut a = 0;
    while a < MAX_BLADES {
        let mut b = 0;
        while b < MAX_BLADES {
            table[a][b] = blade_sign(a, b);
            b += 1;
        }
        a += 1;
    }
    table
}

static SIGN: [[i8; MAX_BLADES]; MAX_BLADES] = build_sign_table();

/// The algebra `R_n` for a validated generator count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Algebra {
    n: u8,
}

impl Algebra {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_GENERATORS).contains(&n) {
            Ok(Self { n: n as u8 })
        } else {
            Err(Error::InvalidDimension(n))
        }
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    /// Number of blades, `2^n`.
    pub fn dim(self) -> usize {
        1 << self.n
    }

    pub fn zero(self) -> Multivector {
        Multivector { n: self.n, c: [0.0; MAX_BLADES] }
    }

    pub fn scalar(self, x: f64) -> Multivector {
        let mut m = self.zero();
        m.c[0] = x;
        m
    }

    pub fn one(self) -> Multivector {
        self.scalar(1.0)
    }

    /// Generator `e_i`, 1-based as in `e_1, ..., e_n`.
    ///
    /// # Panics
    /// If `i` is not in `1..=n`.
    pub fn e(self, i: usize) -> Multivector {
        assert!(i >= 1 && i <= self.n(), "generator e_{i} not in R_{}", self.n);
        self.blade(1 << (i - 1), 1.0)
    }

    /// `x * e_A` for the blade with bitmask `mask`.
    pub fn blade(self, mask: usize, x: f64) -> Multivector {
        assert!(mask < self.dim(), "blade {mask:#b} not in R_{}", self.n);
        let mut m = self.zero();
        m.c[mask] = x;
        m
    }

    pub fn from_coeffs(self, coeffs: &[f64]) -> Result<Multivector> {
        if coeffs.len() != self.dim() {
            return Err(Error::CoefficientCount { expected: self.dim(), got: coeffs.len() });
        }
        let mut m = self.zero();
        m.c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(m)
    }

    /// The 1-vector `sum_k x[k] e_{k+1}`.
    pub fn vector(self, x: &[f64]) -> Result<Multivector> {
        if x.len() != self.n() {
            return Err(Error::CoefficientCount { expected: self.n(), got: x.len() });
        }
        let mut m = self.zero();
        for (k, &xk) in x.iter().enumerate() {
            m.c[1 << k] = xk;
        }
        Ok(m)
    }
}

/// Element of `R_n` stored as `2^n` coefficients indexed by blade bitmask
/// (bit `i` set means `e_{i+1}` is a factor; index 0 is the scalar part).
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    n: u8,
    c: [f64; MAX_BLADES],
}

impl Multivector {
    pub fn algebra(&self) -> Algebra {
        Algebra { n: self.n }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..self.dim()]
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        let d = self.dim();
        &mut self.c[..d]
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs()[mask]
    }

    pub fn scalar_part(&self) -> f64 {
        self.c[0]
    }

    /// Coefficients of `e_1..e_n`.
    pub fn vector_part(&self) -> [f64; MAX_GENERATORS] {
        let mut out = [0.0; MAX_GENERATORS];
        for (k, o) in out.iter_mut().enumerate().take(self.n()) {
            *o = self.c[1 << k];
        }
        out
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        let d = self.dim();
        let mut out = self.algebra().zero();
        for i in 0..d {
            let x = self.c[i];
            if x == 0.0 {
                continue;
            }
            let row = &SIGN[i];
            for j in 0..d {
                let y = other.c[j];
                if y != 0.0 {
                    out.c[i ^ j] += f64::from(row[j]) * x * y;
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute coefficient.
    pub fn norm_max(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, x| m.max(libm::fabs(*x)))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    /// Euclidean inner product of coefficient vectors.
    pub fn dot(&self, other: &Multivector) -> f64 {
        self.coeffs().iter().zip(other.coeffs()).map(|(x, y)| x * y).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|x| x.is_finite())
    }

    /// Value filled with NaN, used to mark failed evaluations.
    pub fn nan(alg: Algebra) -> Multivector {
        let mut m = alg.zero();
        m.coeffs_mut().iter_mut().for_each(|x| *x = f64::NAN);
        m
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.n)?;
        f.debug_list().entries(self.coeffs()).finish()
    }
}

impl Linear for Multivector {
    fn zero_like(&self) -> Self {
        self.algebra().zero()
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn max_abs(&self) -> f64 {
        self.norm_max()
    }
}

fn check_same(x: &Multivector, y: &Multivector) {
    assert_eq!(x.n, y.n, "multivectors from different algebras");
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        check_same(self, &rhs);
        for (x, y) in self.c.iter_mut().zip(rhs.c.iter()) {
            *x += y;
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        check_same(self, &rhs);
        for (x, y) in self.c.iter_mut().zip(rhs.c.iter()) {
            *x -= y;
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, rhs: f64) -> Multivector {
        self.c.iter_mut().for_each(|x| *x *= rhs);
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl Div<f64> for Multivector {
    type Output = Multivector;
    fn div(self, rhs: f64) -> Multivector {
        self * (1.0 / rhs)
    }
}

/// Geometric product.
///
/// # Panics
/// If the operands live in different algebras; use
/// [`Multivector::geometric_product`] for a fallible version.
impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        check_same(&self, &rhs);
        self.geometric_product(&rhs).expect("same algebra")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_table_matches_hand_products() {
        // e1 e2 = e12, e2 e1 = -e12, e12 e12 = -1, e1 e12 = -e2
        assert_eq!(blade_sign(0b01, 0b10), 1);
        assert_eq!(blade_sign(0b10, 0b01), -1);
        assert_eq!(blade_sign(0b11, 0b11), -1);
        assert_eq!(blade_sign(0b01, 0b11), -1);
        assert_eq!(blade_sign(0b1, 0b1), -1);
    }

    #[test]
    fn generators_anticommute() {
        let alg = Algebra::new(4).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                let s = alg.e(i) * alg.e(j) + alg.e(j) * alg.e(i);
                let expect = if i == j { alg.scalar(-2.0) } else { alg.zero() };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn mismatch_is_an_error() {
        let x = Algebra::new(2).unwrap().one();
        let y = Algebra::new(3).unwrap().one();
        assert_eq!(x.geometric_product(&y), Err(Error::DimensionMismatch(2, 3)));
        assert!(Algebra::new(0).is_err());
        assert!(Algebra::new(7).is_err());
    }
}
