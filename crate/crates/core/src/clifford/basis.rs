use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{uniform, Multivector, UnitImaginary};
use crate::{Error, Result};

/// Orthonormal frame `I_1 = I, I_2, ..., I_n` of 1-vectors together with the
/// `2^{n-1}` products `I_A = I_{i_1} ... I_{i_s}`, `A` a subset of `{2, ..., n}`.
///
/// `I_A` is indexed by a bitmask whose bit `j` selects `I_{j+2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingBasis {
    elems: Vec<UnitImaginary>,
    products: Vec<Multivector>,
    i_products: Vec<Multivector>,
}

impl SplittingBasis {
    /// Builds the basis from an explicit frame, checking orthonormality.
    pub fn from_frame(elems: Vec<UnitImaginary>) -> Result<Self> {
        let n = elems.first().map(|e| e.n()).ok_or(Error::InvalidDimension(0))?;
        if elems.len() != n {
            return Err(Error::CoefficientCount { expected: n, got: elems.len() });
        }
        for (r, x) in elems.iter().enumerate() {
            for (s, y) in elems.iter().enumerate() {
                let target = if r == s { 1.0 } else { 0.0 };
                if libm::fabs(x.dot(y) - target) > 1e-12 {
                    return Err(Error::NotUnit(x.dot(y)));
                }
            }
        }
        let alg = elems[0].algebra();
        let i = elems[0].to_multivector();
        let count = 1usize << (n - 1);
        let mut products = Vec::with_capacity(count);
        let mut i_products = Vec::with_capacity(count);
        for mask in 0..count {
            let mut p = alg.one();
            for (j, e) in elems[1..].iter().enumerate() {
                if mask >> j & 1 == 1 {
                    p = p * e.to_multivector();
                }
            }
            i_products.push(i * p);
            products.push(p);
        }
        Ok(Self { elems, products, i_products })
    }

    pub fn elems(&self) -> &[UnitImaginary] {
        &self.elems
    }

    /// The slice unit `I = I_1`.
    pub fn unit(&self) -> &UnitImaginary {
        &self.elems[0]
    }

    /// `I_A` in bitmask order.
    pub fn products(&self) -> &[Multivector] {
        &self.products
    }

    /// Number of complex components, `2^{n-1}`.
    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }

    /// Components `F_A = a_A + i b_A` with `value = sum_A (a_A + I b_A) I_A`.
    ///
    /// The `2^n` elements `I_A`, `I I_A` are the image of the blade basis under
    /// an orthogonal change of frame, hence orthonormal for the coefficient
    /// inner product; the coordinates are plain projections.
    pub fn split(&self, value: &Multivector) -> Vec<Complex64> {
        self.products
            .iter()
            .zip(&self.i_products)
            .map(|(p, ip)| Complex64::new(p.dot(value), ip.dot(value)))
            .collect()
    }

    pub fn reassemble(&self, parts: &[Complex64]) -> Multivector {
        assert_eq!(parts.len(), self.len(), "component count");
        let mut acc = self.elems[0].algebra().zero();
        for ((z, p), ip) in parts.iter().zip(&self.products).zip(&self.i_products) {
            acc += *p * z.re + *ip * z.im;
        }
        acc
    }
}

/// Seeded Gram-Schmidt completion of `I` to an orthonormal frame.
pub fn complete_basis(i: &UnitImaginary, seed: u64) -> SplittingBasis {
    let alg = i.algebra();
    let n = alg.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frame: Vec<[f64; 6]> = Vec::with_capacity(n);
    let mut first = [0.0; 6];
    first[..n].copy_from_slice(i.dir());
    frame.push(first);
    while frame.len() < n {
        let mut x = [0.0; 6];
        for xk in x.iter_mut().take(n) {
            *xk = uniform(&mut rng, -1.0, 1.0);
        }
        // two passes keep the frame orthogonal to rounding
        for _ in 0..2 {
            for f in &frame {
                let d: f64 = (0..n).map(|k| f[k] * x[k]).sum();
                (0..n).for_each(|k| x[k] -= d * f[k]);
            }
        }
        let r = libm::sqrt((0..n).map(|k| x[k] * x[k]).sum());
        if r > 0.1 {
            x.iter_mut().for_each(|xk| *xk /= r);
            frame.push(x);
        }
    }
    let mut elems: Vec<UnitImaginary> = frame
        .iter()
        .map(|f| UnitImaginary::normalized(alg, &f[..n]).expect("nonzero"))
        .collect();
    elems[0] = *i;
    SplittingBasis::from_frame(elems).expect("Gram-Schmidt output is orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Algebra;

    #[test]
    fn two_generators_from_e1() {
        let alg = Algebra::new(2).unwrap();
        let b = complete_basis(&UnitImaginary::basis(alg, 1), 7);
        let e2 = b.elems()[1].dir();
        assert!(e2[0].abs() < 1e-15 && (e2[1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_and_unit_split() {
        let alg = Algebra::new(4).unwrap();
        let i = UnitImaginary::normalized(alg, &[1.0, -2.0, 0.5, 3.0]).unwrap();
        let b = complete_basis(&i, 3);
        let one = b.split(&alg.one());
        assert!((one[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(one[1..].iter().all(|z| z.norm() < 1e-14));
        let unit = b.split(&i.to_multivector());
        assert!((unit[0] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn deterministic() {
        let alg = Algebra::new(5).unwrap();
        let i = UnitImaginary::basis(alg, 3);
        assert_eq!(complete_basis(&i, 11), complete_basis(&i, 11));
    }
}
