//! The real Clifford algebra `R_n` with `e_i e_j + e_j e_i = -2 delta_ij`,
//! paravectors, slices `C_I` and splitting bases.

mod basis;
mod multivector;
mod slice;

pub use basis::{complete_basis, SplittingBasis};
pub use multivector::{Algebra, Multivector, MAX_BLADES, MAX_GENERATORS};
pub use slice::{slice_inverse, Paravector, SlicePoint, UnitImaginary, UNIT_TOL};

use rand_core::RngCore;

/// Uniform draw from `[lo, hi)` using the top 53 bits of one `u64`.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let t = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    lo + (hi - lo) * t
}
