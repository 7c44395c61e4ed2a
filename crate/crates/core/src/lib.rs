//! Clifford-valued fractional calculus with respect to a weight function, and
//! the slice monogenic function classes built on it.
//!
//! The crate is `no_std` and only needs `alloc`. Modules:
//!
//! * [`clifford`]: the algebra `R_n` (`n <= 6`), paravectors, slices and the
//!   splitting basis.
//! * [`realfrac`]: fractional integrals and derivatives of a real variable
//!   with respect to an increasing weight `g`.
//! * [`slice_fn`]: slice functions on an axially symmetric box, the weighted
//!   Cauchy-Riemann residual and contour tools.
//! * [`frac_rl`]: Riemann-Liouville fractional slice operators.
//! * [`frac_caputo`]: Caputo fractional slice operators.

#![no_std]

extern crate alloc;

pub mod clifford;
mod error;
pub mod frac_caputo;
pub mod frac_rl;
pub mod linalg;
pub mod realfrac;
pub mod slice_fn;

pub use error::{Error, Result};

/// Values that finite differences and quadrature rules can combine.
pub trait Linear:
    Copy
    + core::ops::Add<Output = Self>
    + core::ops::Sub<Output = Self>
    + core::ops::Mul<f64, Output = Self>
{
    /// The zero with the same shape as `self`.
    fn zero_like(&self) -> Self;
    fn all_finite(&self) -> bool;
    /// Largest absolute component.
    fn max_abs(&self) -> f64;
}

impl Linear for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn max_abs(&self) -> f64 {
        libm::fabs(*self)
    }
}
