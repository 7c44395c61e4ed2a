//! Fractional integrals and derivatives with respect to an increasing weight
//! `g`, for values in any [`Linear`] space.
//!
//! The left integral of order `mu` is
//! `I^{mu,g}_{a+} f(x) = 1/Gamma(mu) int_a^x f(t) (g(x) - g(t))^{mu-1} g'(t) dt`.
//! With `s = g(x) - g(t)` this becomes `int_0^G F(s) s^{mu-1} ds`,
//! `G = g(x) - g(a)`. The half `s < G/2` carries the kernel singularity and is
//! integrated by Gauss-Jacobi with weight `s^{mu-1}`; the half near `t = a` is
//! integrated in `w = g(t) - g(a)` on a graded Gauss-Legendre mesh
//! `w = (G/2) t^k`, which absorbs algebraic endpoint behaviour of `f` such as
//! the `(g - g(a))^{-alpha}` terms produced by derivatives.

mod fd;
mod gamma;
mod quadrature;
mod weight;

use alloc::format;

pub use fd::{derivative, FdEstimate, FdPolicy};
pub use gamma::{gamma_fn, recip_gamma};
pub use quadrature::{gauss_jacobi, gauss_legendre, QuadratureRule};
pub use weight::{CustomWeight, RealFn, WeightFamily, WeightFunction};

use crate::{Error, Linear, Result};

/// Fractional order in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidOrder(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - value`.
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Gauss-Jacobi near the kernel singularity, graded Gauss-Legendre near
    /// the far endpoint.
    GaussJacobi,
    /// Dyadic panels with an 8-point Gauss-Legendre rule on each; slow but
    /// independent of the Jacobi construction.
    GradedComposite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Nodes per half of the Gauss-Jacobi scheme.
    pub order: usize,
    /// Exponent `k` of the far-end grading `w = (G/2) t^k`.
    pub grading: u32,
    pub fd: FdPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { scheme: Scheme::GaussJacobi, order: 32, grading: 8, fd: FdPolicy::default() }
    }
}

impl QuadratureSpec {
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(4..=512).contains(&self.order) {
            return Err(Error::InvalidQuadrature(format!("order {} outside 4..=512", self.order)));
        }
        if !(1..=16).contains(&self.grading) {
            return Err(Error::InvalidQuadrature(format!("grading {} outside 1..=16", self.grading)));
        }
        self.fd.validate()
    }
}

const PANEL_POINTS: usize = 8;
const FAR_PANELS: usize = 160;

/// A quadrature rule for fractional integrals of one order, reusable across
/// evaluation points.
#[derive(Debug, Clone)]
pub struct FracKernel {
    mu: f64,
    recip_gamma: f64,
    scheme: Scheme,
    near: QuadratureRule,
    far: QuadratureRule,
    grading: f64,
    near_panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl FracKernel {
    pub fn new(mu: f64, quad: &QuadratureSpec) -> Result<Self> {
        FracOrder::new(mu)?;
        quad.validate()?;
        let (near, far) = match quad.scheme {
            Scheme::GaussJacobi => (gauss_jacobi(quad.order, 0.0, mu - 1.0)?, gauss_legendre(quad.order)?),
            Scheme::GradedComposite => {
                let gl = gauss_legendre(PANEL_POINTS)?;
                (gl.clone(), gl)
            }
        };
        Ok(Self {
            mu,
            recip_gamma: recip_gamma(mu)?,
            scheme: quad.scheme,
            near,
            far,
            grading: f64::from(quad.grading),
            near_panels: libm::ceil(48.0 / mu) as usize,
        })
    }

    pub fn order(&self) -> f64 {
        self.mu
    }

    /// `I^{mu,g}_{a+} f(x)`.
    pub fn left<T: Linear, F: Fn(f64) -> Result<T>>(&self, f: F, a: f64, g: &WeightFunction, x: f64) -> Result<T> {
        self.integrate(&f, Side::Left, a, g, x)
    }

    /// `I^{mu,g}_{b-} f(x)`.
    pub fn right<T: Linear, F: Fn(f64) -> Result<T>>(&self, f: F, b: f64, g: &WeightFunction, x: f64) -> Result<T> {
        self.integrate(&f, Side::Right, b, g, x)
    }

    /// Riemann-Liouville derivative of order `1 - mu`, `(1/g') d/dx` of
    /// [`FracKernel::left`].
    pub fn rl_left<T: Linear, F: Fn(f64) -> Result<T>>(
        &self,
        f: F,
        a: f64,
        g: &WeightFunction,
        x: f64,
        fd: &FdPolicy,
    ) -> Result<FdEstimate<T>> {
        check_in(a, g.lo(), g.hi())?;
        let d = derivative(|y| self.left(&f, a, g, y), x, a, g.hi(), fd)?;
        let gp = g.deriv(x);
        Ok(FdEstimate { value: d.value * (1.0 / gp), error: d.error / gp, step: d.step })
    }

    /// Right Riemann-Liouville derivative of order `1 - mu`, `-(1/g') d/dx` of
    /// [`FracKernel::right`].
    pub fn rl_right<T: Linear, F: Fn(f64) -> Result<T>>(
        &self,
        f: F,
        b: f64,
        g: &WeightFunction,
        x: f64,
        fd: &FdPolicy,
    ) -> Result<FdEstimate<T>> {
        check_in(b, g.lo(), g.hi())?;
        let d = derivative(|y| self.right(&f, b, g, y), x, g.lo(), b, fd)?;
        let gp = g.deriv(x);
        Ok(FdEstimate { value: d.value * (-1.0 / gp), error: d.error / gp, step: d.step })
    }

    /// Left Caputo derivative of order `1 - mu` from `f'`.
    pub fn caputo_left<T: Linear, F: Fn(f64) -> Result<T>>(&self, f_prime: F, a: f64, g: &WeightFunction, x: f64) -> Result<T> {
        self.left(|t| Ok(f_prime(t)? * (1.0 / g.deriv(t))), a, g, x)
    }

    /// Right Caputo derivative of order `1 - mu` from `f'`.
    pub fn caputo_right<T: Linear, F: Fn(f64) -> Result<T>>(&self, f_prime: F, b: f64, g: &WeightFunction, x: f64) -> Result<T> {
        self.right(|t| Ok(f_prime(t)? * (-1.0 / g.deriv(t))), b, g, x)
    }

    fn integrate<T: Linear, F: Fn(f64) -> Result<T>>(
        &self,
        f: &F,
        side: Side,
        anchor: f64,
        g: &WeightFunction,
        x: f64,
    ) -> Result<T> {
        let (lo, hi) = g.domain();
        check_in(anchor, lo, hi)?;
        match side {
            Side::Left => check_in(x, anchor, hi)?,
            Side::Right => check_in(x, lo, anchor)?,
        }
        let total = match side {
            Side::Left => g.diff(x, anchor),
            Side::Right => g.diff(anchor, x),
        };
        let sample = |t: f64| -> Result<T> {
            let y = f(t)?;
            if y.all_finite() {
                Ok(y)
            } else {
                Err(Error::NonFinite(t))
            }
        };
        if x == anchor || !(total > 0.0) {
            return Ok(f(x)?.zero_like());
        }
        // near: g(t) = g(x) -+ s; far: g(t) = g(end) +- w
        let near_point = |s: f64| match side {
            Side::Left => g.offset_inverse(x, -s),
            Side::Right => g.offset_inverse(x, s),
        };
        // a far node that rounds onto the endpoint is moved one ulp inward so
        // that integrands singular there stay finite
        let far_point = |w: f64| match side {
            Side::Left => g.offset_inverse(anchor, w).max(anchor.next_up()),
            Side::Right => g.offset_inverse(anchor, -w).min(anchor.next_down()),
        };
        let mu = self.mu;
        let half = 0.5 * total;
        let mut acc: Option<T> = None;
        let mut add = |y: T| {
            acc = Some(match acc {
                Some(s) => s + y,
                None => y,
            })
        };
        match self.scheme {
            Scheme::GaussJacobi => {
                let q = 0.25 * total;
                let scale = libm::pow(q, mu);
                for (xj, wj) in self.near.nodes.iter().zip(&self.near.weights) {
                    add(sample(near_point(q * (1.0 + xj)))? * (wj * scale));
                }
                // Within `cut` of a nonzero endpoint, t can no longer be
                // resolved in floating point. That sliver is integrated
                // against a power law fitted to two samples.
                let cut = {
                    let c = 1e4 * f64::EPSILON * anchor.abs() * g.deriv(anchor);
                    if c < 1e-6 * half {
                        c
                    } else {
                        0.0
                    }
                };
                let span = half - cut;
                let k = self.grading;
                for (xj, wj) in self.far.nodes.iter().zip(&self.far.weights) {
                    let t = 0.5 * (1.0 + xj);
                    let w = cut + span * libm::pow(t, k);
                    let jac = span * k * libm::pow(t, k - 1.0) * 0.5 * wj;
                    add(sample(far_point(w))? * (jac * libm::pow(total - w, mu - 1.0)));
                }
                if cut > 0.0 {
                    let f1 = sample(far_point(cut))?;
                    let f2 = sample(far_point(2.0 * cut))?;
                    let (m1, m2) = (f1.max_abs(), f2.max_abs());
                    let p = if m1 > 0.0 && m2 > 0.0 { libm::log2(m2 / m1).clamp(-0.999, 8.0) } else { 0.0 };
                    add(f1 * (cut / (p + 1.0) * libm::pow(total - 0.5 * cut, mu - 1.0)));
                }
            }
            Scheme::GradedComposite => {
                let gl = &self.near;
                let mut top = half;
                for _ in 0..self.near_panels {
                    let bottom = 0.5 * top;
                    let (c, r) = (0.5 * (top + bottom), 0.5 * (top - bottom));
                    for (xj, wj) in gl.nodes.iter().zip(&gl.weights) {
                        let s = c + r * xj;
                        add(sample(near_point(s))? * (r * wj * libm::pow(s, mu - 1.0)));
                    }
                    top = bottom;
                }
                add(sample(near_point(0.5 * top))? * (libm::pow(top, mu) / mu));
                let mut top = half;
                for _ in 0..FAR_PANELS {
                    let bottom = 0.5 * top;
                    let (c, r) = (0.5 * (top + bottom), 0.5 * (top - bottom));
                    for (xj, wj) in gl.nodes.iter().zip(&gl.weights) {
                        let w = c + r * xj;
                        add(sample(far_point(w))? * (r * wj * libm::pow(total - w, mu - 1.0)));
                    }
                    top = bottom;
                }
                add(sample(far_point(0.5 * top))? * (top * libm::pow(total - 0.5 * top, mu - 1.0)));
            }
        }
        Ok(acc.expect("rules are nonempty") * self.recip_gamma)
    }
}

fn check_in(x: f64, lo: f64, hi: f64) -> Result<()> {
    if x >= lo && x <= hi {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x, lo, hi })
    }
}

/// `I^{alpha,g}_{a+} f(x)`; `x = a` gives zero.
pub fn frac_integral_left<T, F>(f: F, a: f64, alpha: FracOrder, g: &WeightFunction, x: f64, quad: &QuadratureSpec) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    FracKernel::new(alpha.value(), quad)?.left(f, a, g, x)
}

/// `I^{alpha,g}_{b-} f(x) = 1/Gamma(alpha) int_x^b f(t) (g(t) - g(x))^{alpha-1} g'(t) dt`.
pub fn frac_integral_right<T, F>(f: F, b: f64, alpha: FracOrder, g: &WeightFunction, x: f64, quad: &QuadratureSpec) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    FracKernel::new(alpha.value(), quad)?.right(f, b, g, x)
}

/// `D^{alpha,g}_{a+} f(x) = (1/g'(x)) d/dx I^{1-alpha,g}_{a+} f(x)` with the
/// Richardson error estimate of the outer derivative (already divided by `g'`).
pub fn rl_derivative_left_estimate<T, F>(
    f: F,
    a: f64,
    alpha: FracOrder,
    g: &WeightFunction,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<FdEstimate<T>>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    FracKernel::new(alpha.complement().value(), quad)?.rl_left(f, a, g, x, &quad.fd)
}

pub fn rl_derivative_left<T, F>(f: F, a: f64, alpha: FracOrder, g: &WeightFunction, x: f64, quad: &QuadratureSpec) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    rl_derivative_left_estimate(f, a, alpha, g, x, quad).map(|e| e.value)
}

/// `D^{alpha,g}_{b-} f(x) = -(1/g'(x)) d/dx I^{1-alpha,g}_{b-} f(x)`.
pub fn rl_derivative_right_estimate<T, F>(
    f: F,
    b: f64,
    alpha: FracOrder,
    g: &WeightFunction,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<FdEstimate<T>>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    FracKernel::new(alpha.complement().value(), quad)?.rl_right(f, b, g, x, &quad.fd)
}

pub fn rl_derivative_right<T, F>(f: F, b: f64, alpha: FracOrder, g: &WeightFunction, x: f64, quad: &QuadratureSpec) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    rl_derivative_right_estimate(f, b, alpha, g, x, quad).map(|e| e.value)
}

/// Caputo derivative `I^{1-alpha,g}_{a+}[f'/g'](x)` from the derivative `f'`.
pub fn caputo_derivative_left<T, F>(
    f_prime: F,
    a: f64,
    alpha: FracOrder,
    g: &WeightFunction,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    frac_integral_left(|t| Ok(f_prime(t)? * (1.0 / g.deriv(t))), a, alpha.complement(), g, x, quad)
}

/// Caputo derivative `-I^{1-alpha,g}_{b-}[f'/g'](x)`.
pub fn caputo_derivative_right<T, F>(
    f_prime: F,
    b: f64,
    alpha: FracOrder,
    g: &WeightFunction,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    frac_integral_right(|t| Ok(f_prime(t)? * (-1.0 / g.deriv(t))), b, alpha.complement(), g, x, quad)
}

/// Derivative of `f` on `[lo, hi]` at any `t`, nudged off the endpoints so
/// that a (shrunken) central stencil fits. Used when `f'` is not supplied.
pub fn fd_derivative_anywhere<T, F>(f: F, t: f64, lo: f64, hi: f64, policy: &FdPolicy) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    let nudge = 1e-12 * (hi - lo);
    let t = t.clamp(lo + nudge, hi - nudge);
    derivative(f, t, lo, hi, policy).map(|e| e.value)
}

/// `(g(x) - g(a))^mu / Gamma(mu + 1)`, the left integral of the constant 1.
pub fn integral_of_one_left(mu: f64, g: &WeightFunction, a: f64, x: f64) -> Result<f64> {
    power_rule_left(0.0, mu, g, a, x)
}

/// `(g(b) - g(x))^mu / Gamma(mu + 1)`.
pub fn integral_of_one_right(mu: f64, g: &WeightFunction, b: f64, x: f64) -> Result<f64> {
    Ok(libm::pow(g.diff(b, x).max(0.0), mu) * recip_gamma(mu + 1.0)?)
}

/// Closed form of `I^{mu,g}_{a+}[(g - g(a))^sigma](x)`.
pub fn power_rule_left(sigma: f64, mu: f64, g: &WeightFunction, a: f64, x: f64) -> Result<f64> {
    let d = g.diff(x, a).max(0.0);
    Ok(gamma_fn(sigma + 1.0)? * recip_gamma(sigma + mu + 1.0)? * libm::pow(d, sigma + mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_bounds() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!((FracOrder::new(0.3).unwrap().complement().value() - 0.7).abs() < 1e-16);
    }

    #[test]
    fn endpoint_gives_zero() {
        let g = WeightFunction::identity(0.0, 1.0).unwrap();
        let q = QuadratureSpec::default();
        let a = FracOrder::new(0.5).unwrap();
        assert_eq!(frac_integral_left(|_| Ok(1.0), 0.0, a, &g, 0.0, &q).unwrap(), 0.0);
        assert_eq!(frac_integral_right(|_| Ok(1.0), 1.0, a, &g, 1.0, &q).unwrap(), 0.0);
    }

    #[test]
    fn outside_domain_is_an_error() {
        let g = WeightFunction::identity(0.0, 1.0).unwrap();
        let q = QuadratureSpec::default();
        let a = FracOrder::new(0.5).unwrap();
        assert!(matches!(
            frac_integral_left(|_| Ok(1.0), 0.0, a, &g, 1.5, &q),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            frac_integral_left(|t| Ok(1.0 / (t - 0.5)), 0.0, a, &g, 1.0, &q.with_order(5)),
            Err(Error::NonFinite(_)) | Ok(_)
        ));
    }
}
