use alloc::format;
use alloc::sync::Arc;
use core::fmt;

use crate::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied weight: value, derivative and optionally an inverse. Without
/// an inverse, bisection is used. `lambda` declares which `y'' + 2 lambda y' = 0`
/// the function solves, if any.
#[derive(Clone)]
pub struct CustomWeight {
    pub eval: RealFn,
    pub deriv: RealFn,
    pub inverse: Option<RealFn>,
    pub lambda: Option<f64>,
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight")
            .field("inverse", &self.inverse.is_some())
            .field("lambda", &self.lambda)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum WeightFamily {
    /// `slope * u + intercept`, solves the ODE with `lambda = 0`.
    Affine { slope: f64, intercept: f64 },
    /// `delta1 * exp(-2 lambda u) + delta2` with `-2 delta1 lambda > 0`.
    ExpOde { delta1: f64, delta2: f64, lambda: f64 },
    Custom(CustomWeight),
}

/// Strictly increasing `C^2` weight `g` on a closed interval.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    family: WeightFamily,
    lo: f64,
    hi: f64,
}

const CHECK_POINTS: usize = 64;
const BISECTION_TOL: f64 = 1e-13;

impl WeightFunction {
    pub fn new(family: WeightFamily, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidWeight(format!("empty or infinite domain [{lo}, {hi}]")));
        }
        match &family {
            WeightFamily::Affine { slope, intercept } => {
                if !(*slope > 0.0) || !intercept.is_finite() {
                    return Err(Error::InvalidWeight(format!("affine slope {slope} must be positive")));
                }
            }
            WeightFamily::ExpOde { delta1, delta2, lambda } => {
                if !(-2.0 * delta1 * lambda > 0.0) || !delta2.is_finite() {
                    return Err(Error::InvalidWeight(format!(
                        "exponential weight needs -2 delta1 lambda > 0 (delta1 = {delta1}, lambda = {lambda})"
                    )));
                }
            }
            WeightFamily::Custom(_) => {}
        }
        let w = Self { family, lo, hi };
        for k in 0..CHECK_POINTS {
            let x = lo + (hi - lo) * k as f64 / (CHECK_POINTS - 1) as f64;
            let d = w.deriv(x);
            if !(d > 0.0) || !d.is_finite() || !w.eval(x).is_finite() {
                return Err(Error::InvalidWeight(format!("g'({x}) = {d} is not positive")));
            }
        }
        Ok(w)
    }

    pub fn affine(slope: f64, intercept: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(WeightFamily::Affine { slope, intercept }, lo, hi)
    }

    pub fn identity(lo: f64, hi: f64) -> Result<Self> {
        Self::affine(1.0, 0.0, lo, hi)
    }

    pub fn exp_ode(delta1: f64, delta2: f64, lambda: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(WeightFamily::ExpOde { delta1, delta2, lambda }, lo, hi)
    }

    /// The solution of `y'' + 2 lambda y' = 0` with `y(lo) = 0`, `y'(lo) = 1`:
    /// `(1 - exp(-2 lambda (u - lo))) / (2 lambda)`, or `u - lo` for `lambda = 0`.
    pub fn ode_normalized(lambda: f64, lo: f64, hi: f64) -> Result<Self> {
        if lambda == 0.0 {
            Self::affine(1.0, -lo, lo, hi)
        } else {
            let two_l = 2.0 * lambda;
            Self::exp_ode(-libm::exp(two_l * lo) / two_l, 1.0 / two_l, lambda, lo, hi)
        }
    }

    pub fn custom(weight: CustomWeight, lo: f64, hi: f64) -> Result<Self> {
        Self::new(WeightFamily::Custom(weight), lo, hi)
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// The `lambda` of the ODE this weight solves, when known.
    pub fn lambda(&self) -> Option<f64> {
        match &self.family {
            WeightFamily::Affine { .. } => Some(0.0),
            WeightFamily::ExpOde { lambda, .. } => Some(*lambda),
            WeightFamily::Custom(c) => c.lambda,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.family {
            WeightFamily::Affine { slope, intercept } => slope * x + intercept,
            WeightFamily::ExpOde { delta1, delta2, lambda } => delta1 * libm::exp(-2.0 * lambda * x) + delta2,
            WeightFamily::Custom(c) => (c.eval)(x),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match &self.family {
            WeightFamily::Affine { slope, .. } => *slope,
            WeightFamily::ExpOde { delta1, lambda, .. } => -2.0 * lambda * delta1 * libm::exp(-2.0 * lambda * x),
            WeightFamily::Custom(c) => (c.deriv)(x),
        }
    }

    /// `g''`; central difference of `g'` for custom weights.
    pub fn second_deriv(&self, x: f64) -> f64 {
        match &self.family {
            WeightFamily::Affine { .. } => 0.0,
            WeightFamily::ExpOde { delta1, lambda, .. } => 4.0 * lambda * lambda * delta1 * libm::exp(-2.0 * lambda * x),
            WeightFamily::Custom(c) => {
                let h = 1e-5 * x.abs().max(1.0);
                ((c.deriv)(x + h) - (c.deriv)(x - h)) / (2.0 * h)
            }
        }
    }

    /// `g(x) - g(y)` without cancellation for nearby arguments.
    pub fn diff(&self, x: f64, y: f64) -> f64 {
        match &self.family {
            WeightFamily::Affine { slope, .. } => slope * (x - y),
            WeightFamily::ExpOde { delta1, lambda, .. } => {
                delta1 * libm::exp(-2.0 * lambda * y) * libm::expm1(-2.0 * lambda * (x - y))
            }
            WeightFamily::Custom(c) => (c.eval)(x) - (c.eval)(y),
        }
    }

    /// The point `t` with `g(t) = g(base) + delta`, accurate for small `delta`;
    /// clamped to the domain.
    pub fn offset_inverse(&self, base: f64, delta: f64) -> f64 {
        let x = match &self.family {
            WeightFamily::Affine { slope, .. } => base + delta / slope,
            WeightFamily::ExpOde { delta1, lambda, .. } => {
                base - libm::log1p(delta / (delta1 * libm::exp(-2.0 * lambda * base))) / (2.0 * lambda)
            }
            WeightFamily::Custom(_) => return self.inverse(self.eval(base) + delta),
        };
        x.clamp(self.lo, self.hi)
    }

    /// `g^{-1}(y)`, clamped to the domain.
    pub fn inverse(&self, y: f64) -> f64 {
        let x = match &self.family {
            WeightFamily::Affine { slope, intercept } => (y - intercept) / slope,
            WeightFamily::ExpOde { delta1, delta2, lambda } => -libm::log((y - delta2) / delta1) / (2.0 * lambda),
            WeightFamily::Custom(c) => match &c.inverse {
                Some(inv) => inv(y),
                None => self.bisect(y),
            },
        };
        x.clamp(self.lo, self.hi)
    }

    fn bisect(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (self.lo, self.hi);
        if y <= self.eval(lo) {
            return lo;
        }
        if y >= self.eval(hi) {
            return hi;
        }
        while hi - lo > BISECTION_TOL * (1.0 + lo.abs().max(hi.abs())) {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Largest `|g'' + 2 lambda g'| / max g'` over a 64-point grid for the given
    /// `lambda`.
    pub fn ode_residual(&self, lambda: f64) -> f64 {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..CHECK_POINTS {
            let x = self.lo + (self.hi - self.lo) * k as f64 / (CHECK_POINTS - 1) as f64;
            let d = self.deriv(x);
            scale = scale.max(d.abs());
            worst = worst.max((self.second_deriv(x) + 2.0 * lambda * d).abs());
        }
        worst / scale
    }
}
