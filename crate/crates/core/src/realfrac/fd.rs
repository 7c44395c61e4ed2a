use crate::{Error, Linear, Result};

/// Central-difference policy: five-point stencil with step
/// `h = h0 max(1, |x|)` and `levels` Richardson extrapolations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdPolicy {
    pub h0: f64,
    pub levels: usize,
}

impl Default for FdPolicy {
    fn default() -> Self {
        Self { h0: 1e-3, levels: 2 }
    }
}

impl FdPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0 && self.h0 < 1.0) {
            return Err(Error::InvalidQuadrature(alloc::format!("fd step h0 = {} must lie in (0, 1)", self.h0)));
        }
        if self.levels > 4 {
            return Err(Error::InvalidQuadrature("at most 4 Richardson levels".into()));
        }
        Ok(())
    }
}

/// A derivative value with the last Richardson correction as error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate<T> {
    pub value: T,
    pub error: f64,
    pub step: f64,
}

/// `f'(x)` for `f` defined on `[lo, hi]`.
///
/// The step shrinks so that the widest stencil stays within half the distance
/// to the nearer endpoint; `x` itself must be strictly interior.
pub fn derivative<T, F>(f: F, x: f64, lo: f64, hi: f64, policy: &FdPolicy) -> Result<FdEstimate<T>>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    let room = (x - lo).min(hi - x);
    if !(room > 0.0) {
        return Err(Error::StencilOutOfDomain { x, lo, hi });
    }
    let h = (policy.h0 * x.abs().max(1.0)).min(room / 4.0);
    let stencil = |h: f64| -> Result<T> {
        let d = (f(x - 2.0 * h)? - f(x + 2.0 * h)?) + (f(x + h)? - f(x - h)?) * 8.0;
        Ok(d * (1.0 / (12.0 * h)))
    };
    let levels = policy.levels;
    let mut table: [[Option<T>; 5]; 5] = [[None; 5]; 5];
    for i in 0..=levels {
        table[i][0] = Some(stencil(h / f64::from(1u32 << i))?);
        for j in 1..=i {
            let factor = f64::from(1u32 << (2 * (j + 1)));
            let fine = table[i][j - 1].unwrap();
            let coarse = table[i - 1][j - 1].unwrap();
            table[i][j] = Some((fine * factor - coarse) * (1.0 / (factor - 1.0)));
        }
    }
    let value = table[levels][levels].unwrap();
    let error = if levels == 0 {
        0.0
    } else {
        (value - table[levels][levels - 1].unwrap()).max_abs()
    };
    if !value.all_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(FdEstimate { value, error, step: h })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics_and_accurate_on_exp() {
        let p = FdPolicy::default();
        let d = derivative(|x| Ok(x * x * x * x - 2.0 * x), 0.7, 0.0, 2.0, &p).unwrap();
        assert!((d.value - (4.0 * 0.343 - 2.0)).abs() < 1e-11);
        let e = derivative(|x| Ok(libm::exp(x)), 0.3, -1.0, 1.0, &p).unwrap();
        assert!((e.value - libm::exp(0.3)).abs() < 1e-11);
    }

    #[test]
    fn endpoint_is_rejected() {
        let p = FdPolicy::default();
        assert!(matches!(derivative(|x| Ok(x), 0.0, 0.0, 1.0, &p), Err(Error::StencilOutOfDomain { .. })));
    }
}
