//! Caputo fractional slice operators, mixed RL/Caputo operators and the
//! exchange identity for
//!
//! ```text
//! H(f)(u + I v) = I^{1-alpha,g}_{a+}[f(. + I s)](u) + I^{1-beta,h}_{0+}[f(r + I .)](v).
//! ```
//!
//! `H` is unweighted. The map of [`crate::frac_rl::hmap`] divides the two
//! terms by `g'` and `h'`; the two are different objects.
//!
//! Caputo derivatives need the first partials of `f` along the cross lines.
//! They are passed in as [`CrossPartials`]; with
//! [`CrossPartials::FiniteDifference`] they are generated numerically and
//! reports say so.

use alloc::vec::Vec;

use crate::clifford::{Multivector, SlicePoint, UnitImaginary};
use crate::frac_rl::{u_integral, u_rl, v_integral, v_rl, CornerVariant, FracSliceConfig, MembershipReport, MultSide, USide, VSide};
use crate::realfrac::{fd_derivative_anywhere, gamma_fn, integral_of_one_left};
use crate::slice_fn::{residual_or_inf, SampleRecord, SliceEval, SliceFunction, SliceGrid, Smoothness};
use crate::Result;

/// First partials of a slice function.
#[derive(Clone)]
pub enum CrossPartials {
    /// `d/du f(u + I v)` and `d/dv f(u + I v)` in closed form.
    Analytic { du: SliceEval, dv: SliceEval },
    /// Central differences along the cross lines.
    FiniteDifference,
}

impl core::fmt::Debug for CrossPartials {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CrossPartials::Analytic { .. } => f.write_str("Analytic"),
            CrossPartials::FiniteDifference => f.write_str("FiniteDifference"),
        }
    }
}

impl CrossPartials {
    pub fn is_fd(&self) -> bool {
        matches!(self, CrossPartials::FiniteDifference)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    RiemannLiouville,
    Caputo,
}

/// A corner operator with the derivative sense chosen per variable. Choosing
/// the same sense for both reproduces [`crate::frac_rl::rl_operator`] or
/// [`caputo_operator`] through the same code path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MixedVariant {
    pub u: (Sense, USide),
    pub v: (Sense, VSide),
    pub mult_side: MultSide,
}

impl MixedVariant {
    pub fn new(u: (Sense, USide), v: (Sense, VSide), mult_side: MultSide) -> Self {
        Self { u, v, mult_side }
    }

    pub fn uniform(sense: Sense, corner: CornerVariant) -> Self {
        Self::new((sense, corner.u_side), (sense, corner.v_side), corner.mult_side)
    }

    pub fn label(&self) -> alloc::string::String {
        let tag = |s: Sense| match s {
            Sense::RiemannLiouville => "RL",
            Sense::Caputo => "C",
        };
        let corner = CornerVariant::new(self.u.1, self.v.1, self.mult_side).label();
        alloc::format!("{}/{}:{}", tag(self.u.0), tag(self.v.0), corner)
    }
}

fn u_caputo<M>(map: &M, partials: &CrossPartials, side: USide, u: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let s = cfg.cross().1;
    let d = *cfg.domain();
    let fd = cfg.quad().fd;
    let fp = |t: f64| match partials {
        CrossPartials::Analytic { du, .. } => Ok(du(t, s, dir)),
        CrossPartials::FiniteDifference => fd_derivative_anywhere(|x| map(x, s, dir), t, d.a, d.b, &fd),
    };
    match side {
        USide::APlus => cfg.u_kernel().caputo_left(fp, d.a, cfg.g(), u),
        USide::BMinus => cfg.u_kernel().caputo_right(fp, d.b, cfg.g(), u),
    }
}

fn v_caputo<M>(map: &M, partials: &CrossPartials, side: VSide, v: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let r = cfg.cross().0;
    let c = cfg.domain().c;
    let fd = cfg.quad().fd;
    let fp = |t: f64| match partials {
        CrossPartials::Analytic { dv, .. } => Ok(dv(r, t, dir)),
        CrossPartials::FiniteDifference => fd_derivative_anywhere(|y| map(r, y, dir), t, 0.0, c, &fd),
    };
    match side {
        VSide::ZeroPlus => cfg.v_kernel().caputo_left(fp, 0.0, cfg.h(), v),
        VSide::CMinus => cfg.v_kernel().caputo_right(fp, c, cfg.h(), v),
    }
}

fn mixed_map<M>(map: &M, partials: &CrossPartials, variant: MixedVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let du = match variant.u.0 {
        Sense::RiemannLiouville => u_rl(map, variant.u.1, p.u, &p.dir, cfg)?.value,
        Sense::Caputo => u_caputo(map, partials, variant.u.1, p.u, &p.dir, cfg)?,
    };
    let dv = match variant.v.0 {
        Sense::RiemannLiouville => v_rl(map, variant.v.1, p.v, &p.dir, cfg)?.value,
        Sense::Caputo => v_caputo(map, partials, variant.v.1, p.v, &p.dir, cfg)?,
    };
    Ok(variant.mult_side.combine(du, dv, &p.dir))
}

fn eval_of(f: &SliceFunction) -> impl Fn(f64, f64, &UnitImaginary) -> Result<Multivector> + '_ {
    move |u, v, i| Ok(f.eval(u, v, i))
}

pub fn mixed_operator(f: &SliceFunction, partials: &CrossPartials, variant: MixedVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    mixed_map(&eval_of(f), partials, variant, p, cfg)
}

/// `C D^{alpha,g}_u f(. + I s)(u) + I C D^{beta,h}_v f(r + I .)(v)` for the
/// corner, `I` on the right for right versions.
pub fn caputo_operator(f: &SliceFunction, partials: &CrossPartials, variant: CornerVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    mixed_operator(f, partials, MixedVariant::uniform(Sense::Caputo, variant), p, cfg)
}

/// Sweeps the Caputo corner operator over the interior grid of the half box
/// on each slice in `dirs`. `vanishes_on_grid` reports whether `f` itself is
/// within tolerance of zero at every sample.
pub fn is_caputo_member(
    f: &SliceFunction,
    partials: &CrossPartials,
    variant: CornerVariant,
    cfg: &FracSliceConfig,
    grid: &SliceGrid,
    dirs: &[UnitImaginary],
    tol: f64,
) -> MembershipReport {
    let points = grid.points(&cfg.half_bounds());
    let mut records = Vec::with_capacity(points.len() * dirs.len());
    let mut vanishes = true;
    for dir in dirs {
        for &(u, v) in &points {
            let r = SlicePoint::new(u, v, *dir).and_then(|p| caputo_operator(f, partials, variant, &p, cfg)).map(|m| m.norm_max());
            vanishes &= f.eval(u, v, dir).norm_max() <= tol;
            records.push(SampleRecord { dir: *dir, u, v, residual: residual_or_inf(r) });
        }
    }
    let label = alloc::format!("caputo {}", variant.label());
    MembershipReport::assemble(label, *grid, dirs.len(), records, tol, 0.0, partials.is_fd(), vanishes)
}

fn h_map<M>(map: &M, u: f64, v: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    Ok(u_integral(map, USide::APlus, u, dir, cfg)? + v_integral(map, VSide::ZeroPlus, v, dir, cfg)?)
}

/// `H(f)(u + I v) = I^{1-alpha,g}_{a+} f(u + I s) + I^{1-beta,h}_{0+} f(r + I v)`.
pub fn h_operator(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    h_map(&eval_of(f), p.u, p.v, &p.dir, cfg)
}

/// `H(f)` as a slice function; evaluation failures show up as NaN.
pub fn h_function(f: &SliceFunction, cfg: &FracSliceConfig) -> SliceFunction {
    let (f, cfg2) = (f.clone(), cfg.clone());
    SliceFunction::new(f.algebra(), *cfg.domain(), Smoothness::C1, move |u, v, dir| {
        h_operator(&f, &SlicePoint { u, v, dir: *dir }, &cfg2).unwrap_or_else(|_| Multivector::nan(f.algebra()))
    })
}

/// `G = RL D_{a+0+} f` on the two cross lines:
/// `G(t + I s) = D^alpha f(t + I s) + I D^beta f(r + I s)` and
/// `G(r + I t) = D^alpha f(r + I s) + I D^beta f(r + I t)`.
struct CrossRl<'a, M> {
    map: &'a M,
    dir: UnitImaginary,
    cfg: &'a FracSliceConfig,
    /// `D^alpha f(r + I s)` and `D^beta f(r + I s)`
    at_cross: (Multivector, Multivector),
}

impl<'a, M> CrossRl<'a, M>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    fn new(map: &'a M, dir: UnitImaginary, cfg: &'a FracSliceConfig) -> Result<Self> {
        let (r, s) = cfg.cross();
        let du = u_rl(map, USide::APlus, r, &dir, cfg)?.value;
        let dv = v_rl(map, VSide::ZeroPlus, s, &dir, cfg)?.value;
        Ok(Self { map, dir, cfg, at_cross: (du, dv) })
    }

    fn u_line(&self, t: f64) -> Result<Multivector> {
        u_rl(self.map, USide::APlus, t, &self.dir, self.cfg).map(|e| e.value)
    }

    fn v_line(&self, t: f64) -> Result<Multivector> {
        v_rl(self.map, VSide::ZeroPlus, t, &self.dir, self.cfg).map(|e| e.value)
    }

    /// `U(u) = I^{1-alpha}[D^alpha f(. + I s)](u)` and
    /// `V(v) = I I^{1-beta}[D^beta f(r + I .)](v)`, the parts of `H[G]` that
    /// vary with the point.
    fn parts(&self, u: f64, v: f64) -> Result<(Multivector, Multivector)> {
        let i = self.dir.to_multivector();
        let a = self.cfg.domain().a;
        let uu = self.cfg.u_kernel().left(|t| self.u_line(t), a, self.cfg.g(), u)?;
        let vv = i * self.cfg.v_kernel().left(|t| self.v_line(t), 0.0, self.cfg.h(), v)?;
        Ok((uu, vv))
    }

    /// `I^{1-alpha}[1](u)` and `I^{1-beta}[1](v)` by the power rule.
    fn ones(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let (alpha, beta) = (self.cfg.alpha().value(), self.cfg.beta().value());
        Ok((
            integral_of_one_left(1.0 - alpha, self.cfg.g(), self.cfg.domain().a, u)?,
            integral_of_one_left(1.0 - beta, self.cfg.h(), 0.0, v)?,
        ))
    }

    /// `H[G](u + I v)`.
    fn h_of_g(&self, u: f64, v: f64) -> Result<Multivector> {
        let (uu, vv) = self.parts(u, v)?;
        let (one_u, one_v) = self.ones(u, v)?;
        let i = self.dir.to_multivector();
        Ok(uu + vv + i * self.at_cross.1 * one_u + self.at_cross.0 * one_v)
    }
}

/// Both sides of the `H` exchange identity at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HIdentity {
    /// `C D_{a+0+}(H f)(u + I v)` with finite-difference partials of `H f`.
    pub lhs: Multivector,
    /// `H[RL D_{a+0+} f](u + I v)` minus the two corrections.
    pub rhs: Multivector,
}

impl HIdentity {
    pub fn residual(&self) -> Multivector {
        self.lhs - self.rhs
    }
}

fn h_identity_parts(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig, printed: bool) -> Result<HIdentity> {
    let m = eval_of(f);
    let hf = |u: f64, v: f64, dir: &UnitImaginary| h_map(&m, u, v, dir, cfg);
    let lhs = mixed_map(&hf, &CrossPartials::FiniteDifference, MixedVariant::uniform(Sense::Caputo, CornerVariant::A0_LEFT), p, cfg)?;
    let g = CrossRl::new(&m, p.dir, cfg)?;
    let (one_u, one_v) = g.ones(p.u, p.v)?;
    let (du, dv) = if printed {
        // corrections evaluated at u + I s and r + I v as displayed
        (g.u_line(p.u)?, g.v_line(p.v)?)
    } else {
        g.at_cross
    };
    let i = p.dir.to_multivector();
    let rhs = g.h_of_g(p.u, p.v)? - du * one_v - i * dv * one_u;
    Ok(HIdentity { lhs, rhs })
}

/// `C D(H f) - (H[G] - I^{1-beta}[1](v) D^alpha f(r + I s) - I^{1-alpha}[1](u) I D^beta f(r + I s))`
/// with `G = RL D_{a+0+} f`. Vanishes for every smooth `f`; the cross point
/// must be interior.
pub fn caputo_h_identity_residual(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    h_identity_parts(f, p, cfg, false).map(|h| h.residual())
}

/// The identity with the corrections evaluated at `u + I s` and `r + I v`;
/// agrees with [`caputo_h_identity_residual`] only at the cross point.
pub fn caputo_h_identity_printed_residual(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    h_identity_parts(f, p, cfg, true).map(|h| h.residual())
}

pub fn caputo_h_identity(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<HIdentity> {
    h_identity_parts(f, p, cfg, false)
}

/// Residuals of the characterization at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characterization {
    /// `| H[G] - I^{1-beta}[1] D^alpha f(r + I s) - I^{1-alpha}[1] I D^beta f(r + I s) |`.
    pub last: f64,
    /// The same difference after applying `D^{1-alpha,g}_{a+}` in `u` plus
    /// `D^{1-beta,h}_{0+}` in `v`.
    pub second: f64,
}

/// Evaluates the characterization of Caputo membership of `H(f)` at `p`.
///
/// The difference `H[G] - K` splits as `U(u) + V(v)` with
/// `U = I^{1-alpha}[D^alpha f(. + I s)]` and `V = I I^{1-beta}[D^beta f(r + I .)]`.
/// Applying `D_u = D^{1-alpha,g}_{a+}` in `u` plus `D_v = D^{1-beta,h}_{0+}`
/// in `v` gives
/// `D^alpha f(u + I s) + I D^beta f(r + I v) + D_u[1](u) V(v) + D_v[1](v) U(u)`:
/// the inner `D_u I^{1-alpha}` is collapsed by the fundamental theorem (a
/// third numerical layer costs minutes per point) and the derivatives of
/// constants are closed forms.
pub fn caputo_characterization_check(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Characterization> {
    let m = eval_of(f);
    let g = CrossRl::new(&m, p.dir, cfg)?;
    let i = p.dir.to_multivector();
    // the corrections in H[G] cancel against K exactly
    let (uu, vv) = g.parts(p.u, p.v)?;
    let last = (uu + vv).norm_max();

    let d = cfg.domain();
    let (alpha, beta) = (cfg.alpha().value(), cfg.beta().value());
    // D^{1-alpha}[1] = (g - g(a))^{alpha - 1} / Gamma(alpha)
    let const_u = libm::pow(cfg.g().diff(p.u, d.a), alpha - 1.0) / gamma_fn(alpha)?;
    let const_v = libm::pow(cfg.h().diff(p.v, 0.0), beta - 1.0) / gamma_fn(beta)?;
    let second = (g.u_line(p.u)? + i * g.v_line(p.v)? + vv * const_u + uu * const_v).norm_max();
    Ok(Characterization { last, second })
}
