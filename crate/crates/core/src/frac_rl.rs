//! Riemann-Liouville fractional slice operators on `S_{a,b,c}`.
//!
//! A configuration fixes the cross point `(r, s)`. For a corner
//! `(u_side, v_side)` the operator reads `f` only on the two cross lines:
//!
//! ```text
//! A(u) = I^{1-alpha,g}_{a+ | b-}[f(. + I s)](u)
//! B(v) = I^{1-beta,h}_{0+ | c-}[f(r + I .)](v)
//! D f  = D^{alpha,g}_u f(. + I s)(u) + I D^{beta,h}_v f(r + I .)(v)
//! ```
//!
//! with `I` multiplying from the right for the right versions. The associated
//! map is `hmap = eps_u A / g' + eps_v B / h'`, `eps = -1` on the `b-` and
//! `c-` sides. Note that [`crate::frac_caputo::h_operator`] is the unweighted
//! `A + B`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::clifford::{complete_basis, Multivector, SlicePoint, SplittingBasis, UnitImaginary};
use crate::linalg::complex_lstsq;
use crate::realfrac::{derivative, gamma_fn, FdEstimate, FracKernel, FracOrder, QuadratureSpec, WeightFunction};
use crate::slice_fn::{
    certify_sm_lambda_map, combine_sides, contour_integral_map, morera_classify_map, residual_or_inf, AxialBox, Contour,
    Disk, GridCertificate, MoreraOutcome, PlaneBounds, SampleRecord, SliceFunction, SliceGrid, Smoothness,
};
use crate::{Error, Result};

/// Largest relative ODE residual accepted for weights without a declared `lambda`.
pub const ODE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum USide {
    APlus,
    BMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VSide {
    ZeroPlus,
    CMinus,
}

/// Side on which `I` multiplies the `v` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultSide {
    Left,
    Right,
}

impl USide {
    pub fn sign(self) -> f64 {
        match self {
            USide::APlus => 1.0,
            USide::BMinus => -1.0,
        }
    }
}

impl VSide {
    pub fn sign(self) -> f64 {
        match self {
            VSide::ZeroPlus => 1.0,
            VSide::CMinus => -1.0,
        }
    }
}

impl MultSide {
    /// `u + I v` or `u + v I`.
    pub fn combine(self, u: Multivector, v: Multivector, dir: &UnitImaginary) -> Multivector {
        match self {
            MultSide::Left => u + dir.to_multivector() * v,
            MultSide::Right => u + v * dir.to_multivector(),
        }
    }
}

/// One of the eight corner operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CornerVariant {
    pub u_side: USide,
    pub v_side: VSide,
    pub mult_side: MultSide,
}

impl CornerVariant {
    pub const A0_LEFT: Self = Self::new(USide::APlus, VSide::ZeroPlus, MultSide::Left);

    pub const fn new(u_side: USide, v_side: VSide, mult_side: MultSide) -> Self {
        Self { u_side, v_side, mult_side }
    }

    pub fn all() -> [Self; 8] {
        let mut out = [Self::A0_LEFT; 8];
        let mut k = 0;
        for m in [MultSide::Left, MultSide::Right] {
            for u in [USide::APlus, USide::BMinus] {
                for v in [VSide::ZeroPlus, VSide::CMinus] {
                    out[k] = Self::new(u, v, m);
                    k += 1;
                }
            }
        }
        out
    }

    /// The corner `(a | b, 0 | c)` of the box this operator is anchored at.
    pub fn corner(&self, domain: &AxialBox) -> (f64, f64) {
        let u = match self.u_side {
            USide::APlus => domain.a,
            USide::BMinus => domain.b,
        };
        let v = match self.v_side {
            VSide::ZeroPlus => 0.0,
            VSide::CMinus => domain.c,
        };
        (u, v)
    }

    /// Short name such as `a+0+` or `b-c-/right`.
    pub fn label(&self) -> String {
        let u = match self.u_side {
            USide::APlus => "a+",
            USide::BMinus => "b-",
        };
        let v = match self.v_side {
            VSide::ZeroPlus => "0+",
            VSide::CMinus => "c-",
        };
        match self.mult_side {
            MultSide::Left => format!("{u}{v}"),
            MultSide::Right => format!("{u}{v}/right"),
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::all().into_iter().find(|v| v.label() == label)
    }
}

impl fmt::Display for CornerVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone)]
struct Kernels {
    /// order `1 - alpha`, the integral inside `D^alpha`
    u: FracKernel,
    v: FracKernel,
    /// order `alpha`, the integral inside `D^{1-alpha}`
    u_dual: FracKernel,
    v_dual: FracKernel,
}

/// Box, orders, weights and cross point shared by all operators.
#[derive(Debug, Clone)]
pub struct FracSliceConfig {
    domain: AxialBox,
    alpha: FracOrder,
    beta: FracOrder,
    lambda: f64,
    g: WeightFunction,
    h: WeightFunction,
    cross: (f64, f64),
    quad: QuadratureSpec,
    kernels: Kernels,
}

impl FracSliceConfig {
    /// Checks that `g` lives on `[a, b]`, `h` on `[0, c]`, both solve
    /// `y'' + 2 lambda y' = 0` and the cross point is in the box.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        domain: AxialBox,
        alpha: FracOrder,
        beta: FracOrder,
        lambda: f64,
        g: WeightFunction,
        h: WeightFunction,
        cross: (f64, f64),
        quad: QuadratureSpec,
    ) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidConfig(format!("lambda = {lambda}")));
        }
        let same = |x: f64, y: f64| libm::fabs(x - y) <= 1e-12 * (1.0 + libm::fabs(x));
        if !same(g.lo(), domain.a) || !same(g.hi(), domain.b) {
            return Err(Error::InvalidDomain(format!(
                "g is defined on [{}, {}], the box needs [{}, {}]",
                g.lo(),
                g.hi(),
                domain.a,
                domain.b
            )));
        }
        if !same(h.lo(), 0.0) || !same(h.hi(), domain.c) {
            return Err(Error::InvalidDomain(format!(
                "h is defined on [{}, {}], the box needs [0, {}]",
                h.lo(),
                h.hi(),
                domain.c
            )));
        }
        for (name, w) in [("g", &g), ("h", &h)] {
            let ok = match w.lambda() {
                Some(l) => libm::fabs(l - lambda) <= 1e-12 * (1.0 + libm::fabs(lambda)),
                None => w.ode_residual(lambda) <= ODE_TOL,
            };
            if !ok {
                return Err(Error::InvalidConfig(format!("{name} does not solve y'' + 2 lambda y' = 0 for lambda = {lambda}")));
            }
        }
        if !(cross.0 >= domain.a && cross.0 <= domain.b && cross.1 >= 0.0 && cross.1 <= domain.c) {
            return Err(Error::InvalidConfig(format!("cross point {cross:?} outside the box")));
        }
        let kernels = Self::build_kernels(alpha, beta, &quad)?;
        Ok(Self { domain, alpha, beta, lambda, g, h, cross, quad, kernels })
    }

    fn build_kernels(alpha: FracOrder, beta: FracOrder, quad: &QuadratureSpec) -> Result<Kernels> {
        Ok(Kernels {
            u: FracKernel::new(alpha.complement().value(), quad)?,
            v: FracKernel::new(beta.complement().value(), quad)?,
            u_dual: FracKernel::new(alpha.value(), quad)?,
            v_dual: FracKernel::new(beta.value(), quad)?,
        })
    }

    pub fn with_cross(&self, cross: (f64, f64)) -> Result<Self> {
        let d = &self.domain;
        if !(cross.0 >= d.a && cross.0 <= d.b && cross.1 >= 0.0 && cross.1 <= d.c) {
            return Err(Error::InvalidConfig(format!("cross point {cross:?} outside the box")));
        }
        Ok(Self { cross, ..self.clone() })
    }

    pub fn with_quad(&self, quad: QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        let kernels = Self::build_kernels(self.alpha, self.beta, &quad)?;
        Ok(Self { quad, kernels, ..self.clone() })
    }

    pub fn domain(&self) -> &AxialBox {
        &self.domain
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn beta(&self) -> FracOrder {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn g(&self) -> &WeightFunction {
        &self.g
    }

    pub fn h(&self) -> &WeightFunction {
        &self.h
    }

    pub fn cross(&self) -> (f64, f64) {
        self.cross
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// The fractional integral of order `1 - alpha` (`u`) or `1 - beta` (`v`).
    pub(crate) fn u_kernel(&self) -> &FracKernel {
        &self.kernels.u
    }

    pub(crate) fn v_kernel(&self) -> &FracKernel {
        &self.kernels.v
    }

    /// `[a, b] x [0, c]`.
    pub fn half_bounds(&self) -> PlaneBounds {
        self.domain.half_bounds()
    }
}

/// Which of the four restricted integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restricted {
    /// `I^{1-alpha,g}_{a+}[f(. + I s)](u)`
    APlusU,
    /// `I^{1-beta,h}_{0+}[f(r + I .)](v)`
    ZeroPlusV,
    /// `I^{1-alpha,g}_{b-}[f(. + I s)](u)`
    BMinusU,
    /// `I^{1-beta,h}_{c-}[f(r + I .)](v)`
    CMinusV,
}

pub(crate) fn u_integral<M>(map: &M, side: USide, u: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let s = cfg.cross.1;
    let line = |t: f64| map(t, s, dir);
    match side {
        USide::APlus => cfg.kernels.u.left(line, cfg.domain.a, &cfg.g, u),
        USide::BMinus => cfg.kernels.u.right(line, cfg.domain.b, &cfg.g, u),
    }
}

pub(crate) fn v_integral<M>(map: &M, side: VSide, v: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let r = cfg.cross.0;
    let line = |t: f64| map(r, t, dir);
    match side {
        VSide::ZeroPlus => cfg.kernels.v.left(line, 0.0, &cfg.h, v),
        VSide::CMinus => cfg.kernels.v.right(line, cfg.domain.c, &cfg.h, v),
    }
}

/// `D^{alpha,g}` of `f(. + I s)` at `u` on the given side.
pub(crate) fn u_rl<M>(map: &M, side: USide, u: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<FdEstimate<Multivector>>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let s = cfg.cross.1;
    let line = |t: f64| map(t, s, dir);
    let fd = &cfg.quad.fd;
    match side {
        USide::APlus => cfg.kernels.u.rl_left(line, cfg.domain.a, &cfg.g, u, fd),
        USide::BMinus => cfg.kernels.u.rl_right(line, cfg.domain.b, &cfg.g, u, fd),
    }
}

pub(crate) fn v_rl<M>(map: &M, side: VSide, v: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<FdEstimate<Multivector>>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let r = cfg.cross.0;
    let line = |t: f64| map(r, t, dir);
    let fd = &cfg.quad.fd;
    match side {
        VSide::ZeroPlus => cfg.kernels.v.rl_left(line, 0.0, &cfg.h, v, fd),
        VSide::CMinus => cfg.kernels.v.rl_right(line, cfg.domain.c, &cfg.h, v, fd),
    }
}

fn eval_of(f: &SliceFunction) -> impl Fn(f64, f64, &UnitImaginary) -> Result<Multivector> + '_ {
    move |u, v, i| Ok(f.eval(u, v, i))
}

/// One of the four restricted integrals of `f` on the slice of `dir`; `x` is
/// `u` for the `u` integrals and `v` for the `v` integrals.
pub fn restricted_integral(f: &SliceFunction, which: Restricted, x: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector> {
    let m = eval_of(f);
    match which {
        Restricted::APlusU => u_integral(&m, USide::APlus, x, dir, cfg),
        Restricted::BMinusU => u_integral(&m, USide::BMinus, x, dir, cfg),
        Restricted::ZeroPlusV => v_integral(&m, VSide::ZeroPlus, x, dir, cfg),
        Restricted::CMinusV => v_integral(&m, VSide::CMinus, x, dir, cfg),
    }
}

pub(crate) fn rl_operator_map<M>(map: &M, variant: CornerVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<FdEstimate<Multivector>>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let du = u_rl(map, variant.u_side, p.u, &p.dir, cfg)?;
    let dv = v_rl(map, variant.v_side, p.v, &p.dir, cfg)?;
    Ok(FdEstimate {
        value: variant.mult_side.combine(du.value, dv.value, &p.dir),
        error: du.error + dv.error,
        step: du.step.max(dv.step),
    })
}

/// The corner operator at `p`, with the finite-difference error estimate.
pub fn rl_operator_estimate(f: &SliceFunction, variant: CornerVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<FdEstimate<Multivector>> {
    rl_operator_map(&eval_of(f), variant, p, cfg)
}

pub fn rl_operator(f: &SliceFunction, variant: CornerVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    rl_operator_estimate(f, variant, p, cfg).map(|e| e.value)
}

/// `D f(r + I s)`: the operator at the cross point itself. The cross point
/// must be interior for the difference stencils.
pub fn rl_operator_diagonal(f: &SliceFunction, variant: CornerVariant, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector> {
    let (r, s) = cfg.cross;
    rl_operator(f, variant, &SlicePoint::new(r, s, *dir)?, cfg)
}

/// A kernel member for the corner `variant`:
/// `f = P(u) C0 + Q(v) I C0` (left) or `P(u) C0 + Q(v) C0 I` (right), where
/// `P = (g(u) - g(a))^alpha / Gamma(alpha + 1)` (`(g(b) - g(u))^alpha` on the
/// `b-` side) and `Q` likewise in `h`. Both fractional derivatives are the
/// constants `C0` and `-C0`, so the operator vanishes provided the cross
/// point is the corner of the variant: the two cross lines must agree at
/// `(r, s)`, and `P`, `Q` vanish only at the corner.
pub fn member_construct_variant(c0: Multivector, variant: CornerVariant, cfg: &FracSliceConfig) -> SliceFunction {
    let (alpha, beta) = (cfg.alpha.value(), cfg.beta.value());
    let pa = 1.0 / gamma_fn(alpha + 1.0).expect("alpha is in (0, 1)");
    let qb = 1.0 / gamma_fn(beta + 1.0).expect("beta is in (0, 1)");
    let (g, h, d) = (cfg.g.clone(), cfg.h.clone(), cfg.domain);
    SliceFunction::new(c0.algebra(), d, Smoothness::C0, move |u, v, dir| {
        let du = match variant.u_side {
            USide::APlus => g.diff(u, d.a),
            USide::BMinus => g.diff(d.b, u),
        };
        let dv = match variant.v_side {
            VSide::ZeroPlus => h.diff(v, 0.0),
            VSide::CMinus => h.diff(d.c, v),
        };
        let p = libm::pow(du.max(0.0), alpha) * pa;
        let q = libm::pow(dv.max(0.0), beta) * qb;
        let i = dir.to_multivector();
        let ic0 = match variant.mult_side {
            MultSide::Left => i * c0,
            MultSide::Right => c0 * i,
        };
        c0 * p + ic0 * q
    })
}

/// [`member_construct_variant`] for the `a+0+` left operator; a member when
/// the cross point is `(a, 0)`.
pub fn member_construct(c0: Multivector, cfg: &FracSliceConfig) -> SliceFunction {
    member_construct_variant(c0, CornerVariant::A0_LEFT, cfg)
}

/// Result of a membership sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub variant: String,
    pub grid: SliceGrid,
    pub slices: usize,
    /// Slice-major, then grid order.
    pub records: Vec<SampleRecord>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Largest finite-difference error estimate seen.
    pub fd_error: f64,
    /// Whether any partial derivative had to be generated by finite differences.
    pub fd_partials: bool,
    /// Zero-set surrogate for the identity principle: true when the associated
    /// map is within `tolerance` of zero at every sample. The sweep cannot
    /// decide whether a zero set accumulates; it only reports the dense-grid
    /// observation.
    pub vanishes_on_grid: bool,
}

impl MembershipReport {
    pub(crate) fn assemble(
        variant: String,
        grid: SliceGrid,
        slices: usize,
        records: Vec<SampleRecord>,
        tolerance: f64,
        fd_error: f64,
        fd_partials: bool,
        vanishes_on_grid: bool,
    ) -> Self {
        let cert = GridCertificate::from_records(records, tolerance);
        Self {
            variant,
            grid,
            slices,
            records: cert.records,
            max_residual: cert.max_residual,
            tolerance,
            pass: cert.pass,
            fd_error,
            fd_partials,
            vanishes_on_grid,
        }
    }
}

/// Sweeps the interior grid of `[a, b] x [0, c]` on each slice in `dirs`; a
/// sample's residual is the norm of the corner operator there.
pub fn is_frac_slice_monogenic(
    f: &SliceFunction,
    variant: CornerVariant,
    cfg: &FracSliceConfig,
    grid: &SliceGrid,
    dirs: &[UnitImaginary],
    tol: f64,
) -> MembershipReport {
    let points = grid.points(&cfg.half_bounds());
    let mut records = Vec::with_capacity(points.len() * dirs.len());
    let mut fd_error = 0.0f64;
    let mut vanishes = true;
    for dir in dirs {
        for &(u, v) in &points {
            let r = SlicePoint::new(u, v, *dir).and_then(|p| rl_operator_estimate(f, variant, &p, cfg));
            let residual = residual_or_inf(r.as_ref().map(|e| e.value.norm_max()).map_err(Clone::clone));
            if let Ok(e) = &r {
                fd_error = fd_error.max(e.error);
            }
            let hm = residual_or_inf(hmap_corner(f, variant, u, v, dir, cfg).map(|m| m.norm_max()));
            vanishes &= hm <= tol;
            records.push(SampleRecord { dir: *dir, u, v, residual });
        }
    }
    MembershipReport::assemble(variant.label(), *grid, dirs.len(), records, tol, fd_error, false, vanishes)
}

pub(crate) fn hmap_map<M>(map: &M, variant: CornerVariant, u: f64, v: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector>
where
    M: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let a = u_integral(map, variant.u_side, u, dir, cfg)?;
    let b = v_integral(map, variant.v_side, v, dir, cfg)?;
    Ok(a * (variant.u_side.sign() / cfg.g.deriv(u)) + b * (variant.v_side.sign() / cfg.h.deriv(v)))
}

/// `eps_u A(u) / g'(u) + eps_v B(v) / h'(v)` on the slice of `dir`, `v >= 0`.
pub fn hmap_corner(f: &SliceFunction, variant: CornerVariant, u: f64, v: f64, dir: &UnitImaginary, cfg: &FracSliceConfig) -> Result<Multivector> {
    hmap_map(&eval_of(f), variant, u, v, dir, cfg)
}

/// `A(u) / g'(u) + B(v) / h'(v)` for the `a+0+` corner.
pub fn hmap(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    hmap_corner(f, CornerVariant::A0_LEFT, p.u, p.v, &p.dir, cfg)
}

/// The corner map as a slice function. Evaluation failures show up as NaN.
pub fn hmap_function(f: &SliceFunction, variant: CornerVariant, cfg: &FracSliceConfig) -> SliceFunction {
    let (f, cfg2) = (f.clone(), cfg.clone());
    SliceFunction::new(f.algebra(), cfg.domain, Smoothness::C1, move |u, v, dir| {
        hmap_corner(&f, variant, u, v, dir, &cfg2).unwrap_or_else(|_| Multivector::nan(f.algebra()))
    })
}

/// Signed evaluation of the corner map on the whole slice plane.
fn hmap_signed<'a>(f: &'a SliceFunction, variant: CornerVariant, cfg: &'a FracSliceConfig) -> impl Fn(f64, f64, &UnitImaginary) -> Result<Multivector> + 'a {
    move |u, v, dir| {
        if v < 0.0 {
            hmap_corner(f, variant, u, -v, &dir.neg(), cfg)
        } else {
            hmap_corner(f, variant, u, v, dir, cfg)
        }
    }
}

/// `(D f + W) - 2 dbar Phi` where `Phi` is the corner map,
/// `W = 2 lambda (eps_u A/g' + I eps_v B/h')` and `2 dbar = d/du + I d/dv`
/// (`I` on the right for right versions). Vanishes for every smooth `f`
/// when `g`, `h` solve the weight ODE; `d/du (1/g') = 2 lambda / g'` is what
/// produces `W`.
pub fn fracprop1_residual(f: &SliceFunction, variant: CornerVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    let m = eval_of(f);
    let (eu, ev) = (variant.u_side.sign(), variant.v_side.sign());
    let a = u_integral(&m, variant.u_side, p.u, &p.dir, cfg)?;
    let b = v_integral(&m, variant.v_side, p.v, &p.dir, cfg)?;
    let fd = &cfg.quad.fd;
    let d = &cfg.domain;
    let phi_u = derivative(|x| Ok(u_integral(&m, variant.u_side, x, &p.dir, cfg)? * (eu / cfg.g.deriv(x))), p.u, d.a, d.b, fd)?.value;
    let phi_v = derivative(|y| Ok(v_integral(&m, variant.v_side, y, &p.dir, cfg)? * (ev / cfg.h.deriv(y))), p.v, 0.0, d.c, fd)?.value;
    let two_dbar = variant.mult_side.combine(phi_u, phi_v, &p.dir);
    let w = variant
        .mult_side
        .combine(a * (eu / cfg.g.deriv(p.u)), b * (ev / cfg.h.deriv(p.v)), &p.dir)
        * (2.0 * cfg.lambda);
    Ok(rl_operator(f, variant, p, cfg)? + w - two_dbar)
}

/// Certifies the corner map against `1/2 (Phi_u + I Phi_v) + lambda Phi = 0`
/// (`I` on the right for right versions) on the half-box grid.
pub fn certify_hmap(
    f: &SliceFunction,
    variant: CornerVariant,
    cfg: &FracSliceConfig,
    grid: &SliceGrid,
    dirs: &[UnitImaginary],
    tol: f64,
) -> GridCertificate {
    let points = grid.points(&cfg.half_bounds());
    let bounds = cfg.domain.plane_bounds();
    let map = hmap_signed(f, variant, cfg);
    match variant.mult_side {
        MultSide::Left => certify_sm_lambda_map(map, cfg.lambda, &points, dirs, &bounds, &cfg.quad.fd, tol),
        MultSide::Right => {
            let mut records = Vec::with_capacity(points.len() * dirs.len());
            for dir in dirs {
                for &(u, v) in &points {
                    let r = crate::slice_fn::partials(|x, y| map(x, y, dir), u, v, &bounds, &cfg.quad.fd).and_then(|(pu, pv)| {
                        let cr = MultSide::Right.combine(pu, pv, dir) * 0.5 + map(u, v, dir)? * cfg.lambda;
                        Ok(cr.norm_max())
                    });
                    records.push(SampleRecord { dir: *dir, u, v, residual: residual_or_inf(r) });
                }
            }
            GridCertificate::from_records(records, tol)
        }
    }
}

/// `| hmap(u + I_x v) - [1/2 (1 - I_x I) hmap(u + I v) + 1/2 (1 + I_x I) hmap(u - I v)] |`.
pub fn frac_representation_check(
    f: &SliceFunction,
    u: f64,
    v: f64,
    dir: &UnitImaginary,
    dir_x: &UnitImaginary,
    cfg: &FracSliceConfig,
) -> Result<f64> {
    let v0 = CornerVariant::A0_LEFT;
    let lhs = hmap_corner(f, v0, u, v, dir_x, cfg)?;
    let plus = hmap_corner(f, v0, u, v, dir, cfg)?;
    let minus = hmap_corner(f, v0, u, v, &dir.neg(), cfg)?;
    Ok((lhs - combine_sides(plus, minus, dir, dir_x)).norm_max())
}

/// Largest complex Cauchy-Riemann residual of the splitting components of
/// `exp(2 lambda u) hmap` on the slice of `basis.unit()`.
pub fn frac_splitting_check(f: &SliceFunction, basis: &SplittingBasis, cfg: &FracSliceConfig, grid: &SliceGrid) -> Result<f64> {
    let points = grid.points(&cfg.half_bounds());
    let bounds = cfg.domain.plane_bounds();
    let map = hmap_signed(f, CornerVariant::A0_LEFT, cfg);
    let dir = *basis.unit();
    crate::slice_fn::splitting_holomorphy_map(|u, v| map(u, v, &dir), basis, cfg.lambda, &points, &bounds, &cfg.quad.fd)
}

/// Least-squares fit `exp(-2 lambda u) sum_n (z - z0)^n C_n` on one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFit {
    pub center: (f64, f64),
    pub radius: f64,
    pub dir: UnitImaginary,
    pub lambda: f64,
    pub coeffs: Vec<Multivector>,
    /// Root mean square of the sample residual norms.
    pub rms_residual: f64,
    pub max_residual: f64,
    /// Largest residual at points not used in the fit.
    pub holdout_max: f64,
    /// Condition estimate of the scaled Vandermonde matrix.
    pub condition: f64,
}

impl SeriesFit {
    /// The series at `u + I v` on the fitted slice; `v` may be negative. The
    /// coefficients of a series centered off the real axis belong to that
    /// slice only.
    pub fn eval(&self, u: f64, v: f64) -> Multivector {
        let dir = &self.dir;
        let z = Complex64::new(u - self.center.0, v - self.center.1);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut acc = dir.algebra().zero();
        for c in &self.coeffs {
            acc += dir.embed(pow) * *c;
            pow *= z;
        }
        acc * libm::exp(-2.0 * self.lambda * u)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

const FIT_RINGS: [f64; 3] = [0.3, 0.6, 0.9];
const HOLDOUT_RINGS: [f64; 2] = [0.45, 0.75];

fn ring_points(disk: &Disk, rings: &[f64], per_ring: usize, offset: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(rings.len() * per_ring);
    for &rho in rings {
        for k in 0..per_ring {
            let t = 2.0 * PI * (k as f64 + offset) / per_ring as f64;
            out.push((disk.center.0 + disk.radius * rho * libm::cos(t), disk.center.1 + disk.radius * rho * libm::sin(t)));
        }
    }
    out
}

/// Fits a degree-`degree` series to `map` on the slice of `dir` inside
/// `disk`, using at least `4 (degree + 1)` points on three rings and the
/// center. Each splitting component is an independent complex fit.
pub fn fit_series_map<M>(map: M, disk: &Disk, dir: &UnitImaginary, degree: usize, lambda: f64) -> Result<SeriesFit>
where
    M: Fn(f64, f64) -> Result<Multivector>,
{
    if !(disk.radius > 0.0) {
        return Err(Error::InvalidContour("disk radius must be positive".into()));
    }
    let per_ring = (2 * degree + 2).max(16);
    let mut pts = ring_points(disk, &FIT_RINGS, per_ring, 0.0);
    pts.push(disk.center);
    let basis = complete_basis(dir, 0);
    let scaled = |u: f64, v: f64| Complex64::new(u - disk.center.0, v - disk.center.1) / disk.radius;
    let mut rows = Vec::with_capacity(pts.len());
    let mut values = Vec::with_capacity(pts.len());
    let mut rhs = alloc::vec![Vec::with_capacity(pts.len()); basis.len()];
    for &(u, v) in &pts {
        let z = scaled(u, v);
        let mut row = Vec::with_capacity(degree + 1);
        let mut pow = Complex64::new(1.0, 0.0);
        for _ in 0..=degree {
            row.push(pow);
            pow *= z;
        }
        rows.push(row);
        let y = map(u, v)?;
        if !y.is_finite() {
            return Err(Error::NonFinite(u));
        }
        for (col, part) in rhs.iter_mut().zip(basis.split(&(y * libm::exp(2.0 * lambda * u)))) {
            col.push(part);
        }
        values.push(y);
    }
    let ls = complex_lstsq(&rows, &rhs, 1e12)?;
    let coeffs = (0..=degree)
        .map(|n| {
            let parts: Vec<Complex64> = ls.solutions.iter().map(|s| s[n]).collect();
            basis.reassemble(&parts) * libm::pow(disk.radius, -(n as f64))
        })
        .collect();
    let mut fit = SeriesFit {
        center: disk.center,
        radius: disk.radius,
        dir: *dir,
        lambda,
        coeffs,
        rms_residual: 0.0,
        max_residual: 0.0,
        holdout_max: 0.0,
        condition: ls.condition,
    };
    let mut sum = 0.0;
    for (&(u, v), y) in pts.iter().zip(&values) {
        let r = (fit.eval(u, v) - *y).norm();
        sum += r * r;
        fit.max_residual = fit.max_residual.max(r);
    }
    fit.rms_residual = libm::sqrt(sum / pts.len() as f64);
    for (u, v) in ring_points(disk, &HOLDOUT_RINGS, per_ring, 0.5) {
        let r = (fit.eval(u, v) - map(u, v)?).norm();
        fit.holdout_max = fit.holdout_max.max(r);
    }
    Ok(fit)
}

/// Series fit of `hmap` on the slice of `dir`; the disk must lie in the half
/// box `v >= 0`.
pub fn frac_series_fit(f: &SliceFunction, disk: &Disk, dir: &UnitImaginary, degree: usize, cfg: &FracSliceConfig) -> Result<SeriesFit> {
    if !disk.inside(&cfg.half_bounds()) {
        return Err(Error::InvalidContour("disk leaves the half box".into()));
    }
    fit_series_map(|u, v| hmap_corner(f, CornerVariant::A0_LEFT, u, v, dir, cfg), disk, dir, degree, cfg.lambda)
}

/// `| cauchy_value(hmap) - hmap(z) |` with weight `exp(2 lambda (Re w - Re z))`.
pub fn frac_cauchy_check(f: &SliceFunction, disk: &Disk, z: &SlicePoint, cfg: &FracSliceConfig, nodes: usize) -> Result<f64> {
    if !disk.inside(&cfg.half_bounds()) {
        return Err(Error::InvalidContour("disk leaves the half box".into()));
    }
    let map = hmap_signed(f, CornerVariant::A0_LEFT, cfg);
    let value = crate::slice_fn::cauchy_value_map(|u, v| map(u, v, &z.dir), disk, (z.u, z.v), &z.dir, cfg.lambda, nodes)?;
    Ok((value - hmap(f, z, cfg)?).norm_max())
}

/// `| int_Gamma exp(2 lambda Re w) dsigma hmap(w) |`.
pub fn frac_cauchy_theorem_check(f: &SliceFunction, contour: &Contour, cfg: &FracSliceConfig) -> Result<f64> {
    let map = hmap_signed(f, CornerVariant::A0_LEFT, cfg);
    let dir = *contour.dir();
    let alg = f.algebra();
    let lambda = cfg.lambda;
    let weight = |u: f64, _v: f64| alg.scalar(libm::exp(2.0 * lambda * u));
    Ok(contour_integral_map(weight, contour, |u, v| map(u, v, &dir))?.norm_max())
}

/// Morera surrogate on `hmap(l)` over random contours in the half box. A pass
/// is consistent with membership; it does not prove it.
pub fn frac_morera_check(l: &SliceFunction, cfg: &FracSliceConfig, trials: usize, seed: u64, tol: f64) -> Result<MoreraOutcome> {
    let map = hmap_signed(l, CornerVariant::A0_LEFT, cfg);
    morera_classify_map(map, l.algebra(), cfg.lambda, &cfg.half_bounds(), trials, seed, tol)
}

/// Both sides of the cross-recovery display at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRecovery {
    /// `h'(v) f(u + I s) + g'(u) f(r + I v)`.
    pub lhs: Multivector,
    pub rhs: Multivector,
    pub residual: f64,
    /// Sum of the finite-difference error estimates of the four derivatives.
    pub fd_error: f64,
}

/// Recovers `f` on the cross from the fitted series of its map:
///
/// ```text
/// h'(v) f(u + I s) + g'(u) f(r + I v)
///   = (D_u + D_v)[g' h' Phi](u + I v) - D_v[h'](v) A(u) - D_u[g'](u) B(v)
/// ```
///
/// with `D_u = D^{1-alpha,g}_{a+}` acting on `u`, `D_v = D^{1-beta,h}_{0+}`
/// on `v` and `Phi` the series. The series must represent the map on the
/// segments `[a, u] x {v}` and `{u} x [0, v]`, and `p` must lie on the
/// slice of the fit.
pub fn cross_recovery_check(f: &SliceFunction, p: &SlicePoint, series: &SeriesFit, cfg: &FracSliceConfig) -> Result<CrossRecovery> {
    if !p.dir.approx_eq(&series.dir, 1e-12) {
        return Err(Error::InvalidConfig("cross recovery point is not on the slice of the series".into()));
    }
    let (r, s) = cfg.cross;
    let (g, h) = (&cfg.g, &cfg.h);
    let (u, v, dir) = (p.u, p.v, &p.dir);
    let fd = &cfg.quad.fd;
    let a = cfg.domain.a;
    let lhs = f.eval(u, s, dir) * h.deriv(v) + f.eval(r, v, dir) * g.deriv(u);
    let t1 = cfg.kernels.u_dual.rl_left(|t| Ok(series.eval(t, v) * (g.deriv(t) * h.deriv(v))), a, g, u, fd)?;
    let t2 = cfg.kernels.v_dual.rl_left(|t| Ok(series.eval(u, t) * (g.deriv(u) * h.deriv(t))), 0.0, h, v, fd)?;
    let dh = cfg.kernels.v_dual.rl_left(|t| Ok(h.deriv(t)), 0.0, h, v, fd)?;
    let dg = cfg.kernels.u_dual.rl_left(|t| Ok(g.deriv(t)), a, g, u, fd)?;
    let m = eval_of(f);
    let big_a = u_integral(&m, USide::APlus, u, dir, cfg)?;
    let big_b = v_integral(&m, VSide::ZeroPlus, v, dir, cfg)?;
    let rhs = t1.value + t2.value - big_a * dh.value - big_b * dg.value;
    let scale = big_a.norm_max() * dh.error + big_b.norm_max() * dg.error;
    Ok(CrossRecovery { lhs, rhs, residual: (lhs - rhs).norm_max(), fd_error: t1.error + t2.error + scale })
}
