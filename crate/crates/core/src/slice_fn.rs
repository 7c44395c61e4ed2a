//! Slice functions on `S_{a,b,c}`, the weighted slice Cauchy-Riemann operator
//! `1/2 (d/du + I d/dv) + lambda` and contour integration in a slice `C_I`.
//!
//! A slice function is evaluated at `u + I v` with `v >= 0`. Points of the
//! slice plane with `v < 0` are `u + (-I)|v|`, see
//! [`SliceFunction::eval_signed`].
//!
//! The `lambda`-weighted objects use the factor `exp(2 lambda u)`:
//! `f` solves `1/2 (f_u + I f_v) + lambda f = 0` exactly when
//! `exp(2 lambda u) f` is slice monogenic.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::{uniform, Algebra, Multivector, SlicePoint, SplittingBasis, UnitImaginary};
use crate::realfrac::{derivative, gauss_legendre, FdPolicy};
use crate::{Error, Result};

/// `S_{a,b,c} = {u + I v : u in [a, b], v in [0, c], I in S}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialBox {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AxialBox {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a < b) || !(c > 0.0) || !a.is_finite() || !b.is_finite() || !c.is_finite() {
            return Err(Error::InvalidDomain(alloc::format!("box needs a < b and c > 0, got ({a}, {b}, {c})")));
        }
        Ok(Self { a, b, c })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.a && u <= self.b && v.abs() <= self.c
    }

    /// Bounds of the slice plane `C_I` inside the box, `v` signed.
    pub fn plane_bounds(&self) -> PlaneBounds {
        PlaneBounds { u: (self.a, self.b), v: (-self.c, self.c) }
    }

    /// Bounds with `v >= 0` only.
    pub fn half_bounds(&self) -> PlaneBounds {
        PlaneBounds { u: (self.a, self.b), v: (0.0, self.c) }
    }
}

/// Rectangle in one slice plane on which a map is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneBounds {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl PlaneBounds {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u.0 && u <= self.u.1 && v >= self.v.0 && v <= self.v.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Smoothness {
    C0,
    AC1,
    C1,
    C2,
}

pub type SliceEval = Arc<dyn Fn(f64, f64, &UnitImaginary) -> Multivector + Send + Sync>;

/// `(u, v, I) -> f(u + I v)` on an [`AxialBox`].
///
/// The callable must be safe to share between threads.
#[derive(Clone)]
pub struct SliceFunction {
    alg: Algebra,
    domain: AxialBox,
    smoothness: Smoothness,
    eval: SliceEval,
}

impl fmt::Debug for SliceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SliceFunction")
            .field("n", &self.alg.n())
            .field("domain", &self.domain)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl SliceFunction {
    pub fn new<F>(alg: Algebra, domain: AxialBox, smoothness: Smoothness, eval: F) -> Self
    where
        F: Fn(f64, f64, &UnitImaginary) -> Multivector + Send + Sync + 'static,
    {
        Self { alg, domain, smoothness, eval: Arc::new(eval) }
    }

    pub fn zero(alg: Algebra, domain: AxialBox) -> Self {
        Self::new(alg, domain, Smoothness::C2, move |_, _, _| alg.zero())
    }

    pub fn constant(value: Multivector, domain: AxialBox) -> Self {
        Self::new(value.algebra(), domain, Smoothness::C2, move |_, _, _| value)
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn domain(&self) -> &AxialBox {
        &self.domain
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn eval(&self, u: f64, v: f64, dir: &UnitImaginary) -> Multivector {
        (self.eval)(u, v, dir)
    }

    pub fn eval_point(&self, p: &SlicePoint) -> Multivector {
        (self.eval)(p.u, p.v, &p.dir)
    }

    /// Value at `u + I v` for any sign of `v`, using `u + I v = u + (-I)(-v)`.
    pub fn eval_signed(&self, u: f64, v: f64, dir: &UnitImaginary) -> Multivector {
        if v < 0.0 {
            (self.eval)(u, -v, &dir.neg())
        } else {
            (self.eval)(u, v, dir)
        }
    }

    /// `f(x) C`.
    pub fn mul_right(&self, c: Multivector) -> Self {
        let f = self.clone();
        Self::new(self.alg, self.domain, self.smoothness, move |u, v, i| f.eval(u, v, i) * c)
    }

    /// `f + g` on the domain of `self`.
    pub fn add(&self, other: &SliceFunction) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(self.alg, self.domain, self.smoothness.min(other.smoothness), move |u, v, i| {
            f.eval(u, v, i) + g.eval(u, v, i)
        })
    }

    /// The signed evaluation as a fallible map on the slice plane of `dir`.
    pub fn plane_map(&self, dir: UnitImaginary) -> impl Fn(f64, f64) -> Result<Multivector> + '_ {
        move |u, v| Ok(self.eval_signed(u, v, &dir))
    }
}

/// Central-difference partials `(F_u, F_v)` of a map on a slice plane.
pub fn partials<F>(map: F, u: f64, v: f64, bounds: &PlaneBounds, fd: &FdPolicy) -> Result<(Multivector, Multivector)>
where
    F: Fn(f64, f64) -> Result<Multivector>,
{
    let du = derivative(|x| map(x, v), u, bounds.u.0, bounds.u.1, fd)?.value;
    let dv = derivative(|y| map(u, y), v, bounds.v.0, bounds.v.1, fd)?.value;
    Ok((du, dv))
}

/// `1/2 (F_u + I F_v)` for a map on the slice plane of `dir`.
pub fn dbar<F>(map: F, u: f64, v: f64, dir: &UnitImaginary, bounds: &PlaneBounds, fd: &FdPolicy) -> Result<Multivector>
where
    F: Fn(f64, f64) -> Result<Multivector>,
{
    let (du, dv) = partials(map, u, v, bounds, fd)?;
    Ok((du + dir.to_multivector() * dv) * 0.5)
}

/// `1/2 (f_u + I f_v) + lambda f` at `p`.
pub fn cr_residual(f: &SliceFunction, p: &SlicePoint, lambda: f64, fd: &FdPolicy) -> Result<Multivector> {
    let bounds = f.domain().plane_bounds();
    let d = dbar(f.plane_map(p.dir), p.u, p.v, &p.dir, &bounds, fd)?;
    Ok(d + f.eval_point(p) * lambda)
}

/// `dbar[exp(2 lambda u) f] - exp(2 lambda u) (dbar f + lambda f)`, which
/// vanishes for every differentiable `f`.
pub fn exp_conjugation_residual(f: &SliceFunction, p: &SlicePoint, lambda: f64, fd: &FdPolicy) -> Result<Multivector> {
    let bounds = f.domain().plane_bounds();
    let plane = f.plane_map(p.dir);
    let conj = |u: f64, v: f64| Ok(plane(u, v)? * libm::exp(2.0 * lambda * u));
    let lhs = dbar(conj, p.u, p.v, &p.dir, &bounds, fd)?;
    Ok(lhs - cr_residual(f, p, lambda, fd)? * libm::exp(2.0 * lambda * p.u))
}

/// `1/2 (1 - I_x I) f(u + I v) + 1/2 (1 + I_x I) f(u - I v)`.
pub fn representation_combine(f: &SliceFunction, u: f64, v: f64, dir: &UnitImaginary, dir_x: &UnitImaginary) -> Multivector {
    let plus = f.eval(u, v, dir);
    let minus = f.eval(u, v, &dir.neg());
    combine_sides(plus, minus, dir, dir_x)
}

/// The representation-formula combination of values on slices `I` and `-I`.
pub fn combine_sides(plus: Multivector, minus: Multivector, dir: &UnitImaginary, dir_x: &UnitImaginary) -> Multivector {
    let alg = plus.algebra();
    let k = dir_x.to_multivector() * dir.to_multivector();
    ((alg.one() - k) * plus + (alg.one() + k) * minus) * 0.5
}

/// Interior sample grid: `nu x nv` points strictly inside a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceGrid {
    pub nu: usize,
    pub nv: usize,
}

impl SliceGrid {
    pub fn new(nu: usize, nv: usize) -> Self {
        Self { nu, nv }
    }

    pub fn points(&self, bounds: &PlaneBounds) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.nu * self.nv);
        for i in 0..self.nu {
            let u = bounds.u.0 + (bounds.u.1 - bounds.u.0) * (i + 1) as f64 / (self.nu + 1) as f64;
            for j in 0..self.nv {
                let v = bounds.v.0 + (bounds.v.1 - bounds.v.0) * (j + 1) as f64 / (self.nv + 1) as f64;
                out.push((u, v));
            }
        }
        out
    }
}

/// Largest complex Cauchy-Riemann residual `|1/2 (dF_A/du + i dF_A/dv)|` of the
/// components `F_A` of `exp(2 lambda u) map(u, v)` over the points.
pub fn splitting_holomorphy_map<F>(
    map: F,
    basis: &SplittingBasis,
    lambda: f64,
    points: &[(f64, f64)],
    bounds: &PlaneBounds,
    fd: &FdPolicy,
) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<Multivector>,
{
    let weighted = |u: f64, v: f64| Ok(map(u, v)? * libm::exp(2.0 * lambda * u));
    let mut worst = 0.0f64;
    for &(u, v) in points {
        let (du, dv) = partials(&weighted, u, v, bounds, fd)?;
        for (a, b) in basis.split(&du).iter().zip(basis.split(&dv)) {
            let r = ((*a + Complex64::i() * b) * 0.5).norm();
            worst = worst.max(if r.is_finite() { r } else { f64::INFINITY });
        }
    }
    Ok(worst)
}

/// [`splitting_holomorphy_map`] for a slice function on the slice of
/// `basis.unit()`, over the interior grid of the half box `v > 0`.
pub fn splitting_holomorphy_check(
    f: &SliceFunction,
    basis: &SplittingBasis,
    lambda: f64,
    grid: &SliceGrid,
    fd: &FdPolicy,
) -> Result<f64> {
    let points = grid.points(&f.domain().half_bounds());
    let bounds = f.domain().plane_bounds();
    splitting_holomorphy_map(f.plane_map(*basis.unit()), basis, lambda, &points, &bounds, fd)
}

/// `sum_A exp(-2 lambda u) F_A I_A` rebuilt from the components of
/// `exp(2 lambda u) value`, minus `value`.
pub fn splitting_roundtrip_error(value: &Multivector, basis: &SplittingBasis, lambda: f64, u: f64) -> f64 {
    let w = libm::exp(2.0 * lambda * u);
    let parts = basis.split(&(*value * w));
    (basis.reassemble(&parts) * (1.0 / w) - *value).norm_max()
}

/// Quadrature node on a contour: position and weighted tangent `dw`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

/// Oriented curve in the slice plane of `dir` stored as quadrature nodes, so
/// that `int_G F(w) dw ~ sum_k F(w_k) dw_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    nodes: Vec<ContourNode>,
    start: (f64, f64),
    end: (f64, f64),
    dir: UnitImaginary,
}

impl Contour {
    /// Positively oriented circle, trapezoid rule with `nodes` points.
    pub fn circle(center: (f64, f64), radius: f64, nodes: usize, dir: UnitImaginary) -> Result<Self> {
        if nodes < 3 || !(radius > 0.0) {
            return Err(Error::InvalidContour(alloc::format!("circle needs >= 3 nodes and radius > 0 ({nodes}, {radius})")));
        }
        let h = 2.0 * PI / nodes as f64;
        let list = (0..nodes)
            .map(|k| {
                let (s, c) = libm::sincos(h * k as f64);
                ContourNode {
                    u: center.0 + radius * c,
                    v: center.1 + radius * s,
                    du: -radius * s * h,
                    dv: radius * c * h,
                }
            })
            .collect();
        let p = (center.0 + radius, center.1);
        Ok(Self { nodes: list, start: p, end: p, dir })
    }

    /// Positively oriented boundary of `[lo.0, hi.0] x [lo.1, hi.1]`,
    /// Gauss-Legendre with `per_side` nodes on each side.
    pub fn rectangle(lo: (f64, f64), hi: (f64, f64), per_side: usize, dir: UnitImaginary) -> Result<Self> {
        if !(lo.0 < hi.0 && lo.1 < hi.1) {
            return Err(Error::InvalidContour("rectangle corners out of order".into()));
        }
        let corners = [lo, (hi.0, lo.1), hi, (lo.0, hi.1), lo];
        let mut out = Self::segment(corners[0], corners[1], per_side, dir)?;
        for w in corners[1..].windows(2) {
            out = out.concat(&Self::segment(w[0], w[1], per_side, dir)?)?;
        }
        Ok(out)
    }

    /// Straight segment from `p` to `q` with a Gauss-Legendre rule.
    pub fn segment(p: (f64, f64), q: (f64, f64), nodes: usize, dir: UnitImaginary) -> Result<Self> {
        if nodes < 1 {
            return Err(Error::InvalidContour("segment needs a node".into()));
        }
        let rule = gauss_legendre(nodes)?;
        let (hu, hv) = (0.5 * (q.0 - p.0), 0.5 * (q.1 - p.1));
        let list = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| ContourNode {
                u: 0.5 * (p.0 + q.0) + hu * x,
                v: 0.5 * (p.1 + q.1) + hv * x,
                du: hu * w,
                dv: hv * w,
            })
            .collect();
        Ok(Self { nodes: list, start: p, end: q, dir })
    }

    /// Polyline through `points` with trapezoid weights; `closed` appends the
    /// segment back to the first point.
    pub fn polyline(points: &[(f64, f64)], closed: bool, dir: UnitImaginary) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.to_vec();
        if closed && pts.first() != pts.last() {
            pts.push(pts[0]);
        }
        if pts.len() < 3 {
            return Err(Error::InvalidContour("polyline needs at least 3 points".into()));
        }
        let m = pts.len();
        let mut list: Vec<ContourNode> = pts
            .iter()
            .map(|&(u, v)| ContourNode { u, v, du: 0.0, dv: 0.0 })
            .collect();
        for k in 0..m - 1 {
            let (du, dv) = (pts[k + 1].0 - pts[k].0, pts[k + 1].1 - pts[k].1);
            list[k].du += 0.5 * du;
            list[k].dv += 0.5 * dv;
            list[k + 1].du += 0.5 * du;
            list[k + 1].dv += 0.5 * dv;
        }
        if closed {
            // the repeated endpoint carries the first node's other half
            let last = list.pop().expect("m >= 3");
            list[0].du += last.du;
            list[0].dv += last.dv;
        }
        Ok(Self { nodes: list, start: pts[0], end: pts[m - 1], dir })
    }

    pub fn nodes(&self) -> &[ContourNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dir(&self) -> &UnitImaginary {
        &self.dir
    }

    pub fn is_closed(&self) -> bool {
        let tol = 1e-12 * (1.0 + self.start.0.abs().max(self.start.1.abs()));
        (self.start.0 - self.end.0).abs() <= tol && (self.start.1 - self.end.1).abs() <= tol
    }

    /// Node positions `(u, v)`.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.nodes.iter().map(|n| (n.u, n.v)).collect()
    }

    /// Same curve with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let nodes = self
            .nodes
            .iter()
            .rev()
            .map(|n| ContourNode { du: -n.du, dv: -n.dv, ..*n })
            .collect();
        Self { nodes, start: self.end, end: self.start, dir: self.dir }
    }

    /// `self` followed by `other`; both must lie in the same slice.
    pub fn concat(&self, other: &Contour) -> Result<Self> {
        if !self.dir.approx_eq(&other.dir, 1e-12) {
            return Err(Error::InvalidContour("contours lie in different slices".into()));
        }
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes);
        Ok(Self { nodes, start: self.start, end: other.end, dir: self.dir })
    }

    fn check(&self) -> Result<()> {
        if self.nodes.len() < 3 {
            return Err(Error::InvalidContour("degenerate contour (< 3 nodes)".into()));
        }
        Ok(())
    }
}

/// `sum_k weight(w_k) dsigma_k F(w_k)` with `dsigma = -dw I = dv - du I`,
/// products in this order.
pub fn contour_integral_map<W, F>(weight: W, contour: &Contour, map: F) -> Result<Multivector>
where
    W: Fn(f64, f64) -> Multivector,
    F: Fn(f64, f64) -> Result<Multivector>,
{
    contour.check()?;
    let i = contour.dir.to_multivector();
    let alg = i.algebra();
    let mut acc = alg.zero();
    for n in &contour.nodes {
        let dsigma = alg.scalar(n.dv) - i * n.du;
        acc += weight(n.u, n.v) * dsigma * map(n.u, n.v)?;
    }
    Ok(acc)
}

pub fn contour_integral<W>(weight: W, contour: &Contour, f: &SliceFunction) -> Result<Multivector>
where
    W: Fn(f64, f64) -> Multivector,
{
    contour_integral_map(weight, contour, f.plane_map(contour.dir))
}

/// Closed disk `|w - center| <= radius` in a slice plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: (f64, f64),
    pub radius: f64,
}

impl Disk {
    pub fn inside(&self, bounds: &PlaneBounds) -> bool {
        self.radius > 0.0
            && self.center.0 - self.radius >= bounds.u.0
            && self.center.0 + self.radius <= bounds.u.1
            && self.center.1 - self.radius >= bounds.v.0
            && self.center.1 + self.radius <= bounds.v.1
    }

    fn strictly_contains(&self, u: f64, v: f64) -> bool {
        libm::hypot(u - self.center.0, v - self.center.1) < self.radius * (1.0 - 1e-12)
    }
}

/// `1/(2 pi) int_{dD} exp(2 lambda (Re w - Re z)) (w - z)^{-1} dsigma F(w)` on
/// the slice plane of `dir`.
pub fn cauchy_value_map<F>(map: F, disk: &Disk, z: (f64, f64), dir: &UnitImaginary, lambda: f64, nodes: usize) -> Result<Multivector>
where
    F: Fn(f64, f64) -> Result<Multivector>,
{
    if !disk.strictly_contains(z.0, z.1) {
        return Err(Error::InvalidContour(alloc::format!("point {z:?} is not inside the disk")));
    }
    let contour = Contour::circle(disk.center, disk.radius, nodes, *dir)?;
    let zc = Complex64::new(z.0, z.1);
    let kernel = |u: f64, v: f64| {
        let inv = (Complex64::new(u, v) - zc).inv() * libm::exp(2.0 * lambda * (u - z.0));
        dir.embed(inv)
    };
    Ok(contour_integral_map(kernel, &contour, map)? * (0.5 / PI))
}

/// Cauchy formula value at `z` from the boundary of a disk in the slice of
/// `z.dir`; the disk must lie in the slice plane of the domain.
pub fn cauchy_value(f: &SliceFunction, disk: &Disk, z: &SlicePoint, lambda: f64, nodes: usize) -> Result<Multivector> {
    if !disk.inside(&f.domain().plane_bounds()) {
        return Err(Error::InvalidContour("disk leaves the domain".into()));
    }
    cauchy_value_map(f.plane_map(z.dir), disk, (z.u, z.v), &z.dir, lambda, nodes)
}

/// Outcome of a sampled Morera test.
#[derive(Debug, Clone, PartialEq)]
pub struct MoreraOutcome {
    pub pass: bool,
    pub worst: f64,
    pub tolerance: f64,
    /// One residual per trial, in trial order.
    pub residuals: Vec<f64>,
}

/// Contour used by trial `k` of [`morera_classify_map`]: circles on even
/// trials, rectangles on odd ones, inside `bounds`.
pub fn morera_contour<R: rand_core::RngCore>(rng: &mut R, k: usize, dir: UnitImaginary, bounds: &PlaneBounds) -> Result<Contour> {
    let (wu, wv) = (bounds.u.1 - bounds.u.0, bounds.v.1 - bounds.v.0);
    let scale = wu.min(wv);
    if k % 2 == 0 {
        let r = uniform(rng, 0.1, 0.4) * scale;
        let cu = uniform(rng, bounds.u.0 + r, bounds.u.1 - r);
        let cv = uniform(rng, bounds.v.0 + r, bounds.v.1 - r);
        Contour::circle((cu, cv), r, 256, dir)
    } else {
        let su = uniform(rng, 0.2, 0.8) * wu;
        let sv = uniform(rng, 0.2, 0.8) * wv;
        let u0 = uniform(rng, bounds.u.0, bounds.u.1 - su);
        let v0 = uniform(rng, bounds.v.0, bounds.v.1 - sv);
        Contour::rectangle((u0, v0), (u0 + su, v0 + sv), 32, dir)
    }
}

/// Morera surrogate: `| int exp(2 lambda Re w) dsigma F |` over `trials`
/// random circles and rectangles, each in the slice of a random `I`.
pub fn morera_classify_map<F>(
    map: F,
    alg: Algebra,
    lambda: f64,
    bounds: &PlaneBounds,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<MoreraOutcome>
where
    F: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residuals = Vec::with_capacity(trials);
    for k in 0..trials {
        let dir = UnitImaginary::random(alg, &mut rng);
        let contour = morera_contour(&mut rng, k, dir, bounds)?;
        let weight = |u: f64, _v: f64| alg.scalar(libm::exp(2.0 * lambda * u));
        let r = contour_integral_map(weight, &contour, |u, v| map(u, v, &dir))?.norm_max();
        residuals.push(if r.is_finite() { r } else { f64::INFINITY });
    }
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(*r));
    Ok(MoreraOutcome { pass: worst <= tolerance, worst, tolerance, residuals })
}

pub fn morera_classify(f: &SliceFunction, lambda: f64, trials: usize, seed: u64, tolerance: f64) -> Result<MoreraOutcome> {
    let bounds = f.domain().plane_bounds();
    morera_classify_map(|u, v, i| Ok(f.eval_signed(u, v, i)), f.algebra(), lambda, &bounds, trials, seed, tolerance)
}

/// One sampled residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    pub dir: UnitImaginary,
    pub u: f64,
    pub v: f64,
    pub residual: f64,
}

/// Residuals over a grid and a set of slices with the resulting verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCertificate {
    pub records: Vec<SampleRecord>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl GridCertificate {
    /// Collects records; errors and non-finite residuals count as infinite.
    pub fn from_records(records: Vec<SampleRecord>, tolerance: f64) -> Self {
        let max_residual = records.iter().fold(0.0f64, |m, r| m.max(r.residual));
        Self { records, max_residual, tolerance, pass: max_residual <= tolerance }
    }
}

pub(crate) fn residual_or_inf(r: Result<f64>) -> f64 {
    match r {
        Ok(x) if x.is_finite() => x,
        _ => f64::INFINITY,
    }
}

/// Certifies `1/2 (F_u + I F_v) + lambda F = 0` for a map given on every
/// slice, sampling `points` on each slice in `dirs`.
#[allow(clippy::too_many_arguments)]
pub fn certify_sm_lambda_map<F>(
    map: F,
    lambda: f64,
    points: &[(f64, f64)],
    dirs: &[UnitImaginary],
    bounds: &PlaneBounds,
    fd: &FdPolicy,
    tolerance: f64,
) -> GridCertificate
where
    F: Fn(f64, f64, &UnitImaginary) -> Result<Multivector>,
{
    let mut records = Vec::with_capacity(points.len() * dirs.len());
    for dir in dirs {
        let plane = |u: f64, v: f64| map(u, v, dir);
        for &(u, v) in points {
            let r = dbar(&plane, u, v, dir, bounds, fd).and_then(|d| Ok((d + plane(u, v)? * lambda).norm_max()));
            records.push(SampleRecord { dir: *dir, u, v, residual: residual_or_inf(r) });
        }
    }
    GridCertificate::from_records(records, tolerance)
}

/// [`certify_sm_lambda_map`] for a slice function on an interior grid of
/// the half box.
pub fn certify_sm_lambda(
    f: &SliceFunction,
    lambda: f64,
    grid: &SliceGrid,
    dirs: &[UnitImaginary],
    fd: &FdPolicy,
    tolerance: f64,
) -> GridCertificate {
    let points = grid.points(&f.domain().half_bounds());
    let bounds = f.domain().plane_bounds();
    certify_sm_lambda_map(|u, v, i| Ok(f.eval_signed(u, v, i)), lambda, &points, dirs, &bounds, fd, tolerance)
}
