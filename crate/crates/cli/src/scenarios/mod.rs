//! The scenario registry. Each scenario sweeps one identity or
//! characterization and returns its residual records in a fixed order.

use fracslice_core::clifford::{uniform, Algebra, Multivector, UnitImaginary};
use fracslice_core::frac_caputo::CrossPartials;
use fracslice_core::slice_fn::{AxialBox, PlaneBounds, SliceEval, SliceFunction, Smoothness};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

use crate::config::Setup;
use crate::report::{Record, ScenarioReport};
use crate::CliError;

mod caputo;
mod frac;
mod real;
mod slice;

pub struct Scenario {
    pub name: &'static str,
    /// What is checked, in one line.
    pub description: &'static str,
    /// Meaning of the `u` and `v` report columns.
    pub columns: &'static str,
    pub tolerance: f64,
    run: fn(&Setup, f64) -> Vec<Record>,
}

macro_rules! scenario {
    ($name:literal, $tol:expr, $run:path, $desc:literal, $cols:literal) => {
        Scenario { name: $name, description: $desc, columns: $cols, tolerance: $tol, run: $run }
    };
}

pub const REGISTRY: &[Scenario] = &[
    scenario!("clifford-axioms", 1e-12, real::clifford_axioms,
        "e_i e_j + e_j e_i = -2 delta_ij for all generator pairs, associativity on random triples, n in {2,3,4}",
        "u = n, v = pair index or triple index"),
    scenario!("power-law", 1e-8, real::power_law,
        "I^{a,g}[(g - g(a))^s] = Gamma(s+1)/Gamma(s+a+1) (g - g(a))^{s+a}, relative error",
        "u = x, v = order"),
    scenario!("fund-theorem", 1e-4, real::fund_theorem,
        "D^{a,g} I^{a,g} f = f, left and right sided",
        "u = x, v = order"),
    scenario!("rl-caputo-bridge", 1e-4, real::rl_caputo_bridge,
        "Caputo D^{a,g}[I^{1-a,g} f] = I^{1-a,g}[RL D^{a,g} f], left and right sided",
        "u = x, v = order"),
    scenario!("exp-conjugation", 1e-6, slice::exp_conjugation,
        "dbar[exp(2 lambda u) f] = exp(2 lambda u)(dbar f + lambda f) on smooth f, lambda in {0, 0.4, -0.3}",
        "sample point"),
    scenario!("representation", 1e-8, slice::representation,
        "f(u + J v) from the values on the slices of I and -I, on exp(-2 lambda u) P(u + I v) C",
        "sample point"),
    scenario!("splitting", 1e-10, slice::splitting,
        "splitting roundtrip at 1e-10 and holomorphy of the complex components at 1e-6",
        "sample point"),
    scenario!("cauchy-formula", 1e-6, slice::cauchy_formula,
        "weighted Cauchy integral over a circle (512 nodes) reproduces exp(-2 lambda u) P(z) C",
        "sample point"),
    scenario!("cauchy-theorem", 1e-8, slice::cauchy_theorem,
        "weighted integral over closed circles and rectangles vanishes",
        "contour centre"),
    scenario!("morera", 1e-8, slice::morera,
        "Morera surrogate: weighted integrals over random contours in random slices vanish",
        "u = trial, v = 0"),
    scenario!("fracprop1", 1e-3, frac::fracprop1,
        "corner operator D f equals 2 dbar of the corner map minus the lambda term, 8 corners, both weight families",
        "sample point"),
    scenario!("fracprop2", 1e-3, frac::fracprop2,
        "constructed member is in the kernel of D_{a+0+} and its map solves the slice equation",
        "sample point"),
    scenario!("member-kernel", 1e-3, frac::member_kernel,
        "the member built for each of the 8 corners is in that corner's kernel and its map is slice monogenic",
        "sample point"),
    scenario!("frac-representation", 1e-3, frac::frac_representation,
        "representation formula for the map of a member",
        "sample point"),
    scenario!("frac-splitting", 1e-3, frac::frac_splitting,
        "Cauchy-Riemann residual of the complex components of the map of a member",
        "u = slice, v = 0"),
    scenario!("frac-series", 1e-10, frac::frac_series,
        "power series fit of the map of a member (exact from degree 1) and strict convergence on exp(z) C",
        "u = degree, v = 0 (member) or 1 (reference)"),
    scenario!("frac-cauchy", 1e-3, frac::frac_cauchy,
        "weighted Cauchy formula for the map of a member",
        "sample point"),
    scenario!("frac-cauchy-thm", 1e-3, frac::frac_cauchy_thm,
        "weighted closed-contour integral of the map of a member vanishes",
        "contour centre"),
    scenario!("frac-morera", 1e-3, frac::frac_morera,
        "Morera surrogate on the map of a member",
        "u = trial, v = 0"),
    scenario!("cross-recovery", 1e-2, frac::cross_recovery,
        "f on the cross recovered from the series of its map; residual shrinks as the quadrature order doubles",
        "sample point, or u = quadrature order for the convergence rows"),
    scenario!("caputo-kernel", 1e-10, caputo::caputo_kernel,
        "Caputo corner operators vanish on constants and on functions constant along the cross",
        "sample point"),
    scenario!("caputo-h-identity", 1e-2, caputo::caputo_h_identity,
        "C D(H f) = H[RL D f] minus the two cross-point corrections, smooth f, both weight families",
        "sample point"),
    scenario!("caputo-characterization", 1e-2, caputo::caputo_characterization,
        "f vanishing on the cross: the characterization residual vanishes and H f is a Caputo member",
        "sample point"),
    scenario!("mixed-operators", 1e-12, caputo::mixed_operators,
        "mixed RL/Caputo operators reduce to the pure ones and match a term-by-term evaluation",
        "sample point"),
];

pub fn find(name: &str) -> Option<&'static Scenario> {
    REGISTRY.iter().find(|s| s.name == name)
}

pub fn run_scenario(name: &str, setup: &Setup) -> Result<ScenarioReport, CliError> {
    let s = find(name).ok_or_else(|| CliError::Usage(format!("unknown scenario '{name}' (see `fracslice list`)")))?;
    let tol = setup.run.tolerance(s.name, s.tolerance);
    let records = (s.run)(setup, tol);
    Ok(ScenarioReport::new(s.name, setup.run.echo(), records))
}

/// Independent stream per scenario so adding samples to one scenario leaves
/// the others unchanged.
pub(crate) fn rng(setup: &Setup, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(setup.run.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

pub(crate) fn random_dirs(alg: Algebra, n: usize, rng: &mut ChaCha8Rng) -> Vec<UnitImaginary> {
    (0..n).map(|_| UnitImaginary::random(alg, rng)).collect()
}

/// Points in `bounds` kept a fraction `margin` of the width away from the edges.
pub(crate) fn random_points(bounds: &PlaneBounds, n: usize, margin: f64, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let (du, dv) = ((bounds.u.1 - bounds.u.0) * margin, (bounds.v.1 - bounds.v.0) * margin);
    (0..n)
        .map(|_| (uniform(rng, bounds.u.0 + du, bounds.u.1 - du), uniform(rng, bounds.v.0 + dv, bounds.v.1 - dv)))
        .collect()
}

pub(crate) fn random_mv(alg: Algebra, rng: &mut ChaCha8Rng) -> Multivector {
    let coeffs: Vec<f64> = (0..alg.dim()).map(|_| uniform(rng, -1.0, 1.0)).collect();
    alg.from_coeffs(&coeffs).expect("dimension matches")
}

/// `c1 sin(u + 0.3 v) + I c2 u v^2 + I c3 v exp(-v) cos u` with random
/// constants, and its partials.
pub(crate) fn smooth_function(alg: Algebra, domain: AxialBox, rng: &mut ChaCha8Rng) -> (SliceFunction, CrossPartials) {
    let (c1, c2, c3) = (random_mv(alg, rng), random_mv(alg, rng), random_mv(alg, rng));
    let f = SliceFunction::new(alg, domain, Smoothness::C2, move |u, v, i| {
        let im = i.to_multivector();
        c1 * (u + 0.3 * v).sin() + im * c2 * (u * v * v) + im * c3 * (v * (-v).exp() * u.cos())
    });
    let du: SliceEval = Arc::new(move |u, v, i| {
        let im = i.to_multivector();
        c1 * (u + 0.3 * v).cos() + im * c2 * (v * v) - im * c3 * (v * (-v).exp() * u.sin())
    });
    let dv: SliceEval = Arc::new(move |u, v, i| {
        let im = i.to_multivector();
        c1 * (0.3 * (u + 0.3 * v).cos()) + im * c2 * (2.0 * u * v) + im * c3 * ((1.0 - v) * (-v).exp() * u.cos())
    });
    (f, CrossPartials::Analytic { du, dv })
}

/// `exp(-2 lambda u) sum_k (u + I v)^k C_k`, which solves the weighted slice
/// equation.
pub(crate) fn sm_lambda_family(alg: Algebra, domain: AxialBox, lambda: f64, coeffs: Vec<Multivector>) -> SliceFunction {
    SliceFunction::new(alg, domain, Smoothness::C2, move |u, v, i| {
        let z = Complex64::new(u, v);
        let mut zk = Complex64::new(1.0, 0.0);
        let mut acc = alg.zero();
        for c in &coeffs {
            acc += i.embed(zk) * *c;
            zk *= z;
        }
        acc * (-2.0 * lambda * u).exp()
    })
}

/// Rows in input order, computed in parallel.
pub(crate) fn par_rows<T: Sync, F: Fn(&T) -> Vec<Record> + Sync + Send>(items: &[T], f: F) -> Vec<Record> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().collect()
}
