use fracslice_core::clifford::{complete_basis, uniform, SlicePoint, UnitImaginary};
use fracslice_core::frac_rl::*;
use fracslice_core::realfrac::WeightFunction;
use fracslice_core::slice_fn::{morera_contour, Disk, SampleRecord, SliceFunction, Smoothness};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{par_rows, random_dirs, random_mv, random_points, rng, smooth_function};
use crate::config::Setup;
use crate::report::Record;

const CAUCHY_NODES: usize = 512;
const SERIES_DEGREES: std::ops::RangeInclusive<usize> = 2..=8;
const RECOVERY_DEGREE: usize = 3;

fn rows(samples: &[SampleRecord], tol: f64) -> impl Iterator<Item = Record> + '_ {
    samples.iter().map(move |s| Record::within(Some(&s.dir), s.u, s.v, s.residual, tol))
}

/// The configured setting and the other weight family: `lambda = 0.4` with
/// exponential weights when the configuration is affine, affine otherwise.
fn families(setup: &Setup) -> Vec<FracSliceConfig> {
    let cfg = &setup.rl;
    let d = setup.domain;
    let lambda = if cfg.lambda() == 0.0 { 0.4 } else { 0.0 };
    let other = FracSliceConfig::new(
        d,
        cfg.alpha(),
        cfg.beta(),
        lambda,
        WeightFunction::ode_normalized(lambda, d.a, d.b).expect("valid interval"),
        WeightFunction::ode_normalized(lambda, 0.0, d.c).expect("valid interval"),
        cfg.cross(),
        *cfg.quad(),
    )
    .expect("normalized weights solve the ODE");
    vec![cfg.clone(), other]
}

/// The constructed member for `variant` plus `perturb * u`.
fn member(setup: &Setup, variant: CornerVariant, cfg: &FracSliceConfig) -> SliceFunction {
    let c0 = random_mv(setup.alg, &mut rng(setup, 20));
    let f = member_construct_variant(c0, variant, cfg);
    let eps = setup.run.perturb;
    if eps == 0.0 {
        return f;
    }
    let alg = setup.alg;
    f.add(&SliceFunction::new(alg, setup.domain, Smoothness::C2, move |u, _, _| alg.scalar(eps * u)))
}

fn disk(cfg: &FracSliceConfig) -> Disk {
    let d = cfg.domain();
    Disk { center: (0.5 * (d.a + d.b), 0.5 * d.c), radius: 0.4 * (d.b - d.a).min(d.c) }
}

pub(super) fn fracprop1(setup: &Setup, tol: f64) -> Vec<Record> {
    let mut rng = rng(setup, 30);
    let (f, _) = smooth_function(setup.alg, setup.domain, &mut rng);
    let mut items = Vec::new();
    for cfg in families(setup) {
        let dirs = random_dirs(setup.alg, setup.run.slices, &mut rng);
        let points = random_points(&cfg.half_bounds(), setup.run.points, 0.05, &mut rng);
        for dir in &dirs {
            for &(u, v) in &points {
                items.push((cfg.clone(), SlicePoint { u, v, dir: *dir }));
            }
        }
    }
    par_rows(&items, |(cfg, p)| {
        CornerVariant::all()
            .iter()
            .map(|variant| {
                let r = fracprop1_residual(&f, *variant, p, cfg).map(|m| m.norm_max()).unwrap_or(f64::INFINITY);
                Record::within(Some(&p.dir), p.u, p.v, r, tol)
            })
            .collect()
    })
}

fn membership_rows(setup: &Setup, variant: CornerVariant, cfg: &FracSliceConfig, tol: f64, salt: u64) -> Vec<Record> {
    let f = member(setup, variant, cfg);
    let dirs = random_dirs(setup.alg, setup.run.slices, &mut rng(setup, salt));
    let (m, h) = rayon::join(
        || is_frac_slice_monogenic(&f, variant, cfg, &setup.grid, &dirs, tol),
        || certify_hmap(&f, variant, cfg, &setup.grid, &dirs, tol),
    );
    rows(&m.records, tol).chain(rows(&h.records, tol)).collect()
}

pub(super) fn fracprop2(setup: &Setup, tol: f64) -> Vec<Record> {
    membership_rows(setup, CornerVariant::A0_LEFT, &setup.rl, tol, 31)
}

pub(super) fn member_kernel(setup: &Setup, tol: f64) -> Vec<Record> {
    let variants = CornerVariant::all();
    variants
        .par_iter()
        .map(|variant| match setup.rl.with_cross(variant.corner(&setup.domain)) {
            Ok(cfg) => membership_rows(setup, *variant, &cfg, tol, 32),
            Err(_) => vec![Record::within(None, f64::NAN, f64::NAN, f64::INFINITY, tol)],
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub(super) fn frac_representation(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    let mut rng = rng(setup, 33);
    let mut items = Vec::new();
    for dir in random_dirs(setup.alg, setup.run.slices, &mut rng) {
        for (u, v) in random_points(&cfg.half_bounds(), setup.run.points, 0.05, &mut rng) {
            items.push((dir, UnitImaginary::random(setup.alg, &mut rng), u, v));
        }
    }
    par_rows(&items, |(dir, dir_x, u, v)| {
        let r = frac_representation_check(&f, *u, *v, dir, dir_x, cfg).unwrap_or(f64::INFINITY);
        vec![Record::within(Some(dir_x), *u, *v, r, tol)]
    })
}

pub(super) fn frac_splitting(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    let dirs = random_dirs(setup.alg, setup.run.slices, &mut rng(setup, 34));
    let items: Vec<(usize, UnitImaginary)> = dirs.into_iter().enumerate().collect();
    par_rows(&items, |(k, dir)| {
        let basis = complete_basis(dir, setup.run.seed);
        let r = frac_splitting_check(&f, &basis, cfg, &setup.grid).unwrap_or(f64::INFINITY);
        vec![Record::within(Some(dir), *k as f64, 0.0, r, tol)]
    })
}

pub(super) fn frac_series(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    let d = disk(cfg);
    let mut rng = rng(setup, 35);
    let dirs = random_dirs(setup.alg, setup.run.slices, &mut rng);
    let c = random_mv(setup.alg, &mut rng);
    let lambda = cfg.lambda();
    par_rows(&dirs, |dir| {
        let mut out = Vec::new();
        for n in SERIES_DEGREES {
            match frac_series_fit(&f, &d, dir, n, cfg) {
                Ok(fit) => {
                    out.push(Record::within(Some(dir), n as f64, 0.0, fit.max_residual, tol));
                    out.push(Record::within(Some(dir), n as f64, 0.0, fit.holdout_max, tol));
                }
                Err(_) => out.push(Record::within(Some(dir), n as f64, 0.0, f64::INFINITY, tol)),
            }
        }
        // the member maps are polynomial, so convergence is shown on exp(z) C
        let reference = |u: f64, v: f64| Ok(dir.embed(Complex64::new(u, v).exp()) * c * (-2.0 * lambda * u).exp());
        let mut previous = f64::INFINITY;
        for n in SERIES_DEGREES {
            let rms = fit_series_map(reference, &d, dir, n, lambda).map(|fit| fit.rms_residual).unwrap_or(f64::INFINITY);
            if n > *SERIES_DEGREES.start() {
                out.push(Record::below(Some(dir), n as f64, 1.0, rms, previous));
            }
            previous = rms;
        }
        out
    })
}

pub(super) fn frac_cauchy(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    let d = disk(cfg);
    let mut rng = rng(setup, 36);
    let mut items = Vec::new();
    for dir in random_dirs(setup.alg, setup.run.slices, &mut rng) {
        for _ in 0..setup.run.grid.0 * setup.run.grid.1 {
            let (rho, t) = (0.7 * d.radius * uniform(&mut rng, 0.0, 1.0).sqrt(), uniform(&mut rng, 0.0, std::f64::consts::TAU));
            items.push(SlicePoint { u: d.center.0 + rho * t.cos(), v: d.center.1 + rho * t.sin(), dir });
        }
    }
    par_rows(&items, |p| {
        let r = frac_cauchy_check(&f, &d, p, cfg, CAUCHY_NODES).unwrap_or(f64::INFINITY);
        vec![Record::within(Some(&p.dir), p.u, p.v, r, tol)]
    })
}

pub(super) fn frac_cauchy_thm(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    let mut rng = rng(setup, 37);
    let bounds = cfg.half_bounds();
    let mut contours = Vec::new();
    for dir in random_dirs(setup.alg, setup.run.slices, &mut rng) {
        for k in 0..setup.run.trials {
            contours.push(morera_contour(&mut rng, k, dir, &bounds));
        }
    }
    par_rows(&contours, |c| {
        let row = c.as_ref().ok().map(|contour| {
            let r = frac_cauchy_theorem_check(&f, contour, cfg).unwrap_or(f64::INFINITY);
            let s = contour.samples();
            let n = s.len() as f64;
            let (u, v) = (s.iter().map(|p| p.0).sum::<f64>() / n, s.iter().map(|p| p.1).sum::<f64>() / n);
            Record::within(Some(contour.dir()), u, v, r, tol)
        });
        vec![row.unwrap_or_else(|| Record::within(None, f64::NAN, f64::NAN, f64::INFINITY, tol))]
    })
}

pub(super) fn frac_morera(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    match frac_morera_check(&f, cfg, setup.run.trials, setup.run.seed, tol) {
        Ok(m) => m.residuals.iter().enumerate().map(|(t, r)| Record::within(None, t as f64, 0.0, *r, tol)).collect(),
        Err(_) => vec![Record::within(None, f64::NAN, 0.0, f64::INFINITY, tol)],
    }
}

fn recovery_residual(f: &SliceFunction, p: &SlicePoint, cfg: &FracSliceConfig) -> f64 {
    frac_series_fit(f, &disk(cfg), &p.dir, RECOVERY_DEGREE, cfg)
        .and_then(|fit| cross_recovery_check(f, p, &fit, cfg))
        .map(|r| r.residual)
        .unwrap_or(f64::INFINITY)
}

pub(super) fn cross_recovery(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.rl;
    let f = member(setup, CornerVariant::A0_LEFT, cfg);
    let mut rng = rng(setup, 38);
    let dirs = random_dirs(setup.alg, setup.run.slices, &mut rng);
    let points = setup.grid.points(&cfg.half_bounds());
    let mut items = Vec::new();
    for dir in &dirs {
        for &(u, v) in &points {
            items.push(SlicePoint { u, v, dir: *dir });
        }
    }
    let mut out = par_rows(&items, |p| vec![Record::within(Some(&p.dir), p.u, p.v, recovery_residual(&f, p, cfg), tol)]);

    // self-convergence: the worst residual over the first slice at q/4, q/2, q
    let q = cfg.quad().order;
    let orders: Vec<usize> = [q / 4, q / 2, q].into_iter().map(|o| o.max(4)).collect();
    let worst: Vec<f64> = orders
        .par_iter()
        .map(|&order| match cfg.with_quad(cfg.quad().with_order(order)) {
            Ok(c) => items[..points.len()].iter().map(|p| recovery_residual(&f, p, &c)).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        })
        .collect();
    for k in 1..orders.len() {
        out.push(Record::below(Some(&dirs[0]), orders[k] as f64, 0.0, worst[k], worst[k - 1]));
    }
    out
}
