use fracslice_core::clifford::{complete_basis, uniform, SlicePoint, UnitImaginary};
use fracslice_core::slice_fn::*;
use rand_chacha::ChaCha8Rng;

use super::{par_rows, random_dirs, random_mv, random_points, rng, sm_lambda_family, smooth_function};
use crate::config::Setup;
use crate::report::Record;

const EXP_POINTS: usize = 100;
const EXP_SLICES: usize = 8;
const CAUCHY_NODES: usize = 512;
const HOLOMORPHY_TOL: f64 = 1e-6;

fn lambdas(setup: &Setup) -> Vec<f64> {
    let mut out = vec![0.0, 0.4, -0.3];
    if !out.contains(&setup.run.lambda) {
        out.push(setup.run.lambda);
    }
    out
}

/// A cubic of the weighted family plus the configured perturbation
/// `eps (u + v I e_1 I)`, which breaks both the slice equation and the
/// representation formula.
fn family(setup: &Setup, lambda: f64, rng: &mut ChaCha8Rng) -> SliceFunction {
    let alg = setup.alg;
    let coeffs = (0..4).map(|_| random_mv(alg, rng)).collect();
    let f = sm_lambda_family(alg, setup.domain, lambda, coeffs);
    let eps = setup.run.perturb;
    if eps == 0.0 {
        return f;
    }
    let e1 = alg.e(1);
    f.add(&SliceFunction::new(alg, setup.domain, Smoothness::C2, move |u, v, i| {
        let im = i.to_multivector();
        (alg.scalar(u) + im * e1 * im * v) * eps
    }))
}

struct Case {
    f: SliceFunction,
    lambda: f64,
    dir: UnitImaginary,
    u: f64,
    v: f64,
    extra: UnitImaginary,
}

/// `points` samples on each of `slices` random slices per lambda.
fn cases(setup: &Setup, salt: u64, points: usize, slices: usize) -> Vec<Case> {
    let mut rng = rng(setup, salt);
    let bounds = setup.domain.half_bounds();
    let mut out = Vec::new();
    for lambda in lambdas(setup) {
        let f = family(setup, lambda, &mut rng);
        for dir in random_dirs(setup.alg, slices, &mut rng) {
            for (u, v) in random_points(&bounds, points, 0.05, &mut rng) {
                let extra = UnitImaginary::random(setup.alg, &mut rng);
                out.push(Case { f: f.clone(), lambda, dir, u, v, extra });
            }
        }
    }
    out
}

pub(super) fn exp_conjugation(setup: &Setup, tol: f64) -> Vec<Record> {
    let mut rng = rng(setup, 10);
    let (f, _) = smooth_function(setup.alg, setup.domain, &mut rng);
    let fd = setup.rl.quad().fd;
    let mut items = Vec::new();
    for lambda in lambdas(setup) {
        for dir in random_dirs(setup.alg, EXP_SLICES, &mut rng) {
            for (u, v) in random_points(&setup.domain.half_bounds(), EXP_POINTS, 0.05, &mut rng) {
                items.push((lambda, SlicePoint { u, v, dir }));
            }
        }
    }
    par_rows(&items, |(lambda, p)| {
        let r = exp_conjugation_residual(&f, p, *lambda, &fd).map(|m| m.norm_max()).unwrap_or(f64::INFINITY);
        vec![Record::within(Some(&p.dir), p.u, p.v, r, tol)]
    })
}

pub(super) fn representation(setup: &Setup, tol: f64) -> Vec<Record> {
    let cases = cases(setup, 11, setup.run.points, setup.run.slices);
    par_rows(&cases, |c| {
        let want = c.f.eval(c.u, c.v, &c.extra);
        let r = (representation_combine(&c.f, c.u, c.v, &c.dir, &c.extra) - want).norm_max();
        vec![Record::within(Some(&c.extra), c.u, c.v, r, tol)]
    })
}

pub(super) fn splitting(setup: &Setup, tol: f64) -> Vec<Record> {
    let cases = cases(setup, 12, setup.run.points, setup.run.slices);
    let bounds = setup.domain.plane_bounds();
    let fd = setup.rl.quad().fd;
    let seed = setup.run.seed;
    par_rows(&cases, |c| {
        let basis = complete_basis(&c.dir, seed);
        let value = c.f.eval(c.u, c.v, &c.dir);
        let roundtrip = splitting_roundtrip_error(&value, &basis, c.lambda, c.u);
        let holo = splitting_holomorphy_map(c.f.plane_map(c.dir), &basis, c.lambda, &[(c.u, c.v)], &bounds, &fd)
            .unwrap_or(f64::INFINITY);
        vec![
            Record::within(Some(&c.dir), c.u, c.v, roundtrip, tol),
            Record::within(Some(&c.dir), c.u, c.v, holo, HOLOMORPHY_TOL.max(tol)),
        ]
    })
}

fn disk(setup: &Setup) -> Disk {
    let (a, b, c) = (setup.run.a, setup.run.b, setup.run.c);
    Disk { center: (0.5 * (a + b), 0.5 * c), radius: 0.4 * (b - a).min(c) }
}

pub(super) fn cauchy_formula(setup: &Setup, tol: f64) -> Vec<Record> {
    let d = disk(setup);
    let mut cs = cases(setup, 13, setup.run.points, setup.run.slices);
    let mut rng = rng(setup, 14);
    for c in &mut cs {
        let (rho, t) = (0.7 * d.radius * uniform(&mut rng, 0.0, 1.0).sqrt(), uniform(&mut rng, 0.0, std::f64::consts::PI));
        (c.u, c.v) = (d.center.0 + rho * t.cos(), d.center.1 + rho * t.sin());
    }
    par_rows(&cs, |c| {
        let p = SlicePoint { u: c.u, v: c.v, dir: c.dir };
        let r = cauchy_value(&c.f, &d, &p, c.lambda, CAUCHY_NODES)
            .map(|val| (val - c.f.eval_point(&p)).norm_max())
            .unwrap_or(f64::INFINITY);
        vec![Record::within(Some(&c.dir), c.u, c.v, r, tol)]
    })
}

fn centroid(contour: &Contour) -> (f64, f64) {
    let s = contour.samples();
    let n = s.len().max(1) as f64;
    (s.iter().map(|p| p.0).sum::<f64>() / n, s.iter().map(|p| p.1).sum::<f64>() / n)
}

pub(super) fn cauchy_theorem(setup: &Setup, tol: f64) -> Vec<Record> {
    let mut rng = rng(setup, 15);
    let bounds = setup.domain.plane_bounds();
    let mut items = Vec::new();
    for lambda in lambdas(setup) {
        let f = family(setup, lambda, &mut rng);
        for dir in random_dirs(setup.alg, setup.run.slices, &mut rng) {
            for k in 0..setup.run.trials {
                match morera_contour(&mut rng, k, dir, &bounds) {
                    Ok(contour) => items.push(Some((f.clone(), lambda, contour))),
                    Err(_) => items.push(None),
                }
            }
        }
    }
    let alg = setup.alg;
    par_rows(&items, |item| {
        let Some((f, lambda, contour)) = item else {
            return vec![Record::within(None, f64::NAN, f64::NAN, f64::INFINITY, tol)];
        };
        let weight = |u: f64, _v: f64| alg.scalar((2.0 * lambda * u).exp());
        let r = contour_integral(weight, contour, f).map(|m| m.norm_max()).unwrap_or(f64::INFINITY);
        let (u, v) = centroid(contour);
        vec![Record::within(Some(contour.dir()), u, v, r, tol)]
    })
}

pub(super) fn morera(setup: &Setup, tol: f64) -> Vec<Record> {
    let mut rng = rng(setup, 16);
    let mut out = Vec::new();
    for (k, lambda) in lambdas(setup).into_iter().enumerate() {
        let f = family(setup, lambda, &mut rng);
        match morera_classify(&f, lambda, setup.run.trials, setup.run.seed.wrapping_add(k as u64), tol) {
            Ok(m) => out.extend(m.residuals.iter().enumerate().map(|(t, r)| Record::within(None, t as f64, 0.0, *r, tol))),
            Err(_) => out.push(Record::within(None, f64::NAN, 0.0, f64::INFINITY, tol)),
        }
    }
    out
}
