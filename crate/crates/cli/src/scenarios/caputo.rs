use std::sync::Arc;

use fracslice_core::clifford::{Multivector, SlicePoint, UnitImaginary};
use fracslice_core::frac_caputo::*;
use fracslice_core::frac_rl::{rl_operator, CornerVariant, FracSliceConfig, USide, VSide};
use fracslice_core::realfrac::*;
use fracslice_core::slice_fn::{SliceEval, SliceFunction, Smoothness};
use fracslice_core::Result;

use super::{par_rows, random_dirs, random_mv, random_points, rng, smooth_function};
use crate::config::Setup;
use crate::report::Record;

/// `C + (u - r)(v - s) cos(u + v) I E + perturb * u` with its partials.
fn constant_on_cross(setup: &Setup, c: Multivector, e: Multivector) -> (SliceFunction, CrossPartials) {
    let (r, s) = setup.caputo.cross();
    let eps = setup.run.perturb;
    let f = SliceFunction::new(setup.alg, setup.domain, Smoothness::C2, move |u, v, i| {
        c + i.to_multivector() * e * ((u - r) * (v - s) * (u + v).cos()) + c.algebra().scalar(eps * u)
    });
    let du: SliceEval = Arc::new(move |u, v, i| {
        i.to_multivector() * e * ((v - s) * ((u + v).cos() - (u - r) * (u + v).sin())) + c.algebra().scalar(eps)
    });
    let dv: SliceEval = Arc::new(move |u, v, i| i.to_multivector() * e * ((u - r) * ((u + v).cos() - (v - s) * (u + v).sin())));
    (f, CrossPartials::Analytic { du, dv })
}

pub(super) fn caputo_kernel(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.caputo;
    let mut rng = rng(setup, 40);
    let (c, e) = (random_mv(setup.alg, &mut rng), random_mv(setup.alg, &mut rng));
    let constant = constant_on_cross(setup, c, setup.alg.zero());
    let on_cross = constant_on_cross(setup, c, e);
    let dirs = random_dirs(setup.alg, setup.run.slices, &mut rng);
    let points = setup.grid.points(&cfg.half_bounds());
    let mut items = Vec::new();
    for dir in &dirs {
        for &(u, v) in &points {
            items.push(SlicePoint { u, v, dir: *dir });
        }
    }
    let fd = CrossPartials::FiniteDifference;
    par_rows(&items, |p| {
        let mut out = Vec::new();
        for variant in CornerVariant::all() {
            for (f, partials) in [(&constant.0, &constant.1), (&constant.0, &fd), (&on_cross.0, &on_cross.1), (&on_cross.0, &fd)] {
                let r = caputo_operator(f, partials, variant, p, cfg).map(|m| m.norm_max()).unwrap_or(f64::INFINITY);
                out.push(Record::within(Some(&p.dir), p.u, p.v, r, tol));
            }
        }
        out
    })
}

/// The Caputo setting and the same setting with the other weight family.
fn caputo_families(setup: &Setup) -> Vec<FracSliceConfig> {
    let cfg = &setup.caputo;
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

fn point_items(setup: &Setup, salt: u64, cfgs: &[FracSliceConfig]) -> Vec<(FracSliceConfig, SlicePoint)> {
    let mut rng = rng(setup, salt);
    let mut items = Vec::new();
    for cfg in cfgs {
        for (u, v) in random_points(&cfg.half_bounds(), setup.run.caputo_points, 0.05, &mut rng) {
            items.push((cfg.clone(), SlicePoint { u, v, dir: UnitImaginary::random(setup.alg, &mut rng) }));
        }
    }
    items
}

pub(super) fn caputo_h_identity(setup: &Setup, tol: f64) -> Vec<Record> {
    let (f, _) = smooth_function(setup.alg, setup.domain, &mut rng(setup, 41));
    let items = point_items(setup, 42, &caputo_families(setup));
    par_rows(&items, |(cfg, p)| {
        let r = caputo_h_identity_residual(&f, p, cfg).map(|m| m.norm_max()).unwrap_or(f64::INFINITY);
        vec![Record::within(Some(&p.dir), p.u, p.v, r, tol)]
    })
}

pub(super) fn caputo_characterization(setup: &Setup, tol: f64) -> Vec<Record> {
    // positive control: vanishes on both cross lines; the perturbation adds a
    // constant, which does not
    let cfg = &setup.caputo;
    let (r, s) = cfg.cross();
    let mut rng = rng(setup, 43);
    let (c, k) = (random_mv(setup.alg, &mut rng), random_mv(setup.alg, &mut rng));
    let eps = setup.run.perturb;
    let alg = setup.alg;
    let f = SliceFunction::new(alg, setup.domain, Smoothness::C2, move |u, v, i| {
        (alg.one() + i.to_multivector() * c) * ((u - r) * (v - s) * (u + v).cos()) + k * eps
    });
    let hf = h_function(&f, cfg);
    let dirs = random_dirs(alg, setup.run.slices, &mut rng);
    let points = setup.grid.points(&cfg.half_bounds());
    par_rows(&dirs, |dir| {
        let mut out: Vec<Record> = points
            .iter()
            .map(|&(u, v)| {
                let res = caputo_characterization_check(&f, &SlicePoint { u, v, dir: *dir }, cfg).map(|ch| ch.last);
                Record::within(Some(dir), u, v, res.unwrap_or(f64::INFINITY), tol)
            })
            .collect();
        let m = is_caputo_member(&hf, &CrossPartials::FiniteDifference, CornerVariant::A0_LEFT, cfg, &setup.grid, &[*dir], tol);
        out.extend(m.records.iter().map(|x| Record::within(Some(&x.dir), x.u, x.v, x.residual, tol)));
        out
    })
}

/// One term of a mixed operator straight from the real-line operators.
fn oracle(f: &SliceFunction, partials: &CrossPartials, variant: MixedVariant, p: &SlicePoint, cfg: &FracSliceConfig) -> Result<Multivector> {
    let CrossPartials::Analytic { du, dv } = partials else {
        unreachable!("the oracle needs closed-form partials")
    };
    let (r, s) = cfg.cross();
    let d = cfg.domain();
    let (q, i) = (cfg.quad(), p.dir);
    let line_u = |t: f64| Ok(f.eval(t, s, &i));
    let line_v = |t: f64| Ok(f.eval(r, t, &i));
    let du_line = |t: f64| Ok(du(t, s, &i));
    let dv_line = |t: f64| Ok(dv(r, t, &i));
    let (g, h, alpha, beta) = (cfg.g(), cfg.h(), cfg.alpha(), cfg.beta());
    let uterm = match variant.u {
        (Sense::RiemannLiouville, USide::APlus) => rl_derivative_left(line_u, d.a, alpha, g, p.u, q)?,
        (Sense::RiemannLiouville, USide::BMinus) => rl_derivative_right(line_u, d.b, alpha, g, p.u, q)?,
        (Sense::Caputo, USide::APlus) => caputo_derivative_left(du_line, d.a, alpha, g, p.u, q)?,
        (Sense::Caputo, USide::BMinus) => caputo_derivative_right(du_line, d.b, alpha, g, p.u, q)?,
    };
    let vterm = match variant.v {
        (Sense::RiemannLiouville, VSide::ZeroPlus) => rl_derivative_left(line_v, 0.0, beta, h, p.v, q)?,
        (Sense::RiemannLiouville, VSide::CMinus) => rl_derivative_right(line_v, d.c, beta, h, p.v, q)?,
        (Sense::Caputo, VSide::ZeroPlus) => caputo_derivative_left(dv_line, 0.0, beta, h, p.v, q)?,
        (Sense::Caputo, VSide::CMinus) => caputo_derivative_right(dv_line, d.c, beta, h, p.v, q)?,
    };
    Ok(variant.mult_side.combine(uterm, vterm, &i))
}

pub(super) fn mixed_operators(setup: &Setup, tol: f64) -> Vec<Record> {
    let cfg = &setup.caputo;
    let (f, partials) = smooth_function(setup.alg, setup.domain, &mut rng(setup, 44));
    let items = point_items(setup, 45, std::slice::from_ref(cfg));
    let senses = [Sense::RiemannLiouville, Sense::Caputo];
    par_rows(&items, |(cfg, p)| {
        let mut out = Vec::new();
        let rel = |a: Result<Multivector>, b: Result<Multivector>| match (a, b) {
            (Ok(a), Ok(b)) => (a - b).norm_max() / (1.0 + b.norm_max()),
            _ => f64::INFINITY,
        };
        for corner in CornerVariant::all() {
            let r = rel(
                mixed_operator(&f, &partials, MixedVariant::uniform(Sense::RiemannLiouville, corner), p, cfg),
                rl_operator(&f, corner, p, cfg),
            );
            out.push(Record::within(Some(&p.dir), p.u, p.v, r, tol));
            let r = rel(
                mixed_operator(&f, &partials, MixedVariant::uniform(Sense::Caputo, corner), p, cfg),
                caputo_operator(&f, &partials, corner, p, cfg),
            );
            out.push(Record::within(Some(&p.dir), p.u, p.v, r, tol));
            for su in senses {
                for sv in senses {
                    let variant = MixedVariant::new((su, corner.u_side), (sv, corner.v_side), corner.mult_side);
                    let r = rel(mixed_operator(&f, &partials, variant, p, cfg), oracle(&f, &partials, variant, p, cfg));
                    out.push(Record::within(Some(&p.dir), p.u, p.v, r, tol));
                }
            }
        }
        out
    })
}
