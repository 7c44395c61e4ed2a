use std::sync::Arc;

use fracslice_core::clifford::*;
use fracslice_core::frac_caputo::*;
use fracslice_core::frac_rl::*;
use fracslice_core::realfrac::*;
use fracslice_core::slice_fn::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alg() -> Algebra {
    Algebra::new(3).unwrap()
}

fn unit_box() -> AxialBox {
    AxialBox::new(0.0, 1.0, 1.0).unwrap()
}

fn config(lambda: f64, cross: (f64, f64)) -> FracSliceConfig {
    let (g, h) = if lambda == 0.0 {
        (WeightFunction::identity(0.0, 1.0).unwrap(), WeightFunction::identity(0.0, 1.0).unwrap())
    } else {
        (WeightFunction::ode_normalized(lambda, 0.0, 1.0).unwrap(), WeightFunction::ode_normalized(lambda, 0.0, 1.0).unwrap())
    };
    FracSliceConfig::new(
        unit_box(),
        FracOrder::new(0.6).unwrap(),
        FracOrder::new(0.7).unwrap(),
        lambda,
        g,
        h,
        cross,
        QuadratureSpec::default(),
    )
    .unwrap()
}

fn c0() -> Multivector {
    alg().from_coeffs(&[0.3, -1.0, 0.5, 0.25, 2.0, -0.7, 0.1, 1.1]).unwrap()
}

fn dir0() -> UnitImaginary {
    UnitImaginary::normalized(alg(), &[1.0, 2.0, -1.0]).unwrap()
}

struct Generic {
    f: SliceFunction,
    partials: CrossPartials,
}

/// `c1 sin(u + 0.3 v) + I c2 u v^2 + I c3 v e^{-v} cos u` with its partials.
fn generic() -> Generic {
    let (c1, c2, c3) = (c0(), alg().e(2) + alg().scalar(0.5), alg().blade(0b101, 1.5));
    let f = SliceFunction::new(alg(), unit_box(), Smoothness::C2, move |u, v, i| {
        let im = i.to_multivector();
        c1 * (u + 0.3 * v).sin() + im * c2 * (u * v * v) + (im * c3) * (v * (-v).exp() * u.cos())
    });
    let du: SliceEval = Arc::new(move |u, v, i| {
        let im = i.to_multivector();
        c1 * (u + 0.3 * v).cos() + im * c2 * (v * v) - (im * c3) * (v * (-v).exp() * u.sin())
    });
    let dv: SliceEval = Arc::new(move |u, v, i| {
        let im = i.to_multivector();
        c1 * (0.3 * (u + 0.3 * v).cos()) + im * c2 * (2.0 * u * v) + (im * c3) * ((1.0 - v) * (-v).exp() * u.cos())
    });
    Generic { f, partials: CrossPartials::Analytic { du, dv } }
}

/// Constant on both lines through `cross`, so its Caputo corner derivative vanishes.
fn constant_on_cross(cross: (f64, f64)) -> SliceFunction {
    let (c, e) = (c0(), alg().e(3) + alg().scalar(1.0));
    SliceFunction::new(alg(), unit_box(), Smoothness::C2, move |u, v, i| {
        c + (i.to_multivector() * e) * ((u - cross.0) * (v - cross.1) * (u + v).cos())
    })
}

/// Vanishes on both lines through `cross`.
fn vanishing_on_cross(cross: (f64, f64)) -> SliceFunction {
    let c = c0();
    SliceFunction::new(alg(), unit_box(), Smoothness::C2, move |u, v, i| {
        (alg().one() + i.to_multivector() * c) * ((u - cross.0) * (v - cross.1) * (u + v).cos())
    })
}

fn points(n: usize, seed: u64) -> Vec<SlicePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (u, v) = (uniform(&mut rng, 0.05, 0.95), uniform(&mut rng, 0.05, 0.95));
            SlicePoint::new(u, v, UnitImaginary::random(alg(), &mut rng)).unwrap()
        })
        .collect()
}

#[test]
fn constants_have_zero_caputo_derivative() {
    let cfg = config(0.4, (0.4, 0.3));
    let f = SliceFunction::constant(c0(), unit_box());
    let zero: SliceEval = Arc::new(|_, _, _| alg().zero());
    let analytic = CrossPartials::Analytic { du: zero.clone(), dv: zero };
    for variant in CornerVariant::all() {
        for p in points(3, 1) {
            for partials in [&analytic, &CrossPartials::FiniteDifference] {
                let r = caputo_operator(&f, partials, variant, &p, &cfg).unwrap().norm_max();
                assert!(r <= 1e-10, "{variant} {partials:?}: {r}");
            }
        }
    }
}

#[test]
fn uniform_mixed_variants_are_the_pure_operators() {
    let cfg = config(0.4, (0.4, 0.3));
    let g = generic();
    for variant in CornerVariant::all() {
        for p in points(2, 2) {
            let rl = mixed_operator(&g.f, &g.partials, MixedVariant::uniform(Sense::RiemannLiouville, variant), &p, &cfg).unwrap();
            assert_eq!(rl, rl_operator(&g.f, variant, &p, &cfg).unwrap());
            let c = mixed_operator(&g.f, &g.partials, MixedVariant::uniform(Sense::Caputo, variant), &p, &cfg).unwrap();
            assert_eq!(c, caputo_operator(&g.f, &g.partials, variant, &p, &cfg).unwrap());
        }
    }
}

#[test]
fn mixed_operator_term_by_term() {
    let cfg = config(0.4, (0.4, 0.3));
    let g = generic();
    let (r, s) = cfg.cross();
    let Generic { f, partials: CrossPartials::Analytic { dv, .. } } = &g else { unreachable!() };
    let variant = MixedVariant::new((Sense::RiemannLiouville, USide::APlus), (Sense::Caputo, VSide::ZeroPlus), MultSide::Left);
    for p in points(3, 3) {
        let i = p.dir;
        let q = cfg.quad();
        let du = rl_derivative_left(|t| Ok(f.eval(t, s, &i)), 0.0, cfg.alpha(), cfg.g(), p.u, q).unwrap();
        let dv = caputo_derivative_left(|t| Ok(dv(r, t, &i)), 0.0, cfg.beta(), cfg.h(), p.v, q).unwrap();
        let want = du + i.to_multivector() * dv;
        let got = mixed_operator(f, &g.partials, variant, &p, &cfg).unwrap();
        assert!((got - want).norm_max() <= 1e-12 * (1.0 + want.norm_max()), "{}", variant.label());
    }
}

#[test]
fn caputo_and_rl_differ_by_the_endpoint_term() {
    // C D^alpha f = RL D^alpha f - f(a) (g - g(a))^{-alpha} / Gamma(1 - alpha)
    let cfg = config(0.0, (0.4, 0.3));
    let g = generic();
    let s = cfg.cross().1;
    let rl_u = MixedVariant::new((Sense::RiemannLiouville, USide::APlus), (Sense::Caputo, VSide::ZeroPlus), MultSide::Left);
    let c_u = MixedVariant::uniform(Sense::Caputo, CornerVariant::A0_LEFT);
    for p in points(4, 4) {
        let gap = mixed_operator(&g.f, &g.partials, rl_u, &p, &cfg).unwrap() - mixed_operator(&g.f, &g.partials, c_u, &p, &cfg).unwrap();
        let want = g.f.eval(0.0, s, &p.dir) * (p.u.powf(-0.6) / gamma_fn(0.4).unwrap());
        assert!((gap - want).norm_max() <= 1e-6 * (1.0 + want.norm_max()), "{gap:?} {want:?}");
    }
}

#[test]
fn analytic_and_difference_partials_agree() {
    let cfg = config(0.4, (0.4, 0.3));
    let g = generic();
    for variant in CornerVariant::all() {
        for p in points(2, 5) {
            let a = caputo_operator(&g.f, &g.partials, variant, &p, &cfg).unwrap();
            let d = caputo_operator(&g.f, &CrossPartials::FiniteDifference, variant, &p, &cfg).unwrap();
            assert!((a - d).norm_max() <= 1e-6 * (1.0 + a.norm_max()), "{variant}");
        }
    }
}

#[test]
fn caputo_membership_controls() {
    let cfg = config(0.0, (0.4, 0.3));
    let grid = SliceGrid::new(3, 3);
    let dirs = [dir0(), UnitImaginary::basis(alg(), 1)];
    let fd = CrossPartials::FiniteDifference;
    let c = SliceFunction::constant(c0(), unit_box());
    let rep = is_caputo_member(&c, &fd, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-3);
    assert!(rep.pass && rep.fd_partials && !rep.vanishes_on_grid);
    assert!(rep.variant.starts_with("caputo "));
    let pos = constant_on_cross(cfg.cross());
    assert!(is_caputo_member(&pos, &fd, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-3).pass);
    let g = generic();
    let rep = is_caputo_member(&g.f, &g.partials, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-3);
    assert!(!rep.pass && !rep.fd_partials && rep.max_residual > 0.1);
    let zero = SliceFunction::zero(alg(), unit_box());
    let rep = is_caputo_member(&zero, &fd, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-3);
    assert!(rep.pass && rep.vanishes_on_grid && rep.max_residual == 0.0);
    // with the cross at the corner the RL member is a Caputo member too
    let corner = config(0.0, (0.0, 0.0));
    let m = member_construct(c0(), &corner);
    assert!(is_caputo_member(&m, &fd, CornerVariant::A0_LEFT, &corner, &grid, &dirs[..1], 1e-3).pass);
}

#[test]
fn h_operator_examples() {
    for lambda in [0.0, 0.4] {
        let cfg = config(lambda, (0.4, 0.3));
        let p = SlicePoint::new(0.35, 0.8, dir0()).unwrap();
        assert_eq!(h_operator(&SliceFunction::zero(alg(), unit_box()), &p, &cfg).unwrap(), alg().zero());
        let one = SliceFunction::constant(alg().one(), unit_box());
        let want = cfg.g().diff(0.35, 0.0).powf(0.4) / gamma_fn(1.4).unwrap() + cfg.h().diff(0.8, 0.0).powf(0.3) / gamma_fn(1.3).unwrap();
        assert!((h_operator(&one, &p, &cfg).unwrap() - alg().scalar(want)).norm_max() < 1e-10);
        let g = generic();
        let c = c0();
        let lhs = h_operator(&g.f.mul_right(c), &p, &cfg).unwrap();
        let rhs = h_operator(&g.f, &p, &cfg).unwrap() * c;
        assert!((lhs - rhs).norm_max() < 1e-12 * (1.0 + rhs.norm_max()));
    }
}

#[test]
fn h_exchange_identity() {
    let g = generic();
    let zero = SliceFunction::zero(alg(), unit_box());
    let one = SliceFunction::constant(c0(), unit_box());
    for lambda in [0.0, 0.4] {
        let cfg = config(lambda, (0.4, 0.3));
        for p in points(6, 6) {
            let r = caputo_h_identity_residual(&g.f, &p, &cfg).unwrap().norm_max();
            assert!(r <= 1e-2, "lambda {lambda}: {r}");
            let printed = caputo_h_identity_printed_residual(&g.f, &p, &cfg).unwrap().norm_max();
            assert!(printed > 1e-2, "printed form holds off the cross at {p:?}");
        }
        let p = points(1, 7)[0];
        assert!(caputo_h_identity_residual(&one, &p, &cfg).unwrap().norm_max() <= 1e-2);
        assert_eq!(caputo_h_identity_residual(&zero, &p, &cfg).unwrap(), alg().zero());
        // the two forms coincide at the cross point
        let at = SlicePoint::new(0.4, 0.3, dir0()).unwrap();
        let a = caputo_h_identity_residual(&g.f, &at, &cfg).unwrap();
        let b = caputo_h_identity_printed_residual(&g.f, &at, &cfg).unwrap();
        assert!((a - b).norm_max() < 1e-12);
    }
}

#[test]
fn characterization_matches_membership_of_h() {
    let cfg = config(0.0, (0.4, 0.3));
    let grid = SliceGrid::new(2, 2);
    let dirs = [dir0()];
    let fd = CrossPartials::FiniteDifference;
    let p = SlicePoint::new(0.7, 0.6, dir0()).unwrap();

    let pos = vanishing_on_cross(cfg.cross());
    let ch = caputo_characterization_check(&pos, &p, &cfg).unwrap();
    assert!(ch.last <= 1e-8 && ch.second <= 1e-6, "{ch:?}");
    assert!(is_caputo_member(&h_function(&pos, &cfg), &fd, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-2).pass);

    let g = generic();
    let ch = caputo_characterization_check(&g.f, &p, &cfg).unwrap();
    assert!(ch.last > 0.1 && ch.second > 0.1, "{ch:?}");
    assert!(!is_caputo_member(&h_function(&g.f, &cfg), &fd, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-2).pass);

    // a Caputo member that is not zero on the cross fails the last condition
    let c = SliceFunction::constant(c0(), unit_box());
    let ch = caputo_characterization_check(&c, &p, &cfg).unwrap();
    assert!(ch.last > 0.1, "{ch:?}");
    assert!(!is_caputo_member(&h_function(&c, &cfg), &fd, CornerVariant::A0_LEFT, &cfg, &grid, &dirs, 1e-2).pass);
}
