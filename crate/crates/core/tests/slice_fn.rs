use fracslice_core::clifford::*;
use fracslice_core::realfrac::FdPolicy;
use fracslice_core::slice_fn::*;
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alg() -> Algebra {
    Algebra::new(3).unwrap()
}

fn domain() -> AxialBox {
    AxialBox::new(-0.5, 1.0, 1.2).unwrap()
}

fn constant() -> Multivector {
    alg().from_coeffs(&[0.3, -1.0, 0.5, 0.25, 2.0, -0.7, 0.1, 1.1]).unwrap()
}

/// `exp(-2 lambda u) sum_k (u + I v)^k A_k` with Clifford coefficients on the
/// right.
fn member(lambda: f64, coeffs: Vec<Multivector>) -> SliceFunction {
    SliceFunction::new(alg(), domain(), Smoothness::C2, move |u, v, i| {
        let z = Complex64::new(u, v);
        let mut zk = Complex64::new(1.0, 0.0);
        let mut acc = alg().zero();
        for a in &coeffs {
            acc += i.embed(zk) * *a;
            zk *= z;
        }
        acc * (-2.0 * lambda * u).exp()
    })
}

fn sample_poly() -> Vec<Multivector> {
    vec![constant(), alg().e(1) - alg().scalar(0.3), alg().blade(0b110, 0.8), alg().scalar(0.2)]
}

fn random_dirs(n: usize, seed: u64) -> Vec<UnitImaginary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| UnitImaginary::random(alg(), &mut rng)).collect()
}

#[test]
fn cr_residual_examples() {
    let fd = FdPolicy::default();
    let i = UnitImaginary::normalized(alg(), &[1.0, 2.0, -1.0]).unwrap();
    let p = SlicePoint::new(0.3, 0.4, i).unwrap();
    let monomial = SliceFunction::new(alg(), domain(), Smoothness::C2, |u, v, i| i.embed(Complex64::new(u, v)));
    assert!(cr_residual(&monomial, &p, 0.0, &fd).unwrap().norm_max() < 1e-12);
    for lambda in [0.4, -0.3] {
        let c = constant();
        let good = SliceFunction::new(alg(), domain(), Smoothness::C2, move |u, _, _| c * (-2.0 * lambda * u).exp());
        assert!(cr_residual(&good, &p, lambda, &fd).unwrap().norm_max() < 1e-10);
        // with exponent -lambda u the residual is (lambda / 2) f
        let half = SliceFunction::new(alg(), domain(), Smoothness::C2, move |u, _, _| c * (-lambda * u).exp());
        let r = cr_residual(&half, &p, lambda, &fd).unwrap();
        assert!((r - half.eval_point(&p) * (lambda / 2.0)).norm_max() < 1e-10);
    }
    let u_fn = SliceFunction::new(alg(), domain(), Smoothness::C2, |u, _, _| alg().scalar(u));
    let r = cr_residual(&u_fn, &p, 1.0, &fd).unwrap();
    assert!((r - alg().scalar(0.5 + 0.3)).norm_max() < 1e-12);
}

fn smooth_generic() -> SliceFunction {
    let (c1, c2, c3) = (constant(), alg().e(2) + alg().scalar(0.5), alg().blade(0b101, 1.5));
    SliceFunction::new(alg(), domain(), Smoothness::C2, move |u, v, i| {
        let im = i.to_multivector();
        c1 * (u + 0.3 * v).sin() + im * c2 * (u * v * v) + (im * c3) * (v * (-v).exp() * u.cos())
    })
}

#[test]
fn exp_conjugation_identity() {
    let fd = FdPolicy::default();
    let f = smooth_generic();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for lambda in [0.0, 0.4, -0.3] {
        let mut worst = 0.0f64;
        for i in random_dirs(8, 17) {
            for _ in 0..100 {
                let p = SlicePoint::new(uniform(&mut rng, -0.4, 0.9), uniform(&mut rng, 0.0, 1.1), i).unwrap();
                worst = worst.max(exp_conjugation_residual(&f, &p, lambda, &fd).unwrap().norm_max());
            }
        }
        assert!(worst < 1e-6, "lambda={lambda}: {worst:e}");
    }
    let zero = SliceFunction::zero(alg(), domain());
    let p = SlicePoint::new(0.2, 0.2, UnitImaginary::basis(alg(), 1)).unwrap();
    assert_eq!(exp_conjugation_residual(&zero, &p, 0.4, &fd).unwrap().norm_max(), 0.0);
}

#[test]
fn representation_formula_on_members() {
    let f = member(0.4, sample_poly());
    let ix = UnitImaginary::normalized(alg(), &[0.2, -0.9, 0.4]).unwrap();
    for (u, v) in [(0.1, 0.3), (0.8, 1.0), (-0.3, 0.05)] {
        let want = f.eval(u, v, &ix);
        assert!((representation_combine(&f, u, v, &ix, &ix) - want).norm_max() < 1e-14);
        let outs: Vec<Multivector> = random_dirs(8, 2).iter().map(|i| representation_combine(&f, u, v, i, &ix)).collect();
        let spread = outs.iter().map(|o| (*o - want).norm_max()).fold(0.0, f64::max);
        assert!(spread < 1e-8, "spread {spread:e}");
    }
    let g = smooth_generic();
    let i = UnitImaginary::basis(alg(), 2);
    assert!((representation_combine(&g, 0.4, 0.0, &i, &ix) - g.eval(0.4, 0.0, &i)).norm_max() < 1e-14);
}

#[test]
fn splitting_checks() {
    let fd = FdPolicy::default();
    let grid = SliceGrid::new(6, 6);
    for (k, i) in random_dirs(3, 9).into_iter().enumerate() {
        let basis = complete_basis(&i, k as u64);
        for lambda in [0.0, 0.4] {
            let f = member(lambda, vec![alg().zero(), alg().one()]);
            assert!(splitting_holomorphy_check(&f, &basis, lambda, &grid, &fd).unwrap() < 1e-6);
            let g = member(lambda, sample_poly());
            assert!(splitting_holomorphy_check(&g, &basis, lambda, &grid, &fd).unwrap() < 1e-6);
            for (u, v) in grid.points(&domain().plane_bounds()) {
                assert!(splitting_roundtrip_error(&g.eval_signed(u, v, &i), &basis, lambda, u) < 1e-10);
            }
        }
        let c = SliceFunction::constant(constant(), domain());
        assert!(splitting_holomorphy_check(&c, &basis, 0.0, &grid, &fd).unwrap() < 1e-12);
        let conj = SliceFunction::new(alg(), domain(), Smoothness::C2, |u, v, i| i.embed(Complex64::new(u, -v)));
        let r = splitting_holomorphy_check(&conj, &basis, 0.0, &grid, &fd).unwrap();
        assert!((r - 1.0).abs() < 1e-8, "{r}");
    }
}

#[test]
fn cauchy_theorem_and_contour_algebra() {
    let i = UnitImaginary::normalized(alg(), &[0.0, 1.0, 1.0]).unwrap();
    let circle = Contour::circle((0.3, 0.2), 0.5, 512, i).unwrap();
    let one = |_: f64, _: f64| alg().one();
    for lambda in [0.0, 0.4, -0.3] {
        let f = member(lambda, sample_poly());
        let w = |u: f64, _: f64| alg().scalar((2.0 * lambda * u).exp());
        assert!(contour_integral(w, &circle, &f).unwrap().norm_max() < 1e-8);
        let rect = Contour::rectangle((-0.2, -0.5), (0.7, 0.9), 24, i).unwrap();
        assert!(contour_integral(w, &rect, &f).unwrap().norm_max() < 1e-8);
    }
    let zero = SliceFunction::zero(alg(), domain());
    assert_eq!(contour_integral(one, &circle, &zero).unwrap().norm_max(), 0.0);
    // additivity and orientation on an open arc
    let g = smooth_generic();
    let s1 = Contour::segment((0.0, 0.1), (0.5, 0.6), 12, i).unwrap();
    let s2 = Contour::segment((0.5, 0.6), (0.9, 0.2), 12, i).unwrap();
    let whole = contour_integral(one, &s1.concat(&s2).unwrap(), &g).unwrap();
    let parts = contour_integral(one, &s1, &g).unwrap() + contour_integral(one, &s2, &g).unwrap();
    assert!((whole - parts).norm_max() < 1e-10);
    let back = contour_integral(one, &s1.reversed(), &g).unwrap();
    assert!((back + contour_integral(one, &s1, &g).unwrap()).norm_max() < 1e-10);
    assert!(Contour::polyline(&[(0.0, 0.0), (1.0, 0.0)], false, i).is_err());
}

#[test]
fn polyline_matches_exact_line_integral() {
    // int_Gamma dsigma z over a closed triangle vanishes; int (u - I v) gives -2 I * area * (-I)
    let i = UnitImaginary::basis(alg(), 1);
    let tri = Contour::polyline(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], true, i).unwrap();
    assert!(tri.is_closed());
    let z = SliceFunction::new(alg(), domain(), Smoothness::C2, |u, v, i| i.embed(Complex64::new(u, v)));
    let one = |_: f64, _: f64| alg().one();
    assert!(contour_integral(one, &tri, &z).unwrap().norm_max() < 1e-14);
    let zbar = SliceFunction::new(alg(), domain(), Smoothness::C2, |u, v, i| i.embed(Complex64::new(u, -v)));
    // complex oracle: closed integral of conj(z) dz = 2 i area, times -i
    let r = contour_integral(one, &tri, &zbar).unwrap();
    assert!((r - alg().scalar(1.0)).norm_max() < 1e-14, "{r:?}");
}

#[test]
fn cauchy_values() {
    let i = UnitImaginary::normalized(alg(), &[1.0, -1.0, 0.5]).unwrap();
    let disk = Disk { center: (0.25, 0.1), radius: 0.6 };
    let c = SliceFunction::constant(constant(), domain());
    let centre = SlicePoint::new(0.25, 0.1, i).unwrap();
    assert!((cauchy_value(&c, &disk, &centre, 0.0, 512).unwrap() - constant()).norm_max() < 1e-10);

    let lambda = 0.3;
    let e = member(lambda, vec![constant()]);
    let z = SlicePoint::new(0.4, 0.3, i).unwrap();
    let want = constant() * (-2.0 * lambda * 0.4f64).exp();
    assert!((cauchy_value(&e, &disk, &z, lambda, 512).unwrap() - want).norm_max() < 1e-6);

    let sq = member(0.0, vec![alg().zero(), alg().zero(), alg().one()]);
    // independent complex oracle on C_I
    let zc = Complex64::new(0.4, 0.3);
    let n = 512;
    let mut oracle = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let w = Complex64::new(0.25, 0.1) + Complex64::from_polar(0.6, t);
        let dw = Complex64::i() * Complex64::from_polar(0.6, t) * (2.0 * std::f64::consts::PI / n as f64);
        oracle += w * w / (w - zc) * dw;
    }
    oracle /= Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    assert!((oracle - zc * zc).norm() < 1e-12);
    let got = cauchy_value(&sq, &disk, &z, 0.0, 512).unwrap();
    assert!((got - i.embed(oracle)).norm_max() < 1e-6);
    let edge = SlicePoint::new(0.85, 0.1, i).unwrap();
    assert!(cauchy_value(&sq, &disk, &edge, 0.0, 512).is_err());
}

#[test]
fn morera_surrogate() {
    let member_fn = member(0.4, sample_poly());
    let out = morera_classify(&member_fn, 0.4, 6, 1, 1e-8).unwrap();
    assert!(out.pass, "{:?}", out.residuals);
    let conj = SliceFunction::new(alg(), domain(), Smoothness::C2, |u, v, i| i.embed(Complex64::new(u, -v)));
    let out = morera_classify(&conj, 0.0, 6, 1, 1e-8).unwrap();
    assert!(!out.pass && out.worst > 0.01);
    let zero = SliceFunction::zero(alg(), domain());
    let out = morera_classify(&zero, 0.0, 4, 1, 1e-8).unwrap();
    assert!(out.pass && out.worst == 0.0);
}

#[test]
fn certification_on_grid() {
    let fd = FdPolicy::default();
    let dirs = random_dirs(4, 3);
    let f = member(-0.3, sample_poly());
    assert!(certify_sm_lambda(&f, -0.3, &SliceGrid::new(5, 5), &dirs, &fd, 1e-8).pass);
    assert!(!certify_sm_lambda(&f, 0.3, &SliceGrid::new(5, 5), &dirs, &fd, 1e-8).pass);
}
