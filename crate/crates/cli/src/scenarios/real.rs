use fracslice_core::clifford::Algebra;
use fracslice_core::realfrac::*;
use rayon::prelude::*;

use super::{random_mv, rng};
use crate::config::Setup;
use crate::report::Record;

const ORDERS: [f64; 3] = [0.25, 0.5, 0.75];

pub(super) fn clifford_axioms(setup: &Setup, tol: f64) -> Vec<Record> {
    let mut dims = vec![2, 3, 4];
    if !dims.contains(&setup.run.n) {
        dims.push(setup.run.n);
    }
    let mut out = Vec::new();
    let mut rng = rng(setup, 1);
    for n in dims {
        let alg = Algebra::new(n).expect("validated dimension");
        for i in 1..=n {
            for j in 1..=n {
                let want = if i == j { alg.scalar(-2.0) } else { alg.zero() };
                let r = (alg.e(i) * alg.e(j) + alg.e(j) * alg.e(i) - want).norm_max();
                out.push(Record::within(None, n as f64, ((i - 1) * n + j - 1) as f64, r, tol));
            }
        }
        for k in 0..1000 {
            let (x, y, z) = (random_mv(alg, &mut rng), random_mv(alg, &mut rng), random_mv(alg, &mut rng));
            let r = ((x * y) * z - x * (y * z)).norm_max();
            out.push(Record::within(None, n as f64, k as f64, r, tol));
        }
    }
    out
}

/// The configured `g` on `[a, b]` and the other family.
fn weight_families(setup: &Setup) -> Vec<WeightFunction> {
    let g = setup.rl.g().clone();
    let (a, b) = (setup.run.a, setup.run.b);
    let other = match g.lambda() {
        Some(l) if l != 0.0 => WeightFunction::identity(a, b),
        _ => WeightFunction::ode_normalized(0.4, a, b),
    }
    .expect("valid on the validated interval");
    vec![g, other]
}

fn x_grid(setup: &Setup) -> Vec<f64> {
    let (a, b) = (setup.run.a, setup.run.b);
    (0..21).map(|k| a + (b - a) * (0.05 + 0.9 * k as f64 / 20.0)).collect()
}

pub(super) fn power_law(setup: &Setup, tol: f64) -> Vec<Record> {
    let quad = *setup.rl.quad();
    let a = setup.run.a;
    let xs = x_grid(setup);
    let mut cases = Vec::new();
    for g in weight_families(setup) {
        for sigma in [0.0, 0.5, 1.0, 2.0] {
            for alpha in ORDERS {
                cases.push((g.clone(), sigma, alpha));
            }
        }
    }
    cases
        .par_iter()
        .flat_map_iter(|(g, sigma, alpha)| {
            let k = FracKernel::new(*alpha, &quad);
            xs.iter()
                .map(|&x| {
                    let r = k.as_ref().map_err(|e| e.clone()).and_then(|k| {
                        let got = k.left(|t| Ok(g.diff(t, a).powf(*sigma)), a, g, x)?;
                        let want = power_rule_left(*sigma, *alpha, g, a, x)?;
                        Ok(((got - want) / want).abs())
                    });
                    Record::within(None, x, *alpha, r.unwrap_or(f64::INFINITY), tol)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `sum_j c_j d^{s_j}` in `d = g - g(a)` with exact images under the power
/// rule.
struct PowerSeries([(f64, f64); 4]);

const SERIES: PowerSeries = PowerSeries([(1.0, 0.0), (2.0, 1.0), (-1.5, 2.0), (0.7, 3.0)]);

impl PowerSeries {
    fn eval(&self, d: f64) -> f64 {
        self.0.iter().map(|(c, s)| c * d.powf(*s)).sum()
    }

    /// Image under `D^alpha`.
    fn derivative(&self, alpha: f64, d: f64) -> f64 {
        self.0
            .iter()
            .map(|(c, s)| {
                let denom = s - alpha + 1.0;
                c * gamma_fn(s + 1.0).unwrap() / gamma_fn(denom).unwrap() * d.powf(s - alpha)
            })
            .sum()
    }
}

fn smooth(t: f64) -> f64 {
    (3.0 * t).cos() + t * t
}

fn per_order<F>(setup: &Setup, tol: f64, residual: F) -> Vec<Record>
where
    F: Fn(&WeightFunction, f64, &FracKernel, &FracKernel, f64) -> fracslice_core::Result<f64> + Sync,
{
    let quad = *setup.rl.quad();
    let xs = x_grid(setup);
    let mut cases = Vec::new();
    for g in weight_families(setup) {
        for alpha in ORDERS {
            cases.push((g.clone(), alpha));
        }
    }
    cases
        .par_iter()
        .flat_map_iter(|(g, alpha)| {
            let kernels = FracKernel::new(*alpha, &quad).and_then(|i| Ok((i, FracKernel::new(1.0 - alpha, &quad)?)));
            xs.iter()
                .map(|&x| {
                    let r = match &kernels {
                        Ok((int, der)) => residual(g, *alpha, int, der, x).unwrap_or(f64::INFINITY),
                        Err(_) => f64::INFINITY,
                    };
                    Record::within(None, x, *alpha, r, tol)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub(super) fn fund_theorem(setup: &Setup, tol: f64) -> Vec<Record> {
    let (a, b) = (setup.run.a, setup.run.b);
    let fd = setup.rl.quad().fd;
    per_order(setup, tol, |g, _alpha, int, der, x| {
        let lf = |t: f64| int.left(|s| Ok(SERIES.eval(g.diff(s, a))), a, g, t);
        let mut worst = (der.rl_left(lf, a, g, x, &fd)?.value - SERIES.eval(g.diff(x, a))).abs();
        let rf = |t: f64| int.right(|s| Ok(SERIES.eval(g.diff(b, s))), b, g, t);
        worst = worst.max((der.rl_right(rf, b, g, x, &fd)?.value - SERIES.eval(g.diff(b, x))).abs());
        let sl = |t: f64| int.left(|s| Ok(smooth(s)), a, g, t);
        worst = worst.max((der.rl_left(sl, a, g, x, &fd)?.value - smooth(x)).abs());
        let sr = |t: f64| int.right(|s| Ok(smooth(s)), b, g, t);
        worst = worst.max((der.rl_right(sr, b, g, x, &fd)?.value - smooth(x)).abs());
        Ok(worst)
    })
}

pub(super) fn rl_caputo_bridge(setup: &Setup, tol: f64) -> Vec<Record> {
    // F = I^{1-alpha} p has the exact derivative g' D^alpha p, so the Caputo
    // side needs no finite differences
    let (a, b) = (setup.run.a, setup.run.b);
    let quad = *setup.rl.quad();
    per_order(setup, tol, |g, alpha, _int, der, x| {
        let order = FracOrder::new(alpha)?;
        let fprime = |t: f64| Ok(g.deriv(t) * SERIES.derivative(alpha, g.diff(t, a)));
        let lhs = caputo_derivative_left(fprime, a, order, g, x, &quad)?;
        let rl = |t: f64| der.rl_left(|s| Ok(SERIES.eval(g.diff(s, a))), a, g, t, &quad.fd).map(|e| e.value);
        let mut worst = (lhs - der.left(rl, a, g, x)?).abs();
        let fprime = |t: f64| Ok(-g.deriv(t) * SERIES.derivative(alpha, g.diff(b, t)));
        let lhs = caputo_derivative_right(fprime, b, order, g, x, &quad)?;
        let rl = |t: f64| der.rl_right(|s| Ok(SERIES.eval(g.diff(b, s))), b, g, t, &quad.fd).map(|e| e.value);
        worst = worst.max((lhs - der.right(rl, b, g, x)?).abs());
        Ok(worst)
    })
}
