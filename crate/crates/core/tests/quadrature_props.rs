mod common;

use bloch_core::quadrature::{bergman_norm, bergman_norm_estimate, circle_mean, hardy_stein_rhs, sigma_expectation};
use bloch_core::special::beta;
use bloch_core::{AnalyticFunction, QuadratureScheme};
use common::{c, polynomial};
use proptest::prelude::*;

fn tight() -> QuadratureScheme {
    QuadratureScheme {
        rel_tol: 1e-13,
        ..QuadratureScheme::default()
    }
}

/// Central difference of `r ↦ M_p(r, f)^p`.
fn mean_power_slope(f: &AnalyticFunction, p: f64, r: f64, h: f64) -> f64 {
    let s = tight();
    let m = |r: f64| circle_mean(f, p, r, &s).unwrap().powf(p);
    (m(r + h) - m(r - h)) / (2.0 * h)
}

#[test]
fn monomial_norms_match_beta() {
    let s = QuadratureScheme::default();
    for n in 0..=8u32 {
        for p in [1.0, 2.0, 6.25, 8.0] {
            for alpha in [-0.5, 0.0, 1.0, 2.5] {
                let f = AnalyticFunction::monomial(n, c(1.0, 0.0)).unwrap();
                let got = bergman_norm(&f, p, alpha, &s).unwrap().value;
                let want = ((alpha + 1.0) * beta(n as f64 * p / 2.0 + 1.0, alpha + 1.0).unwrap()).powf(1.0 / p);
                assert!((got - want).abs() <= 1e-10 * want, "n={n} p={p} alpha={alpha}: {got} vs {want}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mean_derivative_inequality(f in polynomial(6), p in 1.0f64..6.0) {
        // A zero of f next to the circle can stall the angular rule; such draws are discarded.
        let s = QuadratureScheme { rel_tol: 1e-11, max_refinements: 8, ..QuadratureScheme::default() };
        for r in [0.2, 0.5, 0.8] {
            let means = [r - 1e-4, r + 1e-4, r].map(|t| circle_mean(&f, p, t, &s));
            let md = circle_mean(&f.derivative(), p, r, &s);
            prop_assume!(means.iter().all(Result::is_ok) && md.is_ok());
            let [lo, hi, m] = means.map(Result::unwrap);
            let slope = (hi.powf(p) - lo.powf(p)) / 2e-4;
            let rhs = p * m.powf(p - 1.0) * md.unwrap();
            prop_assert!(slope <= rhs + 1e-6 * rhs.max(1.0), "r={r}: {slope} vs {rhs}");
        }
    }

    #[test]
    fn hardy_stein_identity(tail in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6), p in prop::sample::select(vec![2.0, 3.0, 4.0]), r in 0.2f64..0.85) {
        // 1 + Σ a_k z^k with Σ|a_k| ≤ 0.8 has no zeros in the closed disk
        let raw: Vec<_> = tail.iter().map(|&(x, y)| c(x, y)).collect();
        let total: f64 = raw.iter().map(|a| a.norm()).sum();
        let mut v = vec![c(1.0, 0.0)];
        v.extend(raw.iter().map(|a| a * (0.8 / total.max(0.8))));
        let f = AnalyticFunction::taylor(v).unwrap();
        let hs = hardy_stein_rhs(&f, p, r, &tight()).unwrap();
        let fd = mean_power_slope(&f, p, r, 1e-3);
        prop_assert!((fd - hs.value).abs() <= 1e-5 * hs.value.max(1.0), "{fd} vs {}", hs.value);
    }

    #[test]
    fn norm_is_nondecreasing_in_p(f in polynomial(5), alpha in -0.5f64..2.0) {
        // Zeros inside the disk put kinks in |f|^p for small p, where the rule
        // may stall short of rel_tol; compare error intervals instead.
        let s = QuadratureScheme::default();
        let mut prev = 0.0;
        for p in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
            let n = bergman_norm_estimate(&f, p, alpha, &s).unwrap();
            prop_assert!(n.abs_error_estimate <= 1e-6 * n.value, "p={p}: error {}", n.abs_error_estimate);
            let upper = n.value + n.abs_error_estimate;
            prop_assert!(upper >= prev * (1.0 - 1e-9), "p={p}: {upper} < {prev}");
            prev = n.value - n.abs_error_estimate;
        }
    }
}

/// Increasing piecewise-linear function through `(x_i, y_i)`.
fn ramp(xs: &[f64], ys: &[f64], r: f64) -> f64 {
    match xs.iter().position(|&x| x > r) {
        None => *ys.last().unwrap(),
        Some(0) => ys[0],
        Some(i) => ys[i - 1] + (ys[i] - ys[i - 1]) * (r - xs[i - 1]) / (xs[i] - xs[i - 1]),
    }
}

fn increasing(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.01f64..0.99, n),
        prop::collection::vec(0.0f64..1.0, n),
        -2.0f64..2.0,
    )
        .prop_map(|(mut xs, steps, y0)| {
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let mut y = y0;
            let ys = xs
                .iter()
                .zip(steps)
                .map(|(_, s)| {
                    y += s;
                    y
                })
                .collect();
            (xs, ys)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn chebyshev_integral_inequality((fx, fy) in increasing(5), (gx, gy) in increasing(5), alpha in -0.9f64..3.0) {
        let f = |r: f64| ramp(&fx, &fy, r);
        let g = |r: f64| ramp(&gx, &gy, r);
        let mut breaks = fx.clone();
        breaks.extend_from_slice(&gx);
        let fg = sigma_expectation(alpha, &breaks, |r| f(r) * g(r)).unwrap();
        let ef = sigma_expectation(alpha, &fx, f).unwrap();
        let eg = sigma_expectation(alpha, &gx, g).unwrap();
        prop_assert!(fg >= ef * eg - 1e-9, "{fg} < {ef}·{eg}");
    }
}
