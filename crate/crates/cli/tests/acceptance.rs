//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the result lines are never captured.
//! Run alone with `cargo test -p bloch-cli --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use bloch_core::bounds::{bound_2n, growth_lower, growth_upper, pointwise_bound};
use bloch_core::extremal::{functional_equation_residual, p_alpha_bracket, search_c_tilde, ExtremalEstimate, SearchConfig};
use bloch_core::func::{bloch_norm, Atom};
use bloch_core::norms::{a2_norm_parseval, besov_norm, parseval_weighted_identity, BesovVariant};
use bloch_core::quadrature::{
    bergman_norm, bergman_norm_estimate, circle_mean, disk_moment, hardy_stein_rhs, sigma_expectation, MomentKind,
};
use bloch_core::{AnalyticFunction, Complex64, QuadratureScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    summary: String,
}

fn verdict(passed: bool, summary: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        summary: summary.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scheme() -> QuadratureScheme {
    QuadratureScheme::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> AnalyticFunction {
    let d = rng.gen_range(1..=max_degree);
    let mut v: Vec<Complex64> = (0..=d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    if v[d].norm() < 0.05 {
        v[d] = c(0.5, 0.0);
    }
    AnalyticFunction::taylor(v).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, r_max: f64) -> Complex64 {
    Complex64::from_polar(r_max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Search results shared by the extremal criteria, keyed by `(α, p)`.
struct Searches {
    config: SearchConfig,
    done: BTreeMap<(u64, u64), ExtremalEstimate>,
}

impl Searches {
    fn get(&mut self, alpha: f64, p: f64) -> &ExtremalEstimate {
        let config = self.config;
        self.done
            .entry((alpha.to_bits(), p.to_bits()))
            .or_insert_with(|| search_c_tilde(alpha, p, &config, &scheme()).unwrap())
    }
}

fn monomial_oracle() -> Verdict {
    let start = Instant::now();
    let s = scheme();
    let mut worst: f64 = 0.0;
    for n in 0..=8u32 {
        for p in [1.0, 2.0, 6.25, 8.0] {
            for alpha in [-0.5, 0.0, 1.0, 2.5] {
                let f = AnalyticFunction::monomial(n, c(1.0, 0.0)).unwrap();
                let got = bergman_norm(&f, p, alpha, &s).unwrap().value;
                // (α+1)B(x, α+1) with B from libm's lgamma
                let x = n as f64 * p / 2.0 + 1.0;
                let y = alpha + 1.0;
                let b = (libm::lgamma(x) + libm::lgamma(y) - libm::lgamma(x + y)).exp();
                worst = worst.max(rel(got, (y * b).powf(1.0 / p)));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= 1e-10 && secs <= 10.0,
        format!("max relative error {worst:.2e} over 144 cases (limit 1e-10), {secs:.1} s (limit 10 s)"),
    )
}

fn catalog() -> Vec<AnalyticFunction> {
    vec![
        AnalyticFunction::taylor(vec![c(0.3, 0.0), c(0.5, -0.2), c(0.0, 0.4), c(-0.25, 0.1)]).unwrap(),
        AnalyticFunction::moebius(c(0.4, -0.3)).unwrap(),
        AnalyticFunction::kernel(c(0.5, 0.2), 3.0, 0.5).unwrap(),
        AnalyticFunction::log_one_sided(-0.5).unwrap(),
        AnalyticFunction::log_two_sided(0.5).unwrap(),
        AnalyticFunction::extremal_f0(c(0.8, 0.1), c(-0.2, 0.3)).unwrap(),
        AnalyticFunction::extremal_fzeta(c(1.0, 0.0), c(0.1, 0.0), c(0.3, 0.4)).unwrap(),
        AnalyticFunction::monomial(3, c(0.7, -0.7)).unwrap(),
        AnalyticFunction::atomic_b1(vec![Atom { b: c(0.5, 0.0), a: c(0.2, 0.1) }, Atom { b: c(-0.3, 0.2), a: c(-0.6, 0.0) }])
            .unwrap(),
    ]
}

fn parseval_cross_check() -> Verdict {
    let s = scheme();
    let mut worst_norm: f64 = 0.0;
    for alpha in [-0.5, 0.0, 1.0, 2.5] {
        for f in catalog() {
            let quad = bergman_norm(&f, 2.0, alpha, &s).unwrap().value;
            let series = a2_norm_parseval(&f, alpha, 2048).unwrap();
            worst_norm = worst_norm.max(rel(series, quad));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_identity: f64 = 0.0;
    for _ in 0..20 {
        let f = random_polynomial(&mut rng, 10);
        let alpha = rng.gen_range(-0.5..3.0);
        let (lhs, rhs) = parseval_weighted_identity(&f, alpha, 16, &s).unwrap();
        worst_identity = worst_identity.max(rel(lhs, rhs));
    }
    verdict(
        worst_norm <= 1e-8 && worst_identity <= 1e-9,
        format!(
            "catalog Parseval vs quadrature {worst_norm:.2e} (limit 1e-8); weighted identity on 20 polynomials {worst_identity:.2e} (limit 1e-9)"
        ),
    )
}

fn kernel_equality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let zeta = random_point(&mut rng, 0.9);
        let p = rng.gen_range(1.0..8.0);
        let alpha = rng.gen_range(-0.5..3.0);
        let k = AnalyticFunction::kernel(zeta, p, alpha).unwrap();
        let norm = bergman_norm(&k, p, alpha, &scheme()).unwrap().value;
        let ratio = pointwise_bound(norm, p, alpha, zeta).unwrap() / k.eval(zeta, 0).unwrap().norm();
        worst = worst.max((ratio - 1.0).abs());
    }
    verdict(worst <= 1e-7, format!("max |ratio - 1| = {worst:.2e} over 50 (zeta, p, alpha) (limit 1e-7)"))
}

fn inclusion_constants() -> Verdict {
    let s = scheme();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut slack = f64::INFINITY;
    for _ in 0..100 {
        let f = random_polynomial(&mut rng, 6);
        let b = bloch_norm(&f).unwrap();
        for q in [1.5, 2.0, 3.0] {
            let n1 = besov_norm(&f, q, BesovVariant::Norm1, &s).unwrap().value;
            let n2 = besov_norm(&f, q, BesovVariant::Norm2, &s).unwrap().value;
            slack = slack.min(n1 - b).min(2f64.powf((q - 1.0) / q) * n2 - n1);
        }
    }
    let mut equality: f64 = 0.0;
    for zeta in [c(0.3, 0.0), c(0.0, 0.6), c(-0.5, 0.2)] {
        let f = AnalyticFunction::extremal_fzeta(c(0.8, -0.3), c(0.0, 0.0), zeta).unwrap();
        for q in [1.5, 2.0, 3.0] {
            let n1 = besov_norm(&f, q, BesovVariant::Norm1, &s).unwrap().value;
            equality = equality.max((n1 - bloch_norm(&f).unwrap()).abs());
        }
    }
    let mut moebius: f64 = 0.0;
    for k in [2.0, 4.0, 8.0, 100.0] {
        let f = AnalyticFunction::moebius(c(1.0 - 1.0 / k, 0.0)).unwrap();
        moebius = moebius.max((bloch_norm(&f).unwrap() - (2.0 - 1.0 / k)).abs());
    }
    verdict(
        slack >= -1e-8 && equality <= 1e-7 && moebius <= 1e-12,
        format!(
            "min sandwich slack {slack:.2e} on 100 polynomials (limit -1e-8); f_zeta equality {equality:.2e} (limit 1e-7); moebius 2 - 1/k error {moebius:.1e}"
        ),
    )
}

fn contractivity() -> Verdict {
    let s = scheme();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sample = vec![
        AnalyticFunction::constant(c(0.6, 0.8)).unwrap(),
        AnalyticFunction::constant(c(-2.0, 0.0)).unwrap(),
        AnalyticFunction::monomial(1, c(1.0, 0.0)).unwrap(),
        AnalyticFunction::moebius(c(0.5, 0.2)).unwrap(),
        AnalyticFunction::log_two_sided(0.5).unwrap(),
        AnalyticFunction::log_one_sided(-0.5).unwrap(),
    ];
    sample.extend((0..8).map(|_| random_polynomial(&mut rng, 6)));
    let mut worst_excess = f64::NEG_INFINITY;
    let mut constant_error: f64 = 0.0;
    let mut closest_nonconstant = f64::INFINITY;
    for alpha in [0.0, 0.5, 1.0, 2.0] {
        let threshold = bloch_core::bounds::contractivity_threshold(alpha).unwrap();
        for p in [threshold, 2.0] {
            for f in &sample {
                // Upper end of the quadrature interval, so the check never rests on luck.
                let norm = bergman_norm_estimate(f, p, alpha, &s).unwrap();
                let ratio = (norm.value + norm.abs_error_estimate) / bloch_norm(f).unwrap();
                worst_excess = worst_excess.max(ratio - 1.0);
                if f.polynomial_degree() == Some(0) {
                    constant_error = constant_error.max((ratio - 1.0).abs());
                } else {
                    closest_nonconstant = closest_nonconstant.min(1.0 - ratio);
                }
            }
        }
    }
    verdict(
        worst_excess <= 1e-8 && constant_error <= 1e-10 && closest_nonconstant > 1e-10,
        format!(
            "max ‖f‖/‖f‖_B - 1 = {worst_excess:.2e} (limit 1e-8); constants within {constant_error:.1e} of 1 (limit 1e-10); non-constants at least {closest_nonconstant:.2e} below 1"
        ),
    )
}

fn p0_claim() -> Verdict {
    let log2 = AnalyticFunction::log_two_sided(0.5).unwrap();
    let loose = QuadratureScheme {
        rel_tol: 1e-7,
        ..scheme()
    };
    let power = bergman_norm(&log2, 6.25, 0.0, &loose).unwrap().value.powf(6.25);
    let config = SearchConfig {
        n_coeffs: 8,
        restarts: 4,
        max_iters: 400,
        ..SearchConfig::default()
    };
    let start = Instant::now();
    let b = p_alpha_bracket(0.0, 2.0, 6.25, &config, &scheme());
    let secs = start.elapsed().as_secs_f64();
    match b {
        Ok(b) => verdict(
            power > 1.0 && 2.0 < b.lo && b.lo < b.hi && b.hi < 6.25 && secs <= 60.0,
            format!(
                "‖log2‖^(25/4) = {power:.9}, margin {:.3e} above 1; bracket ({}, {}] in {secs:.1} s (limit 60 s)",
                power - 1.0,
                b.lo,
                b.hi
            ),
        ),
        Err(e) => verdict(false, format!("‖log2‖^(25/4) = {power:.9}; bracket failed: {e}")),
    }
}

fn growth_sandwich(searches: &mut Searches) -> Verdict {
    let mut worst = f64::INFINITY;
    let mut cells = Vec::new();
    for alpha in [0.0, 1.0] {
        for p in [4.0, 8.0, 16.0, 32.0] {
            let ct = searches.get(alpha, p).c_tilde;
            let (lo, hi) = (growth_lower(alpha, p).unwrap(), growth_upper(alpha, p).unwrap());
            worst = worst.min((ct - lo + 1e-6).min(hi + 1e-6 - ct));
            cells.push(format!("{ct:.4}"));
        }
    }
    let mut stirling: f64 = 0.0;
    for alpha in [0.0, 1.0] {
        let target = 1.0 / (2.0 * std::f64::consts::E * (alpha + 2.0));
        stirling = stirling.max(rel(growth_lower(alpha, 256.0).unwrap() / 256.0, target));
    }
    verdict(
        worst >= 0.0 && stirling <= 0.02,
        format!(
            "C~ at alpha 0,1 x p 4,8,16,32 = [{}], all inside the growth bounds (min slack {worst:.3}); Stirling error at p = 256 {:.2}% (limit 2%)",
            cells.join(", "),
            100.0 * stirling
        ),
    )
}

fn bound_2n_consistency(searches: &mut Searches) -> Verdict {
    let mut worst = f64::INFINITY;
    let mut cells = Vec::new();
    for alpha in [0.0, 1.0] {
        for n in [2u32, 3] {
            let ct = searches.get(alpha, 2.0 * n as f64).c_tilde;
            let bound = bound_2n(alpha, n, 1.0 / (alpha + 1.0f64).sqrt()).unwrap();
            worst = worst.min(bound - ct);
            cells.push(format!("{ct:.4} <= {bound:.4}"));
        }
    }
    verdict(worst >= 0.0, format!("[{}]", cells.join(", ")))
}

fn stationarity(searches: &mut Searches) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut cells = Vec::new();
    for alpha in [0.0, 1.0] {
        for p in [4.0, 8.0] {
            let e = searches.get(alpha, p);
            worst = worst.max(e.residual);
            cells.push(format!("{:.1e} ({})", e.residual, e.diagnostics.incumbent));
        }
    }
    let z = AnalyticFunction::monomial(1, c(1.0, 0.0)).unwrap();
    let mut moments: f64 = 0.0;
    for alpha in [0.0, 1.0] {
        for p in [4.0, 8.0] {
            for kind in [MomentKind::ZWeighted, MomentKind::FWeighted] {
                moments = moments.max(disk_moment(&z, p, alpha, kind, &scheme()).unwrap().norm());
            }
        }
    }
    // the residual must see a non-stationary function
    let g = AnalyticFunction::taylor(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
    let control = functional_equation_residual(&g, 4.0, 0.0, &scheme()).unwrap();
    verdict(
        worst <= 1e-3 && moments <= 1e-12 && control > 1e-3,
        format!(
            "incumbent residuals [{}] (limit 1e-3); z moments {moments:.1e} (limit 1e-12); control z + z^2/2 residual {control:.2e}",
            cells.join(", ")
        ),
    )
}

/// Increasing piecewise-linear function through the knots.
fn ramp(knots: &[(f64, f64)], r: f64) -> f64 {
    match knots.iter().position(|&(x, _)| x > r) {
        None => knots[knots.len() - 1].1,
        Some(0) => knots[0].1,
        Some(i) => {
            let ((x0, y0), (x1, y1)) = (knots[i - 1], knots[i]);
            y0 + (y1 - y0) * (r - x0) / (x1 - x0)
        }
    }
}

fn random_ramp(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = (0..rng.gen_range(2..6)).map(|_| rng.gen_range(0.01..0.99)).collect();
    xs.sort_by(f64::total_cmp);
    let mut y = rng.gen_range(-2.0..2.0);
    xs.into_iter()
        .map(|x| {
            y += rng.gen_range(0.05..1.0);
            (x, y)
        })
        .collect()
}

fn identity_suite() -> Verdict {
    let tight = QuadratureScheme {
        rel_tol: 1e-13,
        ..scheme()
    };
    let slope = |f: &AnalyticFunction, p: f64, r: f64, h: f64| {
        let m = |r: f64| circle_mean(f, p, r, &tight).unwrap().powf(p);
        (m(r + h) - m(r - h)) / (2.0 * h)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(10);

    let mut hardy_stein: f64 = 0.0;
    for _ in 0..12 {
        let tail: Vec<Complex64> = (0..rng.gen_range(1..6)).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let total: f64 = tail.iter().map(|a| a.norm()).sum();
        let mut v = vec![c(1.0, 0.0)];
        v.extend(tail.iter().map(|a| a * (0.8 / total.max(0.8))));
        let f = AnalyticFunction::taylor(v).unwrap();
        for p in [2.0, 3.0, 4.0] {
            for r in [0.3, 0.6, 0.85] {
                let hs = hardy_stein_rhs(&f, p, r, &tight).unwrap().value;
                hardy_stein = hardy_stein.max((slope(&f, p, r, 1e-3) - hs).abs() / hs.max(1.0));
            }
        }
    }

    let mut chebyshev = f64::INFINITY;
    for _ in 0..50 {
        let (fk, gk) = (random_ramp(&mut rng), random_ramp(&mut rng));
        let alpha = rng.gen_range(-0.9..3.0);
        let breaks: Vec<f64> = fk.iter().chain(&gk).map(|k| k.0).collect();
        let ef = sigma_expectation(alpha, &breaks, |r| ramp(&fk, r)).unwrap();
        let eg = sigma_expectation(alpha, &breaks, |r| ramp(&gk, r)).unwrap();
        let cov = sigma_expectation(alpha, &breaks, |r| (ramp(&fk, r) - ef) * (ramp(&gk, r) - eg)).unwrap();
        chebyshev = chebyshev.min(cov);
    }

    let mut mean_slack = f64::INFINITY;
    for _ in 0..12 {
        let f = random_polynomial(&mut rng, 6);
        let p = rng.gen_range(1.0..8.0);
        for r in [0.2, 0.5, 0.8] {
            let m = circle_mean(&f, p, r, &tight).unwrap();
            let md = circle_mean(&f.derivative(), p, r, &tight).unwrap();
            mean_slack = mean_slack.min(p * m.powf(p - 1.0) * md - slope(&f, p, r, 1e-4));
        }
    }
    verdict(
        hardy_stein <= 1e-5 && chebyshev >= 0.0 && mean_slack >= -1e-6,
        format!(
            "Hardy-Stein max deviation {hardy_stein:.2e} (limit 1e-5); Chebyshev min margin {chebyshev:.2e} on 50 pairs (limit 0); mean-derivative min slack {mean_slack:.2e} (limit -1e-6)"
        ),
    )
}

fn determinism() -> Verdict {
    let quick = ["--n-coeffs", "6", "--restarts", "4", "--max-iters", "300", "--seed", "7"];
    let runs: Vec<Vec<&str>> = vec![
        vec!["bounds", "--alpha", "1", "--p", "5", "--format", "csv"],
        vec!["verify", "--alpha", "0", "--p", "1", "--format", "csv"],
        [&["search", "--alpha", "0", "--p", "5", "--format", "csv"][..], &quick[..]].concat(),
        [&["scan", "--alpha", "0", "--p", "3,6", "--format", "csv"][..], &quick[..]].concat(),
        [&["scan", "--alpha", "0", "--p", "3,6", "--format", "svg"][..], &quick[..]].concat(),
    ];
    let once = || -> Vec<Vec<u8>> {
        runs.iter()
            .map(|args| {
                let mut out = Vec::new();
                let code = bloch_cli::run(std::iter::once("bloch").chain(args.iter().copied()), &mut out, &mut std::io::sink());
                assert_eq!(code, 0, "{args:?}");
                out
            })
            .collect()
    };
    let (a, b) = (once(), once());
    let same = a == b;
    let bytes: usize = a.iter().map(Vec::len).sum();
    verdict(same, format!("{} outputs ({bytes} bytes) byte-identical across two runs: {same}", a.len()))
}

fn main() -> ExitCode {
    let mut searches = Searches {
        config: SearchConfig {
            n_coeffs: 12,
            restarts: 5,
            max_iters: 1500,
            ..SearchConfig::default()
        },
        done: BTreeMap::new(),
    };
    type Criterion<'a> = (&'a str, Box<dyn FnMut() -> Verdict + 'a>);
    let criteria: Vec<Criterion> = {
        let s = std::cell::RefCell::new(&mut searches);
        let s = std::rc::Rc::new(s);
        let (s7, s8, s9) = (s.clone(), s.clone(), s);
        vec![
            ("monomial oracle", Box::new(monomial_oracle)),
            ("Parseval cross-check", Box::new(parseval_cross_check)),
            ("pointwise bound equality", Box::new(kernel_equality)),
            ("inclusion constants", Box::new(inclusion_constants)),
            ("contractivity", Box::new(contractivity)),
            ("p0 claim and bracket", Box::new(p0_claim)),
            ("growth sandwich", Box::new(move || growth_sandwich(&mut s7.borrow_mut()))),
            ("bound_2n consistency", Box::new(move || bound_2n_consistency(&mut s8.borrow_mut()))),
            ("stationarity certificate", Box::new(move || stationarity(&mut s9.borrow_mut()))),
            ("identity suite", Box::new(identity_suite)),
            ("determinism", Box::new(determinism)),
        ]
    };
    let mut failed = 0;
    for (i, (name, mut check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(&mut check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        if !v.passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.1} s]",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.summary,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
