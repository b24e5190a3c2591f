#![allow(dead_code)]

use bloch_core::func::Atom;
use bloch_core::{AnalyticFunction, Complex64};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One instance of every function model.
pub fn catalog() -> Vec<AnalyticFunction> {
    vec![
        AnalyticFunction::taylor(vec![c(0.3, 0.0), c(0.5, -0.2), c(0.0, 0.4), c(-0.25, 0.1)]).unwrap(),
        AnalyticFunction::moebius(c(0.4, -0.3)).unwrap(),
        AnalyticFunction::kernel(c(0.5, 0.2), 3.0, 0.5).unwrap(),
        AnalyticFunction::log_one_sided(-0.5).unwrap(),
        AnalyticFunction::log_two_sided(0.5).unwrap(),
        AnalyticFunction::extremal_f0(c(0.8, 0.1), c(-0.2, 0.3)).unwrap(),
        AnalyticFunction::extremal_fzeta(c(1.0, 0.0), c(0.1, 0.0), c(0.3, 0.4)).unwrap(),
        AnalyticFunction::monomial(3, c(0.7, -0.7)).unwrap(),
        AnalyticFunction::atomic_b1(vec![
            Atom { b: c(0.5, 0.0), a: c(0.2, 0.1) },
            Atom { b: c(-0.3, 0.2), a: c(-0.6, 0.0) },
        ])
        .unwrap(),
    ]
}

/// Coefficients `c₀ … c_deg` with `|c_k| ≤ 1`.
pub fn coeffs(max_degree: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..=max_degree + 1)
        .prop_map(|v| v.into_iter().map(|(re, im)| c(re, im)).collect())
        .prop_filter("non-constant", |v: &Vec<Complex64>| v[1..].iter().any(|c| c.norm() > 1e-3))
}

pub fn polynomial(max_degree: usize) -> impl Strategy<Value = AnalyticFunction> {
    coeffs(max_degree).prop_map(|v| AnalyticFunction::taylor(v).unwrap())
}

/// A point with `|z| ≤ r_max`.
pub fn point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}
