//! Derivative-free minimization: Nelder–Mead with dimension-adaptive
//! coefficients (reflection 1, expansion 1 + 2/n, contraction 3/4 − 1/(2n),
//! shrink 1 − 1/n), which keeps the simplex from collapsing in dozens of
//! dimensions.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Minimizes `f` from `x0`, initial edge length `step`.
///
/// Stops when every vertex is within `step_tol` (max norm) of the best one or
/// after `max_iters` iterations. Non-finite values count as `+∞`.
pub(crate) fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, max_iters: usize, step_tol: f64) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0);
        return Minimum {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations: 1,
        };
    }

    let nf = n as f64;
    let (rho, chi, gamma, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += step;
        pts.push(x);
    }
    let mut vals: Vec<f64> = pts.iter().map(|x| eval(x)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let trial = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> { c.iter().zip(w).map(|(c, w)| c + t * (w - c)).collect() };

    let mut iterations = 0;
    while iterations < max_iters {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let best = order[0];
        let spread = order[1..]
            .iter()
            .map(|&i| pts[i].iter().zip(&pts[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= step_tol {
            break;
        }
        iterations += 1;

        let worst = order[n];
        let second = vals[order[n - 1]];
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= nf);

        let xr = trial(&centroid, &pts[worst], -rho);
        let fr = eval(&xr);
        if fr < vals[best] {
            let xe = trial(&centroid, &pts[worst], -rho * chi);
            let fe = eval(&xe);
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < second {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[worst] {
            let xc = trial(&centroid, &pts[worst], -rho * gamma);
            let fc = eval(&xc);
            (xc, if fc <= fr { fc } else { f64::INFINITY })
        } else {
            let xc = trial(&centroid, &pts[worst], gamma);
            let fc = eval(&xc);
            (xc, if fc < vals[worst] { fc } else { f64::INFINITY })
        };
        if fc.is_finite() {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        let anchor = pts[best].clone();
        for &i in &order[1..] {
            let x = trial(&anchor, &pts[i], sigma);
            vals[i] = eval(&x);
            pts[i] = x;
        }
    }

    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b))).unwrap_or(0);
    Minimum {
        x: pts.swap_remove(best),
        value: vals[best],
        iterations,
        evaluations,
    }
}
