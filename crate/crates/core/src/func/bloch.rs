//! Bloch seminorm `ρ(f) = sup |f′(z)|(1 − |z|²)` and the Bloch norm.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
// unused when std is in the build graph (inherent float methods win)
#[allow(unused_imports)]
use num_traits::Float;

use super::{AnalyticFunction, TaylorSeries, ZERO};
use crate::error::{Error, Result};

/// Grid maxima within this fraction of the best one are refined as well.
const NEAR_BEST: f64 = 0.95;
const MAX_REFINED: usize = 64;

/// Outermost radius the numeric search looks at.
pub const MAX_RADIUS: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlochMode {
    /// Exact value from the model's parameters; fails for models without one.
    ClosedForm,
    /// Grid search plus local refinement. Returns a lower bound of the sup.
    Numeric,
}

/// Resolution of the numeric sup search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochGrid {
    /// Radii, clustered toward `r = 1` by a sine map.
    pub n_radii: usize,
    pub n_angles: usize,
    /// Alternating golden-section passes (radius, then angle) per cell.
    pub rounds: usize,
    /// How many of the best grid-local maxima get refined at least; any
    /// other local maximum within 5% of the best sample is refined too.
    pub top_cells: usize,
}

impl Default for BlochGrid {
    fn default() -> Self {
        BlochGrid {
            n_radii: 256,
            n_angles: 512,
            rounds: 3,
            top_cells: 4,
        }
    }
}

impl BlochGrid {
    /// A grid just fine enough for polynomials of the given degree: `|f′|` on
    /// a circle is a trigonometric polynomial of degree `< degree`, so a
    /// handful of samples per oscillation brackets every local maximum.
    pub fn for_polynomial(degree: usize) -> Self {
        let n_angles = (8 * degree.max(1)).next_power_of_two().max(64);
        BlochGrid {
            n_radii: (2 * degree).clamp(48, 256),
            n_angles,
            rounds: 3,
            top_cells: 3,
        }
    }
}

/// Result of a numeric sup search: the value and where it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSup {
    pub value: f64,
    pub at: Complex64,
}

fn weight(r: f64) -> f64 {
    (1.0 - r) * (1.0 + r)
}

/// Maximizes `g(t)` on `[lo, hi]` by golden-section search, starting from the
/// incumbent `(best_t, best_g)`; never returns anything worse.
fn golden_max(mut lo: f64, mut hi: f64, best: (f64, f64), g: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut best_t, mut best_g) = best;
    let stop = 1e-6 * (hi - lo);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    // the value error is quadratic in the location error
    for _ in 0..200 {
        if hi - lo <= stop {
            break;
        }
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        }
    }
    for (t, v) in [(x1, g1), (x2, g2), (lo, g(lo)), (hi, g(hi))] {
        if v > best_g {
            best_g = v;
            best_t = t;
        }
    }
    (best_t, best_g)
}

/// Numeric sup of `|f′(z)|(1 − |z|²)` given a closure for `f′`.
///
/// Grid search over sine-clustered radii in `[0, 1 − 10⁻¹²]` and uniform
/// angles, then alternating golden-section refinement around the best
/// grid-local maxima. The returned value is attained at `at`, so it is a
/// lower bound of the true sup.
pub fn bloch_sup_numeric<F>(deriv: F, grid: &BlochGrid) -> BlochSup
where
    F: Fn(Complex64) -> Complex64,
{
    let na = grid.n_angles.max(8);
    let dtheta = TAU / na as f64;
    let unit: Vec<Complex64> = (0..na).map(|j| Complex64::from_polar(1.0, dtheta * j as f64)).collect();
    let ring = |r: f64, out: &mut [f64]| {
        for (o, u) in out.iter_mut().zip(&unit) {
            *o = deriv(u * r).norm();
        }
    };
    bloch_sup_with(ring, &deriv, grid)
}

/// As [`bloch_sup_numeric`], with the grid pass delegated to `ring`, which
/// fills `|f′(re^{iθ_j})|` at the `max(n_angles, 8)` uniform angles
/// `θ_j = 2πj/n`.
pub(crate) fn bloch_sup_with<R, F>(ring: R, deriv: F, grid: &BlochGrid) -> BlochSup
where
    R: Fn(f64, &mut [f64]),
    F: Fn(Complex64) -> Complex64,
{
    let nr = grid.n_radii.max(3);
    let na = grid.n_angles.max(8);
    let radii: Vec<f64> = (0..nr)
        .map(|i| MAX_RADIUS * (FRAC_PI_2 * i as f64 / (nr - 1) as f64).sin())
        .collect();
    let dtheta = TAU / na as f64;
    let g = |r: f64, t: f64| deriv(Complex64::from_polar(r, t)).norm() * weight(r);

    let mut values = vec![0.0; nr * na];
    for (i, &r) in radii.iter().enumerate() {
        let w = weight(r);
        let row = &mut values[i * na..(i + 1) * na];
        ring(r, row);
        row.iter_mut().for_each(|v| *v *= w);
    }

    // grid-local maxima, best first
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..nr {
        for j in 0..na {
            let v = values[i * na + j];
            let mut is_max = true;
            'nb: for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nr as i64 {
                    continue;
                }
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(na as i64) as usize;
                    if values[ii as usize * na + jj] > v {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if is_max {
                cells.push((i, j, v));
            }
        }
        // the r = 0 row is a single point
        if i == 0 {
            cells.retain(|c| c.0 != 0 || c.1 == 0);
        }
    }
    cells.sort_by(|a, b| b.2.total_cmp(&a.2));
    // a peak between grid points can beat the best sample by a few percent
    let cutoff = cells.first().map_or(0.0, |c| NEAR_BEST * c.2);
    let keep = cells
        .iter()
        .enumerate()
        .take_while(|(k, c)| *k < grid.top_cells.max(1) || (c.2 >= cutoff && *k < MAX_REFINED))
        .count();
    cells.truncate(keep);

    let mut best = BlochSup { value: 0.0, at: ZERO };
    for (i, j, v) in cells {
        let mut r = radii[i];
        let mut t = dtheta * j as f64;
        let mut val = v;
        let r_lo = radii[i.saturating_sub(1)];
        let r_hi = radii[(i + 1).min(nr - 1)];
        for _ in 0..grid.rounds {
            let (r_new, v_new) = golden_max(r_lo, r_hi, (r, val), |x| g(x, t));
            r = r_new;
            val = v_new;
            let (t_new, v_new) = golden_max(t - dtheta, t + dtheta, (t, val), |x| g(r, x));
            t = t_new;
            val = v_new;
        }
        if val > best.value {
            best = BlochSup {
                value: val,
                at: Complex64::from_polar(r, t),
            };
        }
    }
    best
}

/// `sup (1 − r²)/(1 − ρ r)^(s+1)` over `r ∈ [0, 1)`, attained at
/// `r* = (s+1)ρ / (1 + √(1 − ρ²(1 − s²)))`.
fn power_profile_max(rho: f64, s: f64) -> f64 {
    let r = (s + 1.0) * rho / (1.0 + (1.0 - rho * rho * (1.0 - s * s)).sqrt());
    let r = r.min(MAX_RADIUS);
    weight(r) / (1.0 - rho * r).powf(s + 1.0)
}

fn closed_form(f: &AnalyticFunction) -> Result<f64> {
    use AnalyticFunction::*;
    let unsupported = || Error::Unsupported {
        op: "bloch_seminorm",
        model: f.model_name().into(),
    };
    Ok(match f {
        Moebius { .. } => 1.0,
        Monomial { n, c } => match *n {
            0 => 0.0,
            1 => c.norm(),
            n => {
                // max of n rⁿ⁻¹ (1 − r²) at r² = (n−1)/(n+1)
                let n = n as f64;
                let r2 = (n - 1.0) / (n + 1.0);
                c.norm() * n * r2.powf(0.5 * (n - 1.0)) * (2.0 / (n + 1.0))
            }
        },
        LogOneSided { scale } | LogTwoSided { scale } => 2.0 * scale.abs(),
        Kernel { zeta, p, alpha } => {
            let s = 2.0 * (alpha + 2.0) / p;
            let rho = zeta.norm();
            if rho == 0.0 {
                0.0
            } else {
                s * rho * power_profile_max(rho, s)
            }
        }
        Power { coeff, w, exponent } => {
            let rho = w.norm();
            if *exponent <= 0.0 || rho >= 1.0 {
                return Err(unsupported());
            }
            if rho == 0.0 {
                0.0
            } else {
                coeff.norm() * exponent * rho * power_profile_max(rho, *exponent)
            }
        }
        ExtremalF0 { alpha, .. } => alpha.norm(),
        ExtremalFzeta { gamma, .. } => gamma.norm(),
        Scaled { factor, inner } => factor.norm() * closed_form(inner)?,
        Taylor(_) | AtomicB1 { .. } | Sum(_) => return Err(unsupported()),
    })
}

/// Bloch seminorm in the requested mode.
///
/// Numeric mode uses the default [`BlochGrid`] (256 × 512, three refinement
/// rounds) and returns a lower bound of the sup.
pub fn bloch_seminorm(f: &AnalyticFunction, mode: BlochMode) -> Result<f64> {
    match mode {
        BlochMode::ClosedForm => closed_form(f),
        BlochMode::Numeric => {
            let grid = match f {
                AnalyticFunction::Taylor(t) if t.order() > 32 => BlochGrid {
                    n_angles: (16 * t.order()).next_power_of_two(),
                    ..BlochGrid::default()
                },
                _ => BlochGrid::default(),
            };
            Ok(bloch_sup_numeric(|z| f.eval_unchecked(z, 1), &grid).value)
        }
    }
}

/// Closed form when the model has one, numeric otherwise.
pub fn bloch_seminorm_auto(f: &AnalyticFunction) -> Result<f64> {
    match closed_form(f) {
        Err(Error::Unsupported { .. }) => bloch_seminorm(f, BlochMode::Numeric),
        other => other,
    }
}

/// `‖f‖_ℬ = |f(0)| + ρ(f)`.
pub fn bloch_norm(f: &AnalyticFunction) -> Result<f64> {
    Ok(f.value_at_zero().norm() + bloch_seminorm_auto(f)?)
}

/// `(f − f(0))/ρ(f)`: seminorm one, zero at the origin.
pub fn normalize_bloch(f: &AnalyticFunction) -> Result<AnalyticFunction> {
    let rho = bloch_seminorm_auto(f)?;
    normalize_with(f, rho)
}

pub(crate) fn normalize_with(f: &AnalyticFunction, rho: f64) -> Result<AnalyticFunction> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Degenerate {
            op: "normalize_bloch",
            detail: alloc::format!("Bloch seminorm is {rho}; constants cannot be normalized"),
        });
    }
    let inv = 1.0 / rho;
    Ok(match f {
        AnalyticFunction::Monomial { n, c } => AnalyticFunction::Monomial { n: *n, c: c / rho },
        AnalyticFunction::Taylor(t) => {
            let mut coeffs: Vec<Complex64> = t.coefficients().iter().map(|c| c * inv).collect();
            coeffs[0] = ZERO;
            AnalyticFunction::Taylor(TaylorSeries::new(coeffs)?)
        }
        _ => {
            let f0 = f.value_at_zero();
            let centered = if f0 == ZERO {
                f.clone()
            } else {
                AnalyticFunction::Sum(vec![f.clone(), AnalyticFunction::Monomial { n: 0, c: -f0 }])
            };
            if rho == 1.0 {
                centered
            } else {
                AnalyticFunction::Scaled {
                    factor: Complex64::new(inv, 0.0),
                    inner: Box::new(centered),
                }
            }
        }
    })
}
