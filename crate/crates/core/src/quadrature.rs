//! Integration on circles and on the disk against `dμ_α = (α+1)(1 − |z|²)^α dA`.
//!
//! Radial integrals are split at `r = 1/√2`. The inner part uses
//! Gauss–Legendre in `r`; the outer part substitutes `u = 1 − r²` and, for
//! models with a singular point close to the circle, grades `u = t³/2` so the
//! logarithmic boundary growth is smoothed out. Both outer variants reduce to
//! a Gauss–Jacobi rule for the weight `t^a` on `[0, 1]`.
//!
//! Angular means use the trapezoid rule. When a model has singular points
//! near the circle, the circle is cut at their angles and each panel is
//! graded toward its ends, which keeps the rule nested under doubling.

use alloc::format;
use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::func::{AnalyticFunction, MAX_RADIUS};
use crate::linalg::tridiagonal_eigen;
use crate::sum::{ComplexKahanSum, KahanSum};

/// Singular points closer than this to the circle switch on graded rules.
const NEAR_BOUNDARY: f64 = 0.1;
/// Smallest exponent of the angular grading map.
const GRADING_Q: i32 = 6;
/// Smallest exponent of the radial grading `u = t^m/2` for near-singular models.
const RADIAL_GRADING: f64 = 3.0;
/// Hard cap on nodes per circle.
const MAX_ANGULAR_NODES: usize = 1 << 16;
/// Refinement stops early once the error stalls within this factor of the tolerance.
const STALL_FACTOR: f64 = 100.0;

/// Node counts and tolerances for disk and circle integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme {
    pub alpha: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    /// Doublings of `n_radial` (and of the angular rule) before giving up.
    pub max_refinements: u32,
    pub rel_tol: f64,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme {
            alpha: 0.0,
            n_radial: 128,
            n_angular: 512,
            max_refinements: 6,
            rel_tol: 1e-9,
        }
    }
}

impl QuadratureScheme {
    pub fn new(alpha: f64) -> Self {
        QuadratureScheme {
            alpha,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |detail: alloc::string::String| Err(Error::argument("quadrature_scheme", detail));
        if !(self.alpha > -1.0 && self.alpha.is_finite()) {
            return Err(Error::domain("quadrature_scheme", format!("alpha = {} must exceed -1", self.alpha)));
        }
        if self.n_radial < 8 {
            return bad(format!("n_radial = {} must be at least 8", self.n_radial));
        }
        if self.n_angular < 16 || self.n_angular % 2 != 0 {
            return bad(format!("n_angular = {} must be even and at least 16", self.n_angular));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return bad(format!("rel_tol = {} must lie in (0, 1)", self.rel_tol));
        }
        Ok(())
    }

    fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let s = QuadratureScheme { alpha, ..*self };
        s.validate()?;
        Ok(s)
    }
}

/// A norm with its error estimate and the scheme that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub scheme_used: QuadratureScheme,
    pub converged: bool,
}

/// Gauss–Jacobi rule for `∫₀¹ t^a g(t) dt`, nodes ascending.
///
/// Golub–Welsch on the Jacobi matrix of the weight `(1 + x)^a` on `[−1, 1]`.
pub fn gauss_jacobi(n: usize, a: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::argument("gauss_jacobi", "need at least one node"));
    }
    if !(a > -1.0 && a.is_finite()) {
        return Err(Error::domain("gauss_jacobi", format!("exponent {a} must exceed -1")));
    }
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                a / (a + 2.0)
            } else {
                let s = 2.0 * k as f64 + a;
                a * a / (s * (s + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + a;
            2.0 * k * (k + a) / (s * ((s - 1.0) * (s + 1.0)).sqrt())
        })
        .collect();
    let (x, z) = tridiagonal_eigen(&diag, &off)?;
    // ∫(1+x)^a dx = 2^(a+1)/(a+1); mapping to [0, 1] divides by 2^(a+1)
    let mu0 = 1.0 / (a + 1.0);
    let mut pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(&z)
        .map(|(&x, &z)| (0.5 * (1.0 + x), mu0 * z * z))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}

/// Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    gauss_jacobi(n, 0.0)
}

/// Nodes and weights with `Σ wᵢ h(rᵢ) ≈ ∫₀¹ 2r(1 − r²)^α h(r) dr`.
#[derive(Debug, Clone)]
pub(crate) struct RadialRule {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
}

pub(crate) fn radial_rule(alpha: f64, n: usize, m: f64) -> Result<RadialRule> {
    let n_in = n / 2;
    let n_out = n - n_in;
    let rs = FRAC_1_SQRT_2;
    let mut r = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);

    let (x, wx) = gauss_legendre(n_in.max(1))?;
    for (x, wx) in x.into_iter().zip(wx) {
        let ri = rs * x;
        r.push(ri);
        w.push(rs * wx * 2.0 * ri * ((1.0 - ri) * (1.0 + ri)).powf(alpha));
    }

    // ∫_{rs}^1 2r(1−r²)^α h dr = ∫₀^{1/2} u^α h(√(1−u)) du, u = t^m/2
    let a = m * (alpha + 1.0) - 1.0;
    let scale = m / 2.0.powf(alpha + 1.0);
    let (t, wt) = gauss_jacobi(n_out.max(1), a)?;
    for (t, wt) in t.into_iter().zip(wt) {
        let u = 0.5 * t.powf(m);
        r.push((1.0 - u).sqrt().min(MAX_RADIUS));
        w.push(scale * wt);
    }
    Ok(RadialRule { r, w })
}

/// Angular layout: one uniform panel, or graded panels between singular angles.
#[derive(Debug, Clone)]
struct Angular {
    panels: Vec<(f64, f64)>,
    graded: bool,
    q: i32,
}

#[derive(Debug, Clone, Copy)]
struct CircleMean {
    value: Complex64,
    abs_mean: f64,
    error: f64,
    converged: bool,
}

fn grading(t: f64, q: i32) -> f64 {
    let a = t.powi(q);
    let b = (1.0 - t).powi(q);
    a / (a + b)
}

fn grading_density(t: f64, q: i32) -> f64 {
    let a = t.powi(q);
    let b = (1.0 - t).powi(q);
    q as f64 * t.powi(q - 1) * (1.0 - t).powi(q - 1) / ((a + b) * (a + b))
}

impl Angular {
    fn uniform() -> Self {
        Angular {
            panels: alloc::vec![(0.0, TAU)],
            graded: false,
            q: 0,
        }
    }

    fn for_function(f: &AnalyticFunction, power: f64) -> Self {
        let angles = f.near_boundary_angles(NEAR_BOUNDARY);
        if angles.is_empty() {
            return Self::uniform();
        }
        let k = angles.len();
        let panels = (0..k)
            .map(|i| {
                let start = angles[i];
                let end = if i + 1 < k { angles[i + 1] } else { angles[0] + TAU };
                (start, end - start)
            })
            .collect();
        // the peak of |f|^p next to a logarithmic singularity sharpens with p
        let q = ((0.5 * power) as i32).clamp(GRADING_Q, 24);
        Angular { panels, graded: true, q }
    }

    /// `Σ d(t_j) g(z_j)` over level-`n` points (odd indices only if `odd_only`),
    /// with the matching sum of `d|g|`.
    fn level_sum<G: Fn(Complex64) -> Complex64>(&self, r: f64, n: usize, odd_only: bool, g: &G) -> (Complex64, f64) {
        let mut s = ComplexKahanSum::default();
        let mut a = KahanSum::default();
        let step = if odd_only { 2 } else { 1 };
        let first = if odd_only { 1 } else { 0 };
        if !self.graded {
            let dtheta = TAU / n as f64;
            let mut j = first;
            while j < n {
                let v = g(Complex64::from_polar(r, dtheta * j as f64));
                s.add(v);
                a.add(v.norm());
                j += step;
            }
        } else {
            for &(start, len) in &self.panels {
                let d0 = len / TAU;
                // t = 0 and t = 1 carry zero weight
                let mut j = 1;
                while j < n {
                    let t = j as f64 / n as f64;
                    let theta = if t <= 0.5 {
                        start + len * grading(t, self.q)
                    } else {
                        start + len - len * grading(1.0 - t, self.q)
                    };
                    let d = d0 * grading_density(t, self.q);
                    let v = g(Complex64::from_polar(r, theta));
                    s.add(v * d);
                    a.add(v.norm() * d);
                    j += step;
                }
            }
        }
        (s.value(), a.value())
    }

    /// Mean of `g` over the circle of radius `r`, doubling from `n_total`
    /// nodes until two successive levels agree to `tol` relative to the mean
    /// of `|g|`.
    fn mean<G: Fn(Complex64) -> Complex64>(&self, r: f64, n_total: usize, max_ref: u32, tol: f64, g: &G) -> CircleMean {
        if r == 0.0 {
            let v = g(Complex64::new(0.0, 0.0));
            return CircleMean {
                value: v,
                abs_mean: v.norm(),
                error: 0.0,
                converged: true,
            };
        }
        let mut n = (n_total / self.panels.len()).max(8);
        let (mut s, mut a) = self.level_sum(r, n, false, g);
        let mut prev = s / n as f64;
        let mut last = CircleMean {
            value: prev,
            abs_mean: a / n as f64,
            error: f64::INFINITY,
            converged: false,
        };
        let mut last_error = f64::INFINITY;
        for _ in 0..max_ref.max(1) {
            if n * 2 * self.panels.len() > MAX_ANGULAR_NODES {
                break;
            }
            let (sn, an) = self.level_sum(r, 2 * n, true, g);
            s += sn;
            a += an;
            n *= 2;
            let cur = s / n as f64;
            let abs_mean = a / n as f64;
            let error = (cur - prev).norm();
            last = CircleMean {
                value: cur,
                abs_mean,
                error,
                converged: error <= tol * abs_mean.max(1e-300),
            };
            // a stalled error this close to the tolerance is rounding noise
            // from evaluating f next to its singularity; more nodes won't help
            let stalled = error > 0.5 * last_error && error < STALL_FACTOR * tol * abs_mean;
            if last.converged || stalled {
                break;
            }
            last_error = error;
            prev = cur;
        }
        last
    }
}

/// Result of a disk integral against `dμ_α`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DiskIntegral {
    pub value: Complex64,
    pub error: f64,
    pub previous: Complex64,
    pub converged: bool,
}

fn disk_pass<G: Fn(Complex64) -> Complex64>(
    g: &G,
    rule: &RadialRule,
    angular: &Angular,
    scheme: &QuadratureScheme,
    tol: f64,
) -> (Complex64, f64, f64) {
    let c = scheme.alpha + 1.0;
    let mut v = ComplexKahanSum::default();
    let mut s = KahanSum::default();
    let mut e = KahanSum::default();
    for (&r, &w) in rule.r.iter().zip(&rule.w) {
        let m = angular.mean(r, scheme.n_angular, scheme.max_refinements, tol, g);
        v.add(m.value * (c * w));
        s.add(m.abs_mean * c * w);
        e.add(m.error.min(m.abs_mean) * c * w);
    }
    (v.value(), s.value(), e.value())
}

/// `∫ g dμ_α` with radial doubling until `|I₂ₙ − Iₙ|` plus the angular error
/// is at most `tol · ∫|g| dμ_α`.
///
/// `power` is the exponent `p` of `|f|^p` in `g`. Near a boundary singularity
/// the circle means behave like `c − u logᵖ(1/u)`, so the radial grading is
/// made steeper as `p` grows.
pub(crate) fn integrate_mu<G: Fn(Complex64) -> Complex64>(
    g: &G,
    f: &AnalyticFunction,
    power: f64,
    scheme: &QuadratureScheme,
    tol: f64,
) -> Result<DiskIntegral> {
    let angular = Angular::for_function(f, power);
    let graded = if angular.graded {
        (0.25 * power).max(RADIAL_GRADING)
    } else {
        1.0
    };
    let ang_tol = 0.1 * tol;
    let mut n = scheme.n_radial;
    let (mut prev, _, _) = disk_pass(g, &radial_rule(scheme.alpha, n, graded)?, &angular, scheme, ang_tol);
    let mut out = DiskIntegral {
        value: prev,
        error: f64::INFINITY,
        previous: prev,
        converged: false,
    };
    let mut last_error = f64::INFINITY;
    for _ in 0..scheme.max_refinements.max(1) {
        n *= 2;
        let (v, s, ea) = disk_pass(g, &radial_rule(scheme.alpha, n, graded)?, &angular, scheme, ang_tol);
        let error = (v - prev).norm() + ea;
        out = DiskIntegral {
            value: v,
            error,
            previous: prev,
            converged: error <= tol * s.max(1e-300),
        };
        let stalled = error > 0.5 * last_error && error < STALL_FACTOR * tol * s;
        if out.converged || stalled {
            break;
        }
        last_error = error;
        prev = v;
    }
    Ok(out)
}

fn check_p(op: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("p = {p} must be finite and > 0")))
    }
}

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("alpha = {alpha} must exceed -1")))
    }
}

#[inline]
pub(crate) fn abs_pow(w: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        w.norm_sqr()
    } else {
        w.norm_sqr().powf(0.5 * p)
    }
}

/// Integral mean `M_p(r, f) = ((1/2π)∫|f(re^{iθ})|^p dθ)^{1/p}`.
pub fn circle_mean(f: &AnalyticFunction, p: f64, r: f64, scheme: &QuadratureScheme) -> Result<f64> {
    check_p("circle_mean", p)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("circle_mean", format!("radius {r} must lie in [0, 1)")));
    }
    scheme.validate()?;
    let g = |z: Complex64| Complex64::new(abs_pow(f.eval_unchecked(z, 0), p), 0.0);
    let m = Angular::for_function(f, p).mean(r, scheme.n_angular, scheme.max_refinements, scheme.rel_tol, &g);
    if !m.converged {
        return Err(Error::Convergence {
            op: "circle_mean",
            last: m.value.re.powf(1.0 / p),
            previous: (m.value.re - m.error).max(0.0).powf(1.0 / p),
        });
    }
    Ok(m.value.re.powf(1.0 / p))
}

/// Weighted Bergman norm with its error estimate; never fails on
/// non-convergence, the flag says so instead.
pub fn bergman_norm_estimate(f: &AnalyticFunction, p: f64, alpha: f64, scheme: &QuadratureScheme) -> Result<NormResult> {
    check_p("bergman_norm", p)?;
    check_alpha("bergman_norm", alpha)?;
    let scheme = scheme.with_alpha(alpha)?;
    let g = |z: Complex64| Complex64::new(abs_pow(f.eval_unchecked(z, 0), p), 0.0);
    let d = integrate_mu(&g, f, p, &scheme, p * scheme.rel_tol)?;
    let integral = d.value.re.max(0.0);
    let value = integral.powf(1.0 / p);
    let abs_error_estimate = if integral > 0.0 {
        value * d.error / (p * integral)
    } else {
        d.error.powf(1.0 / p)
    };
    Ok(NormResult {
        value,
        abs_error_estimate,
        scheme_used: scheme,
        converged: abs_error_estimate <= scheme.rel_tol * value.max(1e-300),
    })
}

/// `‖f‖_{A^p_α} = (∫|f|^p dμ_α)^{1/p}`.
///
/// Fails with a convergence error carrying the last two iterates when the
/// node doublings run out before reaching `rel_tol`.
pub fn bergman_norm(f: &AnalyticFunction, p: f64, alpha: f64, scheme: &QuadratureScheme) -> Result<NormResult> {
    let res = bergman_norm_estimate(f, p, alpha, scheme)?;
    if !res.converged {
        return Err(Error::Convergence {
            op: "bergman_norm",
            last: res.value,
            previous: res.value - res.abs_error_estimate,
        });
    }
    Ok(res)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `∫ |f|^p z dμ_α`
    ZWeighted,
    /// `∫ |f|^{p−2} f dμ_α`
    FWeighted,
}

/// Complex moments of `f` against `dμ_α`.
pub fn disk_moment(
    f: &AnalyticFunction,
    p: f64,
    alpha: f64,
    kind: MomentKind,
    scheme: &QuadratureScheme,
) -> Result<Complex64> {
    check_p("disk_moment", p)?;
    check_alpha("disk_moment", alpha)?;
    if kind == MomentKind::FWeighted && p <= 1.0 {
        return Err(Error::domain("disk_moment", format!("f-weighted moment needs p > 1, got {p}")));
    }
    let scheme = scheme.with_alpha(alpha)?;
    let d = match kind {
        MomentKind::ZWeighted => {
            let g = |z: Complex64| z * abs_pow(f.eval_unchecked(z, 0), p);
            integrate_mu(&g, f, p, &scheme, scheme.rel_tol)?
        }
        MomentKind::FWeighted => {
            let g = |z: Complex64| {
                let w = f.eval_unchecked(z, 0);
                let m2 = w.norm_sqr();
                if m2 == 0.0 {
                    w
                } else {
                    w * m2.powf(0.5 * p - 1.0)
                }
            };
            integrate_mu(&g, f, p, &scheme, scheme.rel_tol)?
        }
    };
    if !d.converged {
        return Err(Error::Convergence {
            op: "disk_moment",
            last: d.value.norm(),
            previous: d.previous.norm(),
        });
    }
    Ok(d.value)
}

/// Right-hand side of the Hardy–Stein identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyStein {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Set when `|f|` dropped below `1e-8` on the grid; for `p < 2` the
    /// integrand is then singular and the value is unreliable.
    pub singular_warning: bool,
}

/// `(p²/(2r)) ∫_{r𝔻} |f′|² |f|^{p−2} dA`, which equals `d/dr M_p^p(r, f)`.
pub fn hardy_stein_rhs(f: &AnalyticFunction, p: f64, r: f64, scheme: &QuadratureScheme) -> Result<HardyStein> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain("hardy_stein_rhs", format!("p = {p} must exceed 1")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain("hardy_stein_rhs", format!("radius {r} must lie in (0, 1)")));
    }
    scheme.validate()?;
    let min_f = Cell::new(f64::INFINITY);
    let g = |z: Complex64| {
        let w = f.eval_unchecked(z, 0);
        let d = f.eval_unchecked(z, 1);
        let m2 = w.norm_sqr();
        min_f.set(min_f.get().min(m2.sqrt()));
        let v = if p == 2.0 {
            d.norm_sqr()
        } else if m2 == 0.0 {
            if p > 2.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d.norm_sqr() * m2.powf(0.5 * p - 1.0)
        };
        Complex64::new(v, 0.0)
    };
    let angular = Angular::for_function(f, p);
    // ∫_{r𝔻} h dA = ∫₀^r 2ρ ⟨h⟩(ρ) dρ, dA normalized
    let pass = |n: usize| -> Result<(f64, f64)> {
        let (x, w) = gauss_legendre(n)?;
        let mut s = KahanSum::default();
        let mut e = KahanSum::default();
        for (x, w) in x.into_iter().zip(w) {
            let rho = r * x;
            let m = angular.mean(rho, scheme.n_angular, scheme.max_refinements, 0.1 * scheme.rel_tol, &g);
            s.add(r * w * 2.0 * rho * m.value.re);
            e.add(r * w * 2.0 * rho * m.error);
        }
        Ok((s.value(), e.value()))
    };
    let factor = p * p / (2.0 * r);
    let mut n = scheme.n_radial;
    let (mut prev, _) = pass(n)?;
    let mut value = prev;
    let mut err = f64::INFINITY;
    for _ in 0..scheme.max_refinements.max(1) {
        n *= 2;
        let (v, ea) = pass(n)?;
        err = (v - prev).abs() + ea;
        value = v;
        if err <= scheme.rel_tol * v.abs().max(1e-300) {
            break;
        }
        prev = v;
    }
    if !(err <= scheme.rel_tol * value.abs().max(1e-300)) && !(value == 0.0 && err == 0.0) {
        return Err(Error::Convergence {
            op: "hardy_stein_rhs",
            last: factor * value,
            previous: factor * prev,
        });
    }
    Ok(HardyStein {
        value: factor * value,
        abs_error_estimate: factor * err,
        singular_warning: min_f.get() < 1e-8,
    })
}

/// `M_α = (1/π)∫_{2π/3}^{π} min{(2|cos t|)^α, (2|cos t| − 1)^α} dt`.
///
/// For `α ≥ 0` the minimum is `(2|cos t| − 1)^α`, which vanishes like
/// `(t − 2π/3)^α`; that endpoint factor is taken into the Gauss–Jacobi
/// weight. For `α < 0` the integrand `(2|cos t|)^α` is smooth.
pub fn m_alpha_integral(alpha: f64) -> Result<f64> {
    check_alpha("m_alpha_integral", alpha)?;
    let len = PI / 3.0;
    let t0 = 2.0 * PI / 3.0;
    let estimate = |n: usize| -> Result<f64> {
        let mut s = KahanSum::default();
        if alpha >= 0.0 {
            // 2|cos(t0 + x)| − 1 = √3 sin x − 2 sin²(x/2), x = len·s
            let (nodes, w) = gauss_jacobi(n, alpha)?;
            for (sv, w) in nodes.into_iter().zip(w) {
                let x = len * sv;
                let h = (3.0.sqrt() * x.sin() - 2.0 * (0.5 * x).sin().powi(2)) / x;
                s.add(w * h.powf(alpha));
            }
            Ok(len.powf(alpha + 1.0) * s.value() / PI)
        } else {
            let (nodes, w) = gauss_legendre(n)?;
            for (sv, w) in nodes.into_iter().zip(w) {
                let t = t0 + len * sv;
                s.add(w * (2.0 * t.cos().abs()).powf(alpha));
            }
            Ok(len * s.value() / PI)
        }
    };
    let mut n = 32;
    let mut prev = estimate(n)?;
    for _ in 0..6 {
        n *= 2;
        let cur = estimate(n)?;
        if (cur - prev).abs() <= 1e-14 * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// `∫₀¹ h dσ_α` for the probability measure `dσ_α = 2(1 − r²)^α dr / B(½, α+1)`.
///
/// `breaks` are points in `(0, 1)` where `h` may have kinks; each piece gets
/// its own rule, the last one with the endpoint weight `(1 − r)^α` built in.
pub fn sigma_expectation<H: Fn(f64) -> f64>(alpha: f64, breaks: &[f64], h: H) -> Result<f64> {
    check_alpha("sigma_expectation", alpha)?;
    let n = 48;
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&b| b > 0.0 && b < 1.0).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = alloc::vec![0.0];
    edges.extend(pts);
    let (x, wx) = gauss_legendre(n)?;
    let (t, wt) = gauss_jacobi(n, alpha)?;
    let integrate = |h: &dyn Fn(f64) -> f64| {
        let mut s = KahanSum::default();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for (&x, &w) in x.iter().zip(&wx) {
                let r = a + (b - a) * x;
                s.add((b - a) * w * 2.0 * ((1.0 - r) * (1.0 + r)).powf(alpha) * h(r));
            }
        }
        // last piece: r = 1 − L·t, (1 − r²)^α = (L t)^α (2 − L t)^α
        let a = *edges.last().unwrap();
        let len = 1.0 - a;
        for (&t, &w) in t.iter().zip(&wt) {
            let u = len * t;
            s.add(len.powf(alpha + 1.0) * w * 2.0 * (2.0 - u).powf(alpha) * h(1.0 - u));
        }
        s.value()
    };
    let total = integrate(&|_| 1.0);
    Ok(integrate(&h) / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jacobi_rule_integrates_monomials_exactly() {
        for a in [-0.5, 0.0, 1.0, 2.5, 7.0] {
            let (t, w) = gauss_jacobi(10, a).unwrap();
            assert!(t.windows(2).all(|p| p[0] < p[1]));
            assert!(t[0] > 0.0 && t[9] < 1.0);
            for k in 0..20 {
                let s: f64 = t.iter().zip(&w).map(|(t, w)| w * t.powi(k)).sum();
                assert_relative_eq!(s, 1.0 / (a + k as f64 + 1.0), max_relative = 1e-13);
            }
        }
        assert!(gauss_jacobi(4, -1.0).is_err());
        assert!(gauss_jacobi(0, 0.0).is_err());
    }

    #[test]
    fn radial_rule_reproduces_beta_moments() {
        for alpha in [-0.5, 0.0, 1.0, 2.5] {
            for m in [1.0, 3.0, 8.0] {
                let rule = radial_rule(alpha, 64, m).unwrap();
                assert!(rule.r.iter().all(|&r| r > 0.0 && r < 1.0));
                for k in 0..6 {
                    let s: f64 = rule.r.iter().zip(&rule.w).map(|(r, w)| w * r.powi(2 * k)).sum();
                    let exact = beta(k as f64 + 1.0, alpha + 1.0).unwrap();
                    assert_relative_eq!(s, exact, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn scheme_validation() {
        let s = QuadratureScheme::default();
        assert!(s.validate().is_ok());
        assert!(QuadratureScheme { n_radial: 4, ..s }.validate().is_err());
        assert!(QuadratureScheme { n_angular: 17, ..s }.validate().is_err());
        assert!(QuadratureScheme { alpha: -1.0, ..s }.validate().is_err());
    }

    #[test]
    fn circle_mean_examples() {
        let s = QuadratureScheme::default();
        for n in 0..5 {
            let f = AnalyticFunction::monomial(n, c(1.0, 0.0)).unwrap();
            for p in [0.5, 1.0, 2.0, 6.25] {
                assert_relative_eq!(circle_mean(&f, p, 0.7, &s).unwrap(), 0.7.powi(n as i32), max_relative = 1e-13);
            }
        }
        let coeffs = vec![c(0.3, 0.1), c(-1.0, 0.5), c(0.25, 0.0), c(0.0, 2.0)];
        let f = AnalyticFunction::taylor(coeffs.clone()).unwrap();
        let r: f64 = 0.6;
        let exact = coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.norm_sqr() * r.powi(2 * n as i32))
            .sum::<f64>()
            .sqrt();
        assert_relative_eq!(circle_mean(&f, 2.0, r, &s).unwrap(), exact, max_relative = 1e-13);
        let m = AnalyticFunction::moebius(c(0.3, -0.4)).unwrap();
        assert_relative_eq!(circle_mean(&m, 2.0, 0.0, &s).unwrap(), 0.5, max_relative = 1e-15);
        assert!(circle_mean(&m, 2.0, 1.0, &s).is_err());
        assert!(circle_mean(&m, 0.0, 0.5, &s).is_err());
    }

    #[test]
    fn bergman_norm_of_monomials() {
        let s = QuadratureScheme::default();
        let z = AnalyticFunction::monomial(1, c(1.0, 0.0)).unwrap();
        let r = bergman_norm(&z, 2.0, 0.0, &s).unwrap();
        assert_relative_eq!(r.value, FRAC_1_SQRT_2, max_relative = 1e-13);
        assert!(r.converged);
        for alpha in [-0.5, 0.0, 1.0, 2.5] {
            for n in [0u32, 3, 8] {
                for p in [1.0, 6.25] {
                    let f = AnalyticFunction::monomial(n, c(1.0, 0.0)).unwrap();
                    let exact = ((alpha + 1.0) * beta(n as f64 * p / 2.0 + 1.0, alpha + 1.0).unwrap()).powf(1.0 / p);
                    let got = bergman_norm(&f, p, alpha, &s).unwrap().value;
                    assert_relative_eq!(got, exact, max_relative = 1e-10);
                }
            }
        }
        assert!(matches!(bergman_norm(&z, 2.0, -1.0, &s), Err(Error::Domain { .. })));
    }

    #[test]
    fn bergman_norm_of_log_model() {
        let f = AnalyticFunction::log_one_sided(-0.5).unwrap();
        let got = bergman_norm(&f, 2.0, 0.0, &QuadratureScheme::default()).unwrap();
        let exact = 0.5 * (PI * PI / 6.0 - 1.0).sqrt();
        assert_relative_eq!(got.value, exact, max_relative = 1e-9);
    }

    #[test]
    fn moments_vanish_by_symmetry() {
        let s = QuadratureScheme::default();
        let z = AnalyticFunction::monomial(1, c(1.0, 0.0)).unwrap();
        for p in [2.0, 4.0, 6.25] {
            assert!(disk_moment(&z, p, 0.5, MomentKind::ZWeighted, &s).unwrap().norm() < 1e-14);
        }
        assert!(disk_moment(&z, 4.0, 0.0, MomentKind::FWeighted, &s).unwrap().norm() < 1e-14);
        assert!(matches!(
            disk_moment(&z, 1.0, 0.0, MomentKind::FWeighted, &s),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn z_moment_matches_brute_force_grid() {
        // midpoint rule on a 2000 × 2000 polar grid
        let f = AnalyticFunction::taylor(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let got = disk_moment(&f, 4.0, 0.0, MomentKind::ZWeighted, &QuadratureScheme::default()).unwrap();
        let n = 2000;
        let mut acc = ComplexKahanSum::default();
        for i in 0..n {
            let r = (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let t = TAU * (j as f64 + 0.5) / n as f64;
                let z = Complex64::from_polar(r, t);
                let w = f.eval_unchecked(z, 0).norm_sqr();
                acc.add(z * (w * w) * (2.0 * r / (n * n) as f64));
            }
        }
        assert!((got - acc.value()).norm() < 1e-6, "{got} vs {}", acc.value());
    }

    #[test]
    fn hardy_stein_examples() {
        let s = QuadratureScheme::default();
        let z = AnalyticFunction::monomial(1, c(1.0, 0.0)).unwrap();
        for r in [0.1, 0.5, 0.9] {
            assert_relative_eq!(hardy_stein_rhs(&z, 2.0, r, &s).unwrap().value, 2.0 * r, max_relative = 1e-12);
        }
        let k = AnalyticFunction::constant(c(2.0, 1.0)).unwrap();
        assert_eq!(hardy_stein_rhs(&k, 3.0, 0.5, &s).unwrap().value, 0.0);

        let f = AnalyticFunction::taylor(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let h = 1e-5;
        let m2 = |r: f64| circle_mean(&f, 2.0, r, &s).unwrap().powi(2);
        let fd = (m2(0.5 + h) - m2(0.5 - h)) / (2.0 * h);
        let hs = hardy_stein_rhs(&f, 2.0, 0.5, &s).unwrap();
        assert!((fd - hs.value).abs() < 1e-6);
        assert!(!hs.singular_warning);
        assert!(hardy_stein_rhs(&z, 1.0, 0.5, &s).is_err());
    }

    #[test]
    fn m_alpha_values() {
        assert_relative_eq!(m_alpha_integral(0.0).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(
            m_alpha_integral(1.0).unwrap(),
            (3.0.sqrt() - PI / 3.0) / PI,
            max_relative = 1e-13
        );
        // midpoint rule on a fine grid
        let n = 2_000_000;
        let h = (PI / 3.0) / n as f64;
        let mut s = KahanSum::default();
        for i in 0..n {
            let t = 2.0 * PI / 3.0 + (i as f64 + 0.5) * h;
            s.add((2.0 * t.cos().abs()).powf(-0.5));
        }
        assert!((m_alpha_integral(-0.5).unwrap() - s.value() * h / PI).abs() < 1e-8);
        assert!(m_alpha_integral(-1.0).is_err());
    }

    #[test]
    fn sigma_is_a_probability_measure() {
        for alpha in [-0.5, 0.0, 2.0] {
            assert_relative_eq!(sigma_expectation(alpha, &[], |_| 1.0).unwrap(), 1.0, max_relative = 1e-14);
            // ∫ r² dσ = B(3/2, α+1)/B(1/2, α+1)
            let exact = beta(1.5, alpha + 1.0).unwrap() / beta(0.5, alpha + 1.0).unwrap();
            assert_relative_eq!(sigma_expectation(alpha, &[0.3], |r| r * r).unwrap(), exact, max_relative = 1e-12);
        }
    }
}
