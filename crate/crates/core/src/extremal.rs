//! Numerical lower bounds for `C̃_α(p) = max{‖f‖_{A^p_α} : ρ(f) ≤ 1, f(0) = 0}`.
//!
//! Candidates are truncated power series `c₁z + … + c_Nz^N` with complex
//! coefficients, divided by their numeric Bloch seminorm, so every iterate is
//! feasible and the best value found is a genuine lower bound. Inside the
//! search the norm comes from a fixed tensor rule that is exact for even `p`;
//! the winner is re-evaluated with the adaptive quadrature. The two log
//! functions with seminorm one are always evaluated as exact candidates too.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{asymptotic_bounds, bound_2n, growth_lower, growth_upper};
use crate::error::{Error, Result};
use crate::func::{bloch_sup_numeric, bloch_sup_with, AnalyticFunction, BlochGrid, TaylorSeries};
use crate::optimize::nelder_mead;
use crate::quadrature::{bergman_norm_estimate, disk_moment, radial_rule, MomentKind, QuadratureScheme};
use crate::sum::KahanSum;

const INITIAL_STEP: f64 = 0.05;
/// Floor on `rel_tol` for the exact log candidates and the residual: near
/// their boundary singularities rounding noise caps the attainable accuracy
/// at large `p`.
const EXACT_REL_TOL: f64 = 1e-7;
const KERNEL_START_RADIUS: f64 = 0.9;
/// Share of `max_iters` spent screening each lacunary stride.
const SCREEN_DIVISOR: usize = 8;
/// Tolerance of the sandwich and monotonicity checks in a scan.
pub const SCAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Number of free coefficients `c₁ … c_N`.
    pub n_coeffs: usize,
    pub restarts: usize,
    /// Simplex iterations per restart.
    pub max_iters: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_coeffs: 24,
            restarts: 16,
            max_iters: 2000,
            step_tol: 1e-7,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_coeffs < 2 || self.restarts < 1 || self.max_iters < 1 {
            return Err(Error::argument(
                "search_c_tilde",
                format!(
                    "need n_coeffs >= 2, restarts >= 1, max_iters >= 1; got {}, {}, {}",
                    self.n_coeffs, self.restarts, self.max_iters
                ),
            ));
        }
        if !(self.step_tol > 0.0 && self.step_tol.is_finite()) {
            return Err(Error::argument("search_c_tilde", format!("step_tol = {}", self.step_tol)));
        }
        Ok(())
    }
}

/// How a restart was initialized.
#[derive(Debug, Clone, PartialEq)]
pub enum Start {
    /// Coefficients of `−½log(1−z)`.
    LogOneSided,
    /// Coefficients of `½log((1+z)/(1−z))`, searched among odd series.
    LogTwoSided,
    /// Primitive of the kernel `(1 − ζ̄z)^{−2(α+2)/p}`.
    Kernel(Complex64),
    /// `z(1 + z^s/2 + z^{2s}/3 + …)`, searched among series `z·g(z^s)`.
    Lacunary(usize),
    Random,
    /// Incumbent of a neighbouring `p`.
    Warm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartLog {
    pub start: Start,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best value of the search objective (fixed rule), NaN if it failed.
    pub value: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchDiagnostics {
    pub restarts: Vec<RestartLog>,
    /// `polynomial`, `log1` or `log2`.
    pub incumbent: &'static str,
    /// Accurate value of the best polynomial.
    pub polynomial_value: f64,
    /// Accurate values of the exact log candidates (NaN when not computed).
    pub log1_value: f64,
    pub log2_value: f64,
    /// Best objective value after continuing the best polynomial with
    /// twice as many coefficients; the gap to the search value measures the
    /// truncation bias.
    pub doubled_value: f64,
    /// Best value along the automorphism orbit of that polynomial, and the
    /// shift `a` that attains it.
    pub orbit_value: f64,
    pub orbit_shift: Complex64,
    pub search_value: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalEstimate {
    pub alpha: f64,
    pub p: f64,
    /// Lower bound for `C̃_α(p)`.
    pub c_tilde: f64,
    /// The normalized incumbent.
    pub function: AnalyticFunction,
    /// Taylor coefficients of the incumbent, `c₀ = 0` first.
    pub coefficients: TaylorSeries,
    /// Functional-equation defect of the incumbent (NaN for `p ≤ 1`).
    pub residual: f64,
    pub diagnostics: SearchDiagnostics,
}

fn poly_deriv(dc: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for ck in dc.iter().rev() {
        acc = acc * z + ck;
    }
    acc
}

/// `cos kθ_j`, `sin kθ_j` for `θ_j = 2πj/n_angles` and `k = 0..=max_power`,
/// row-major by angle. Ring values become independent dot products, which
/// pipeline far better than Horner's serial chain.
struct PowerTable {
    n_angles: usize,
    width: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PowerTable {
    fn new(n_angles: usize, max_power: usize) -> Self {
        let width = max_power + 1;
        let mut cos = Vec::with_capacity(n_angles * width);
        let mut sin = Vec::with_capacity(n_angles * width);
        for j in 0..n_angles {
            for k in 0..width {
                // reduce kj mod n first so the argument stays small
                let t = TAU * ((k * j) % n_angles) as f64 / n_angles as f64;
                cos.push(libm::cos(t));
                sin.push(libm::sin(t));
            }
        }
        PowerTable {
            n_angles,
            width,
            cos,
            sin,
        }
    }

    /// `|Σ_k a_k r^k e^{ikθ_j}|²` for every angle, `a` indexed by power.
    fn ring_abs2(&self, a: &[Complex64], r: f64, out: &mut [f64]) {
        let m = a.len().min(self.width);
        let mut ar = Vec::with_capacity(m);
        let mut ai = Vec::with_capacity(m);
        let mut rk = 1.0;
        for ak in &a[..m] {
            ar.push(ak.re * rk);
            ai.push(ak.im * rk);
            rk *= r;
        }
        for (j, o) in out.iter_mut().enumerate().take(self.n_angles) {
            let cs = &self.cos[j * self.width..j * self.width + m];
            let sn = &self.sin[j * self.width..j * self.width + m];
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..m {
                re += ar[k] * cs[k] - ai[k] * sn[k];
                im += ar[k] * sn[k] + ai[k] * cs[k];
            }
            *o = re * re + im * im;
        }
    }
}

/// Largest number of coefficients the search accepts.
const MAX_TABLE_WIDTH: usize = 257;
/// Beyond this `p/2` the fixed rule stops growing with `p`: it stays exact
/// for even `p ≤ 16` and the winner is re-certified adaptively anyway.
const MAX_RULE_HALF_POWER: f64 = 8.0;

/// Numeric Bloch seminorm of `c₁z + … + c_Nz^N`, grid pass on `table`.
fn poly_seminorm(c: &[Complex64], grid: &BlochGrid, table: Option<&PowerTable>) -> f64 {
    let dc: Vec<Complex64> = c.iter().enumerate().map(|(k, ck)| ck * (k + 1) as f64).collect();
    let deriv = |z: Complex64| poly_deriv(&dc, z);
    match table {
        Some(t) if t.n_angles == grid.n_angles.max(8) && dc.len() <= t.width => {
            let ring = |r: f64, out: &mut [f64]| {
                t.ring_abs2(&dc, r, out);
                out.iter_mut().for_each(|v| *v = libm::sqrt(*v));
            };
            bloch_sup_with(ring, deriv, grid).value
        }
        _ => bloch_sup_numeric(deriv, grid).value,
    }
}

/// Tensor rule on the disk; weights include `(α+1)` and `1/n_angular`.
struct FixedRule {
    radii: Vec<f64>,
    weights: Vec<f64>,
    table: PowerTable,
}

impl FixedRule {
    /// Exact for `|f|^p` with `p ≤ 16` even and `f` of degree `n`; otherwise
    /// the angular count is doubled for safety.
    fn new(alpha: f64, p: f64, n: usize) -> Result<Self> {
        let even = p == libm::round(p) && (p as u64) % 2 == 0;
        let d = (libm::ceil((0.5 * p).min(MAX_RULE_HALF_POWER)) as usize).max(1) * n;
        let mut n_angular = (d + 1).next_power_of_two().max(64);
        if !even {
            n_angular *= 2;
        }
        let n_radial = (d + 16).clamp(32, 320);
        let rule = radial_rule(alpha, n_radial, 1.0)?;
        let c = (alpha + 1.0) / n_angular as f64;
        Ok(FixedRule {
            radii: rule.r,
            weights: rule.w.into_iter().map(|w| w * c).collect(),
            table: PowerTable::new(n_angular, n),
        })
    }

    /// `∫|f|^p dμ_α` for `f = c₁z + … + c_Nz^N`.
    fn integral(&self, c: &[Complex64], p: f64) -> f64 {
        let mut a = Vec::with_capacity(c.len() + 1);
        a.push(Complex64::new(0.0, 0.0));
        a.extend_from_slice(c);
        let half = 0.5 * p;
        let int_half = (half == libm::round(half) && half <= 64.0).then_some(half as i32);
        let mut ring = vec![0.0; self.table.n_angles];
        let mut total = KahanSum::default();
        for (&r, &w) in self.radii.iter().zip(&self.weights) {
            self.table.ring_abs2(&a, r, &mut ring);
            let s: f64 = match int_half {
                Some(h) => ring.iter().map(|v| powi(*v, h)).sum(),
                None => ring.iter().map(|v| libm::pow(*v, half)).sum(),
            };
            total.add(w * s);
        }
        total.value()
    }
}

fn powi(x: f64, n: i32) -> f64 {
    let (mut base, mut n, mut acc) = (x, n, 1.0);
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

struct Objective {
    p: f64,
    rule: FixedRule,
    grid: BlochGrid,
    grid_table: PowerTable,
}

impl Objective {
    fn new(alpha: f64, p: f64, n: usize) -> Result<Self> {
        if n + 1 > MAX_TABLE_WIDTH {
            return Err(Error::argument("search_c_tilde", format!("n_coeffs = {n} exceeds {}", MAX_TABLE_WIDTH - 2)));
        }
        let grid = BlochGrid::for_polynomial(n);
        Ok(Objective {
            p,
            rule: FixedRule::new(alpha, p, n)?,
            grid_table: PowerTable::new(grid.n_angles.max(8), n),
            grid,
        })
    }

    fn seminorm(&self, c: &[Complex64]) -> f64 {
        poly_seminorm(c, &self.grid, Some(&self.grid_table))
    }
}

impl Objective {
    /// `‖f/ρ(f)‖_{A^p_α}` on the fixed rule, NaN for a vanishing seminorm.
    fn value(&self, c: &[Complex64]) -> f64 {
        let rho = self.seminorm(c);
        if !(rho > 1e-300) {
            return f64::NAN;
        }
        libm::pow(self.rule.integral(c, self.p), 1.0 / self.p) / rho
    }
}

/// Which coefficients a restart may move: indices `1, 1 + s, 1 + 2s, …`
/// (counting `c₁` as index 1). The others stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Layout(usize);

impl Layout {
    const FULL: Layout = Layout(1);

    fn unpack(self, x: &[f64], n: usize) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for (j, ck) in c.iter_mut().step_by(self.0).enumerate() {
            *ck = Complex64::new(x[2 * j], x[2 * j + 1]);
        }
        c
    }

    fn pack(self, c: &[Complex64]) -> Vec<f64> {
        c.iter().step_by(self.0).flat_map(|ck| [ck.re, ck.im]).collect()
    }
}

struct Run {
    coeffs: Vec<Complex64>,
    value: f64,
    iterations: usize,
    evaluations: usize,
}

/// Maximizes the objective from `start`, restarting the simplex around the
/// incumbent with half the step while the budget lasts and it still helps.
fn climb(obj: &Objective, start: &[Complex64], layout: Layout, max_iters: usize, step_tol: f64, step: f64) -> Run {
    let n = start.len();
    let mut x = layout.pack(start);
    let mut best = obj.value(start);
    let (mut iterations, mut evaluations, mut step) = (0, 1, step);
    while iterations < max_iters && step > step_tol {
        let m = nelder_mead(|x| -obj.value(&layout.unpack(x, n)), &x, step, max_iters - iterations, step_tol);
        iterations += m.iterations;
        evaluations += m.evaluations;
        let improved = -m.value > best * (1.0 + 1e-13) || best.is_nan();
        if -m.value >= best || best.is_nan() {
            best = -m.value;
            x = m.x;
        }
        if !improved && m.iterations < max_iters {
            break;
        }
        step *= 0.5;
    }
    Run {
        coeffs: layout.unpack(&x, n),
        value: best,
        iterations,
        evaluations,
    }
}

/// Scales coefficients to seminorm one so that a fixed simplex step means
/// the same thing for every start.
fn normalized(c: Vec<Complex64>, obj: &Objective) -> Vec<Complex64> {
    let rho = obj.seminorm(&c);
    if rho > 0.0 {
        c.into_iter().map(|ck| ck / rho).collect()
    } else {
        c
    }
}

fn start_coefficients(start: &Start, n: usize, alpha: f64, p: f64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let re = |v: f64| Complex64::new(v, 0.0);
    match start {
        Start::LogOneSided => (1..=n).map(|k| re(0.5 / k as f64)).collect(),
        Start::LogTwoSided => (1..=n).map(|k| re(if k % 2 == 1 { 1.0 / k as f64 } else { 0.0 })).collect(),
        Start::Kernel(zeta) => {
            // ∫₀^z (1 − ζ̄w)^{−s} dw, binomial series
            let s = 2.0 * (alpha + 2.0) / p;
            let zb = zeta.conj();
            let mut b = re(1.0);
            let mut out = Vec::with_capacity(n);
            for j in 0..n {
                out.push(b / (j + 1) as f64);
                b = b * zb * ((s + j as f64) / (j + 1) as f64);
            }
            out
        }
        Start::Lacunary(s) => (0..n)
            .map(|k| re(if k % s == 0 { 1.0 / (k / s + 1) as f64 } else { 0.0 }))
            .collect(),
        Start::Random | Start::Warm => (1..=n)
            .map(|k| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / k as f64)
            .collect(),
    }
}

/// Strides `3..n` ordered by the value a short climb reaches from the
/// lacunary start, best first.
fn screen_strides(obj: &Objective, n: usize, alpha: f64, p: f64, config: &SearchConfig) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let budget = (config.max_iters / SCREEN_DIVISOR).max(1);
    let mut scored: Vec<(usize, f64)> = (3..n)
        .map(|s| {
            let c0 = normalized(start_coefficients(&Start::Lacunary(s), n, alpha, p, &mut rng), obj);
            (s, climb(obj, &c0, Layout(s), budget, config.step_tol, INITIAL_STEP).value)
        })
        .filter(|(_, v)| v.is_finite())
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.into_iter().map(|(s, _)| s).collect()
}

fn plan(restarts: usize, strides: &[usize], rng: &mut ChaCha8Rng) -> Vec<Start> {
    (0..restarts)
        .map(|i| match i {
            0 => Start::LogOneSided,
            1 => Start::LogTwoSided,
            2 => Start::Kernel(Complex64::new(KERNEL_START_RADIUS, 0.0)),
            3 | 4 if strides.len() > i - 3 => Start::Lacunary(strides[i - 3]),
            i if i % 2 == 1 => {
                let r = rng.gen_range(0.5..0.95);
                Start::Kernel(Complex64::from_polar(r, rng.gen_range(0.0..TAU)))
            }
            _ => Start::Random,
        })
        .collect()
}

/// Accurate value of a feasible candidate, lowered by the error estimate
/// when quadrature did not converge.
fn certified_norm(f: &AnalyticFunction, p: f64, alpha: f64, scheme: &QuadratureScheme) -> Result<(f64, Option<String>)> {
    let r = bergman_norm_estimate(f, p, alpha, scheme)?;
    if r.converged {
        Ok((r.value, None))
    } else {
        Ok((
            r.value - r.abs_error_estimate,
            Some(format!(
                "{}: quadrature stalled at {:.3e} absolute, value lowered accordingly",
                f.model_name(),
                r.abs_error_estimate
            )),
        ))
    }
}

/// Coefficients `1..=m` of `f∘φ_a − f(a)` for `f = c₁z + … + c_Nz^N` and
/// `φ_a(z) = (a − z)/(1 − āz)`. Composition with a disk automorphism keeps
/// the Bloch seminorm, so this stays feasible; the terms dropped past `m`
/// are of size `|a|^{m−N}`.
fn compose_automorphism(c: &[Complex64], a: Complex64, m: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let ab = a.conj();
    let mut phi = vec![zero; m + 1];
    phi[0] = a;
    let mut abk = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        // φ_k = a āᵏ − āᵏ⁻¹
        phi[k] = a * abk * ab - abk;
        abk *= ab;
    }
    let mul = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![zero; m + 1];
        for (i, xi) in x.iter().enumerate() {
            if *xi == zero {
                continue;
            }
            for (j, yj) in y.iter().enumerate().take(m + 1 - i) {
                out[i + j] += xi * yj;
            }
        }
        out
    };
    let mut acc = vec![zero; m + 1];
    for ck in c.iter().rev() {
        acc[0] += ck;
        acc = mul(&acc, &phi);
    }
    acc.remove(0);
    acc
}

const ORBIT_RADIUS: f64 = 0.5;
const ORBIT_STEP: f64 = 0.02;
const ORBIT_ITERS: usize = 200;

/// Best point of the automorphism orbit `a ↦ f∘φ_a − f(a)` near `a = 0`.
/// A maximizer is stationary along this orbit, which is what the
/// functional-equation residual measures.
fn orbit_polish(alpha: f64, p: f64, c: &[Complex64], step_tol: f64) -> Result<(Run, Complex64)> {
    let n = c.len();
    let m = 2 * n;
    let obj = Objective::new(alpha, p, m)?;
    // The seminorm is constant on the orbit; re-estimating it on a grid
    // would only add noise of the size of the gains sought here.
    let mut padded = c.to_vec();
    padded.resize(m, Complex64::new(0.0, 0.0));
    let rho = obj.seminorm(&padded);
    let at = |x: &[f64]| Complex64::new(x[0], x[1]);
    let value = |x: &[f64]| {
        let a = at(x);
        if a.norm() > ORBIT_RADIUS {
            f64::NAN
        } else {
            libm::pow(obj.rule.integral(&compose_automorphism(c, a, m), p), 1.0 / p)
        }
    };
    let base = value(&[0.0, 0.0]);
    let min = nelder_mead(|x| -value(x), &[0.0, 0.0], ORBIT_STEP, ORBIT_ITERS, step_tol);
    let (a, v) = if -min.value > base {
        (at(&min.x), -min.value)
    } else {
        (Complex64::new(0.0, 0.0), base)
    };
    Ok((
        Run {
            coeffs: compose_automorphism(c, a, m),
            value: v / rho,
            iterations: min.iterations,
            evaluations: min.evaluations + 1,
        },
        a,
    ))
}

/// Best lower bound for `C̃_α(p)` found from `config.restarts` starts.
pub fn search_c_tilde(alpha: f64, p: f64, config: &SearchConfig, scheme: &QuadratureScheme) -> Result<ExtremalEstimate> {
    search_from(alpha, p, config, scheme, None)
}

/// As [`search_c_tilde`], with one extra start from `warm` (coefficients
/// `c₁, c₂, …`, resized to `n_coeffs`).
pub fn search_c_tilde_warm(
    alpha: f64,
    p: f64,
    config: &SearchConfig,
    scheme: &QuadratureScheme,
    warm: &[Complex64],
) -> Result<ExtremalEstimate> {
    search_from(alpha, p, config, scheme, Some(warm))
}

fn search_from(
    alpha: f64,
    p: f64,
    config: &SearchConfig,
    scheme: &QuadratureScheme,
    warm: Option<&[Complex64]>,
) -> Result<ExtremalEstimate> {
    const OP: &str = "search_c_tilde";
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::domain(OP, format!("alpha = {alpha} must exceed -1")));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::domain(OP, format!("p = {p} must be positive")));
    }
    config.validate()?;
    scheme.validate()?;
    let n = config.n_coeffs;
    let obj = Objective::new(alpha, p, n)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let strides = if config.restarts > 3 {
        screen_strides(&obj, n, alpha, p, config)
    } else {
        Vec::new()
    };
    let mut starts = plan(config.restarts, &strides, &mut rng);
    if warm.is_some() {
        starts.push(Start::Warm);
    }

    let mut logs = Vec::with_capacity(starts.len());
    let mut best: Option<Run> = None;
    for (i, start) in starts.iter().enumerate() {
        rng.set_stream(i as u64 + 1);
        let c0 = match (start, warm) {
            (Start::Warm, Some(w)) => {
                let mut c: Vec<Complex64> = w.iter().copied().take(n).collect();
                c.resize(n, Complex64::new(0.0, 0.0));
                c
            }
            _ => start_coefficients(start, n, alpha, p, &mut rng),
        };
        let c0 = normalized(c0, &obj);
        let layout = match start {
            Start::LogTwoSided => Layout(2),
            Start::Lacunary(s) => Layout(*s),
            _ => Layout::FULL,
        };
        let run = climb(&obj, &c0, layout, config.max_iters, config.step_tol, INITIAL_STEP);
        let failure = (!run.value.is_finite()).then(|| "objective not finite at every vertex".to_string());
        logs.push(RestartLog {
            start: start.clone(),
            iterations: run.iterations,
            evaluations: run.evaluations,
            value: run.value,
            failure,
        });
        if run.value.is_finite() && best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    let mut best = best.ok_or_else(|| Error::Search {
        op: OP,
        detail: format!("{} restarts, none produced a finite objective", logs.len()),
    })?;

    // continue the incumbent with twice as many coefficients
    let doubled = {
        let obj2 = Objective::new(alpha, p, 2 * n)?;
        let mut c = best.coeffs.clone();
        c.resize(2 * n, Complex64::new(0.0, 0.0));
        let base = obj2.value(&c);
        let run = climb(&obj2, &c, Layout::FULL, (config.max_iters / 4).max(1), config.step_tol, 0.2 * INITIAL_STEP);
        if run.value > base {
            run
        } else {
            Run { value: base, ..run }
        }
    };
    let doubled_value = doubled.value;
    if doubled.value > best.value {
        best = doubled;
    }
    let (orbit, orbit_shift) = orbit_polish(alpha, p, &best.coeffs, config.step_tol)?;
    let orbit_value = orbit.value;
    if orbit.value > best.value {
        best = orbit;
    }

    let mut notes = Vec::new();
    // certified re-evaluation: divide by the larger of two seminorm estimates
    let rho = poly_seminorm(&best.coeffs, &BlochGrid::for_polynomial(best.coeffs.len()), None)
        .max(poly_seminorm(&best.coeffs, &BlochGrid::default(), None));
    let mut coeffs = Vec::with_capacity(best.coeffs.len() + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend(best.coeffs.iter().map(|c| c / rho));
    let poly = AnalyticFunction::Taylor(TaylorSeries::new(coeffs)?);
    let (poly_value, note) = certified_norm(&poly, p, alpha, scheme)?;
    notes.extend(note);

    let loose = QuadratureScheme {
        rel_tol: scheme.rel_tol.max(EXACT_REL_TOL),
        ..*scheme
    };
    let mut incumbent = ("polynomial", poly_value, poly);
    let mut exact = [f64::NAN; 2];
    for (slot, (name, f)) in [
        ("log1", AnalyticFunction::log_one_sided(-0.5)?),
        ("log2", AnalyticFunction::log_two_sided(0.5)?),
    ]
    .into_iter()
    .enumerate()
    {
        match certified_norm(&f, p, alpha, &loose) {
            Ok((v, note)) => {
                notes.extend(note);
                exact[slot] = v;
                if v > incumbent.1 {
                    incumbent = (name, v, f);
                }
            }
            Err(e) => notes.push(format!("{name}: {e}")),
        }
    }
    let (source, c_tilde, function) = incumbent;

    let coefficients = match &function {
        AnalyticFunction::Taylor(t) => t.clone(),
        f => f.taylor_coefficients(n)?,
    };
    let residual = if p > 1.0 {
        match functional_equation_residual(&function, p, alpha, &loose) {
            Ok(r) => r,
            Err(e) => {
                notes.push(format!("residual: {e}"));
                f64::NAN
            }
        }
    } else {
        f64::NAN
    };

    Ok(ExtremalEstimate {
        alpha,
        p,
        c_tilde,
        function,
        coefficients,
        residual,
        diagnostics: SearchDiagnostics {
            restarts: logs,
            incumbent: source,
            polynomial_value: poly_value,
            log1_value: exact[0],
            log2_value: exact[1],
            doubled_value,
            orbit_value,
            orbit_shift,
            search_value: best.value,
            notes,
        },
    })
}

/// Stationarity defect of a candidate extremal:
/// `|∫|f|^p z dμ_α − p/(2(α+2))·conj(f′(0))·∫|f|^{p−2}f dμ_α| / ‖f‖^p`.
pub fn functional_equation_residual(f: &AnalyticFunction, p: f64, alpha: f64, scheme: &QuadratureScheme) -> Result<f64> {
    const OP: &str = "functional_equation_residual";
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(OP, format!("p = {p} must exceed 1")));
    }
    if f.value_at_zero().norm() > 1e-12 {
        return Err(Error::argument(OP, "the function must vanish at the origin"));
    }
    let norm = bergman_norm_estimate(f, p, alpha, scheme)?;
    if norm.value == 0.0 {
        return Err(Error::Degenerate {
            op: OP,
            detail: "the function vanishes identically".into(),
        });
    }
    let z = disk_moment(f, p, alpha, MomentKind::ZWeighted, scheme)?;
    let w = disk_moment(f, p, alpha, MomentKind::FWeighted, scheme)?;
    let d0 = f.eval(Complex64::new(0.0, 0.0), 1)?;
    let defect = z - w * d0.conj() * (p / (2.0 * (alpha + 2.0)));
    Ok(defect.norm() / libm::pow(norm.value, p).max(1e-30))
}

/// Interval around the smallest `p` with `C̃_α(p) > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PBracket {
    /// Heuristic: the search found no function with norm above one here.
    pub lo: f64,
    /// Certified: a feasible function with norm above one exists here.
    pub hi: f64,
    /// Every `(p, c_tilde)` evaluated, in order.
    pub evaluations: Vec<(f64, f64)>,
}

/// Bisection on `p` of "the search finds a norm above one", down to width
/// at most 0.1.
pub fn p_alpha_bracket(
    alpha: f64,
    p_lo: f64,
    p_hi: f64,
    config: &SearchConfig,
    scheme: &QuadratureScheme,
) -> Result<PBracket> {
    const OP: &str = "p_alpha_bracket";
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(OP, format!("alpha = {alpha} must be >= 0")));
    }
    if !(p_lo > 0.0 && p_lo < p_hi && p_hi.is_finite()) {
        return Err(Error::argument(OP, format!("need 0 < p_lo < p_hi, got {p_lo}, {p_hi}")));
    }
    let mut evaluations = Vec::new();
    let lo_est = search_c_tilde(alpha, p_lo, config, scheme)?;
    evaluations.push((p_lo, lo_est.c_tilde));
    let hi_est = search_c_tilde_warm(alpha, p_hi, config, scheme, &lo_est.coefficients.coefficients()[1..])?;
    evaluations.push((p_hi, hi_est.c_tilde));
    if lo_est.c_tilde > 1.0 || hi_est.c_tilde <= 1.0 {
        return Err(Error::Bracket {
            op: OP,
            p_lo,
            lo_value: lo_est.c_tilde,
            p_hi,
            hi_value: hi_est.c_tilde,
        });
    }
    let (mut lo, mut hi) = (p_lo, p_hi);
    let mut warm = lo_est.coefficients;
    while hi - lo > 0.1 {
        let mid = 0.5 * (lo + hi);
        let est = search_c_tilde_warm(alpha, mid, config, scheme, &warm.coefficients()[1..])?;
        evaluations.push((mid, est.c_tilde));
        if est.c_tilde > 1.0 {
            hi = mid;
        } else {
            lo = mid;
            warm = est.coefficients;
        }
    }
    Ok(PBracket { lo, hi, evaluations })
}

/// One row of [`asymptotic_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub p: f64,
    pub c_tilde: f64,
    pub ratio: f64,
    pub liminf_bound: f64,
    pub limsup_bound: f64,
    pub growth_lower: f64,
    pub growth_upper: f64,
    /// `bound_2n(α, max(2, ⌈p/2⌉), 1/√(α+1)) / p`, an upper bound for
    /// `C̃_α(p)/p` at this finite `p`.
    pub finite_upper_ratio: f64,
    pub residual: f64,
    /// `growth_lower − tol ≤ c_tilde ≤ growth_upper + tol`.
    pub sandwich_ok: bool,
    /// `c_tilde` not below the previous row's, within tolerance.
    pub monotone_ok: bool,
}

/// `C̃_α(p)/p` along an increasing grid of `p ≥ 1`, each search warm-started
/// from the previous incumbent.
pub fn asymptotic_scan(
    alpha: f64,
    p_grid: &[f64],
    config: &SearchConfig,
    scheme: &QuadratureScheme,
) -> Result<Vec<ScanRow>> {
    const OP: &str = "asymptotic_scan";
    if p_grid.iter().any(|&p| !(p >= 1.0 && p.is_finite())) || p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::argument(OP, "p grid must be increasing with every p >= 1"));
    }
    let (liminf_bound, limsup_bound) = asymptotic_bounds(alpha)?;
    let c2 = 1.0 / libm::sqrt(alpha + 1.0);
    let mut rows: Vec<ScanRow> = Vec::with_capacity(p_grid.len());
    let mut warm: Option<TaylorSeries> = None;
    for &p in p_grid {
        let est = match &warm {
            Some(w) => search_c_tilde_warm(alpha, p, config, scheme, &w.coefficients()[1..])?,
            None => search_c_tilde(alpha, p, config, scheme)?,
        };
        let lower = growth_lower(alpha, p)?;
        let upper = growth_upper(alpha, p)?;
        let m = (libm::ceil(0.5 * p) as u32).max(2);
        let monotone_ok = rows.last().map_or(true, |r| est.c_tilde >= r.c_tilde - SCAN_TOL);
        rows.push(ScanRow {
            p,
            c_tilde: est.c_tilde,
            ratio: est.c_tilde / p,
            liminf_bound,
            limsup_bound,
            growth_lower: lower,
            growth_upper: upper,
            finite_upper_ratio: bound_2n(alpha, m, c2)? / p,
            residual: est.residual,
            sandwich_ok: est.c_tilde >= lower - SCAN_TOL && est.c_tilde <= upper + SCAN_TOL,
            monotone_ok,
        });
        warm = Some(est.coefficients);
    }
    Ok(rows)
}
