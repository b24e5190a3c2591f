//! Analytic functions on the unit disk.
//!
//! [`AnalyticFunction`] covers the closed-form models the inclusion problems
//! revolve around (disk automorphisms, Bergman kernel powers, the two
//! logarithmic model functions, the Bloch/Besov equality families, atomic B¹
//! sums) plus truncated Taylor series. Every model evaluates `f`, `f′` and
//! `f″` in closed form and knows its own Taylor coefficients.

mod bloch;
mod parse;

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use bloch::bloch_sup_with;
pub use bloch::{
    bloch_norm, bloch_seminorm, bloch_seminorm_auto, bloch_sup_numeric, normalize_bloch, BlochGrid, BlochMode,
    BlochSup, MAX_RADIUS,
};

/// Largest truncation order accepted by [`AnalyticFunction::taylor_coefficients`].
pub const MAX_TAYLOR_ORDER: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients `a₀ … a_N` of a polynomial `Σ aₙ zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::argument("taylor_series", "at least one coefficient is required"));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::argument("taylor_series", format!("coefficient {k} is not finite")));
        }
        Ok(TaylorSeries { coeffs })
    }

    /// Real coefficients, a convenience for tests and seeds.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the last stored coefficient (not necessarily non-zero).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation of the series or of its first two derivatives.
    pub fn eval(&self, z: Complex64, order: u8) -> Complex64 {
        let c = &self.coeffs;
        let n = c.len() - 1;
        match order {
            0 => {
                let mut acc = c[n];
                for k in (0..n).rev() {
                    acc = acc * z + c[k];
                }
                acc
            }
            1 => {
                let mut p0 = c[n];
                let mut p1 = ZERO;
                for k in (0..n).rev() {
                    p1 = p1 * z + p0;
                    p0 = p0 * z + c[k];
                }
                p1
            }
            _ => {
                let mut p0 = c[n];
                let mut p1 = ZERO;
                let mut p2 = ZERO;
                for k in (0..n).rev() {
                    p2 = p2 * z + p1;
                    p1 = p1 * z + p0;
                    p0 = p0 * z + c[k];
                }
                p2 * 2.0
            }
        }
    }

    pub fn derivative(&self) -> TaylorSeries {
        if self.coeffs.len() == 1 {
            return TaylorSeries { coeffs: vec![ZERO] };
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect();
        TaylorSeries { coeffs }
    }

    /// Truncates or zero-pads to `a₀ … a_N`.
    pub fn resized(&self, n: usize) -> TaylorSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, ZERO);
        TaylorSeries { coeffs }
    }
}

/// One term `b · φ_a` of an atomic B¹ decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub b: Complex64,
    pub a: Complex64,
}

/// An analytic function on the unit disk.
///
/// Construct through the checked constructors (or [`str::parse`] with the
/// spec grammar) so the parameter invariants hold; [`AnalyticFunction::validate`]
/// re-checks a hand-built value.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    Taylor(TaylorSeries),
    /// `φ_a(z) = (a − z)/(1 − āz)`.
    Moebius { a: Complex64 },
    /// `k_ζ(z) = (1 − ζ̄z)^(−2(α+2)/p)`.
    Kernel { zeta: Complex64, p: f64, alpha: f64 },
    /// `scale · log(1 − z)`; `scale = −1/2` is the model `−½ log(1 − z)`.
    LogOneSided { scale: f64 },
    /// `scale · log((1 + z)/(1 − z))`.
    LogTwoSided { scale: f64 },
    /// `α z + β`.
    ExtremalF0 { alpha: Complex64, beta: Complex64 },
    /// `γ (1 − |ζ|²)/ζ̄ · 1/(1 − ζ̄z) + δ`, `0 < |ζ| < 1`.
    ExtremalFzeta { gamma: Complex64, delta: Complex64, zeta: Complex64 },
    /// `c zⁿ`.
    Monomial { n: u32, c: Complex64 },
    /// `Σ b_k φ_{a_k}(z)`.
    AtomicB1 { atoms: Vec<Atom> },
    Sum(Vec<AnalyticFunction>),
    /// `coeff · (1 − w z)^(−exponent)` with `|w| ≤ 1`; derivatives of the
    /// catalog models land here.
    Power { coeff: Complex64, w: Complex64, exponent: f64 },
    /// `factor · inner`.
    Scaled { factor: Complex64, inner: Box<AnalyticFunction> },
}

fn check_in_disk(op: &'static str, name: &str, a: Complex64) -> Result<()> {
    if a.re.is_finite() && a.im.is_finite() && a.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {a} must lie in the open unit disk")))
    }
}

fn check_finite(op: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {x} must be finite")))
    }
}

fn check_finite_c(op: &'static str, name: &str, x: Complex64) -> Result<()> {
    check_finite(op, name, x.re)?;
    check_finite(op, name, x.im)
}

/// `ln(1 + w)` with full relative accuracy for small `w`.
pub(crate) fn clog1p(w: Complex64) -> Complex64 {
    let re = if w.norm_sqr() < 0.25 {
        0.5 * libm::log1p(w.re * (2.0 + w.re) + w.im * w.im)
    } else {
        libm::log(libm::hypot(1.0 + w.re, w.im))
    };
    let im = libm::atan2(w.im, 1.0 + w.re);
    Complex64::new(re, im)
}

/// `(1 − w z)^(−s)` on the principal branch.
fn neg_power(w: Complex64, z: Complex64, s: f64) -> Complex64 {
    (clog1p(-(w * z)) * (-s)).exp()
}

fn rising(s: f64, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (s + j as f64))
}

impl AnalyticFunction {
    pub fn taylor(coeffs: Vec<Complex64>) -> Result<Self> {
        TaylorSeries::new(coeffs).map(AnalyticFunction::Taylor)
    }

    pub fn moebius(a: Complex64) -> Result<Self> {
        check_in_disk("moebius", "a", a)?;
        Ok(AnalyticFunction::Moebius { a })
    }

    pub fn kernel(zeta: Complex64, p: f64, alpha: f64) -> Result<Self> {
        let f = AnalyticFunction::Kernel { zeta, p, alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn log_one_sided(scale: f64) -> Result<Self> {
        check_finite("log_one_sided", "scale", scale)?;
        Ok(AnalyticFunction::LogOneSided { scale })
    }

    pub fn log_two_sided(scale: f64) -> Result<Self> {
        check_finite("log_two_sided", "scale", scale)?;
        Ok(AnalyticFunction::LogTwoSided { scale })
    }

    pub fn extremal_f0(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let f = AnalyticFunction::ExtremalF0 { alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn extremal_fzeta(gamma: Complex64, delta: Complex64, zeta: Complex64) -> Result<Self> {
        let f = AnalyticFunction::ExtremalFzeta { gamma, delta, zeta };
        f.validate()?;
        Ok(f)
    }

    pub fn monomial(n: u32, c: Complex64) -> Result<Self> {
        check_finite_c("monomial", "c", c)?;
        Ok(AnalyticFunction::Monomial { n, c })
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::monomial(0, c)
    }

    pub fn atomic_b1(atoms: Vec<Atom>) -> Result<Self> {
        let f = AnalyticFunction::AtomicB1 { atoms };
        f.validate()?;
        Ok(f)
    }

    pub fn sum(terms: Vec<AnalyticFunction>) -> Result<Self> {
        let f = AnalyticFunction::Sum(terms);
        f.validate()?;
        Ok(f)
    }

    /// Checks every parameter invariant of the model.
    pub fn validate(&self) -> Result<()> {
        use AnalyticFunction::*;
        match self {
            Taylor(t) => TaylorSeries::new(t.coeffs.clone()).map(|_| ()),
            Moebius { a } => check_in_disk("moebius", "a", *a),
            Kernel { zeta, p, alpha } => {
                check_in_disk("kernel", "zeta", *zeta)?;
                if !(p.is_finite() && *p > 0.0) {
                    return Err(Error::domain("kernel", format!("p = {p} must be > 0")));
                }
                if !(alpha.is_finite() && *alpha > -1.0) {
                    return Err(Error::domain("kernel", format!("alpha = {alpha} must be > -1")));
                }
                Ok(())
            }
            LogOneSided { scale } | LogTwoSided { scale } => check_finite("log", "scale", *scale),
            ExtremalF0 { alpha, beta } => {
                check_finite_c("extremal_f0", "alpha", *alpha)?;
                check_finite_c("extremal_f0", "beta", *beta)
            }
            ExtremalFzeta { gamma, delta, zeta } => {
                check_finite_c("extremal_fzeta", "gamma", *gamma)?;
                check_finite_c("extremal_fzeta", "delta", *delta)?;
                check_in_disk("extremal_fzeta", "zeta", *zeta)?;
                if zeta.norm() == 0.0 {
                    return Err(Error::domain("extremal_fzeta", "zeta must be non-zero"));
                }
                Ok(())
            }
            Monomial { c, .. } => check_finite_c("monomial", "c", *c),
            AtomicB1 { atoms } => atoms.iter().try_for_each(|atom| {
                check_finite_c("atomic_b1", "b", atom.b)?;
                check_in_disk("atomic_b1", "a", atom.a)
            }),
            Sum(terms) => terms.iter().try_for_each(AnalyticFunction::validate),
            Power { coeff, w, exponent } => {
                check_finite_c("power", "coeff", *coeff)?;
                check_finite("power", "exponent", *exponent)?;
                if !(w.norm() <= 1.0) {
                    return Err(Error::domain("power", format!("|w| = {} must be <= 1", w.norm())));
                }
                Ok(())
            }
            Scaled { factor, inner } => {
                check_finite_c("scaled", "factor", *factor)?;
                inner.validate()
            }
        }
    }

    /// Value of `f` (order 0), `f′` (1) or `f″` (2) at `z`, `|z| < 1`.
    pub fn eval(&self, z: Complex64, order: u8) -> Result<Complex64> {
        if order > 2 {
            return Err(Error::argument("eval", format!("derivative order {order} not in {{0, 1, 2}}")));
        }
        if !(z.norm() < 1.0) {
            return Err(Error::domain("eval", format!("|z| = {} must be < 1", z.norm())));
        }
        Ok(self.eval_unchecked(z, order))
    }

    /// [`eval`](Self::eval) without the domain checks; `|z| < 1` and
    /// `order ≤ 2` are the caller's responsibility.
    pub fn eval_unchecked(&self, z: Complex64, order: u8) -> Complex64 {
        use AnalyticFunction::*;
        match self {
            Taylor(t) => t.eval(z, order),
            Monomial { n, c } => {
                let n = *n;
                match order {
                    0 => c * z.powu(n),
                    1 if n >= 1 => c * (n as f64) * z.powu(n - 1),
                    2 if n >= 2 => c * ((n * (n - 1)) as f64) * z.powu(n - 2),
                    _ => ZERO,
                }
            }
            Moebius { a } => moebius_eval(*a, z, order),
            Kernel { zeta, p, alpha } => {
                let s = 2.0 * (alpha + 2.0) / p;
                power_eval(ONE, zeta.conj(), s, z, order)
            }
            Power { coeff, w, exponent } => power_eval(*coeff, *w, *exponent, z, order),
            LogOneSided { scale } => {
                let s = *scale;
                match order {
                    0 => clog1p(-z) * s,
                    1 => -(ONE - z).inv() * s,
                    _ => {
                        let d = ONE - z;
                        -(d * d).inv() * s
                    }
                }
            }
            LogTwoSided { scale } => {
                let s = *scale;
                match order {
                    0 => (clog1p(z) - clog1p(-z)) * s,
                    1 => (ONE - z * z).inv() * (2.0 * s),
                    _ => {
                        let dp = ONE + z;
                        let dm = ONE - z;
                        ((dm * dm).inv() - (dp * dp).inv()) * s
                    }
                }
            }
            ExtremalF0 { alpha, beta } => match order {
                0 => alpha * z + beta,
                1 => *alpha,
                _ => ZERO,
            },
            ExtremalFzeta { gamma, delta, zeta } => {
                let zb = zeta.conj();
                let scale = gamma * (1.0 - zeta.norm_sqr());
                let d = ONE - zb * z;
                match order {
                    0 => scale / zb / d + delta,
                    1 => scale / (d * d),
                    _ => scale * zb * 2.0 / (d * d * d),
                }
            }
            AtomicB1 { atoms } => atoms.iter().fold(ZERO, |acc, atom| acc + atom.b * moebius_eval(atom.a, z, order)),
            Sum(terms) => terms.iter().fold(ZERO, |acc, t| acc + t.eval_unchecked(z, order)),
            Scaled { factor, inner } => factor * inner.eval_unchecked(z, order),
        }
    }

    /// `f(0)`.
    pub fn value_at_zero(&self) -> Complex64 {
        self.eval_unchecked(ZERO, 0)
    }

    /// The derivative as another model, built symbolically.
    pub fn derivative(&self) -> AnalyticFunction {
        use AnalyticFunction::*;
        match self {
            Taylor(t) => Taylor(t.derivative()),
            Monomial { n, c } => match n {
                0 => Monomial { n: 0, c: ZERO },
                _ => Monomial {
                    n: n - 1,
                    c: c * (*n as f64),
                },
            },
            Moebius { a } => Power {
                coeff: Complex64::new(a.norm_sqr() - 1.0, 0.0),
                w: a.conj(),
                exponent: 2.0,
            },
            Kernel { zeta, p, alpha } => {
                let s = 2.0 * (alpha + 2.0) / p;
                Power {
                    coeff: zeta.conj() * s,
                    w: zeta.conj(),
                    exponent: s + 1.0,
                }
            }
            Power { coeff, w, exponent } => Power {
                coeff: coeff * w * *exponent,
                w: *w,
                exponent: exponent + 1.0,
            },
            LogOneSided { scale } => Power {
                coeff: Complex64::new(-scale, 0.0),
                w: ONE,
                exponent: 1.0,
            },
            LogTwoSided { scale } => Sum(vec![
                Power {
                    coeff: Complex64::new(*scale, 0.0),
                    w: ONE,
                    exponent: 1.0,
                },
                Power {
                    coeff: Complex64::new(*scale, 0.0),
                    w: -ONE,
                    exponent: 1.0,
                },
            ]),
            ExtremalF0 { alpha, .. } => Monomial { n: 0, c: *alpha },
            ExtremalFzeta { gamma, zeta, .. } => Power {
                coeff: gamma * (1.0 - zeta.norm_sqr()),
                w: zeta.conj(),
                exponent: 2.0,
            },
            AtomicB1 { atoms } => Sum(atoms
                .iter()
                .map(|atom| Power {
                    coeff: atom.b * (atom.a.norm_sqr() - 1.0),
                    w: atom.a.conj(),
                    exponent: 2.0,
                })
                .collect()),
            Sum(terms) => Sum(terms.iter().map(AnalyticFunction::derivative).collect()),
            Scaled { factor, inner } => Scaled {
                factor: *factor,
                inner: Box::new(inner.derivative()),
            },
        }
    }

    /// First `N + 1` Taylor coefficients at the origin, `N ≤ 4096`.
    pub fn taylor_coefficients(&self, n: usize) -> Result<TaylorSeries> {
        if n > MAX_TAYLOR_ORDER {
            return Err(Error::argument(
                "taylor_coefficients",
                format!("order {n} exceeds the limit {MAX_TAYLOR_ORDER}"),
            ));
        }
        Ok(TaylorSeries {
            coeffs: self.coefficients_to(n),
        })
    }

    /// Taylor coefficients without the order cap (used by the Parseval sums).
    pub(crate) fn coefficients_to(&self, n: usize) -> Vec<Complex64> {
        use AnalyticFunction::*;
        let mut out = vec![ZERO; n + 1];
        match self {
            Taylor(t) => {
                let m = t.coeffs.len().min(n + 1);
                out[..m].copy_from_slice(&t.coeffs[..m]);
            }
            Monomial { n: k, c } => {
                if (*k as usize) <= n {
                    out[*k as usize] = *c;
                }
            }
            Moebius { a } => moebius_coefficients(ONE, *a, &mut out),
            Kernel { zeta, p, alpha } => power_coefficients(ONE, zeta.conj(), 2.0 * (alpha + 2.0) / p, &mut out),
            Power { coeff, w, exponent } => power_coefficients(*coeff, *w, *exponent, &mut out),
            LogOneSided { scale } => {
                for (k, c) in out.iter_mut().enumerate().skip(1) {
                    *c = Complex64::new(-scale / k as f64, 0.0);
                }
            }
            LogTwoSided { scale } => {
                for (k, c) in out.iter_mut().enumerate().skip(1).step_by(2) {
                    *c = Complex64::new(2.0 * scale / k as f64, 0.0);
                }
            }
            ExtremalF0 { alpha, beta } => {
                out[0] = *beta;
                if n >= 1 {
                    out[1] = *alpha;
                }
            }
            ExtremalFzeta { gamma, delta, zeta } => {
                let zb = zeta.conj();
                let scale = gamma * (1.0 - zeta.norm_sqr());
                out[0] = scale / zb + delta;
                let mut pow = ONE;
                for c in out.iter_mut().skip(1) {
                    *c = scale * pow;
                    pow *= zb;
                }
            }
            AtomicB1 { atoms } => {
                for atom in atoms {
                    moebius_coefficients(atom.b, atom.a, &mut out);
                }
            }
            Sum(terms) => {
                for t in terms {
                    for (o, c) in out.iter_mut().zip(t.coefficients_to(n)) {
                        *o += c;
                    }
                }
            }
            Scaled { factor, inner } => {
                for (o, c) in out.iter_mut().zip(inner.coefficients_to(n)) {
                    *o = factor * c;
                }
            }
        }
        out
    }

    /// Singular points of the model in the extended plane (outside or on the
    /// unit circle). Polynomials have none.
    pub fn singular_points(&self) -> Vec<Complex64> {
        use AnalyticFunction::*;
        let pole = |w: Complex64| -> Option<Complex64> { (w.norm() > 0.0).then(|| w.inv()) };
        match self {
            Taylor(_) | Monomial { .. } | ExtremalF0 { .. } => Vec::new(),
            Moebius { a } => pole(a.conj()).into_iter().collect(),
            Kernel { zeta, .. } => pole(zeta.conj()).into_iter().collect(),
            Power { w, .. } => pole(*w).into_iter().collect(),
            ExtremalFzeta { zeta, .. } => pole(zeta.conj()).into_iter().collect(),
            LogOneSided { .. } => vec![ONE],
            LogTwoSided { .. } => vec![ONE, -ONE],
            AtomicB1 { atoms } => atoms.iter().filter_map(|atom| pole(atom.a.conj())).collect(),
            Sum(terms) => terms.iter().flat_map(AnalyticFunction::singular_points).collect(),
            Scaled { inner, .. } => inner.singular_points(),
        }
    }

    /// Angles in `[0, 2π)` of singular points within `margin` of the unit
    /// circle, sorted and deduplicated.
    pub fn near_boundary_angles(&self, margin: f64) -> Vec<f64> {
        let mut angles: Vec<f64> = self
            .singular_points()
            .into_iter()
            .filter(|s| s.norm() <= 1.0 + margin)
            .map(|s| {
                let t = s.arg();
                if t < 0.0 {
                    t + core::f64::consts::TAU
                } else {
                    t
                }
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        angles
    }

    /// True when some singular point lies on the closed unit circle.
    pub fn has_boundary_singularity(&self) -> bool {
        self.singular_points().iter().any(|s| s.norm() <= 1.0 + 1e-12)
    }

    /// Degree bound when the model is a polynomial, `None` otherwise.
    pub fn polynomial_degree(&self) -> Option<usize> {
        use AnalyticFunction::*;
        match self {
            Taylor(t) => Some(t.order()),
            Monomial { n, .. } => Some(*n as usize),
            ExtremalF0 { .. } => Some(1),
            Sum(terms) => terms.iter().map(AnalyticFunction::polynomial_degree).try_fold(0, |m, d| d.map(|d| m.max(d))),
            Scaled { inner, .. } => inner.polynomial_degree(),
            AtomicB1 { atoms } if atoms.is_empty() => Some(0),
            _ => None,
        }
    }

    /// Short name of the model, for messages.
    pub fn model_name(&self) -> &'static str {
        use AnalyticFunction::*;
        match self {
            Taylor(_) => "taylor",
            Moebius { .. } => "moebius",
            Kernel { .. } => "kernel",
            LogOneSided { .. } => "log1",
            LogTwoSided { .. } => "log2",
            ExtremalF0 { .. } => "f0",
            ExtremalFzeta { .. } => "fzeta",
            Monomial { .. } => "mono",
            AtomicB1 { .. } => "b1",
            Sum(_) => "sum",
            Power { .. } => "power",
            Scaled { .. } => "scaled",
        }
    }
}

fn moebius_eval(a: Complex64, z: Complex64, order: u8) -> Complex64 {
    let ab = a.conj();
    let d = ONE - ab * z;
    match order {
        0 => (a - z) / d,
        1 => Complex64::new(a.norm_sqr() - 1.0, 0.0) / (d * d),
        _ => ab * 2.0 * (a.norm_sqr() - 1.0) / (d * d * d),
    }
}

fn power_eval(coeff: Complex64, w: Complex64, s: f64, z: Complex64, order: u8) -> Complex64 {
    if order == 0 {
        return coeff * neg_power(w, z, s);
    }
    let k = order;
    coeff * rising(s, k) * w.powu(k as u32) * neg_power(w, z, s + k as f64)
}

/// Adds `b · φ_a` coefficients into `out`.
fn moebius_coefficients(b: Complex64, a: Complex64, out: &mut [Complex64]) {
    let ab = a.conj();
    out[0] += b * a;
    let lead = b * (a.norm_sqr() - 1.0);
    let mut pow = ONE;
    for c in out.iter_mut().skip(1) {
        *c += lead * pow;
        pow *= ab;
    }
}

/// Adds the binomial series of `coeff · (1 − wz)^(−s)` into `out`.
fn power_coefficients(coeff: Complex64, w: Complex64, s: f64, out: &mut [Complex64]) {
    let mut term = coeff;
    for (k, c) in out.iter_mut().enumerate() {
        *c += term;
        term = term * w * ((s + k as f64) / (k as f64 + 1.0));
    }
}
