//! Closed-form constants and two-sided bounds for the inclusion
//! `ℬ ↪ A^p_α`, plus checkable reports comparing them with computed norms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{E, LN_2};
use core::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::func::{bloch_norm, AnalyticFunction};
use crate::norms::{besov_norm, BesovVariant};
use crate::quadrature::{bergman_norm_estimate, m_alpha_integral, QuadratureScheme};
use crate::special::{beta, ln_gamma};

/// Tolerance for reports whose two sides are both closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Tolerance for reports with a quadrature-backed side.
pub const QUADRATURE_TOL: f64 = 1e-6;

const POINTWISE_SAMPLES: usize = 20;
const POINTWISE_SEED: u64 = 0x5eed_b10c;
const BESOV_EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        })
    }
}

/// One inequality, its two sides and the outcome.
///
/// `margin` is `rhs − lhs` for `≤`, `lhs − rhs` for `≥` and `−|lhs − rhs|`
/// for `=`, so a non-negative margin always means the relation holds.
/// The tolerance is scaled by `max(1, |rhs|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub alpha: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub margin: f64,
    pub passed: bool,
    pub tolerance: f64,
    /// Empty unless something went wrong computing a side.
    pub detail: String,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, alpha: f64, p: f64, lhs: f64, relation: Relation, rhs: f64, tolerance: f64) -> Self {
        let margin = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
            Relation::Eq => -(lhs - rhs).abs(),
        };
        let passed = margin.is_finite() && margin >= -tolerance * rhs.abs().max(1.0);
        BoundReport {
            name: name.into(),
            alpha,
            p,
            lhs,
            rhs,
            relation,
            margin,
            passed,
            tolerance,
            detail: String::new(),
        }
    }

    /// A report that could not be evaluated.
    pub fn failed(name: impl Into<String>, alpha: f64, p: f64, relation: Relation, err: &Error) -> Self {
        BoundReport {
            name: name.into(),
            alpha,
            p,
            lhs: f64::NAN,
            rhs: f64::NAN,
            relation,
            margin: f64::NAN,
            passed: false,
            tolerance: 0.0,
            detail: format!("{err}"),
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("alpha = {alpha} must exceed -1")))
    }
}

fn check_p_ge_one(op: &'static str, p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("p = {p} must be at least 1")))
    }
}

/// Upper bound for `|g(ζ)|` given `‖g‖_{A^p_α}`.
pub fn pointwise_bound(norm: f64, p: f64, alpha: f64, zeta: Complex64) -> Result<f64> {
    const OP: &str = "pointwise_bound";
    check_alpha(OP, alpha)?;
    if !(norm >= 0.0 && p > 0.0) {
        return Err(Error::domain(OP, format!("need norm >= 0 and p > 0, got {norm}, {p}")));
    }
    let s = zeta.norm_sqr();
    if !(s < 1.0) {
        return Err(Error::domain(OP, format!("|zeta| = {} is not inside the disk", zeta.norm())));
    }
    Ok(norm / libm::pow(1.0 - s, (alpha + 2.0) / p))
}

/// Closed-form `‖k_ζ‖_{A^p_α} = (1 − |ζ|²)^{−(α+2)/p}` of the extremal kernel.
pub fn kernel_norm(zeta: Complex64, p: f64, alpha: f64) -> Result<f64> {
    pointwise_bound(1.0, p, alpha, zeta)
}

/// Largest `p` for which `C_α(p) = 1`, namely `2/B(½, α+1)`; needs `α ≥ 0`.
pub fn contractivity_threshold(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(
            "contractivity_threshold",
            format!("alpha = {alpha}: only proven for alpha >= 0"),
        ));
    }
    Ok(2.0 / beta(0.5, alpha + 1.0)?)
}

/// `max{B(½, α+1)/2, 1}·p ≥ C_α(p)`.
pub fn growth_upper(alpha: f64, p: f64) -> Result<f64> {
    check_alpha("growth_upper", alpha)?;
    check_p_ge_one("growth_upper", p)?;
    Ok((beta(0.5, alpha + 1.0)? / 2.0).max(1.0) * p)
}

/// `[M_α Γ(p+1) / (2^{p−1}(α+2)^{p+1})]^{1/p} ≤ C_α(p)`.
pub fn growth_lower(alpha: f64, p: f64) -> Result<f64> {
    check_alpha("growth_lower", alpha)?;
    check_p_ge_one("growth_lower", p)?;
    let ln = libm::log(m_alpha_integral(alpha)?) + ln_gamma(p + 1.0)?
        - (p - 1.0) * LN_2
        - (p + 1.0) * libm::log(alpha + 2.0);
    Ok(libm::exp(ln / p))
}

/// Upper bound for `C̃_α(2n)` from an upper bound `c2` for `C̃_α(2)`.
pub fn bound_2n(alpha: f64, n: u32, c2: f64) -> Result<f64> {
    const OP: &str = "bound_2n";
    check_alpha(OP, alpha)?;
    if n < 2 {
        return Err(Error::domain(OP, format!("n = {n} must be at least 2")));
    }
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(Error::domain(OP, format!("c2 = {c2} must be positive")));
    }
    let n = f64::from(n);
    let a12 = (alpha + 1.0) * (alpha + 2.0);
    let ln = libm::log(a12) + ln_gamma(n + alpha + 3.0)? + ln_gamma(n + 1.0)? - ln_gamma(alpha + 4.0)?
        + 2.0 * libm::log(c2);
    Ok(libm::exp(ln / (2.0 * n)) / libm::sqrt(a12))
}

/// Bounds for `liminf` and `limsup` of `C̃_α(p)/p` as `p → ∞`.
///
/// Only the second one blows up as `α → −1`.
pub fn asymptotic_bounds(alpha: f64) -> Result<(f64, f64)> {
    check_alpha("asymptotic_bounds", alpha)?;
    let liminf = 1.0 / (2.0 * E * (alpha + 2.0));
    let limsup = 1.0 / (2.0 * E * libm::sqrt((alpha + 1.0) * (alpha + 2.0)));
    Ok((liminf, limsup))
}

/// `C_α(p) = max{1, C̃_α(p)}`.
pub fn c_from_c_tilde(c_tilde: f64, p: f64) -> Result<f64> {
    check_p_ge_one("c_from_c_tilde", p)?;
    if !(c_tilde >= 0.0) {
        return Err(Error::domain("c_from_c_tilde", format!("c_tilde = {c_tilde} is negative")));
    }
    Ok(c_tilde.max(1.0))
}

/// Norm with a conservative upper estimate when quadrature stalls.
struct Measured {
    value: f64,
    upper: f64,
    note: String,
}

fn measure(f: &AnalyticFunction, p: f64, alpha: f64, scheme: &QuadratureScheme) -> Result<Measured> {
    let r = bergman_norm_estimate(f, p, alpha, scheme)?;
    if r.converged {
        Ok(Measured {
            value: r.value,
            upper: r.value,
            note: String::new(),
        })
    } else {
        Ok(Measured {
            value: r.value,
            upper: r.value + r.abs_error_estimate,
            note: format!("quadrature not converged, error estimate {:e}", r.abs_error_estimate),
        })
    }
}

/// Inclusion checks for every sample function at `(α, p)`.
///
/// Per function: the contraction `‖f‖_{A^p_α} ≤ ‖f‖_ℬ` when it is proven
/// (`α ≥ 0` and `p` at most the threshold, or `p = 2`), the linear growth
/// bound for `p ≥ 1`, the pointwise estimate at 20 points, and the
/// Besov–Bloch sandwich for functions regular up to the circle.
pub fn verify_inclusion_suite(
    alpha: f64,
    p: f64,
    sample: &[AnalyticFunction],
    scheme: &QuadratureScheme,
) -> Vec<BoundReport> {
    let mut out = Vec::new();
    let threshold = contractivity_threshold(alpha).ok();
    let contractive = threshold.is_some_and(|t| p <= t) || (p == 2.0 && alpha >= 0.0);
    let upper = growth_upper(alpha, p).ok();
    let mut rng = ChaCha8Rng::seed_from_u64(POINTWISE_SEED);

    for (i, f) in sample.iter().enumerate() {
        let tag = format!("#{i} {}", f.model_name());
        let norm = match measure(f, p, alpha, scheme) {
            Ok(m) => m,
            Err(e) => {
                out.push(BoundReport::failed(format!("bergman norm {tag}"), alpha, p, Relation::Le, &e));
                continue;
            }
        };
        let bloch = bloch_norm(f);

        if contractive {
            let name = format!("contraction {tag}");
            match &bloch {
                Ok(b) => {
                    let constant = f.polynomial_degree() == Some(0);
                    let report = if constant {
                        BoundReport::new(name, alpha, p, norm.value, Relation::Eq, *b, 1e-10)
                    } else {
                        BoundReport::new(name, alpha, p, norm.upper, Relation::Le, *b, CLOSED_FORM_TOL)
                    };
                    out.push(report.with_detail(norm.note.clone()));
                }
                Err(e) => out.push(BoundReport::failed(name, alpha, p, Relation::Le, e)),
            }
        }

        if let Some(c) = upper {
            let name = format!("linear growth {tag}");
            match &bloch {
                Ok(b) => out.push(
                    BoundReport::new(name, alpha, p, norm.upper, Relation::Le, c * b, QUADRATURE_TOL)
                        .with_detail(norm.note.clone()),
                ),
                Err(e) => out.push(BoundReport::failed(name, alpha, p, Relation::Le, e)),
            }
        }

        for _ in 0..POINTWISE_SAMPLES {
            let r = 0.95 * libm::sqrt(rng.gen::<f64>());
            let zeta = Complex64::from_polar(r, core::f64::consts::TAU * rng.gen::<f64>());
            let name = format!("pointwise {tag} at {:.4}{:+.4}i", zeta.re, zeta.im);
            let lhs = f.eval(zeta, 0).map(|w| w.norm());
            let rhs = pointwise_bound(norm.value, p, alpha, zeta);
            match (lhs, rhs) {
                (Ok(l), Ok(b)) => out.push(BoundReport::new(name, alpha, p, l, Relation::Le, b, QUADRATURE_TOL)),
                (Err(e), _) | (_, Err(e)) => out.push(BoundReport::failed(name, alpha, p, Relation::Le, &e)),
            }
        }

        if f.has_boundary_singularity() {
            continue;
        }
        for q in BESOV_EXPONENTS {
            let sides = bloch.clone().and_then(|b| {
                let n1 = besov_norm(f, q, BesovVariant::Norm1, scheme)?.value;
                let n2 = besov_norm(f, q, BesovVariant::Norm2, scheme)?.value;
                Ok((b, n1, n2))
            });
            match sides {
                Ok((b, n1, n2)) => {
                    out.push(BoundReport::new(
                        format!("bloch below besov q={q} {tag}"),
                        alpha,
                        p,
                        b,
                        Relation::Le,
                        n1,
                        QUADRATURE_TOL,
                    ));
                    out.push(BoundReport::new(
                        format!("besov norms q={q} {tag}"),
                        alpha,
                        p,
                        n1,
                        Relation::Le,
                        libm::pow(2.0, (q - 1.0) / q) * n2,
                        QUADRATURE_TOL,
                    ));
                }
                Err(e) => out.push(BoundReport::failed(format!("besov q={q} {tag}"), alpha, p, Relation::Le, &e)),
            }
        }
    }
    out
}
