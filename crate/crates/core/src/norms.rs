//! Space-level norms: Bergman, Bloch, the two Besov norms, the atomic B¹
//! upper bound and the coefficient (Parseval) form of the A²_α norm.

use alloc::format;
use alloc::vec::Vec;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::func::AnalyticFunction;
use crate::quadrature::{integrate_mu, QuadratureScheme};
use crate::sum::KahanSum;

pub use crate::func::{bloch_norm, bloch_seminorm};
pub use crate::quadrature::{bergman_norm, NormResult};

/// Relative tail tolerance of [`a2_norm_parseval`] on the squared norm.
pub const PARSEVAL_REL_TOL: f64 = 1e-10;

/// Which of the two equivalent Besov norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesovVariant {
    /// `|f(0)| + ‖f′‖_{A^q_{q−2}}`
    Norm1,
    /// `(|f(0)|^q + ‖f′‖^q_{A^q_{q−2}})^{1/q}`
    Norm2,
}

/// Besov norm of `f` in `B^q`, `q > 1`.
pub fn besov_norm(f: &AnalyticFunction, q: f64, variant: BesovVariant, scheme: &QuadratureScheme) -> Result<NormResult> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::domain("besov_norm", format!("q = {q} must exceed 1")));
    }
    let d = bergman_norm(&f.derivative(), q, q - 2.0, scheme)?;
    let f0 = f.value_at_zero().norm();
    let value = match variant {
        BesovVariant::Norm1 => f0 + d.value,
        BesovVariant::Norm2 => (f0.powf(q) + d.value.powf(q)).powf(1.0 / q),
    };
    Ok(NormResult { value, ..d })
}

/// `Σ|b_k|` of an atomic decomposition: an upper bound for `‖f‖_{B¹}`.
pub fn b1_atomic_upper_bound(f: &AnalyticFunction) -> Result<f64> {
    match f {
        AnalyticFunction::AtomicB1 { atoms } => {
            let mut s = KahanSum::default();
            for atom in atoms {
                s.add(atom.b.norm());
            }
            Ok(s.value())
        }
        other => Err(Error::argument(
            "b1_atomic_upper_bound",
            format!("needs an atomic decomposition, got a {} model", other.model_name()),
        )),
    }
}

/// `Γ(α+2) n!/Γ(n+α+2)` for `n = 0, 1, …`, by the ratio recursion.
struct ParsevalWeights {
    alpha: f64,
    n: usize,
    w: f64,
}

impl Iterator for ParsevalWeights {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        if self.n > 0 {
            let n = self.n as f64;
            self.w *= n / (n + self.alpha + 1.0);
        }
        self.n += 1;
        Some(self.w)
    }
}

fn parseval_weights(alpha: f64) -> ParsevalWeights {
    ParsevalWeights { alpha, n: 0, w: 1.0 }
}

/// Iterated Aitken Δ² on the partial sums at `n, n/2, n/4, …` (down to 8).
/// Each pass removes one power-law term of the tail and amplifies rounding,
/// so the result is the last entry of whichever pass has its last two
/// entries closest together; that gap is the error estimate.
fn octave_limit(s: &[f64], n: usize) -> (f64, f64) {
    let mut idx = Vec::new();
    let mut k = n;
    while k >= 8 {
        idx.push(k);
        k /= 2;
    }
    let mut seq: Vec<f64> = idx.iter().rev().map(|&k| s[k]).collect();
    let gap = |q: &[f64]| (q[q.len() - 1], q[q.len() - 2]);
    let mut best = gap(&seq);
    while seq.len() >= 4 {
        seq = seq
            .windows(3)
            .map(|w| {
                let (d1, d2) = (w[1] - w[0], w[2] - w[1]);
                let den = d2 - d1;
                if den == 0.0 || !den.is_finite() {
                    w[2]
                } else {
                    w[2] - d2 * d2 / den
                }
            })
            .collect();
        let cand = gap(&seq);
        if (cand.0 - cand.1).abs() < (best.0 - best.1).abs() {
            best = cand;
        }
    }
    best
}

/// `‖f‖_{A²_α}` from the first `N + 1` Taylor coefficients.
///
/// Polynomials of degree `≤ N` are summed exactly. Otherwise the tail is
/// extrapolated by iterated Aitken over octaves of `N`; the spread of the
/// last pass is the error estimate, and when it exceeds [`PARSEVAL_REL_TOL`]
/// the truncation is too short.
pub fn a2_norm_parseval(f: &AnalyticFunction, alpha: f64, n: usize) -> Result<f64> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::domain("a2_norm_parseval", format!("alpha = {alpha} must exceed -1")));
    }
    let coeffs = f.coefficients_to(n);
    let mut partial = Vec::with_capacity(n + 1);
    let mut s = KahanSum::default();
    for (c, w) in coeffs.iter().zip(parseval_weights(alpha)) {
        s.add(c.norm_sqr() * w);
        partial.push(s.value());
    }
    let total = partial[n];
    if f.polynomial_degree().is_some_and(|d| d <= n) {
        return Ok(total.sqrt());
    }
    if n < 16 {
        return Err(Error::argument(
            "a2_norm_parseval",
            format!("{} model needs at least 16 coefficients for the tail estimate", f.model_name()),
        ));
    }
    let (last, previous) = octave_limit(&partial, n);
    if (last - previous).abs() > PARSEVAL_REL_TOL * last {
        return Err(Error::Convergence {
            op: "a2_norm_parseval",
            last: last.sqrt(),
            previous: previous.sqrt(),
        });
    }
    Ok(last.sqrt())
}

/// A²_α norm by the cheapest reliable path: coefficients when the tail
/// behaves, quadrature otherwise.
pub fn a2_norm(f: &AnalyticFunction, alpha: f64, scheme: &QuadratureScheme) -> Result<NormResult> {
    match a2_norm_parseval(f, alpha, 4096) {
        Ok(value) => Ok(NormResult {
            value,
            abs_error_estimate: PARSEVAL_REL_TOL * value,
            scheme_used: QuadratureScheme { alpha, ..*scheme },
            converged: true,
        }),
        Err(Error::Convergence { .. }) => bergman_norm(f, 2.0, alpha, scheme),
        Err(e) => Err(e),
    }
}

/// `∫ |f′|² (1 − |z|²)² dμ_α` by quadrature.
fn derivative_energy(f: &AnalyticFunction, alpha: f64, scheme: &QuadratureScheme) -> Result<f64> {
    let scheme = QuadratureScheme { alpha, ..*scheme };
    scheme.validate()?;
    let g = |z: Complex64| {
        let w = 1.0 - z.norm_sqr();
        Complex64::new(f.eval_unchecked(z, 1).norm_sqr() * w * w, 0.0)
    };
    let d = integrate_mu(&g, f, 2.0, &scheme, scheme.rel_tol)?;
    if !d.converged {
        return Err(Error::Convergence {
            op: "derivative_energy",
            last: d.value.re,
            previous: d.previous.re,
        });
    }
    Ok(d.value.re)
}

/// Both sides of the weighted Parseval identity
/// `(α+1)(α+2) Σ_{n≥1} n/(n+α+2) · w_n |a_n|² = ∫ |f′|²(1 − |z|²)² dμ_α`,
/// the left from the first `N + 1` coefficients, the right by quadrature.
pub fn parseval_weighted_identity(
    f: &AnalyticFunction,
    alpha: f64,
    n: usize,
    scheme: &QuadratureScheme,
) -> Result<(f64, f64)> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::domain(
            "parseval_weighted_identity",
            format!("alpha = {alpha} must exceed -1"),
        ));
    }
    let coeffs = f.coefficients_to(n);
    let mut s = KahanSum::default();
    for (k, (c, w)) in coeffs.iter().zip(parseval_weights(alpha)).enumerate().skip(1) {
        let k = k as f64;
        s.add(k / (k + alpha + 2.0) * w * c.norm_sqr());
    }
    let lhs = (alpha + 1.0) * (alpha + 2.0) * s.value();
    let rhs = derivative_energy(f, alpha, scheme)?;
    Ok((lhs, rhs))
}

/// `‖f‖²_{A²_α}` against `(k+α+2)/((α+1)(α+2)k) · ∫|f′|²(1 − |z|²)² dμ_α`
/// for `f` vanishing to order `k` at the origin; the first never exceeds the
/// second.
pub fn vanishing_order_bound(f: &AnalyticFunction, alpha: f64, k: usize, scheme: &QuadratureScheme) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::argument("vanishing_order_bound", "order k must be at least 1"));
    }
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::domain("vanishing_order_bound", format!("alpha = {alpha} must exceed -1")));
    }
    let head = f.coefficients_to(k - 1);
    if let Some((j, c)) = head.iter().enumerate().find(|(_, c)| c.norm() > 1e-12) {
        return Err(Error::argument(
            "vanishing_order_bound",
            format!("coefficient a_{j} = {c} does not vanish"),
        ));
    }
    let lhs = a2_norm(f, alpha, scheme)?.value.powi(2);
    let k = k as f64;
    let factor = (k + alpha + 2.0) / ((alpha + 1.0) * (alpha + 2.0) * k);
    Ok((lhs, factor * derivative_energy(f, alpha, scheme)?))
}

/// Function spaces the command line can measure in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Bergman,
    Bloch,
    Besov1,
    Besov2,
    B1Atomic,
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bergman" => Space::Bergman,
            "bloch" => Space::Bloch,
            "besov1" => Space::Besov1,
            "besov2" => Space::Besov2,
            "b1atomic" => Space::B1Atomic,
            other => {
                return Err(Error::argument(
                    "space",
                    format!("unknown space `{other}` (bergman, bloch, besov1, besov2, b1atomic)"),
                ))
            }
        })
    }
}
