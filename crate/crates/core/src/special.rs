//! Real Gamma, log-Gamma and Beta functions.
//!
//! Every Gamma ratio used elsewhere in the crate goes through [`ln_gamma`]
//! and is exponentiated once at the end, so arguments well past the
//! overflow point of `Γ` itself are fine.

use alloc::format;

use crate::error::{Error, Result};

/// Largest argument accepted by [`gamma`]; `Γ(171.7)` overflows `f64`.
pub const GAMMA_MAX_ARG: f64 = 170.0;

/// A finite, strictly positive real number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Option<Self> {
        (value.is_finite() && value > 0.0).then_some(PositiveReal(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        PositiveReal::new(value)
            .ok_or_else(|| Error::domain("positive_real", format!("{value} is not a finite positive number")))
    }
}

fn checked(op: &'static str, x: f64) -> Result<f64> {
    match PositiveReal::new(x) {
        Some(v) => Ok(v.get()),
        None => Err(Error::domain(op, format!("x = {x} must be finite and > 0"))),
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    let x = checked("ln_gamma", x)?;
    Ok(libm::lgamma(x))
}

/// `Γ(x)` for `0 < x ≤ 170`.
pub fn gamma(x: f64) -> Result<f64> {
    let x = checked("gamma", x)?;
    if x > GAMMA_MAX_ARG {
        return Err(Error::Range {
            op: "gamma",
            detail: format!("Γ({x}) overflows; use ln_gamma"),
        });
    }
    Ok(libm::tgamma(x))
}

/// `ln B(x, y)`.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    let x = checked("beta", x)?;
    let y = checked("beta", y)?;
    // lgamma(x) + lgamma(y) is commutative in floating point, so the result
    // is exactly symmetric.
    Ok(libm::lgamma(x) + libm::lgamma(y) - libm::lgamma(x + y))
}

/// Euler Beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(libm::exp)
}

/// `ln(Γ(a)/Γ(b))` for positive `a`, `b`.
pub fn ln_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? - ln_gamma(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn integer_and_half_integer_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_eq!(ln_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(ln_gamma(5.0).unwrap(), libm::log(24.0), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.5 * libm::log(PI), max_relative = 1e-13);
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(gamma(4.0).unwrap(), 6.0, max_relative = 1e-12);
        assert_relative_eq!(gamma(2.5).unwrap(), 1.329_340_388_179_137, max_relative = 1e-12);
    }

    #[test]
    fn beta_values() {
        assert_relative_eq!(beta(0.5, 1.0).unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(beta(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(beta(0.5, 2.0).unwrap(), 4.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(beta(0.5, 0.5).unwrap(), PI, max_relative = 1e-12);
    }

    #[test]
    fn domain_and_range_errors() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(ln_gamma(-1.5), Err(Error::Domain { .. })));
        assert!(matches!(ln_gamma(f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(ln_gamma(f64::INFINITY), Err(Error::Domain { .. })));
        assert!(matches!(gamma(170.5), Err(Error::Range { .. })));
        assert!(gamma(170.0).unwrap().is_finite());
        assert!(matches!(beta(1.0, 0.0), Err(Error::Domain { .. })));
        // ln_gamma itself has no overflow cap
        assert!(ln_gamma(1.0e6).unwrap().is_finite());
    }

    #[test]
    fn recurrence_on_grid() {
        let mut x = 0.1;
        while x <= 80.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs, "x = {x}");
            x += 0.137;
        }
    }

    #[test]
    fn beta_is_exactly_symmetric() {
        for i in 1..40 {
            for j in 1..40 {
                let (x, y) = (0.1 * i as f64 + 0.03, 0.97 * j as f64);
                assert_eq!(beta(x, y).unwrap(), beta(y, x).unwrap());
            }
        }
    }

    #[test]
    fn ln_gamma_is_convex() {
        let h = 0.05;
        let mut x = 0.2;
        while x < 150.0 {
            let d2 = ln_gamma(x + h).unwrap() - 2.0 * ln_gamma(x).unwrap() + ln_gamma(x - h).unwrap();
            assert!(d2 >= -1e-10, "x = {x}, second difference {d2}");
            x += 0.31;
        }
    }
}
