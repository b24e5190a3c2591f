//! Text form of a function model, shared with the command line.
//!
//! ```text
//! moebius:a_re,a_im
//! kernel:zeta_re,zeta_im,p,alpha
//! log1:scale                      scale · log(1 − z)
//! log2:scale                      scale · log((1 + z)/(1 − z))
//! mono:n,c_re,c_im
//! taylor:c0_re,c0_im,c1_re,c1_im,…
//! b1:b_re,b_im,a_re,a_im;b_re,b_im,a_re,a_im;…
//! f0:alpha_re,alpha_im,beta_re,beta_im
//! fzeta:gamma_re,gamma_im,delta_re,delta_im,zeta_re,zeta_im
//! ```
//!
//! Terms joined by `+` are summed, e.g. `mono:1,1,0+log2:0.5`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use super::{AnalyticFunction, Atom, TaylorSeries};
use crate::error::{Error, Result};

fn parse_err(input: &str, detail: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        detail: detail.into(),
    }
}

fn numbers(input: &str, args: &str) -> Result<Vec<f64>> {
    if args.trim().is_empty() {
        return Ok(Vec::new());
    }
    args.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| parse_err(input, format!("`{}`: {e}", s.trim())))
        })
        .collect()
}

fn exactly<const N: usize>(input: &str, args: &str) -> Result<[f64; N]> {
    let v = numbers(input, args)?;
    v.as_slice()
        .try_into()
        .map_err(|_| parse_err(input, format!("expected {N} numbers, found {}", v.len())))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn parse_term(input: &str, term: &str) -> Result<AnalyticFunction> {
    let (head, args) = term
        .split_once(':')
        .ok_or_else(|| parse_err(input, format!("term `{term}` has no `kind:` prefix")))?;
    let f = match head.trim() {
        "moebius" => {
            let [re, im] = exactly(input, args)?;
            AnalyticFunction::moebius(c(re, im))?
        }
        "kernel" => {
            let [re, im, p, alpha] = exactly(input, args)?;
            AnalyticFunction::kernel(c(re, im), p, alpha)?
        }
        "log1" => {
            let [s] = exactly(input, args)?;
            AnalyticFunction::log_one_sided(s)?
        }
        "log2" => {
            let [s] = exactly(input, args)?;
            AnalyticFunction::log_two_sided(s)?
        }
        "mono" => {
            let [n, re, im] = exactly(input, args)?;
            if !(n >= 0.0 && libm::trunc(n) == n && n <= u32::MAX as f64) {
                return Err(parse_err(input, format!("monomial degree {n} is not a non-negative integer")));
            }
            AnalyticFunction::monomial(n as u32, c(re, im))?
        }
        "taylor" => {
            let v = numbers(input, args)?;
            if v.is_empty() || v.len() % 2 != 0 {
                return Err(parse_err(input, "taylor needs a non-empty list of (re, im) pairs"));
            }
            AnalyticFunction::Taylor(TaylorSeries::new(v.chunks(2).map(|p| c(p[0], p[1])).collect())?)
        }
        "b1" => {
            let mut atoms = Vec::new();
            for chunk in args.split(';').filter(|s| !s.trim().is_empty()) {
                let [br, bi, ar, ai] = exactly(input, chunk)?;
                atoms.push(Atom {
                    b: c(br, bi),
                    a: c(ar, ai),
                });
            }
            AnalyticFunction::atomic_b1(atoms)?
        }
        "f0" => {
            let [ar, ai, br, bi] = exactly(input, args)?;
            AnalyticFunction::extremal_f0(c(ar, ai), c(br, bi))?
        }
        "fzeta" => {
            let [gr, gi, dr, di, zr, zi] = exactly(input, args)?;
            AnalyticFunction::extremal_fzeta(c(gr, gi), c(dr, di), c(zr, zi))?
        }
        other => return Err(parse_err(input, format!("unknown function kind `{other}`"))),
    };
    Ok(f)
}

/// Splits on `+` that start a new term (followed by a letter), so exponents
/// like `1e+3` stay intact.
fn split_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..bytes.len() {
        if bytes[i] == b'+' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphabetic()) {
            out.push(&s[start..i]);
            start = i + 1;
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for AnalyticFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms = split_terms(s.trim());
        let mut parsed = terms
            .iter()
            .map(|t| parse_term(s, t.trim()))
            .collect::<Result<Vec<_>>>()?;
        if parsed.len() == 1 {
            Ok(parsed.pop().unwrap())
        } else {
            Ok(AnalyticFunction::Sum(parsed))
        }
    }
}

/// Writes the spec grammar. Models with no text form (`Power`, `Scaled`)
/// are expanded to a Taylor series of order 64.
impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AnalyticFunction::*;
        match self {
            Taylor(t) => {
                f.write_str("taylor:")?;
                for (k, c) in t.coefficients().iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{},{}", c.re, c.im)?;
                }
                Ok(())
            }
            Moebius { a } => write!(f, "moebius:{},{}", a.re, a.im),
            Kernel { zeta, p, alpha } => write!(f, "kernel:{},{},{},{}", zeta.re, zeta.im, p, alpha),
            LogOneSided { scale } => write!(f, "log1:{scale}"),
            LogTwoSided { scale } => write!(f, "log2:{scale}"),
            ExtremalF0 { alpha, beta } => write!(f, "f0:{},{},{},{}", alpha.re, alpha.im, beta.re, beta.im),
            ExtremalFzeta { gamma, delta, zeta } => write!(
                f,
                "fzeta:{},{},{},{},{},{}",
                gamma.re, gamma.im, delta.re, delta.im, zeta.re, zeta.im
            ),
            Monomial { n, c } => write!(f, "mono:{},{},{}", n, c.re, c.im),
            AtomicB1 { atoms } => {
                f.write_str("b1:")?;
                for (k, atom) in atoms.iter().enumerate() {
                    if k > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{},{},{},{}", atom.b.re, atom.b.im, atom.a.re, atom.a.im)?;
                }
                Ok(())
            }
            Sum(terms) => {
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Power { .. } | Scaled { .. } => {
                let t = TaylorSeries {
                    coeffs: self.coefficients_to(64),
                };
                write!(f, "{}", Taylor(t))
            }
        }
    }
}
