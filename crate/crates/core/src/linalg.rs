//! Symmetric tridiagonal eigenproblem, as needed by Golub–Welsch.

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`), together with
/// the first component of each normalized eigenvector.
///
/// Implicit QL with Wilkinson shifts; only the first row of the eigenvector
/// matrix is accumulated, which keeps the cost at O(n²).
pub(crate) fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(alloc::vec::Vec<f64>, alloc::vec::Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = alloc::vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = alloc::vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence {
                    op: "tridiagonal_eigen",
                    last: e[l],
                    previous: d[l],
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3, eigenvectors (1, ∓1)/√2
        let (mut vals, z) = tridiagonal_eigen(&[2.0, 2.0], &[1.0]).unwrap();
        for zi in &z {
            assert!((zi * zi - 0.5).abs() < 1e-14);
        }
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn first_components_are_normalized() {
        let n = 50;
        let diag: alloc::vec::Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let off: alloc::vec::Vec<f64> = (0..n - 1).map(|i| 0.3 + 0.01 * i as f64).collect();
        let (vals, z) = tridiagonal_eigen(&diag, &off).unwrap();
        let total: f64 = z.iter().map(|v| v * v).sum();
        assert!((total - 1.0).abs() < 1e-13);
        // trace is preserved
        let trace: f64 = vals.iter().sum();
        let expected: f64 = diag.iter().sum();
        assert!((trace - expected).abs() < 1e-12);
    }
}
