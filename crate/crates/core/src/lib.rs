//! Norms of analytic functions on the unit disk and the inclusion constants
//! between Besov, Bloch and weighted Bergman spaces.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation; file formats and the command line live in `bloch-cli`.
//!
//! Module map:
//!
//! - [`special`]: log-Gamma, Gamma and Beta.
//! - [`func`]: analytic function models, Taylor coefficients, Bloch seminorm.
//! - [`quadrature`]: circle means and integrals against `dμ_α` on the disk.
//! - [`norms`]: Bergman, Besov, atomic B¹ and Parseval-based norms.
//! - [`bounds`]: closed-form constants and checkable inequality reports.
//! - [`extremal`]: numerical search for the inclusion constant `C̃_α(p)`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod extremal;
pub mod func;
pub mod norms;
pub mod quadrature;
pub mod special;

mod linalg;
mod optimize;
mod sum;

pub use error::{Error, Result};
pub use func::{AnalyticFunction, TaylorSeries};
pub use num_complex::Complex64;
pub use quadrature::{NormResult, QuadratureScheme};
