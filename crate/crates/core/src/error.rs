use alloc::string::String;

/// Errors raised by the numerical routines.
///
/// `op` is always the name of the public operation that failed so that the
/// command line can report where things went wrong.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{op}: argument outside the domain: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: result out of range: {detail}")]
    Range { op: &'static str, detail: String },

    #[error("{op}: invalid argument: {detail}")]
    Argument { op: &'static str, detail: String },

    #[error("{op}: no convergence (last = {last:e}, previous = {previous:e})")]
    Convergence {
        op: &'static str,
        last: f64,
        previous: f64,
    },

    #[error("{op}: no closed form available for {model}")]
    Unsupported { op: &'static str, model: String },

    #[error("{op}: degenerate input: {detail}")]
    Degenerate { op: &'static str, detail: String },

    #[error("{op}: invalid bracket: value {lo_value:.6} at p = {p_lo}, value {hi_value:.6} at p = {p_hi}")]
    Bracket {
        op: &'static str,
        p_lo: f64,
        lo_value: f64,
        p_hi: f64,
        hi_value: f64,
    },

    #[error("{op}: every restart failed: {detail}")]
    Search { op: &'static str, detail: String },

    #[error("cannot parse function spec `{input}`: {detail}")]
    Parse { input: String, detail: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn argument(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Argument {
            op,
            detail: detail.into(),
        }
    }

    /// True for quadrature or search non-convergence.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Search { .. })
    }
}
