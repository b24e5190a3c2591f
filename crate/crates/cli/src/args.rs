//! Command-line grammar.

use std::path::PathBuf;

use bloch_core::extremal::SearchConfig;
use bloch_core::norms::Space;
use bloch_core::{AnalyticFunction, QuadratureScheme};
use clap::{Args, Parser, Subcommand, ValueEnum};

const FUNCTION_GRAMMAR: &str = "Function specs: moebius:a_re,a_im | kernel:zeta_re,zeta_im,p,alpha | log1:scale | \
log2:scale | mono:n,c_re,c_im | taylor:c0_re,c0_im,... | b1:b_re,b_im,a_re,a_im;... (terms joined by '+')";

#[derive(Debug, Parser)]
#[command(
    name = "bloch",
    version,
    about = "Norms and inclusion constants between Bloch, Besov and weighted Bergman spaces",
    after_help = "Exit codes: 0 success, 1 a check failed, 2 usage error, 3 numerical non-convergence.\n\
CSV floats carry 17 significant digits. See `bloch help <verb>` for each verb's columns."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of one function in one space.
    #[command(after_help = concat!(
        "CSV columns: space,f,alpha,p,q,value,abs_error_estimate,converged\n",
        "Spaces: bergman (needs --p, --alpha), bloch, besov1/besov2 (need --q), b1atomic (b1 specs only)."
    ))]
    Norm {
        #[arg(long, value_parser = parse_space)]
        space: Space,
        #[arg(long = "f", value_parser = parse_function, help = FUNCTION_GRAMMAR)]
        function: AnalyticFunction,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        q: Option<f64>,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form constants at (alpha, p).
    #[command(after_help = "CSV columns: name,alpha,p,value\n\
Rows: contractivity_threshold, growth_lower, growth_upper, liminf_ratio, limsup_ratio, bound_2n (n = max(2, ceil(p/2)), c2 = 1/sqrt(alpha+1)).")]
    Bounds {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a verification suite; exit 1 if any check fails.
    #[command(after_help = concat!(
        "CSV columns: name,alpha,p,lhs,rhs,margin,passed\n",
        "Without --f the sample is: a constant, z, z + z^3/3, moebius:0.5,0, log2:0.5, kernel:0.5,0,2,0."
    ))]
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Inclusion)]
        suite: Suite,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        /// Sample function; repeat for several.
        #[arg(long = "f", value_parser = parse_function)]
        functions: Vec<AnalyticFunction>,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search for the restricted inclusion constant C~_alpha(p).
    #[command(after_help = "CSV columns: alpha,p,c_tilde,residual,n_coeffs,restarts,seed\n\
With --output PATH the Taylor coefficients of the incumbent go to PATH with extension .coeffs.csv (columns k,re,im).")]
    Search {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bracket the smallest p with C~_alpha(p) > 1 by bisection.
    #[command(after_help = "CSV columns: alpha,p,c_tilde,role\n\
role is `evaluated` for each search, then `lo` (heuristic) and `hi` (certified) for the final interval.")]
    Bracket {
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long)]
        plo: f64,
        #[arg(long)]
        phi: f64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// C~_alpha(p)/p along a p grid against the asymptotic bounds; exit 1 if
    /// a row breaks the sandwich or monotonicity.
    #[command(after_help = concat!(
        "CSV columns: alpha,p,c_tilde,ratio,liminf_bound,limsup_bound,growth_lower,growth_upper,",
        "finite_upper_ratio,residual,sandwich_ok,monotone_ok\n",
        "--format svg plots ratio against the bounds; `report` regenerates the same SVG from the CSV."
    ))]
    Scan {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Increasing grid, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        p: Vec<f64>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Render the SVG plot (or a text table) from a scan CSV.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Inclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, default_value_t = QuadratureScheme::default().n_radial)]
    pub n_radial: usize,
    #[arg(long, default_value_t = QuadratureScheme::default().n_angular)]
    pub n_angular: usize,
    #[arg(long, default_value_t = QuadratureScheme::default().rel_tol)]
    pub rel_tol: f64,
}

impl SchemeArgs {
    pub fn scheme(&self, alpha: f64) -> QuadratureScheme {
        QuadratureScheme {
            n_radial: self.n_radial,
            n_angular: self.n_angular,
            rel_tol: self.rel_tol,
            ..QuadratureScheme::new(alpha)
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = SearchConfig::default().n_coeffs)]
    pub n_coeffs: usize,
    #[arg(long, default_value_t = SearchConfig::default().restarts)]
    pub restarts: usize,
    #[arg(long, default_value_t = SearchConfig::default().max_iters)]
    pub max_iters: usize,
    #[arg(long, default_value_t = SearchConfig::default().seed)]
    pub seed: u64,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            n_coeffs: self.n_coeffs,
            restarts: self.restarts,
            max_iters: self.max_iters,
            seed: self.seed,
            ..SearchConfig::default()
        }
    }
}

fn parse_function(s: &str) -> Result<AnalyticFunction, String> {
    s.parse().map_err(|e: bloch_core::Error| e.to_string())
}

fn parse_space(s: &str) -> Result<Space, String> {
    s.parse().map_err(|e: bloch_core::Error| e.to_string())
}
