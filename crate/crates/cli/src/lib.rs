//! Command-line front end for `bloch-core`.
//!
//! [`run`] is the whole program: it parses `argv`, executes one verb and
//! returns the process exit code (0 success, 1 a check failed, 2 usage
//! error, 3 numerical non-convergence). The binary is a thin wrapper, so
//! tests drive the library directly.

mod args;
pub mod scan;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bloch_core::bounds::{
    asymptotic_bounds, bound_2n, contractivity_threshold, growth_lower, growth_upper, verify_inclusion_suite, BoundReport,
};
use bloch_core::extremal::{asymptotic_scan, p_alpha_bracket, search_c_tilde, ExtremalEstimate, Start};
use bloch_core::func::bloch_norm;
use bloch_core::norms::{b1_atomic_upper_bound, bergman_norm, besov_norm, BesovVariant, Space};
use bloch_core::{AnalyticFunction, Complex64, Error, QuadratureScheme};
use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format};
use table::{num, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;

/// Why a verb stopped early.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Argument { .. } | Error::Domain { .. } => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(e) if e.is_convergence() => EXIT_NO_CONVERGENCE,
            Failure::Numeric(_) | Failure::Io(_) => EXIT_CHECK_FAILED,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Numeric(e) => e.to_string(),
        }
    }
}

/// What a verb produced: a payload for stdout or `--output`, extra files,
/// and whether every check it ran passed.
struct Outcome {
    payload: Vec<u8>,
    sidecars: Vec<(PathBuf, Vec<u8>)>,
    passed: bool,
}

impl Outcome {
    fn ok(payload: Vec<u8>) -> Self {
        Outcome {
            payload,
            sidecars: Vec::new(),
            passed: true,
        }
    }
}

/// Parses `argv` (program name first) and runs the verb.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if help {
                let _ = out.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    let output = output_path(&cli.command).map(Path::to_path_buf);
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match &output {
                Some(path) => fs::write(path, &outcome.payload).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(&outcome.payload).map_err(|e| format!("cannot write to stdout: {e}")),
            };
            let sidecars = outcome
                .sidecars
                .iter()
                .try_for_each(|(p, bytes)| fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())));
            if let Err(m) = written.and(sidecars) {
                let _ = writeln!(err, "bloch: {m}");
                return EXIT_CHECK_FAILED;
            }
            if outcome.passed {
                EXIT_OK
            } else {
                let _ = writeln!(err, "bloch: at least one check failed");
                EXIT_CHECK_FAILED
            }
        }
        Err(f) => {
            let _ = writeln!(err, "bloch: {}", f.message());
            f.code()
        }
    }
}

fn output_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Norm { out, .. }
        | Command::Bounds { out, .. }
        | Command::Verify { out, .. }
        | Command::Search { out, .. }
        | Command::Bracket { out, .. }
        | Command::Scan { out, .. } => out.output.as_deref(),
        Command::Report { output, .. } => output.as_deref(),
    }
}

fn render(table: &Table, format: Format, verb: &str) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Csv => Ok(table.to_csv()),
        Format::Text => Ok(table.to_text()),
        Format::Svg => Err(Failure::Usage(format!("{verb}: --format svg is only available for scan and report"))),
    }
}

fn execute(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Norm {
            space,
            function,
            p,
            alpha,
            q,
            scheme,
            out,
        } => {
            let s = scheme.scheme(alpha);
            let (value, err, converged) = norm(space, &function, p, alpha, q, &s)?;
            if out.format == Format::Text {
                return Ok(Outcome::ok(format!("{value}\n").into_bytes()));
            }
            let mut t = Table::new(&["space", "f", "alpha", "p", "q", "value", "abs_error_estimate", "converged"]);
            let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
            t.push(vec![
                space_name(space).into(),
                function.to_string(),
                num(alpha),
                opt(p),
                opt(q),
                num(value),
                num(err),
                converged.to_string(),
            ]);
            Ok(Outcome::ok(render(&t, out.format, "norm")?))
        }
        Command::Bounds { alpha, p, out } => {
            let mut t = Table::new(&["name", "alpha", "p", "value"]);
            let mut push = |name: &str, v: f64| t.push(vec![name.into(), num(alpha), num(p), num(v)]);
            if alpha >= 0.0 {
                push("contractivity_threshold", contractivity_threshold(alpha)?);
            }
            push("growth_lower", growth_lower(alpha, p)?);
            push("growth_upper", growth_upper(alpha, p)?);
            let (lo, hi) = asymptotic_bounds(alpha)?;
            push("liminf_ratio", lo);
            push("limsup_ratio", hi);
            let n = (p / 2.0).ceil().max(2.0) as u32;
            push("bound_2n", bound_2n(alpha, n, 1.0 / (alpha + 1.0).sqrt())?);
            Ok(Outcome::ok(render(&t, out.format, "bounds")?))
        }
        Command::Verify {
            suite: _,
            alpha,
            p,
            functions,
            scheme,
            out,
        } => {
            let sample = if functions.is_empty() { default_sample()? } else { functions };
            let reports = verify_inclusion_suite(alpha, p, &sample, &scheme.scheme(alpha));
            let passed = reports.iter().all(|r| r.passed);
            let payload = match out.format {
                Format::Text => report_text(&reports),
                f => render(&report_table(&reports), f, "verify")?,
            };
            Ok(Outcome {
                payload,
                sidecars: Vec::new(),
                passed,
            })
        }
        Command::Search {
            alpha,
            p,
            search,
            scheme,
            out,
        } => {
            let config = search.config();
            let est = search_c_tilde(alpha, p, &config, &scheme.scheme(alpha))?;
            let mut t = Table::new(&["alpha", "p", "c_tilde", "residual", "n_coeffs", "restarts", "seed"]);
            t.push(vec![
                num(alpha),
                num(p),
                num(est.c_tilde),
                num(est.residual),
                config.n_coeffs.to_string(),
                config.restarts.to_string(),
                config.seed.to_string(),
            ]);
            let payload = match out.format {
                Format::Text => search_text(&est),
                f => render(&t, f, "search")?,
            };
            let sidecars = match &out.output {
                Some(path) => vec![(path.with_extension("coeffs.csv"), coefficient_table(est.coefficients.coefficients()).to_csv())],
                None => Vec::new(),
            };
            Ok(Outcome {
                payload,
                sidecars,
                passed: true,
            })
        }
        Command::Bracket {
            alpha,
            plo,
            phi,
            search,
            scheme,
            out,
        } => {
            let b = p_alpha_bracket(alpha, plo, phi, &search.config(), &scheme.scheme(alpha))?;
            let value_at = |p: f64| b.evaluations.iter().find(|e| e.0 == p).map_or(f64::NAN, |e| e.1);
            if out.format == Format::Text {
                let mut s = String::new();
                for (p, c) in &b.evaluations {
                    s.push_str(&format!("p = {p:<10} C~ = {c:.10}\n"));
                }
                s.push_str(&format!(
                    "p_alpha in ({}, {}]  (lower end heuristic, upper end certified)\n",
                    b.lo, b.hi
                ));
                return Ok(Outcome::ok(s.into_bytes()));
            }
            let mut t = Table::new(&["alpha", "p", "c_tilde", "role"]);
            for (p, c) in &b.evaluations {
                t.push(vec![num(alpha), num(*p), num(*c), "evaluated".into()]);
            }
            t.push(vec![num(alpha), num(b.lo), num(value_at(b.lo)), "lo".into()]);
            t.push(vec![num(alpha), num(b.hi), num(value_at(b.hi)), "hi".into()]);
            Ok(Outcome::ok(render(&t, out.format, "bracket")?))
        }
        Command::Scan {
            alpha,
            p,
            search,
            scheme,
            out,
        } => {
            let rows = asymptotic_scan(alpha, &p, &search.config(), &scheme.scheme(alpha))?;
            let passed = rows.iter().all(|r| r.sandwich_ok && r.monotone_ok);
            let csv = scan::table(alpha, &rows).to_csv();
            let payload = match out.format {
                Format::Csv => csv,
                Format::Text => scan::table(alpha, &rows).to_text(),
                // through the CSV so that `report` reproduces this byte for byte
                Format::Svg => scan::svg(&scan::parse(&csv).map_err(Failure::Io)?).into_bytes(),
            };
            Ok(Outcome {
                payload,
                sidecars: Vec::new(),
                passed,
            })
        }
        Command::Report { input, format, output: _ } => {
            let bytes = fs::read(&input).map_err(|e| Failure::Usage(format!("report: cannot read {}: {e}", input.display())))?;
            let records = scan::parse(&bytes).map_err(Failure::Usage)?;
            let payload = match format {
                Format::Svg => scan::svg(&records).into_bytes(),
                Format::Csv => bytes,
                Format::Text => {
                    let alpha = records[0].alpha;
                    let rows: Vec<_> = records.into_iter().map(|r| r.row).collect();
                    scan::table(alpha, &rows).to_text()
                }
            };
            Ok(Outcome::ok(payload))
        }
    }
}

fn space_name(space: Space) -> &'static str {
    match space {
        Space::Bergman => "bergman",
        Space::Bloch => "bloch",
        Space::Besov1 => "besov1",
        Space::Besov2 => "besov2",
        Space::B1Atomic => "b1atomic",
    }
}

/// `(value, error estimate, converged)`; non-convergence is an error.
fn norm(
    space: Space,
    f: &AnalyticFunction,
    p: Option<f64>,
    alpha: f64,
    q: Option<f64>,
    scheme: &QuadratureScheme,
) -> Result<(f64, f64, bool), Failure> {
    let need = |x: Option<f64>, flag: &str| x.ok_or_else(|| Failure::Usage(format!("norm: --space {} needs --{flag}", space_name(space))));
    Ok(match space {
        Space::Bergman => {
            let r = bergman_norm(f, need(p, "p")?, alpha, scheme)?;
            (r.value, r.abs_error_estimate, r.converged)
        }
        Space::Bloch => (bloch_norm(f)?, 0.0, true),
        Space::Besov1 | Space::Besov2 => {
            let variant = if space == Space::Besov1 { BesovVariant::Norm1 } else { BesovVariant::Norm2 };
            let r = besov_norm(f, need(q, "q")?, variant, scheme)?;
            (r.value, r.abs_error_estimate, r.converged)
        }
        Space::B1Atomic => (b1_atomic_upper_bound(f)?, 0.0, true),
    })
}

fn default_sample() -> Result<Vec<AnalyticFunction>, Error> {
    let c = |re: f64| Complex64::new(re, 0.0);
    Ok(vec![
        AnalyticFunction::constant(c(1.0))?,
        AnalyticFunction::monomial(1, c(1.0))?,
        AnalyticFunction::taylor(vec![c(0.0), c(1.0), c(0.0), c(1.0 / 3.0)])?,
        AnalyticFunction::moebius(c(0.5))?,
        AnalyticFunction::log_two_sided(0.5)?,
        AnalyticFunction::kernel(c(0.5), 2.0, 0.0)?,
    ])
}

fn report_table(reports: &[BoundReport]) -> Table {
    let mut t = Table::new(&["name", "alpha", "p", "lhs", "rhs", "margin", "passed"]);
    for r in reports {
        t.push(vec![
            r.name.clone(),
            num(r.alpha),
            num(r.p),
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
            r.passed.to_string(),
        ]);
    }
    t
}

fn report_text(reports: &[BoundReport]) -> Vec<u8> {
    let mut s = String::new();
    for r in reports {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} {}: {:.12} {} {:.12} (margin {:+.3e})", r.name, r.lhs, r.relation, r.rhs, r.margin));
        if !r.detail.is_empty() {
            s.push_str(&format!(" [{}]", r.detail));
        }
        s.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    s.push_str(&format!("{} checks, {failed} failed\n", reports.len()));
    s.into_bytes()
}

fn coefficient_table(coeffs: &[Complex64]) -> Table {
    let mut t = Table::new(&["k", "re", "im"]);
    for (k, c) in coeffs.iter().enumerate() {
        t.push(vec![k.to_string(), num(c.re), num(c.im)]);
    }
    t
}

fn start_label(start: &Start) -> String {
    match start {
        Start::LogOneSided => "log1".into(),
        Start::LogTwoSided => "log2 (odd)".into(),
        Start::Kernel(z) => format!("kernel {:.3}{:+.3}i", z.re, z.im),
        Start::Lacunary(s) => format!("lacunary, stride {s}"),
        Start::Random => "random".into(),
        Start::Warm => "warm".into(),
    }
}

fn search_text(e: &ExtremalEstimate) -> Vec<u8> {
    let d = &e.diagnostics;
    let mut s = format!(
        "C~ lower bound  {:.12}  (alpha = {}, p = {})\nincumbent       {}\nresidual        {:.3e}\n",
        e.c_tilde, e.alpha, e.p, d.incumbent, e.residual
    );
    s.push_str(&format!(
        "candidates      polynomial {:.10}, log1 {:.10}, log2 {:.10}\n",
        d.polynomial_value, d.log1_value, d.log2_value
    ));
    for r in &d.restarts {
        s.push_str(&format!("restart {:<24} {:.10}  ({} iterations)\n", start_label(&r.start), r.value, r.iterations));
    }
    for n in &d.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s.into_bytes()
}
