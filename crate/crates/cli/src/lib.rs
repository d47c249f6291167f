//! Command-line front end: operators on grids, norm sweeps, envelope tables,
//! named verification checks and empirical operator-norm sweeps.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or domain error. On
//! exit code 2 nothing is written to stdout.

mod commands;
pub mod output;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fraclab::QuadratureSpec;

pub use output::Format;

#[derive(Debug, Parser)]
#[command(name = "fraclab", version, about = "Fractional operators, norms and inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub rel_tol: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-12, global = true)]
    pub abs_tol: f64,
    /// Reserved; every method is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl Common {
    pub fn spec(&self) -> fraclab::Result<QuadratureSpec> {
        let s = QuadratureSpec::with_tolerances(self.rel_tol, self.abs_tol);
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply an operator to a test function on a grid of points.
    Apply(ApplyArgs),
    /// Lp norms of a test function over a grid of exponents.
    Norm(NormArgs),
    /// Exponent relation and envelope constants over a grid of exponents.
    Constants(ConstantsArgs),
    /// Run a named inequality check.
    Verify(VerifyArgs),
    /// Empirical operator-norm lower bounds with an optional blow-up fit.
    Sweep(SweepArgs),
    /// List the test functions.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    RlIntegral,
    Marchaud,
    Derivative,
    Riesz,
    Weighted,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(value_enum)]
    pub operator: Operator,
    /// Function spec, e.g. `f0`, `indicator:0.2,0.7`, `const:1`.
    #[arg(long = "f")]
    pub function: String,
    #[arg(long)]
    pub alpha: f64,
    /// Evaluation points: a number, a list or `start:stop:count[:spacing]`.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long = "f")]
    pub function: String,
    #[arg(long)]
    pub p_grid: String,
    /// Order used by `h_delta` specs without their own.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long)]
    pub p_grid: String,
    /// Maximal-function constant in the upper envelope.
    #[arg(long, default_value_t = 10.0)]
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    IndicatorBracket,
    GlsIndicator,
    VsBound,
    BesovRatio,
    GlsSobolev,
    Prop51,
    Factorization,
    Weighted,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    /// Function spec; repeat for families (`weighted`).
    #[arg(long = "f")]
    pub functions: Vec<String>,
    /// Second factor for `factorization`.
    #[arg(long = "g")]
    pub second: Option<String>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub h1: Option<f64>,
    #[arg(long)]
    pub h2: Option<f64>,
    /// Right end of the interval `(0, b)` for `besov-ratio`; defaults to the function's domain end.
    #[arg(long)]
    pub b: Option<f64>,
    /// Support of the psi function for `gls-indicator` and `gls-sobolev`.
    #[arg(long)]
    pub s1: Option<f64>,
    #[arg(long)]
    pub s2: Option<f64>,
    /// Grid of exponents for `weighted`.
    #[arg(long)]
    pub p_grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EndpointArg {
    One,
    InverseAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    Rl,
    Riesz,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Family member spec; repeat for several.
    #[arg(long = "f", required = true)]
    pub functions: Vec<String>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "rl")]
    pub potential: PotentialArg,
    /// Explicit exponents; otherwise a geometric approach to `--endpoint`.
    #[arg(long)]
    pub p_grid: Option<String>,
    /// Endpoint approached by the grid `distance = 2^-k`, and the endpoint of the slope fit.
    #[arg(long, value_enum)]
    pub endpoint: Option<EndpointArg>,
    #[arg(long, default_value_t = 3)]
    pub k_min: i32,
    #[arg(long, default_value_t = 8)]
    pub k_max: i32,
    /// Maximal-function constant in the upper envelope.
    #[arg(long, default_value_t = 10.0)]
    pub s: f64,
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

/// What a command produced: its output text and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// Runs a parsed command without touching stdout.
pub fn execute(cli: &Cli) -> fraclab::Result<Outcome> {
    commands::execute(cli)
}

/// Runs the program on `argv`, writing results to stdout and diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 2;
            }
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
