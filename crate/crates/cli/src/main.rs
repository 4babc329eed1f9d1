//! `cardspline`: batch experiments with polyhyperbolic cardinal splines.
//!
//! Exit codes: 0 success, 1 reproduction failure, 2 invalid input,
//! 3 numerical non-convergence, 4 window overflow or divergent series.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use cardspline::SplineError;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "cardspline", version, about = "Polyhyperbolic cardinal spline experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fourier coefficients c_j of the reciprocal symbol (`j,c_j`).
    Coeffs(RunArgs),
    /// The fundamental function on a grid (`x,L_k`).
    #[command(name = "eval-L")]
    EvalL(RunArgs),
    /// Interpolant of a CSV data table on a grid (`x,f_b`).
    Interp(RunArgs),
    /// Interpolate samples of an exponential solution and compare (`x,g,f_b,abs_err`).
    Reproduce(RunArgs),
    /// L2 interpolation error of a band-limited target over a range of orders.
    Converge(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Shape parameter alpha > 0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Order k, or an inclusive range `a..b` for `converge` (default 1..10 there).
    #[arg(long)]
    pub k: Option<KRange>,
    /// Target tolerance, within [1e-14, 1e-2].
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Evaluation grid `start:stop:count`, endpoints included.
    #[arg(long, default_value = "-5:5:101", allow_hyphen_values = true)]
    pub grid: Grid,
    /// CSV file with header and columns `j,b_j` (interp).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// cosh, sinh, exp+, exp-, xexp+, xexp-, x2exp+, ... (reproduce).
    #[arg(long)]
    pub basis: Option<String>,
    /// sinc, triangle-spectrum, bump-spectrum, half-band or zero (converge).
    #[arg(long)]
    pub target: Option<String>,
    /// Sup-error grid half-width W (converge).
    #[arg(long, default_value_t = 5.0)]
    pub width: f64,
    /// Sup-error grid point count (converge).
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Output file; CSV goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub first: usize,
    pub last: usize,
}

impl KRange {
    pub fn single(&self) -> Option<usize> {
        (self.first == self.last).then_some(self.first)
    }
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{s}` is not an order or a range a..b"));
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let k = parse(s)?;
                (k, k)
            }
        };
        if first > last {
            return Err(format!("order range `{s}` is empty"));
        }
        Ok(Self { first, last })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(move |i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("grid `{s}` must be start:stop:count with count >= 2");
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad());
        };
        let start: f64 = a.parse().map_err(|_| bad())?;
        let stop: f64 = b.parse().map_err(|_| bad())?;
        let count: usize = n.parse().map_err(|_| bad())?;
        if count < 2 || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        Ok(Self { start, stop, count })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("reproduction failed: max abs error {err:e} exceeds {limit:e}")]
    Reproduction { err: f64, limit: f64 },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Reproduction { .. } => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Spline(e) => match e {
                SplineError::NonConvergence { .. }
                | SplineError::ToleranceUnreachable { .. }
                | SplineError::NonFiniteData(_)
                | SplineError::IllConditioned { .. }
                | SplineError::DegenerateFit { .. } => 3,
                SplineError::WindowOverflow { .. } | SplineError::DivergentSeries { .. } => 4,
                _ => 2,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (args, result) = match &cli.command {
        Command::Coeffs(a) => (a, commands::coeffs(a)),
        Command::EvalL(a) => (a, commands::eval_l(a)),
        Command::Interp(a) => (a, commands::interp(a)),
        Command::Reproduce(a) => (a, commands::reproduce(a)),
        Command::Converge(a) => (a, commands::converge(a)),
    };
    let outcome = result.and_then(|(artifact, verdict)| {
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;
        artifact.emit(args.out.as_deref(), args.format, wall_ms)?;
        verdict
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
