use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wavelock::ProblemParams;

pub const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  invalid parameters or usage (for example p = q, nonpositive values)
  3  numerical failure (solver, quadrature or power iteration)
  4  I/O error
  5  a verification tolerance was breached

Environment:
  WAVELOCK_THREADS  upper bound on worker threads";

#[derive(Debug, Parser)]
#[command(
    name = "wavelock",
    version,
    about = "Sharp norm bounds for Cauchy-wavelet localization operators under L^p and L^q weight budgets",
    after_help = EXIT_CODES
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Include wall-clock timings in reports (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an instance and compute its sharp bound.
    Bound(BoundArgs),
    /// Write the extremal radial profile and distribution function as CSV.
    Profile(ProfileArgs),
    /// Sample the extremal weight on a plane grid as CSV.
    Grid(GridArgs),
    /// Check the bound against the discrete oracle and the direct operator.
    Verify(VerifyArgs),
    /// Sweep the budget ratio B/A or the exponent q.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Instance {
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    /// L^p budget.
    #[arg(long = "A")]
    pub a: f64,
    /// L^q budget.
    #[arg(long = "B")]
    pub b: f64,
}

impl Instance {
    pub fn params(&self) -> wavelock::Result<ProblemParams> {
        ProblemParams::new(self.beta, self.p, self.q, self.a, self.b)
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Number of rows.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Centre of the weight as `x,y`; the `x`, `y` columns walk the vertical
    /// geodesic upward from it.
    #[arg(long, value_parser = parse_point, default_value = "0,1")]
    pub center: (f64, f64),
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Centre of the weight as `x,y`.
    #[arg(long, value_parser = parse_point, default_value = "0,1")]
    pub center: (f64, f64),
    /// Constant phase theta of the weight.
    #[arg(long, default_value_t = 0.0)]
    pub phase: f64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 101)]
    pub nx: usize,
    /// Rows are log-spaced in y.
    #[arg(long, default_value_t = 0.01)]
    pub y_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub y_max: f64,
    #[arg(long, default_value_t = 81)]
    pub ny: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridLevel {
    Coarse,
    Medium,
    Desk,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Run only the discrete oracle.
    #[arg(long)]
    pub skip_operator: bool,
    /// Oracle grid size.
    #[arg(long, default_value_t = 2000)]
    pub oracle_points: usize,
    /// Operator grid preset; the flags below override single fields.
    #[arg(long, value_enum, default_value = "desk")]
    pub grid: GridLevel,
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub n_omega: Option<usize>,
    #[arg(long)]
    pub n_x: Option<usize>,
    #[arg(long)]
    pub y_min: Option<f64>,
    #[arg(long)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub n_y: Option<usize>,
    /// Test hook: scale the extremal weight before measuring its norm.
    #[arg(long, hide = true)]
    pub corrupt_weight: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub p: f64,
    /// Fixed q for ratio sweeps.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long = "A", default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.2)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 0.8)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 61)]
    pub steps: usize,
    /// Comma-separated q values; each row then uses `--ratio`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub q_sweep: Option<Vec<f64>>,
    /// Budget ratio B/A for q sweeps.
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x in `{s}`: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y in `{s}`: {e}"))?;
    if !(y > 0.0) {
        return Err(format!("centre must lie in the upper half-plane, got y = {y}"));
    }
    Ok((x, y))
}
