use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shufflesor::{Permutation, StrategyKind};

#[derive(Debug, Parser)]
#[command(name = "shufflesor", version, about = "SOR and Kaczmarz sweeps under cyclic, shuffled and random orderings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a test problem (matrix, factor, right-hand side, planted solution).
    Generate(GenerateArgs),
    /// Run one solver history and print its empirical rate.
    Solve(SolveArgs),
    /// Run several strategies over Monte Carlo trials.
    Compare(CompareArgs),
    /// Spectral data, truncation statistics and E[LL*] checks.
    Analyze(AnalyzeArgs),
    /// Theoretical per-sweep contraction factors.
    Bounds(BoundsArgs),
    /// Render a history CSV as an SVG semi-log plot.
    Plot(PlotArgs),
}

fn parse_omega(s: &str) -> Result<f64, String> {
    let w: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if w > 0.0 && w < 2.0 {
        Ok(w)
    } else {
        Err(format!("omega must lie in (0, 2), got {w}"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {v}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKindArg {
    Fan,
    Random,
    Lowrank,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: ProblemKindArg,
    /// Fan size (fan) or factor width (random).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of equations (random, lowrank).
    #[arg(long)]
    pub n: Option<usize>,
    /// Rank (lowrank).
    #[arg(long)]
    pub r: Option<usize>,
    /// Complex Gaussian factor (random).
    #[arg(long)]
    pub complex: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Problem files: either `--dir` holding `matrix.mtx` etc., or explicit paths
/// (explicit paths override the directory).
#[derive(Debug, Args, Clone, Default)]
pub struct InputArgs {
    #[arg(long)]
    pub dir: Option<PathBuf>,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Planted solution; computed by pseudo-inverse when absent.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Factor `A` with `B = AA*` (needed for `--method kaczmarz`).
    #[arg(long)]
    pub factor: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Coordinate sweeps on `B y = b`; error `|ȳ − y|²_B`.
    Sor,
    /// Row sweeps on `A x = b`; error `‖x̄ − x‖²`.
    Kaczmarz,
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Starting vector file; default is zero, or the last unit vector when b = 0.
    #[arg(long)]
    pub y0: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0, value_parser = parse_omega)]
    pub omega: f64,
    /// Ordering for `fixed` / `preshuffled`, 1-based comma list such as `3,1,2`.
    #[arg(long)]
    pub sigma: Option<Permutation>,
    #[arg(long, default_value_t = 100)]
    pub sweeps: usize,
    /// Stop once the squared error is at or below this value.
    #[arg(long, default_value_t = 1e-24)]
    pub target: f64,
    /// Base seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Method::Sor)]
    pub method: Method,
    /// Sweeps used for the empirical rate (default min(10, sweeps run)).
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub allow_inconsistent: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = StrategyKind::Cyclic)]
    pub strategy: StrategyKind,
    /// History CSV path; written to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_delimiter = ',', default_value = "cyclic,shuffled,preshuffled,single-step-random")]
    pub strategies: Vec<StrategyKind>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 32.42, value_parser = parse_positive)]
    pub c1: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write an SVG plot of the mean curves.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Draw individual trials as faint lines in the plot.
    #[arg(long)]
    pub per_trial: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1.0, value_parser = parse_omega)]
    pub omega: f64,
    /// Random starts for the heuristic search (n > 8).
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    /// Monte Carlo orderings for sampled estimates.
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1.0, value_parser = parse_omega)]
    pub omega: f64,
    /// Small-rank constant; the small-rank cyclic bound is omitted without it.
    #[arg(long, value_parser = parse_positive)]
    pub c0: Option<f64>,
    #[arg(long, default_value_t = 32.42, value_parser = parse_positive)]
    pub c1: f64,
    #[arg(long, default_value_t = 2907.0, value_parser = parse_positive)]
    pub c2: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Accepted for uniformity; bounds are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "convergence")]
    pub title: String,
    #[arg(long)]
    pub per_trial: bool,
    /// Accepted for uniformity; plotting is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
