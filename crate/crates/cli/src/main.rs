//! `corebif` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "corebif", version, about = "Core and Delaunay core bifiltrations of point clouds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to all available cores.
    #[arg(long, global = true, env = "COREBIF_THREADS")]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Output format; `svg` adds plots next to the CSV tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Base name of the output files.
    #[arg(long, global = true)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a labelled point cloud.
    Generate(GenerateArgs),
    /// Slice a bifiltration along a line and compute persistence.
    SlicePersist(SliceArgs),
    /// Bottleneck distance between two diagrams.
    Bottleneck(BottleneckArgs),
    /// Hilbert function of a bifiltration on an (r, k) grid.
    Hilbert(HilbertArgs),
    /// Check the interleaving and stability inclusions with the oracle.
    Verify(VerifyArgs),
    /// Filtration sizes and build times of Delaunay cores on uniform samples.
    Benchmark(BenchmarkArgs),
    /// Dump core distances and optionally the Delaunay complex.
    CoreProfile(CoreProfileArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::SlicePersist(_) => "slice-persist",
            Command::Bottleneck(_) => "bottleneck",
            Command::Hilbert(_) => "hilbert",
            Command::Verify(_) => "verify",
            Command::Benchmark(_) => "benchmark",
            Command::CoreProfile(_) => "core-profile",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    /// torus3d, clifford_torus4d, sphere2, circle, two_circles, three_annuli or uniform_box.
    #[arg(long)]
    pub manifold: String,
    /// Signal points.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Noise points.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Standard deviation of the Gaussian perturbation.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Explicit noise box as `lo0,..,lo{d-1},hi0,..,hi{d-1}`.
    #[arg(long = "box", value_delimiter = ',', allow_negative_numbers = true)]
    pub noise_box: Option<Vec<f64>>,
    /// Torus radii `R,r`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub torus_radii: Option<Vec<f64>>,
    /// Write the noiseless ground-truth sample instead.
    #[arg(long)]
    pub ground_truth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    DelaunayCore,
    CoreCech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fixed,
    Line,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SliceArgs {
    /// Point cloud CSV, or a `bifil v1` file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Kind::DelaunayCore)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Mode::Fixed)]
    pub mode: Mode,
    /// Density of a fixed slice.
    #[arg(long, conflicts_with = "s")]
    pub k: Option<u32>,
    /// Normalized density of a fixed slice.
    #[arg(long)]
    pub s: Option<f64>,
    /// Top density of a line slice.
    #[arg(long, conflicts_with = "s_max")]
    pub k_max: Option<u32>,
    /// Normalized top density of a line slice.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Radius where a line slice meets k = 0: a number or `diam`.
    #[arg(long, default_value = "diam")]
    pub r_max: String,
    /// Highest homology degree.
    #[arg(long, default_value_t = 1)]
    pub max_dim: usize,
    /// Prime coefficient field.
    #[arg(long, default_value_t = 2)]
    pub field: u32,
    /// Omit bars of zero length.
    #[arg(long)]
    pub drop_zero: bool,
    /// Also write the bifiltration as `<name>.bifil`.
    #[arg(long)]
    pub save_bifil: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BottleneckArgs {
    /// Diagram CSV or JSON.
    pub diag_a: PathBuf,
    /// Diagram CSV or JSON.
    pub diag_b: PathBuf,
    /// Homology degree to compare.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HilbertArgs {
    /// Point cloud CSV, or a `bifil v1` file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Kind::DelaunayCore)]
    pub kind: Kind,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[arg(long, default_value_t = 50)]
    pub k_max: u32,
    /// Densities are `1, 1 + step, 1 + 2 step, .., k_max`.
    #[arg(long, default_value_t = 1)]
    pub k_step: u32,
    /// Number of radius steps after 0.
    #[arg(long, default_value_t = 100)]
    pub r_steps: usize,
    /// Largest radius: a number or `diam`; defaults to half the diameter.
    #[arg(long)]
    pub r_max: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Theorem {
    #[value(name = "all")]
    All,
    #[value(name = "T34")]
    T34,
    #[value(name = "L43")]
    L43,
    #[value(name = "T44")]
    T44,
    #[value(name = "L32")]
    L32,
    #[value(name = "L44")]
    L44,
    #[value(name = "stability")]
    Stability,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Theorem::All, ignore_case = true)]
    pub theorem: Theorem,
    /// Total query points, spread evenly over the random clouds.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Random clouds per check.
    #[arg(long, default_value_t = 100)]
    pub clouds: usize,
    /// Scale for the stability check.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Slack added to the translation length in the stability check.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    /// Multiplies every non-trivial factor; values below 1 must fail.
    #[arg(long, default_value_t = 1.0, hide = true)]
    pub weaken: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchmarkArgs {
    /// Cloud sizes.
    #[arg(long, value_delimiter = ',', default_value = "10000,20000")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub k_max: u32,
    #[arg(long, default_value_t = 1)]
    pub k_step: u32,
    /// 2 or 3.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Repetitions per size, seeded `seed, seed + 1, ..`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoreProfileArgs {
    /// Point cloud CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Densities `1..=k_max`.
    #[arg(long, conflicts_with = "k", default_value_t = 8)]
    pub k_max: u32,
    /// Explicit densities.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    /// Also dump the Delaunay complex with alpha values.
    #[arg(long)]
    pub complex: bool,
    /// Also write the Delaunay core bifiltration in `bifil v1`.
    #[arg(long)]
    pub bifil: bool,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<corebif::Error> for Failure {
    fn from(e: corebif::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
