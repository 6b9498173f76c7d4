//! Command-line front end of the `subspace-lrr` binary.
//!
//! Exit codes: `0` success, `2` usage or input error, `3` the solver hit its
//! iteration cap (the report is still written).

pub mod benchmark;
pub mod commands;
pub mod config;
pub mod methods;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, CliError, ExitCode};

#[derive(Debug, Parser)]
#[command(name = "subspace-lrr", version, about = "Low-rank representation subspace clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic labeled dataset.
    Generate(GenerateArgs),
    /// Cluster a dataset file with one method and write a JSON report.
    Cluster(ClusterArgs),
    /// Run every method on the synthetic datasets.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatasetKind {
    TwoMoons,
    ThreeCircles,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub dataset: DatasetKind,
    /// Points per moon or per circle.
    #[arg(long)]
    pub n: Option<usize>,
    /// Standard deviation of the Gaussian noise.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Circle radii, comma separated (three-circles only).
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Kmeans,
    Ncut,
    Lrr,
    GraphLrr,
    Lrlrr,
    TlrLrr,
}

impl From<MethodArg> for methods::Method {
    fn from(m: MethodArg) -> Self {
        use methods::Method;
        match m {
            MethodArg::Kmeans => Method::Kmeans,
            MethodArg::Ncut => Method::Ncut,
            MethodArg::Lrr => Method::Lrr,
            MethodArg::GraphLrr => Method::GraphLrr,
            MethodArg::Lrlrr => Method::Lrlrr,
            MethodArg::TlrLrr => Method::TlrLrr,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Number of clusters.
    #[arg(long)]
    pub k: usize,
    /// JSON config file; its values override the defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Absolute ε-ball radius.
    #[arg(long, conflicts_with = "eps_quantile")]
    pub eps: Option<f64>,
    /// ε-ball radius as a quantile of all pairwise distances.
    #[arg(long)]
    pub eps_quantile: Option<f64>,
    /// Neighbour count for the kNN baselines.
    #[arg(long)]
    pub knn: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Synthetic,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long, value_enum, default_value = "synthetic")]
    pub suite: Suite,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
