use std::fmt;
use std::time::Instant;

use crate::datasets::{self, LabeledDataset};
use crate::metrics::accuracy;

use super::benchmark::{self, BenchmarkConfig};
use super::config::{self, Overrides, RunConfig};
use super::methods::{self, Method};
use super::report::RunReport;
use super::{BenchmarkArgs, Cli, ClusterArgs, Command, DatasetKind, GenerateArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Usage = 2,
    NotConverged = 3,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A failure tagged with the stage that produced it. Always maps to exit code 2.
#[derive(Debug)]
pub struct CliError {
    pub stage: &'static str,
    pub message: String,
}

impl CliError {
    fn at(stage: &'static str) -> impl FnOnce(crate::Error) -> CliError {
        move |e| CliError {
            stage,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.stage, self.message)
    }
}

impl std::error::Error for CliError {}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Cluster(a) => cluster(&a),
        Command::Benchmark(a) => run_benchmark(&a),
    }
}

fn generate(a: &GenerateArgs) -> Result<ExitCode, CliError> {
    let d = match a.dataset {
        DatasetKind::TwoMoons => {
            if a.radii.is_some() {
                return Err(CliError {
                    stage: "generate",
                    message: "--radii only applies to three-circles".into(),
                });
            }
            datasets::two_moons(a.n.unwrap_or(100), a.noise.unwrap_or(0.06), a.seed)
        }
        DatasetKind::ThreeCircles => {
            let radii = match a.radii.as_deref() {
                None => [1.0, 2.0, 3.0],
                Some(&[r0, r1, r2]) => [r0, r1, r2],
                Some(other) => {
                    return Err(CliError {
                        stage: "generate",
                        message: format!("expected 3 radii, got {}", other.len()),
                    })
                }
            };
            datasets::three_circles(a.n.unwrap_or(66), radii, a.noise.unwrap_or(0.05), a.seed)
        }
    }
    .map_err(CliError::at("generate"))?;
    datasets::save_dataset(&d, &a.out).map_err(CliError::at("write-dataset"))?;
    Ok(ExitCode::Success)
}

/// Defaults, then the config file, then command-line flags.
pub fn resolve_config(a: &ClusterArgs) -> Result<RunConfig, CliError> {
    let base = match &a.config {
        Some(path) => config::load_config(path).map_err(CliError::at("load-config"))?,
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        lambda: a.lambda,
        beta: a.beta,
        gamma: a.gamma,
        max_iter: a.max_iter,
        eps: a.eps,
        eps_quantile: a.eps_quantile,
        knn: a.knn,
    };
    let cfg = overrides.apply(base);
    cfg.validate().map_err(CliError::at("resolve-config"))?;
    Ok(cfg)
}

fn cluster(a: &ClusterArgs) -> Result<ExitCode, CliError> {
    let cfg = resolve_config(a)?;
    let d: LabeledDataset =
        datasets::load_dataset(&a.input).map_err(CliError::at("load-dataset"))?;
    let method: Method = a.method.into();

    let start = Instant::now();
    let outcome = methods::run_method(method, &d.observations, a.k, &cfg, a.seed).map_err(|e| {
        CliError {
            stage: e.stage.name(),
            message: e.source.to_string(),
        }
    })?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let acc = d
        .labels
        .as_ref()
        .map(|truth| accuracy(outcome.labels.as_slice(), truth))
        .transpose()
        .map_err(CliError::at("score"))?;

    let report = RunReport::new(method, &d, a.seed, a.k, cfg, &outcome, acc, ms);
    report.write(&a.report).map_err(CliError::at("write-report"))?;

    let acc_text = acc.map_or_else(|| "no ground truth".into(), |v| format!("accuracy {v:.4}"));
    if report.converged {
        eprintln!("{method}: {acc_text}, {} iterations", report.iterations);
        Ok(ExitCode::Success)
    } else {
        eprintln!(
            "{method}: {acc_text}; solver stopped at the iteration cap ({}) without converging",
            report.iterations
        );
        Ok(ExitCode::NotConverged)
    }
}

fn run_benchmark(a: &BenchmarkArgs) -> Result<ExitCode, CliError> {
    let cfg = BenchmarkConfig::frozen();
    let cells = benchmark::run_suite(&cfg, a.seed).map_err(|e| CliError {
        stage: "benchmark",
        message: e.to_string(),
    })?;
    let written = benchmark::write_outputs(&a.out_dir, &cfg, &cells, a.seed)
        .map_err(CliError::at("write-output"))?;
    print!("{}", benchmark::summary_table(&cfg, &cells, a.seed));
    eprintln!(
        "wrote {} reports, {} heat maps and {}",
        written.reports.len(),
        written.heatmaps.len(),
        written.summary.display()
    );
    Ok(ExitCode::Success)
}
