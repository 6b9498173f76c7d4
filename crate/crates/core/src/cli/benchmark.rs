//! The synthetic benchmark suite: every method on two moons and three circles.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use faer::MatRef;
use serde::{Deserialize, Serialize};

use crate::datasets::{self, LabeledDataset};
use crate::error::{Error, Result};
use crate::metrics::accuracy;

use super::config::RunConfig;
use super::methods::{run_method, Method, StageError};
use super::report::RunReport;

const FROZEN: &str = include_str!("../../configs/benchmark-synthetic.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoonsSetup {
    pub n_per_moon: usize,
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CirclesSetup {
    pub n_per_circle: usize,
    pub radii: [f64; 3],
    pub noise_sigma: f64,
}

/// Dataset and method settings shared by every cell of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub two_moons: MoonsSetup,
    pub three_circles: CirclesSetup,
    pub run: RunConfig,
    /// Accuracy below which the summary flags a TLR-LRR miss, per dataset.
    pub two_moons_floor: f64,
    pub three_circles_floor: f64,
}

impl BenchmarkConfig {
    /// The checked-in configuration the suite always runs with.
    pub fn frozen() -> Self {
        let cfg: Self = serde_json::from_str(FROZEN).expect("frozen benchmark config parses");
        cfg.run.validate().expect("frozen benchmark config is valid");
        cfg
    }

    pub fn datasets(&self, seed: u64) -> Result<[LabeledDataset; 2]> {
        Ok([
            datasets::two_moons(self.two_moons.n_per_moon, self.two_moons.noise_sigma, seed)?,
            datasets::three_circles(
                self.three_circles.n_per_circle,
                self.three_circles.radii,
                self.three_circles.noise_sigma,
                seed.wrapping_add(1),
            )?,
        ])
    }
}

/// Outcome of one (dataset, method) cell.
#[derive(Debug, Clone)]
pub struct Cell {
    pub dataset: String,
    pub method: Method,
    pub report: RunReport,
    pub coefficients: Option<faer::Mat<f64>>,
}

#[derive(Debug)]
pub enum BenchmarkError {
    Generate(Error),
    Cell {
        dataset: String,
        method: Method,
        error: StageError,
    },
    Write(Error),
}

impl std::fmt::Display for BenchmarkError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchmarkError::Generate(e) => write!(f, "generate: {e}"),
            BenchmarkError::Cell {
                dataset,
                method,
                error,
            } => write!(f, "{error} (dataset {dataset}, method {method})"),
            BenchmarkError::Write(e) => write!(f, "write-output: {e}"),
        }
    }
}

impl std::error::Error for BenchmarkError {}

/// Seed for the clustering step of cell `index`.
pub fn cell_seed(suite_seed: u64, index: usize) -> u64 {
    suite_seed.wrapping_mul(1000).wrapping_add(index as u64)
}

/// Runs all cells in a fixed order without touching the file system.
pub fn run_suite(cfg: &BenchmarkConfig, seed: u64) -> std::result::Result<Vec<Cell>, BenchmarkError> {
    let data = cfg.datasets(seed).map_err(BenchmarkError::Generate)?;
    let mut cells = Vec::with_capacity(data.len() * Method::ALL.len());
    for d in &data {
        let truth = d.labels.as_ref().expect("synthetic data is labeled");
        let k = d.cluster_count().expect("synthetic data is labeled");
        for method in Method::ALL {
            let s = cell_seed(seed, cells.len());
            let start = Instant::now();
            let outcome =
                run_method(method, &d.observations, k, &cfg.run, s).map_err(|error| {
                    BenchmarkError::Cell {
                        dataset: d.name.clone(),
                        method,
                        error,
                    }
                })?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let acc = accuracy(outcome.labels.as_slice(), truth).expect("label lengths agree");
            let report = RunReport::new(method, d, s, k, cfg.run, &outcome, Some(acc), ms);
            cells.push(Cell {
                dataset: d.name.clone(),
                method,
                report,
                coefficients: outcome.solve.map(|r| r.z),
            });
        }
    }
    Ok(cells)
}

fn accuracy_of(cells: &[Cell], dataset: &str, method: Method) -> Option<f64> {
    cells
        .iter()
        .find(|c| c.dataset == dataset && c.method == method)
        .and_then(|c| c.report.accuracy)
}

/// Markdown table of accuracies (methods by datasets) followed by the target checks.
/// Contains no timings, so equal seeds give byte-identical output.
pub fn summary_table(cfg: &BenchmarkConfig, cells: &[Cell], seed: u64) -> String {
    let mut names: Vec<&str> = Vec::new();
    for c in cells {
        if !names.contains(&c.dataset.as_str()) {
            names.push(&c.dataset);
        }
    }
    let mut out = String::new();
    writeln!(out, "# Synthetic benchmark (seed {seed})\n").unwrap();
    writeln!(out, "| method | {} |", names.join(" | ")).unwrap();
    writeln!(out, "|---|{}", "---|".repeat(names.len())).unwrap();
    for m in Method::ALL {
        let row: Vec<String> = names
            .iter()
            .map(|d| {
                let cell = cells.iter().find(|c| c.dataset == *d && c.method == m);
                match cell {
                    Some(c) => {
                        let acc = c.report.accuracy.map_or("n/a".into(), |a| format!("{a:.4}"));
                        if c.report.converged {
                            acc
                        } else {
                            format!("{acc} (not converged, {} it)", c.report.iterations)
                        }
                    }
                    None => "n/a".into(),
                }
            })
            .collect();
        writeln!(out, "| {m} | {} |", row.join(" | ")).unwrap();
    }

    let acc = |d, m| accuracy_of(cells, d, m).unwrap_or(f64::NAN);
    let checks = [
        (
            format!("two-moons: tlr-lrr >= {}", cfg.two_moons_floor),
            acc("two-moons", Method::TlrLrr) >= cfg.two_moons_floor,
        ),
        (
            "two-moons: tlr-lrr > lrr".to_string(),
            acc("two-moons", Method::TlrLrr) > acc("two-moons", Method::Lrr),
        ),
        (
            format!("three-circles: tlr-lrr >= {}", cfg.three_circles_floor),
            acc("three-circles", Method::TlrLrr) >= cfg.three_circles_floor,
        ),
        (
            "three-circles: tlr-lrr > lrr".to_string(),
            acc("three-circles", Method::TlrLrr) > acc("three-circles", Method::Lrr),
        ),
        (
            "three-circles: tlr-lrr > lrlrr".to_string(),
            acc("three-circles", Method::TlrLrr) > acc("three-circles", Method::Lrlrr),
        ),
    ];
    writeln!(out, "\n## Checks\n").unwrap();
    for (label, ok) in checks {
        writeln!(out, "- [{}] {label}", if ok { "ok" } else { "MISS" }).unwrap();
    }
    out
}

/// Dense grid of `|Z|`, one matrix row per line, comma separated.
pub fn heatmap_grid(z: MatRef<'_, f64>) -> String {
    let mut out = String::with_capacity(z.nrows() * z.ncols() * 8);
    for i in 0..z.nrows() {
        for j in 0..z.ncols() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{:?}", z[(i, j)].abs()).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Files written by [`write_outputs`].
#[derive(Debug, Clone, Default)]
pub struct Written {
    pub reports: Vec<PathBuf>,
    pub summary: PathBuf,
    pub heatmaps: Vec<PathBuf>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes per-cell reports, the summary and the coefficient heat-map grids.
pub fn write_outputs(
    out_dir: &Path,
    cfg: &BenchmarkConfig,
    cells: &[Cell],
    seed: u64,
) -> Result<Written> {
    let reports_dir = out_dir.join("reports");
    let heat_dir = out_dir.join("heatmaps");
    for dir in [out_dir, &reports_dir, &heat_dir] {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut written = Written::default();
    for c in cells {
        let stem = format!("{}__{}", c.dataset, c.method);
        let path = reports_dir.join(format!("{stem}.json"));
        c.report.write(&path)?;
        written.reports.push(path);
        if let Some(z) = &c.coefficients {
            let path = heat_dir.join(format!("{stem}.csv"));
            write_file(&path, &heatmap_grid(z.as_ref()))?;
            written.heatmaps.push(path);
        }
    }
    written.summary = out_dir.join("summary.md");
    write_file(&written.summary, &summary_table(cfg, cells, seed))?;
    write_file(
        &out_dir.join("config.json"),
        &(serde_json::to_string_pretty(cfg).expect("config serializes") + "\n"),
    )?;
    Ok(written)
}
