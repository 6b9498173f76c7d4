//! End-to-end clustering pipelines for each supported method.

use std::fmt;
use std::str::FromStr;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::clustering::{self, AffinityMatrix, Labels};
use crate::error::{Error, Result};
use crate::hypergraph::{self, LocalityOperator, ObservationMatrix};
use crate::solver::{self, SolveReport, SolverConfig};

use super::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Kmeans,
    Ncut,
    Lrr,
    GraphLrr,
    Lrlrr,
    TlrLrr,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Kmeans,
        Method::Ncut,
        Method::Lrr,
        Method::GraphLrr,
        Method::Lrlrr,
        Method::TlrLrr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Kmeans => "kmeans",
            Method::Ncut => "ncut",
            Method::Lrr => "lrr",
            Method::GraphLrr => "graph-lrr",
            Method::Lrlrr => "lrlrr",
            Method::TlrLrr => "tlr-lrr",
        }
    }

    /// Whether the method learns a coefficient matrix.
    pub fn uses_solver(self) -> bool {
        !matches!(self, Method::Kmeans | Method::Ncut)
    }

    /// Affinity construction recorded in reports.
    pub fn affinity_rule(self) -> &'static str {
        match self {
            Method::Kmeans => "none",
            Method::Ncut => "gaussian kernel, bandwidth = median pairwise distance",
            _ => "(|Z| + |Z^T|) / 2, zero diagonal",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method `{s}`")))
    }
}

/// Pipeline stage, used to label failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    BuildOperator,
    Solve,
    Cluster,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::BuildOperator => "build-operator",
            Stage::Solve => "solve",
            Stage::Cluster => "cluster",
        }
    }
}

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub source: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage.name(), self.source)
    }
}

impl std::error::Error for StageError {}

fn at(stage: Stage) -> impl FnOnce(Error) -> StageError {
    move |source| StageError { stage, source }
}

/// Facts about the locality operator that was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSummary {
    pub kind: String,
    pub nonzeros: usize,
    pub spectral_norm: f64,
    /// Radius actually used, for the ε-ball hypergraph.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperedges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_cardinality: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub labels: Labels,
    pub operator: Option<OperatorSummary>,
    pub solve: Option<SolveReport>,
}

/// Builds the locality operator a solver-based method regularizes with.
pub fn build_operator(
    method: Method,
    y: &ObservationMatrix,
    cfg: &RunConfig,
) -> Result<(LocalityOperator, OperatorSummary)> {
    let summary = |l: &LocalityOperator, kind: &str| OperatorSummary {
        kind: kind.into(),
        nonzeros: l.nnz(),
        spectral_norm: l.spectral_norm(),
        eps: None,
        hyperedges: None,
        max_cardinality: None,
    };
    match method {
        Method::Kmeans | Method::Ncut | Method::Lrr => {
            let l = LocalityOperator::zeros(y.n());
            let s = summary(&l, "none");
            Ok((l, s))
        }
        Method::GraphLrr => {
            let l = hypergraph::knn_graph_laplacian(y, cfg.locality.knn)?;
            let s = summary(&l, "knn-graph");
            Ok((l, s))
        }
        Method::Lrlrr => {
            let l = hypergraph::knn_hypergraph_laplacian(y, cfg.locality.knn)?;
            let s = summary(&l, "knn-hypergraph");
            Ok((l, s))
        }
        Method::TlrLrr => {
            let eps = hypergraph::resolve_eps(y, cfg.locality.eps)?;
            let h = hypergraph::epsilon_ball_hyperedges(y, cfg.locality.eps)?;
            let l = hypergraph::locality_operator_from_hypergraph(&h)?;
            let mut s = summary(&l, "epsilon-ball-clique-expansion");
            s.eps = Some(eps);
            s.hyperedges = Some(h.edges().len());
            s.max_cardinality = Some(h.max_cardinality());
            Ok((l, s))
        }
    }
}

/// Solver settings for `method`: plain LRR drops the locality weight.
pub fn solver_config_for(method: Method, cfg: &RunConfig) -> SolverConfig {
    let mut s = cfg.solver;
    if method == Method::Lrr {
        s.beta = 0.0;
    }
    s
}

/// Gaussian affinity on raw points with the median pairwise distance as bandwidth.
pub fn gaussian_affinity(y: &ObservationMatrix) -> Result<AffinityMatrix> {
    let n = y.n();
    let dist = y.pairwise_distances();
    let mut upper: Vec<f64> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .map(|(a, b)| dist[a * n + b])
        .collect();
    if upper.is_empty() {
        return Err(Error::InvalidInput("need at least 2 observations".into()));
    }
    upper.sort_by(f64::total_cmp);
    let mid = upper.len() / 2;
    let median = if upper.len().is_multiple_of(2) {
        0.5 * (upper[mid - 1] + upper[mid])
    } else {
        upper[mid]
    };
    let sigma2 = median.max(f64::MIN_POSITIVE).powi(2);
    AffinityMatrix::new(Mat::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (-dist[i * n + j].powi(2) / (2.0 * sigma2)).exp()
        }
    }))
}

/// Runs `method` on `y` for `k` clusters.
pub fn run_method(
    method: Method,
    y: &ObservationMatrix,
    k: usize,
    cfg: &RunConfig,
    seed: u64,
) -> std::result::Result<MethodOutcome, StageError> {
    match method {
        Method::Kmeans => {
            let points = y.data().transpose().to_owned();
            let labels = clustering::kmeans(points.as_ref(), k, seed).map_err(at(Stage::Cluster))?;
            Ok(MethodOutcome {
                labels,
                operator: None,
                solve: None,
            })
        }
        Method::Ncut => {
            let w = gaussian_affinity(y).map_err(at(Stage::Cluster))?;
            let labels = clustering::ncut_spectral(&w, k, seed).map_err(at(Stage::Cluster))?;
            Ok(MethodOutcome {
                labels,
                operator: None,
                solve: None,
            })
        }
        _ => {
            let (l, summary) = build_operator(method, y, cfg).map_err(at(Stage::BuildOperator))?;
            let scfg = solver_config_for(method, cfg);
            let report = solver::solve(y, &l, &scfg).map_err(at(Stage::Solve))?;
            let w = clustering::affinity_from_coefficients(report.z.as_ref())
                .map_err(at(Stage::Cluster))?;
            let labels = clustering::ncut_spectral(&w, k, seed).map_err(at(Stage::Cluster))?;
            Ok(MethodOutcome {
                labels,
                operator: Some(summary),
                solve: Some(report),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::metrics::accuracy;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_value(m).unwrap(), serde_json::json!(m.name()));
        }
        assert!("spectral".parse::<Method>().is_err());
    }

    #[test]
    fn plain_lrr_ignores_beta() {
        let cfg = RunConfig::default();
        assert_eq!(solver_config_for(Method::Lrr, &cfg).beta, 0.0);
        assert_eq!(solver_config_for(Method::TlrLrr, &cfg).beta, cfg.solver.beta);
    }

    #[test]
    fn baselines_separate_distant_blobs() {
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let c = if i < 10 { 0.0 } else { 10.0 };
                vec![c + 0.01 * (i % 5) as f64, c - 0.02 * (i % 3) as f64]
            })
            .collect();
        let y = ObservationMatrix::from_points(&pts).unwrap();
        let truth: Vec<usize> = (0..20).map(|i| i / 10).collect();
        for m in [Method::Kmeans, Method::Ncut] {
            let out = run_method(m, &y, 2, &RunConfig::default(), 0).unwrap();
            assert_eq!(accuracy(out.labels.as_slice(), &truth).unwrap(), 1.0, "{m}");
        }
    }

    #[test]
    fn operator_kinds() {
        let d = datasets::two_moons(10, 0.05, 1).unwrap();
        let cfg = RunConfig::default();
        let (l, s) = build_operator(Method::Lrr, &d.observations, &cfg).unwrap();
        assert_eq!((l.nnz(), s.kind.as_str()), (0, "none"));
        let (_, s) = build_operator(Method::GraphLrr, &d.observations, &cfg).unwrap();
        assert_eq!(s.kind, "knn-graph");
        assert!(s.nonzeros > 0);
        let (_, s) = build_operator(Method::TlrLrr, &d.observations, &cfg).unwrap();
        assert_eq!(s.eps, Some(0.05));
    }

    #[test]
    fn failures_name_their_stage() {
        let d = datasets::two_moons(5, 0.05, 1).unwrap();
        let mut cfg = RunConfig::default();
        cfg.locality.knn = 50;
        let err = run_method(Method::GraphLrr, &d.observations, 2, &cfg, 0).unwrap_err();
        assert_eq!(err.stage, Stage::BuildOperator);
        assert!(err.to_string().starts_with("build-operator"));
        let err = run_method(Method::Kmeans, &d.observations, 11, &cfg, 0).unwrap_err();
        assert_eq!(err.stage, Stage::Cluster);
    }
}
