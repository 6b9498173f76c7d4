//! JSON run reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::datasets::LabeledDataset;
use crate::error::{Error, Result};
use crate::solver::SolverConfig;

use super::config::RunConfig;
use super::methods::{Method, MethodOutcome, OperatorSummary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    pub observations: usize,
    pub dimensions: usize,
    pub generator_params: BTreeMap<String, Value>,
}

impl DatasetInfo {
    pub fn of(d: &LabeledDataset) -> Self {
        Self {
            name: d.name.clone(),
            observations: d.observations.n(),
            dimensions: d.observations.m(),
            generator_params: d.generator_params.clone(),
        }
    }
}

/// Everything needed to understand and replay one clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: Method,
    pub dataset: DatasetInfo,
    pub seed: u64,
    pub k: usize,
    /// Configuration as resolved from defaults, config file and flags.
    pub config: RunConfig,
    /// Solver settings actually passed to the solver (plain LRR zeroes `beta`).
    pub solver_config_used: Option<SolverConfig>,
    pub affinity: String,
    pub operator: Option<OperatorSummary>,
    pub accuracy: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub final_mu: Option<f64>,
    pub residual_history: Vec<f64>,
    pub change_history: Vec<f64>,
    pub wall_time_ms: f64,
    pub labels: Vec<usize>,
}

impl RunReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        method: Method,
        dataset: &LabeledDataset,
        seed: u64,
        k: usize,
        config: RunConfig,
        outcome: &MethodOutcome,
        accuracy: Option<f64>,
        wall_time_ms: f64,
    ) -> Self {
        let solve = outcome.solve.as_ref();
        Self {
            method,
            dataset: DatasetInfo::of(dataset),
            seed,
            k,
            config,
            solver_config_used: method
                .uses_solver()
                .then(|| super::methods::solver_config_for(method, &config)),
            affinity: method.affinity_rule().into(),
            operator: outcome.operator.clone(),
            accuracy,
            converged: solve.is_none_or(|s| s.converged),
            iterations: solve.map_or(0, |s| s.iterations),
            final_mu: solve.map(|s| s.final_mu),
            residual_history: solve.map_or_else(Vec::new, |s| s.residual_history.clone()),
            change_history: solve.map_or_else(Vec::new, |s| s.change_history.clone()),
            wall_time_ms,
            labels: outcome.labels.as_slice().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::methods::run_method;
    use crate::datasets::two_moons;

    #[test]
    fn report_round_trips_through_json() {
        let d = two_moons(8, 0.05, 3).unwrap();
        let mut cfg = RunConfig::default();
        cfg.solver.max_iter = 5;
        let out = run_method(Method::Lrr, &d.observations, 2, &cfg, 1).unwrap();
        let r = RunReport::new(Method::Lrr, &d, 1, 2, cfg, &out, Some(0.5), 1.25);
        assert_eq!(r.iterations, 5);
        assert_eq!(r.residual_history.len(), 5);
        assert_eq!(r.solver_config_used.unwrap().beta, 0.0);
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn baseline_report_has_no_solver_fields() {
        let d = two_moons(8, 0.05, 3).unwrap();
        let cfg = RunConfig::default();
        let out = run_method(Method::Kmeans, &d.observations, 2, &cfg, 1).unwrap();
        let r = RunReport::new(Method::Kmeans, &d, 1, 2, cfg, &out, None, 0.0);
        assert!(r.converged);
        assert!(r.solver_config_used.is_none() && r.final_mu.is_none());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["config"]["solver"]["gamma"], serde_json::json!(1.1));
        assert_eq!(v["method"], serde_json::json!("kmeans"));
    }
}
