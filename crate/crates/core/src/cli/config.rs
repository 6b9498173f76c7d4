//! Run configuration: solver hyperparameters plus locality-structure settings.
//!
//! A config file is a JSON object whose keys mirror [`RunConfig`]. Every key is
//! optional; missing keys take the built-in defaults, unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::EpsMode;
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalityConfig {
    /// Radius rule for the ε-ball hypergraph.
    pub eps: EpsMode,
    /// Neighbour count for the kNN graph and kNN hypergraph baselines.
    pub knn: usize,
}

impl Default for LocalityConfig {
    fn default() -> Self {
        Self {
            eps: EpsMode::default(),
            knn: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub solver: SolverConfig,
    pub locality: LocalityConfig,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        self.locality.eps.validate()?;
        if self.locality.knn == 0 {
            return Err(Error::InvalidParameter("knn must be >= 1".into()));
        }
        Ok(())
    }
}

/// Parses a JSON config document and validates the result.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Command-line overrides; `None` leaves the underlying value untouched.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub max_iter: Option<usize>,
    pub eps: Option<f64>,
    pub eps_quantile: Option<f64>,
    pub knn: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: RunConfig) -> RunConfig {
        let s = &mut cfg.solver;
        s.lambda = self.lambda.unwrap_or(s.lambda);
        s.beta = self.beta.unwrap_or(s.beta);
        s.gamma = self.gamma.unwrap_or(s.gamma);
        s.max_iter = self.max_iter.unwrap_or(s.max_iter);
        if let Some(eps) = self.eps {
            cfg.locality.eps = EpsMode::Absolute(eps);
        }
        if let Some(q) = self.eps_quantile {
            cfg.locality.eps = EpsMode::Quantile(q);
        }
        cfg.locality.knn = self.knn.unwrap_or(cfg.locality.knn);
        cfg
    }
}
