//! Proximal operators of the ℓ1 and nuclear norms.

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{self, Svd};

/// Scalar soft threshold `sgn(x) · max(|x| − tau, 0)`.
#[inline]
pub fn shrink_scalar(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Elementwise soft threshold.
pub fn shrink(x: MatRef<'_, f64>, tau: f64) -> Mat<f64> {
    debug_assert!(tau >= 0.0);
    Mat::from_fn(x.nrows(), x.ncols(), |i, j| shrink_scalar(x[(i, j)], tau))
}

/// How the solver computes singular value thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SvdMode {
    /// Dense thin SVD every iteration.
    Full,
    /// Lanczos bidiagonalization for the singular triplets above the threshold,
    /// falling back to a dense SVD when it cannot certify them.
    #[default]
    Auto,
}

/// Singular value thresholding `U · diag(shrink(σ, tau)) · Vᵀ` using a dense SVD.
pub fn svt(a: MatRef<'_, f64>, tau: f64) -> Result<Mat<f64>> {
    let svd = linalg::thin_svd(a)?;
    Ok(recompose(&svd, tau, a.nrows(), a.ncols()))
}

fn recompose(svd: &Svd, tau: f64, m: usize, n: usize) -> Mat<f64> {
    let rank = svd.s.iter().take_while(|&&s| s > tau).count();
    if rank == 0 {
        return Mat::zeros(m, n);
    }
    let scaled = Mat::from_fn(m, rank, |i, r| svd.u[(i, r)] * (svd.s[r] - tau));
    linalg::mul(scaled.as_ref(), svd.v.subcols(0, rank).transpose())
}

/// Stateful SVT that remembers the last output rank to size the next Lanczos run.
#[derive(Debug, Clone)]
pub struct Thresholder {
    mode: SvdMode,
    rank_hint: usize,
    dense_fallbacks: usize,
}

impl Thresholder {
    pub fn new(mode: SvdMode) -> Self {
        Self {
            mode,
            rank_hint: 0,
            dense_fallbacks: 0,
        }
    }

    /// Number of iterations that needed the dense fallback.
    pub fn dense_fallbacks(&self) -> usize {
        self.dense_fallbacks
    }

    pub fn last_rank(&self) -> usize {
        self.rank_hint
    }

    pub fn apply(&mut self, a: MatRef<'_, f64>, tau: f64) -> Result<Mat<f64>> {
        let (m, n) = (a.nrows(), a.ncols());
        let dim = m.min(n);
        if self.mode == SvdMode::Auto {
            let mut steps = (2 * self.rank_hint + 12).max(16);
            while steps <= dim / 2 {
                if let Some(svd) = linalg::partial_svd_above(a, tau, steps) {
                    self.rank_hint = svd.s.len();
                    return Ok(recompose(&svd, tau, m, n));
                }
                steps *= 2;
            }
            self.dense_fallbacks += 1;
        }
        let svd = linalg::thin_svd(a)?;
        self.rank_hint = svd.s.iter().take_while(|&&s| s > tau).count();
        Ok(recompose(&svd, tau, m, n))
    }
}
