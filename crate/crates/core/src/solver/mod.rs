//! Linearized ADMM for locality-regularized low-rank representation.
//!
//! Solves
//!
//! ```text
//! min ‖Z‖_* + λ‖J‖₁ + β tr(Z L Zᵀ) + γ‖E‖₁   s.t.  Y = YZ + E,  Z = J,  J ≥ 0
//! ```
//!
//! The nuclear norm sits on `Z`, which is updated by one linearized proximal step
//! (singular value thresholding) per iteration; `E` and `J` have closed-form
//! shrinkage updates. Plain LRR is the special case `β = 0` with the zero operator.

pub mod prox;

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{LocalityOperator, ObservationMatrix};
use crate::linalg;

pub use prox::{shrink, shrink_scalar, svt, SvdMode, Thresholder};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// ℓ1 weight on the coefficients.
    pub lambda: f64,
    /// Locality weight.
    pub beta: f64,
    /// ℓ1 weight on the error matrix.
    pub gamma: f64,
    /// Relative residual tolerance.
    pub eps1: f64,
    /// Iterate-change tolerance; also triggers penalty growth.
    pub eps2: f64,
    pub mu0: f64,
    pub mu_max: f64,
    pub rho0: f64,
    pub max_iter: usize,
    /// Safety factor (> 1) applied to the linearization step-size bound.
    pub eta_margin: f64,
    pub svd: SvdMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 0.01,
            beta: 10.0,
            gamma: 1.1,
            eps1: 1e-6,
            eps2: 1e-4,
            mu0: 1e-2,
            mu_max: 1e10,
            rho0: 1.1,
            max_iter: 1000,
            eta_margin: 1.02,
            svd: SvdMode::Auto,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.lambda >= 0.0, "lambda must be >= 0"),
            (self.beta >= 0.0, "beta must be >= 0"),
            (self.gamma > 0.0, "gamma must be > 0"),
            (self.eps1 > 0.0, "eps1 must be > 0"),
            (self.eps2 > 0.0, "eps2 must be > 0"),
            (self.mu0 > 0.0, "mu0 must be > 0"),
            (self.mu_max >= self.mu0, "mu_max must be >= mu0"),
            (self.rho0 > 1.0, "rho0 must be > 1"),
            (self.max_iter >= 1, "max_iter must be >= 1"),
            (self.eta_margin > 1.0, "eta_margin must be > 1"),
        ];
        let finite = [
            self.lambda,
            self.beta,
            self.gamma,
            self.eps1,
            self.eps2,
            self.mu0,
            self.mu_max,
            self.rho0,
            self.eta_margin,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(
                "solver parameters must be finite".into(),
            ));
        }
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::InvalidParameter((*msg).into())),
            None => Ok(()),
        }
    }
}

/// Iterates of the linearized ADMM.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// `N × N` coefficients (nuclear norm).
    pub z: Mat<f64>,
    /// `N × N` auxiliary copy of `Z` (ℓ1 and nonnegativity).
    pub j: Mat<f64>,
    /// `M × N` error.
    pub e: Mat<f64>,
    /// Multiplier for `Y = YZ + E`.
    pub m1: Mat<f64>,
    /// Multiplier for `Z = J`.
    pub m2: Mat<f64>,
    pub mu: f64,
    pub k: usize,
}

impl SolverState {
    /// All-zero iterates with penalty `mu`.
    pub fn zeros(m: usize, n: usize, mu: f64) -> Self {
        Self {
            z: Mat::zeros(n, n),
            j: Mat::zeros(n, n),
            e: Mat::zeros(m, n),
            m1: Mat::zeros(m, n),
            m2: Mat::zeros(n, n),
            mu,
            k: 0,
        }
    }

    fn is_finite(&self) -> bool {
        [&self.z, &self.j, &self.e, &self.m1, &self.m2]
            .iter()
            .all(|m| linalg::all_finite(m.as_ref()))
            && self.mu.is_finite()
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub z: Mat<f64>,
    pub e: Mat<f64>,
    pub j: Mat<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// `‖Y − YZ − E‖_F / ‖Y‖_F` after each iteration.
    pub residual_history: Vec<f64>,
    /// `max{h₁, h₂, h₃}` after each iteration.
    pub change_history: Vec<f64>,
    /// Penalty used during each iteration.
    pub mu_history: Vec<f64>,
    pub final_mu: f64,
}

/// `Y − YZ − E`.
pub fn residual(y: MatRef<'_, f64>, z: MatRef<'_, f64>, e: MatRef<'_, f64>) -> Mat<f64> {
    let mut r = linalg::mul(y, z);
    for j in 0..r.ncols() {
        for i in 0..r.nrows() {
            r[(i, j)] = y[(i, j)] - r[(i, j)] - e[(i, j)];
        }
    }
    r
}

/// Gradient of the smooth part of the `Z`-subproblem at the current `Z`:
/// `2β Z L − Yᵀ(μ(Y − YZ − E) + M₁) + μ(Z − J) + M₂`.
pub fn grad_q(
    state: &SolverState,
    l: &LocalityOperator,
    y: &ObservationMatrix,
    cfg: &SolverConfig,
) -> Mat<f64> {
    let mu = state.mu;
    let mut inner = residual(y.data(), state.z.as_ref(), state.e.as_ref());
    for j in 0..inner.ncols() {
        for i in 0..inner.nrows() {
            inner[(i, j)] = mu * inner[(i, j)] + state.m1[(i, j)];
        }
    }
    let data_term = linalg::mul_tn(y.data(), inner.as_ref());
    let mut g = if cfg.beta != 0.0 {
        l.right_multiply(state.z.as_ref())
    } else {
        Mat::zeros(state.z.nrows(), state.z.ncols())
    };
    let two_beta = 2.0 * cfg.beta;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            g[(i, j)] = two_beta * g[(i, j)] - data_term[(i, j)]
                + mu * (state.z[(i, j)] - state.j[(i, j)])
                + state.m2[(i, j)];
        }
    }
    g
}

/// `η₁ = margin · (2β‖L‖₂ + μ(1 + ‖Y‖₂²))` from precomputed norms.
pub fn step_size_from_norms(beta: f64, l_norm: f64, mu: f64, y_norm: f64, eta_margin: f64) -> f64 {
    eta_margin * (2.0 * beta * l_norm + mu * (1.0 + y_norm * y_norm))
}

pub fn step_size(
    beta: f64,
    l: &LocalityOperator,
    mu: f64,
    y: &ObservationMatrix,
    eta_margin: f64,
) -> f64 {
    step_size_from_norms(
        beta,
        l.spectral_norm(),
        mu,
        linalg::spectral_norm(y.data()),
        eta_margin,
    )
}

/// `Z_{k+1} = SVT_{1/η₁}(Z_k − ∇q(Z_k)/η₁)`.
pub fn update_z(
    state: &SolverState,
    l: &LocalityOperator,
    y: &ObservationMatrix,
    cfg: &SolverConfig,
    eta: f64,
    thresholder: &mut Thresholder,
) -> Result<Mat<f64>> {
    let g = grad_q(state, l, y, cfg);
    let arg = Mat::from_fn(g.nrows(), g.ncols(), |i, j| state.z[(i, j)] - g[(i, j)] / eta);
    thresholder.apply(arg.as_ref(), 1.0 / eta)
}

/// `E_{k+1} = shrink(Y − Y Z_{k+1} + M₁/μ, γ/μ)`.
pub fn update_e(
    y: &ObservationMatrix,
    z_next: MatRef<'_, f64>,
    m1: MatRef<'_, f64>,
    mu: f64,
    gamma: f64,
) -> Mat<f64> {
    let yz = linalg::mul(y.data(), z_next);
    let yd = y.data();
    let tau = gamma / mu;
    Mat::from_fn(yz.nrows(), yz.ncols(), |i, j| {
        prox::shrink_scalar(yd[(i, j)] - yz[(i, j)] + m1[(i, j)] / mu, tau)
    })
}

/// `J_{k+1} = max{shrink(Z_{k+1} + M₂/μ, λ/μ), 0}`.
pub fn update_j(z_next: MatRef<'_, f64>, m2: MatRef<'_, f64>, mu: f64, lambda: f64) -> Mat<f64> {
    let tau = lambda / mu;
    Mat::from_fn(z_next.nrows(), z_next.ncols(), |i, j| {
        prox::shrink_scalar(z_next[(i, j)] + m2[(i, j)] / mu, tau).max(0.0)
    })
}

/// Iterate changes `(h₁, h₂, h₃) = (η₁‖ΔZ‖_F, μ‖ΔJ‖_F, μ‖ΔE‖_F)`.
pub fn iterate_changes(
    prev: &SolverState,
    z_next: MatRef<'_, f64>,
    j_next: MatRef<'_, f64>,
    e_next: MatRef<'_, f64>,
    eta: f64,
) -> [f64; 3] {
    let diff = |a: MatRef<'_, f64>, b: MatRef<'_, f64>| {
        let mut acc = 0.0;
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                let d = a[(i, j)] - b[(i, j)];
                acc += d * d;
            }
        }
        acc.sqrt()
    };
    [
        eta * diff(z_next, prev.z.as_ref()),
        prev.mu * diff(j_next, prev.j.as_ref()),
        prev.mu * diff(e_next, prev.e.as_ref()),
    ]
}

/// Multiplier ascent with the current penalty, then the adaptive penalty update.
///
/// Expects `state.z`, `state.j`, `state.e` to already hold the new iterates and
/// `state.mu` to still hold `μ_k`.
pub fn update_multipliers(
    state: &mut SolverState,
    y: &ObservationMatrix,
    cfg: &SolverConfig,
    h: [f64; 3],
) {
    let mu = state.mu;
    let r = residual(y.data(), state.z.as_ref(), state.e.as_ref());
    apply_multiplier_step(state, r.as_ref(), cfg, h);
    debug_assert!(state.mu >= mu);
}

fn apply_multiplier_step(state: &mut SolverState, r: MatRef<'_, f64>, cfg: &SolverConfig, h: [f64; 3]) {
    let mu = state.mu;
    for j in 0..r.ncols() {
        for i in 0..r.nrows() {
            state.m1[(i, j)] += mu * r[(i, j)];
        }
    }
    for j in 0..state.z.ncols() {
        for i in 0..state.z.nrows() {
            state.m2[(i, j)] += mu * (state.z[(i, j)] - state.j[(i, j)]);
        }
    }
    let rho = if max3(h) <= cfg.eps2 { cfg.rho0 } else { 1.0 };
    state.mu = cfg.mu_max.min(rho * mu);
}

fn max3(h: [f64; 3]) -> f64 {
    h[0].max(h[1]).max(h[2])
}

/// `true` iff the relative residual is below `ε₁` and `max h ≤ ε₂`.
pub fn convergence_test(relative_residual: f64, h: [f64; 3], cfg: &SolverConfig) -> bool {
    relative_residual < cfg.eps1 && max3(h) <= cfg.eps2
}

pub fn check_convergence(
    state: &SolverState,
    y: &ObservationMatrix,
    cfg: &SolverConfig,
    h: [f64; 3],
) -> Result<bool> {
    let y_fro = linalg::frobenius(y.data());
    if y_fro == 0.0 {
        return Err(Error::InvalidInput(
            "convergence test undefined for an all-zero observation matrix".into(),
        ));
    }
    let r = residual(y.data(), state.z.as_ref(), state.e.as_ref());
    Ok(convergence_test(linalg::frobenius(r.as_ref()) / y_fro, h, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationInfo {
    pub k: usize,
    pub mu: f64,
    pub eta: f64,
    pub relative_residual: f64,
    pub h: [f64; 3],
    pub converged: bool,
}

/// Step-by-step driver. [`solve`] runs it to completion; tests and callers that
/// need per-iteration access use [`Solver::step`].
pub struct Solver<'a> {
    y: &'a ObservationMatrix,
    l: &'a LocalityOperator,
    cfg: SolverConfig,
    y_norm: f64,
    y_fro: f64,
    state: SolverState,
    thresholder: Thresholder,
    converged: bool,
    residual_history: Vec<f64>,
    change_history: Vec<f64>,
    mu_history: Vec<f64>,
}

impl<'a> Solver<'a> {
    pub fn new(y: &'a ObservationMatrix, l: &'a LocalityOperator, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        if y.n() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 observations, got {}",
                y.n()
            )));
        }
        if l.n() != y.n() {
            return Err(Error::InvalidInput(format!(
                "locality operator is {}x{} but there are {} observations",
                l.n(),
                l.n(),
                y.n()
            )));
        }
        let y_fro = linalg::frobenius(y.data());
        if y_fro == 0.0 {
            return Err(Error::InvalidInput(
                "observation matrix is identically zero".into(),
            ));
        }
        Ok(Self {
            y,
            l,
            y_norm: linalg::spectral_norm(y.data()),
            y_fro,
            state: SolverState::zeros(y.m(), y.n(), cfg.mu0),
            thresholder: Thresholder::new(cfg.svd),
            cfg,
            converged: false,
            residual_history: Vec::new(),
            change_history: Vec::new(),
            mu_history: Vec::new(),
        })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Singular value thresholding state, including how often the dense SVD ran.
    pub fn thresholder(&self) -> &Thresholder {
        &self.thresholder
    }

    pub fn is_converged(&self) -> bool {
        self.converged
    }

    /// Step size for the current penalty.
    pub fn eta(&self) -> f64 {
        step_size_from_norms(
            self.cfg.beta,
            self.l.spectral_norm(),
            self.state.mu,
            self.y_norm,
            self.cfg.eta_margin,
        )
    }

    /// One pass of Z, E, J, multiplier updates followed by the convergence test.
    pub fn step(&mut self) -> Result<IterationInfo> {
        let cfg = self.cfg;
        let mu = self.state.mu;
        let eta = self.eta();

        let z_next = update_z(&self.state, self.l, self.y, &cfg, eta, &mut self.thresholder)?;
        let e_next = update_e(self.y, z_next.as_ref(), self.state.m1.as_ref(), mu, cfg.gamma);
        let j_next = update_j(z_next.as_ref(), self.state.m2.as_ref(), mu, cfg.lambda);
        let h = iterate_changes(&self.state, z_next.as_ref(), j_next.as_ref(), e_next.as_ref(), eta);

        self.state.z = z_next;
        self.state.e = e_next;
        self.state.j = j_next;
        self.state.k += 1;

        let r = residual(self.y.data(), self.state.z.as_ref(), self.state.e.as_ref());
        let relative_residual = linalg::frobenius(r.as_ref()) / self.y_fro;
        apply_multiplier_step(&mut self.state, r.as_ref(), &cfg, h);

        if !self.state.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite iterate at iteration {}",
                self.state.k
            )));
        }

        let converged = convergence_test(relative_residual, h, &cfg);
        self.converged = converged;
        self.residual_history.push(relative_residual);
        self.change_history.push(max3(h));
        self.mu_history.push(mu);
        Ok(IterationInfo {
            k: self.state.k,
            mu,
            eta,
            relative_residual,
            h,
            converged,
        })
    }

    pub fn run(mut self) -> Result<SolveReport> {
        while !self.converged && self.state.k < self.cfg.max_iter {
            self.step()?;
        }
        Ok(self.into_report())
    }

    pub fn into_report(self) -> SolveReport {
        SolveReport {
            iterations: self.state.k,
            converged: self.converged,
            final_mu: self.state.mu,
            z: self.state.z,
            e: self.state.e,
            j: self.state.j,
            residual_history: self.residual_history,
            change_history: self.change_history,
            mu_history: self.mu_history,
        }
    }
}

/// Runs the solver from all-zero iterates until convergence or `max_iter`.
/// Non-convergence is reported through [`SolveReport::converged`], not as an error.
pub fn solve(y: &ObservationMatrix, l: &LocalityOperator, cfg: &SolverConfig) -> Result<SolveReport> {
    Solver::new(y, l, *cfg)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(points: &[[f64; 2]]) -> ObservationMatrix {
        ObservationMatrix::from_points(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = SolverConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.lambda, 0.01);
        assert_eq!(cfg.beta, 10.0);
        assert_eq!(cfg.gamma, 1.1);
        assert_eq!(cfg.eps1, 1e-6);
        assert_eq!(cfg.eps2, 1e-4);
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        for cfg in [
            SolverConfig { gamma: 0.0, ..Default::default() },
            SolverConfig { rho0: 1.0, ..Default::default() },
            SolverConfig { eps1: 0.0, ..Default::default() },
            SolverConfig { eta_margin: 1.0, ..Default::default() },
            SolverConfig { lambda: f64::NAN, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::InvalidParameter(_))));
        }
    }

    #[test]
    fn config_json_fills_defaults() {
        let cfg: SolverConfig = serde_json::from_str(r#"{"beta": 2.5, "svd": "full"}"#).unwrap();
        assert_eq!(cfg.beta, 2.5);
        assert_eq!(cfg.svd, SvdMode::Full);
        assert_eq!(cfg.gamma, 1.1);
        assert!(serde_json::from_str::<SolverConfig>(r#"{"betta": 1}"#).is_err());
    }

    #[test]
    fn step_size_examples() {
        assert!((step_size_from_norms(0.0, 5.0, 1.0, 0.0, 1.02) - 1.02).abs() < 1e-15);
        assert!((step_size_from_norms(3.0, 0.0, 0.5, 2.0, 1.02) - 1.02 * 0.5 * 5.0).abs() < 1e-15);
        assert!(step_size_from_norms(1.0, 2.0, 1.1, 3.0, 1.02) > step_size_from_norms(1.0, 2.0, 1.0, 3.0, 1.02));
    }

    #[test]
    fn step_size_with_operator_norms() {
        let y = obs(&[[3.0, 0.0], [0.0, 0.0]]);
        let l = LocalityOperator::zeros(2);
        assert!((step_size(1.0, &l, 1.0, &y, 1.02) - 1.02 * 10.0).abs() < 1e-8);
    }

    #[test]
    fn grad_vanishes_at_feasible_point() {
        let y = obs(&[[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]]);
        let mut state = SolverState::zeros(2, 3, 0.7);
        state.z = Mat::from_fn(3, 3, |i, j| 0.1 * (i + 2 * j) as f64);
        state.j = state.z.clone();
        state.e = y.data() - linalg::mul(y.data(), state.z.as_ref());
        let cfg = SolverConfig { beta: 0.0, ..Default::default() };
        let g = grad_q(&state, &LocalityOperator::zeros(3), &y, &cfg);
        assert!(linalg::max_abs(g.as_ref()) < 1e-14);
    }

    #[test]
    fn grad_vanishes_without_penalty_or_locality() {
        let y = obs(&[[1.0, 2.0], [3.0, -1.0]]);
        let mut state = SolverState::zeros(2, 2, 0.0);
        state.z = Mat::from_fn(2, 2, |i, j| (i + j) as f64);
        state.j = Mat::from_fn(2, 2, |i, _| i as f64);
        let cfg = SolverConfig { beta: 0.0, ..Default::default() };
        let g = grad_q(&state, &LocalityOperator::zeros(2), &y, &cfg);
        assert_eq!(linalg::max_abs(g.as_ref()), 0.0);
    }

    #[test]
    fn update_z_fixed_point_at_origin() {
        let y = ObservationMatrix::new(Mat::zeros(2, 3)).unwrap();
        let state = SolverState::zeros(2, 3, 0.01);
        let mut t = Thresholder::new(SvdMode::Full);
        let z = update_z(&state, &LocalityOperator::zeros(3), &y, &SolverConfig::default(), 1.0, &mut t)
            .unwrap();
        assert_eq!(linalg::max_abs(z.as_ref()), 0.0);
    }

    #[test]
    fn update_e_examples() {
        let y = obs(&[[1.0, 0.0], [0.0, 1.0]]);
        let identity = Mat::<f64>::identity(2, 2);
        let zero = Mat::<f64>::zeros(2, 2);
        let e = update_e(&y, identity.as_ref(), zero.as_ref(), 1.0, 1.1);
        assert_eq!(linalg::max_abs(e.as_ref()), 0.0);
        // residual Y itself, every entry below γ/μ = 1.1
        let e = update_e(&y, zero.as_ref(), zero.as_ref(), 1.0, 1.1);
        assert_eq!(linalg::max_abs(e.as_ref()), 0.0);
        let e = update_e(&y, zero.as_ref(), zero.as_ref(), 1.0, 0.25);
        assert_eq!(e[(0, 0)], 0.75);
    }

    #[test]
    fn update_j_examples() {
        let (lambda, mu) = (0.01, 0.5);
        let neg = Mat::from_fn(2, 2, |i, j| -1.0 - (i + j) as f64);
        let zero = Mat::<f64>::zeros(2, 2);
        assert_eq!(linalg::max_abs(update_j(neg.as_ref(), zero.as_ref(), mu, lambda).as_ref()), 0.0);
        let arg = Mat::from_fn(1, 1, |_, _| 2.0 * lambda / mu);
        let j = update_j(arg.as_ref(), Mat::<f64>::zeros(1, 1).as_ref(), mu, lambda);
        assert!((j[(0, 0)] - lambda / mu).abs() < 1e-15);
    }

    #[test]
    fn multipliers_unchanged_when_feasible() {
        let y = obs(&[[1.0, 0.0], [0.0, 1.0]]);
        let mut state = SolverState::zeros(2, 2, 0.3);
        state.z = Mat::identity(2, 2);
        state.j = Mat::identity(2, 2);
        state.m1 = Mat::from_fn(2, 2, |i, j| (i + j) as f64);
        let before = state.clone();
        update_multipliers(&mut state, &y, &SolverConfig::default(), [1.0; 3]);
        assert_eq!(state.m1, before.m1);
        assert_eq!(state.m2, before.m2);
        assert_eq!(state.mu, 0.3);
    }

    #[test]
    fn penalty_grows_only_on_small_changes_and_is_capped() {
        let y = obs(&[[1.0, 0.0], [0.0, 1.0]]);
        let cfg = SolverConfig { mu_max: 1.0, ..Default::default() };
        let mut state = SolverState::zeros(2, 2, 0.5);
        update_multipliers(&mut state, &y, &cfg, [cfg.eps2 * 2.0, 0.0, 0.0]);
        assert_eq!(state.mu, 0.5);
        update_multipliers(&mut state, &y, &cfg, [cfg.eps2, 0.0, 0.0]);
        assert_eq!(state.mu, 0.5 * 1.1);
        state.mu = 1.0;
        update_multipliers(&mut state, &y, &cfg, [0.0; 3]);
        assert_eq!(state.mu, 1.0);
    }

    #[test]
    fn convergence_examples() {
        let cfg = SolverConfig::default();
        assert!(convergence_test(0.0, [0.0; 3], &cfg));
        assert!(!convergence_test(2.0 * cfg.eps1, [0.0; 3], &cfg));
        assert!(convergence_test(0.0, [cfg.eps2, 0.0, 0.0], &cfg));
        assert!(!convergence_test(0.0, [0.0, 0.0, cfg.eps2 * 1.0001], &cfg));
    }

    #[test]
    fn check_convergence_rejects_zero_data() {
        let y = ObservationMatrix::new(Mat::zeros(2, 2)).unwrap();
        let state = SolverState::zeros(2, 2, 1.0);
        assert!(matches!(
            check_convergence(&state, &y, &SolverConfig::default(), [0.0; 3]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn solver_rejects_mismatched_operator() {
        let y = obs(&[[1.0, 0.0], [0.0, 1.0]]);
        let l = LocalityOperator::zeros(3);
        assert!(matches!(
            solve(&y, &l, &SolverConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }
}
