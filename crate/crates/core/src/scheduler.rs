//! Adaptive `(δ, λ)` schedule and the solution-path driver.
//!
//! The path starts from singleton clusters. For each concavity level δ a
//! log-spaced λ grid runs from a lower bound (chosen so that close
//! nearest-neighbour pairs start moving toward each other) to an upper bound
//! at which any pair of objects would fuse. Every grid point warm-starts the
//! optimizer from the previous solution. When a center drifts too far from
//! its members (bias-variance ratio above one) δ is lowered while the
//! maximal pair penalty `λ²δ/2` is held fixed, and a new grid starts.

use serde::{Deserialize, Serialize};

use crate::data::{
    max_pairwise_distance, merge_threshold, nearest_neighbor_distances, order_statistic,
    squared_distance, DataMatrix, ScaleThreshold,
};
use crate::error::{Result, SpcError};
use crate::optimizer::{merge_close_centers, run_mm, MMReport};
use crate::penalty::PenaltyParams;
use crate::splitting::split_pass;
use crate::state::{objective, ClusterState};

/// Hard stop on the number of δ levels; reaching it means the schedule
/// failed to fuse the data into one cluster.
pub const MAX_DELTA_LEVELS: usize = 5000;

/// Default noise cutoff: clusters of this size or smaller count as noise.
pub const DEFAULT_NOISE_CUTOFF: usize = 3;

/// Tuning of the solution path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    /// Approximate share of nearest-neighbour pairs allowed to merge first.
    pub omega: f64,
    /// Quantile level for the reference pair distance, below `omega`.
    pub tau: f64,
    /// Fraction of the gap a reference pair closes in the first MM step.
    pub phi: f64,
    /// Multiplicative decrease of δ.
    pub alpha: f64,
    /// λ grid size; `None` resolves to `min(20, p)`, at least 2.
    pub grid_size: Option<usize>,
    pub noise_cutoff: usize,
    pub allow_splits: bool,
}

impl PathConfig {
    /// Defaults: `tau = 0.9·omega`, `phi = 0.5`, `alpha = 0.9`.
    pub fn new(omega: f64) -> Self {
        Self {
            omega,
            tau: 0.9 * omega,
            phi: 0.5,
            alpha: 0.9,
            grid_size: None,
            noise_cutoff: DEFAULT_NOISE_CUTOFF,
            allow_splits: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(SpcError::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )))
            }
        };
        open_unit("omega", self.omega)?;
        open_unit("tau", self.tau)?;
        open_unit("phi", self.phi)?;
        open_unit("alpha", self.alpha)?;
        if self.tau >= self.omega {
            return Err(SpcError::InvalidParameter(format!(
                "tau ({}) must be smaller than omega ({})",
                self.tau, self.omega
            )));
        }
        if matches!(self.grid_size, Some(g) if g < 2) {
            return Err(SpcError::InvalidParameter(
                "grid size must be at least 2".into(),
            ));
        }
        Ok(())
    }

    pub fn resolved_grid_size(&self, p: usize) -> usize {
        self.grid_size.unwrap_or_else(|| p.clamp(2, 20))
    }
}

/// One converged point of the path.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub params: PenaltyParams,
    pub state: ClusterState,
    pub report: MMReport,
    pub k_total: usize,
    /// Clusters larger than the noise cutoff.
    pub k_clust: usize,
    /// Objective after any split step; equals `report.final_objective`
    /// when no object was split off.
    pub objective: f64,
    /// Some cluster had a bias-variance ratio above one, so the next
    /// solution uses a smaller δ.
    pub bvr_triggered: bool,
    pub splits: usize,
}

/// All solutions in generation order.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath {
    pub solutions: Vec<Solution>,
    pub config: PathConfig,
    pub grid_size: usize,
    pub xi: ScaleThreshold,
}

impl SolutionPath {
    /// Indices of the first solution for each distinct partition, in
    /// generation order.
    pub fn distinct(&self) -> Vec<usize> {
        let mut keep: Vec<usize> = Vec::new();
        for (i, s) in self.solutions.iter().enumerate() {
            let seen = keep.iter().any(|&j| {
                let o = &self.solutions[j];
                o.k_total == s.k_total && o.state.assignment() == s.state.assignment()
            });
            if !seen {
                keep.push(i);
            }
        }
        keep
    }

    pub fn last(&self) -> Option<&Solution> {
        self.solutions.last()
    }
}

/// Number of clusters with more than `cutoff` members.
pub fn count_clusters(state: &ClusterState, cutoff: usize) -> usize {
    state.sizes().iter().filter(|&&s| s > cutoff).count()
}

/// Initial `(λ₁, δ₁)` from the two nearest-neighbour quantiles:
/// `λ₁ = 2φ·Q_ω·Q_τ / ((1−φ)(Q_ω − Q_τ))` and `δ₁ = Q_ω/λ₁`, so that
/// `λ₁δ₁ = Q_ω`.
pub fn params_from_quantiles(q_omega: f64, q_tau: f64, phi: f64) -> Result<PenaltyParams> {
    if !(q_tau > 0.0) {
        return Err(SpcError::DegenerateData(format!(
            "the tau-quantile of nearest-neighbour distances is {q_tau}; \
             raise tau/omega or remove duplicate rows"
        )));
    }
    if !(q_omega > q_tau) {
        return Err(SpcError::DegenerateData(format!(
            "nearest-neighbour quantiles coincide (Q_omega = {q_omega}, Q_tau = {q_tau}); \
             move tau further below omega"
        )));
    }
    let lambda = 2.0 * phi * q_omega * q_tau / ((1.0 - phi) * (q_omega - q_tau));
    PenaltyParams::new(lambda, q_omega / lambda)
}

/// Initial penalty parameters computed from the data's nearest-neighbour
/// distance quantiles.
pub fn init_params(data: &DataMatrix, config: &PathConfig) -> Result<PenaltyParams> {
    config.validate()?;
    let nn = nearest_neighbor_distances(data);
    params_from_quantiles(
        order_statistic(&nn, config.omega)?,
        order_statistic(&nn, config.tau)?,
        config.phi,
    )
}

/// Upper end of the λ grid, `(1 + 1/δ)·max_{i,j}‖y_i − y_j‖`, at which any
/// two objects would fuse.
pub fn lambda_upper(delta: f64, max_distance: f64) -> f64 {
    (1.0 + 1.0 / delta) * max_distance
}

/// `grid_size` λ values from `lambda_lo` to the upper bound, evenly spaced in
/// log scale. Collapses to the single upper value when `lambda_lo` is not
/// below it (or when `grid_size < 2`).
pub fn lambda_grid(delta: f64, lambda_lo: f64, max_distance: f64, grid_size: usize) -> Vec<f64> {
    let hi = lambda_upper(delta, max_distance);
    if !(lambda_lo < hi) || grid_size < 2 || lambda_lo <= 0.0 {
        return vec![hi];
    }
    let (log_lo, log_hi) = (lambda_lo.ln(), hi.ln());
    let steps = (grid_size - 1) as f64;
    (0..grid_size)
        .map(|g| match g {
            0 => lambda_lo,
            g if g == grid_size - 1 => hi,
            g => (log_lo + (log_hi - log_lo) * g as f64 / steps).exp(),
        })
        .collect()
}

/// Next concavity level: `δ' = α·δ` and `λ₁' = λ̃/√α`, where `current.lambda`
/// is the λ in force when the decrease was triggered. Keeps `λ²δ/2` fixed.
pub fn decrease_delta(current: &PenaltyParams, config: &PathConfig) -> Result<PenaltyParams> {
    PenaltyParams::new(
        current.lambda / config.alpha.sqrt(),
        current.delta * config.alpha,
    )
}

/// Bias-variance ratio of cluster k.
///
/// For `N_k > 1` this is the squared center bias over the unbiased total
/// variance of the members. For a singleton `{i}` the bias is compared with
/// half the distance from `y_i` to the nearest other center.
pub fn bvr(k: usize, state: &ClusterState, data: &DataMatrix) -> f64 {
    let size = state.sizes()[k];
    let center = state.center(k);
    if size == 1 {
        let i = state.assignment().iter().position(|&c| c == k).unwrap_or(0);
        let y = data.row(i);
        let bias = squared_distance(center, y);
        let r2 = (0..state.k())
            .filter(|&l| l != k)
            .map(|l| squared_distance(y, state.center(l)))
            .fold(f64::INFINITY, f64::min);
        return ratio(bias, r2 / 4.0);
    }
    let mean = state.cluster_mean(k);
    let spread: f64 = state
        .members(k)
        .into_iter()
        .map(|i| squared_distance(data.row(i), &mean))
        .sum();
    ratio(squared_distance(center, &mean), spread / (size - 1) as f64)
}

fn ratio(bias: f64, scale: f64) -> f64 {
    if bias == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        bias / scale
    }
}

/// Bias-variance ratios for every cluster, in one pass over the data.
pub fn bvr_all(state: &ClusterState, data: &DataMatrix) -> Vec<f64> {
    let k = state.k();
    let means: Vec<Vec<f64>> = (0..k).map(|c| state.cluster_mean(c)).collect();
    let mut spread = vec![0.0; k];
    let mut first_member = vec![usize::MAX; k];
    for (i, &c) in state.assignment().iter().enumerate() {
        spread[c] += squared_distance(data.row(i), &means[c]);
        if first_member[c] == usize::MAX {
            first_member[c] = i;
        }
    }
    (0..k)
        .map(|c| {
            let size = state.sizes()[c];
            if size == 1 {
                let y = data.row(first_member[c]);
                let bias = squared_distance(state.center(c), y);
                if bias == 0.0 {
                    return 0.0;
                }
                let r2 = (0..k)
                    .filter(|&l| l != c)
                    .map(|l| squared_distance(y, state.center(l)))
                    .fold(f64::INFINITY, f64::min);
                ratio(bias, r2 / 4.0)
            } else {
                ratio(
                    squared_distance(state.center(c), &means[c]),
                    spread[c] / (size - 1) as f64,
                )
            }
        })
        .collect()
}

/// Starting `(λ₁, δ₁)` for [`run_path`], falling back when the raw
/// nearest-neighbour quantiles are degenerate (duplicate rows, or too few
/// distinct distances): the quantiles are then taken over the distinct
/// initial centers, and if `Q_τ` is still unusable the reference distance is
/// set to `(τ/ω)·Q_ω`.
fn starting_params(data: &DataMatrix, state: &ClusterState, config: &PathConfig) -> Result<PenaltyParams> {
    if let Ok(params) = init_params(data, config) {
        return Ok(params);
    }
    let centers = DataMatrix::from_rows(state.centers())?;
    let nn = nearest_neighbor_distances(&centers);
    let q_omega = order_statistic(&nn, config.omega)?;
    let q_tau = order_statistic(&nn, config.tau)?;
    params_from_quantiles(q_omega, q_tau, config.phi)
        .or_else(|_| params_from_quantiles(q_omega, q_omega * config.tau / config.omega, config.phi))
}

/// Runs the full solution path, from singletons down to a single cluster.
pub fn run_path(data: &DataMatrix, config: &PathConfig) -> Result<SolutionPath> {
    config.validate()?;
    let grid_size = config.resolved_grid_size(data.p());
    let xi = merge_threshold(data);
    let max_distance = max_pairwise_distance(data);

    let mut state = ClusterState::singletons(data);
    merge_close_centers(&mut state, xi);
    let mut path = SolutionPath {
        solutions: Vec::new(),
        config: *config,
        grid_size,
        xi,
    };

    let mut params = if state.k() > 1 {
        starting_params(data, &state, config)?
    } else {
        PenaltyParams::new(1.0, 1.0)?
    };

    for _level in 0..MAX_DELTA_LEVELS {
        let grid = lambda_grid(params.delta, params.lambda, max_distance, grid_size);
        let mut lambda_tilde = *grid.last().expect("grid is never empty");
        for &lambda in &grid {
            let current = PenaltyParams::new(lambda, params.delta)?;
            let (mut next, report) = run_mm(state, data, &current, xi)?;
            let mut objective_value = report.final_objective;
            let splits = if config.allow_splits {
                let count = split_pass(&mut next, data, &current)?;
                if count > 0 {
                    objective_value = objective(data, &next, &current)?;
                }
                count
            } else {
                0
            };
            let triggered = next.k() > 1 && bvr_all(&next, data).iter().any(|&r| r > 1.0);
            path.solutions.push(Solution {
                params: current,
                k_total: next.k(),
                k_clust: count_clusters(&next, config.noise_cutoff),
                state: next.clone(),
                report,
                objective: objective_value,
                bvr_triggered: triggered,
                splits,
            });
            state = next;
            if state.k() == 1 {
                return Ok(path);
            }
            if triggered {
                lambda_tilde = lambda;
                break;
            }
        }
        params = decrease_delta(&PenaltyParams::new(lambda_tilde, params.delta)?, config)?;
    }
    Err(SpcError::NoTermination(MAX_DELTA_LEVELS))
}
