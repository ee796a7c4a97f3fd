//! Majorization-minimization with cyclic block updates for one fixed `(λ, δ)`.
//!
//! Each block step linearizes the concave penalty around the current center,
//! which turns the block objective into a quadratic whose minimizer is a
//! weighted average of the cluster mean and the other centers. Centers that
//! land within ξ of each other are fused on the spot.

use serde::{Deserialize, Serialize};

use crate::data::{squared_distance, DataMatrix, ScaleThreshold};
use crate::error::{Result, SpcError};
use crate::penalty::{slope, PenaltyParams};
use crate::state::ClusterState;

/// Iteration cap for [`run_mm`].
pub const MAX_MM_ITERATIONS: usize = 50;

/// Outcome of one [`run_mm`] call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MMReport {
    pub iterations: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub merges_performed: usize,
}

/// Whether a sweep fuses centers that come within the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MergePolicy {
    Threshold(ScaleThreshold),
    Disabled,
}

/// Bookkeeping for a single sweep over all blocks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SweepStats {
    pub merges: usize,
    /// Largest center displacement among block updates of the sweep.
    pub max_shift: f64,
}

/// Minimizer of the majorized block objective for center `k`:
/// `(ȳ_k + λ Σ w_{kℓ} μ_ℓ) / (1 + λ Σ w_{kℓ})`, with weights evaluated at the
/// current value of `μ_k`. Returns `ȳ_k` unchanged when every weight vanishes.
pub fn center_update(
    k: usize,
    state: &ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
) -> Result<Vec<f64>> {
    if k >= state.k() {
        return Err(SpcError::InvalidParameter(format!(
            "cluster index {k} out of range for K = {}",
            state.k()
        )));
    }
    if state.sizes()[k] == 0 {
        return Err(SpcError::EmptyCluster(k));
    }
    let mean = state.cluster_mean(k);
    let eta = params.eta();
    let mu_k = state.center(k);
    let mut total_weight = 0.0;
    let mut pull = vec![0.0; data.p()];
    for (l, mu_l) in state.centers().iter().enumerate() {
        if l == k {
            continue;
        }
        let d2 = squared_distance(mu_k, mu_l);
        if d2 >= eta * eta {
            continue;
        }
        if d2 == 0.0 {
            return Err(SpcError::CoincidentCenters(k, l));
        }
        let d = d2.sqrt();
        let w = state.sizes()[l] as f64 * slope(d, eta) / (2.0 * d);
        if w == 0.0 {
            continue;
        }
        total_weight += w;
        for (acc, v) in pull.iter_mut().zip(mu_l) {
            *acc += w * v;
        }
    }
    if total_weight == 0.0 {
        return Ok(mean);
    }
    let denom = 1.0 + params.lambda * total_weight;
    Ok(mean
        .iter()
        .zip(&pull)
        .map(|(m, s)| (m + params.lambda * s) / denom)
        .collect())
}

/// Fuses cluster `k` with any center within `xi`, repeatedly, scanning the
/// other clusters in ascending index order. Returns the surviving index and
/// the list of removed indices.
fn absorb_neighbors(state: &mut ClusterState, mut k: usize, xi: f64) -> (usize, Vec<usize>) {
    let xi2 = xi * xi;
    let mut removed = Vec::new();
    loop {
        let hit = (0..state.k())
            .find(|&l| l != k && squared_distance(state.center(k), state.center(l)) <= xi2);
        match hit {
            Some(l) => {
                removed.push(k.max(l));
                k = state.merge(k, l);
            }
            None => return (k, removed),
        }
    }
}

/// Fuses every pair of centers within ξ, lowest indices first.
pub fn merge_close_centers(state: &mut ClusterState, xi: ScaleThreshold) -> usize {
    let mut merges = 0;
    let mut k = 0;
    while k < state.k() {
        let (_, removed) = absorb_neighbors(state, k, xi.xi);
        merges += removed.len();
        k = k + 1 - removed.iter().filter(|&&r| r <= k).count();
    }
    merges
}

/// One sweep over all blocks in index order, reporting the state after each
/// block update (before any merge) to `observer`.
pub fn sweep_observed<F>(
    state: &mut ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
    merge: MergePolicy,
    mut observer: F,
) -> Result<SweepStats>
where
    F: FnMut(usize, &ClusterState),
{
    let mut stats = SweepStats::default();
    let mut k = 0;
    while k < state.k() {
        let updated = center_update(k, state, data, params)?;
        let shift = squared_distance(&updated, state.center(k)).sqrt();
        stats.max_shift = stats.max_shift.max(shift);
        state.set_center(k, updated);
        observer(k, state);

        let mut next = k + 1;
        if let MergePolicy::Threshold(xi) = merge {
            let (_, removed) = absorb_neighbors(state, k, xi.xi);
            stats.merges += removed.len();
            next -= removed.iter().filter(|&&r| r <= k).count();
        }
        k = next;
    }
    Ok(stats)
}

/// One MM iteration: a Gauss–Seidel sweep with ξ-merging after each block.
pub fn mm_iteration(
    state: &ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
    xi: ScaleThreshold,
) -> Result<ClusterState> {
    let mut next = state.clone();
    sweep_observed(&mut next, data, params, MergePolicy::Threshold(xi), |_, _| {})?;
    Ok(next)
}

/// Repeats [`mm_iteration`] until no center moves by ξ or more, or
/// [`MAX_MM_ITERATIONS`] sweeps have run. A sweep that fused any clusters
/// never terminates the loop.
pub fn run_mm(
    state: ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
    xi: ScaleThreshold,
) -> Result<(ClusterState, MMReport)> {
    let mut state = state;
    let mut merges = merge_close_centers(&mut state, xi);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_MM_ITERATIONS {
        iterations += 1;
        let stats = sweep_observed(&mut state, data, params, MergePolicy::Threshold(xi), |_, _| {})?;
        merges += stats.merges;
        if stats.merges == 0 && (stats.max_shift < xi.xi || stats.max_shift == 0.0) {
            converged = true;
            break;
        }
    }
    let final_objective = crate::state::objective(data, &state, params)?;
    Ok((
        state,
        MMReport {
            iterations,
            converged,
            final_objective,
            merges_performed: merges,
        },
    ))
}
