//! Picking one clustering from a path with the likelihood difference ratio.

use serde::{Deserialize, Serialize};

use crate::data::{squared_distance, DataMatrix};
use crate::error::{Result, SpcError};
use crate::scheduler::SolutionPath;
use crate::state::ClusterState;

/// Default threshold fraction `a`.
pub const DEFAULT_RATIO_THRESHOLD: f64 = 0.05;

/// Mixture log-likelihood with identity covariances and weights `N_k/n`,
/// each component centered on its cluster's sample mean.
pub fn log_likelihood(data: &DataMatrix, state: &ClusterState) -> f64 {
    let n = data.n() as f64;
    let log_norm = -0.5 * data.p() as f64 * (2.0 * std::f64::consts::PI).ln();
    let means: Vec<Vec<f64>> = (0..state.k()).map(|k| state.cluster_mean(k)).collect();
    let log_weights: Vec<f64> = state.sizes().iter().map(|&s| (s as f64 / n).ln()).collect();
    let mut terms = vec![0.0; state.k()];
    let mut total = 0.0;
    for row in data.rows() {
        for (t, (mean, lw)) in terms.iter_mut().zip(means.iter().zip(&log_weights)) {
            *t = lw - 0.5 * squared_distance(row, mean);
        }
        total += log_sum_exp(&terms);
    }
    total + n * log_norm
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// A solution that took part in the selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    /// Index into the path's solution list.
    pub solution_index: usize,
    pub k_total: usize,
    pub log_likelihood: f64,
}

/// Difference ratio between two adjacent candidates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferenceRatio {
    pub k_low: usize,
    pub k_high: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Index into `candidates`.
    pub chosen_index: usize,
    /// Index into the path's solution list.
    pub solution_index: usize,
    pub k_star: usize,
    pub ratios: Vec<DifferenceRatio>,
    /// One representative per cluster count, ascending in `k_total`.
    pub candidates: Vec<Candidate>,
}

/// Which end of the last significant likelihood jump is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionRule {
    /// The solution reached by the last jump whose ratio is significant:
    /// beyond it, adding clusters no longer buys much likelihood.
    #[default]
    AfterLastJump,
    /// The solution the last significant jump starts from, i.e.
    /// `max{K_s : dr(s, s+1) ≥ a · max dr}` read literally.
    BeforeLastJump,
}

/// Selection from precomputed `(solution_index, k_total, log_likelihood)`
/// scores.
///
/// Keeps the highest-likelihood entry per cluster count (earliest on ties)
/// and forms `dr = ΔL/ΔK` between neighbours. The last pair whose ratio
/// reaches `a · max dr` decides; `rule` picks which of its two ends is
/// returned. When no ratio qualifies (only possible if every ratio is
/// negative) no increase in K pays off and the smallest K is returned.
pub fn select_from_scores(scores: &[Candidate], a: f64, rule: SelectionRule) -> Result<SelectionResult> {
    if !(a.is_finite() && a > 0.0) {
        return Err(SpcError::InvalidParameter(format!("a must be positive, got {a}")));
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for c in scores {
        if !c.log_likelihood.is_finite() {
            return Err(SpcError::DegenerateData("log-likelihood is not finite".into()));
        }
        match candidates.iter_mut().find(|o| o.k_total == c.k_total) {
            Some(o) if c.log_likelihood > o.log_likelihood => *o = *c,
            Some(_) => {}
            None => candidates.push(*c),
        }
    }
    candidates.sort_by_key(|c| c.k_total);
    if candidates.len() < 2 {
        return Err(SpcError::TooFewSolutions(candidates.len()));
    }
    let ratios: Vec<DifferenceRatio> = candidates
        .windows(2)
        .map(|w| DifferenceRatio {
            k_low: w[0].k_total,
            k_high: w[1].k_total,
            ratio: (w[1].log_likelihood - w[0].log_likelihood)
                / (w[1].k_total - w[0].k_total) as f64,
        })
        .collect();
    let max = ratios.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let chosen_index = match ratios.iter().rposition(|r| r.ratio >= a * max) {
        Some(s) => match rule {
            SelectionRule::AfterLastJump => s + 1,
            SelectionRule::BeforeLastJump => s,
        },
        None => 0,
    };
    let chosen = candidates[chosen_index];
    Ok(SelectionResult {
        chosen_index,
        solution_index: chosen.solution_index,
        k_star: chosen.k_total,
        ratios,
        candidates,
    })
}

/// Scores every solution on the path and applies [`select_from_scores`]
/// with the default rule.
pub fn select(path: &SolutionPath, data: &DataMatrix, a: f64) -> Result<SelectionResult> {
    select_with_rule(path, data, a, SelectionRule::default())
}

pub fn select_with_rule(
    path: &SolutionPath,
    data: &DataMatrix,
    a: f64,
    rule: SelectionRule,
) -> Result<SelectionResult> {
    let scores: Vec<Candidate> = path
        .solutions
        .iter()
        .enumerate()
        .map(|(i, s)| Candidate {
            solution_index: i,
            k_total: s.k_total,
            log_likelihood: log_likelihood(data, &s.state),
        })
        .collect();
    select_from_scores(&scores, a, rule)
}
