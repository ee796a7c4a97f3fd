//! Optional split step: lets a fused object leave its cluster.
//!
//! Around the current position `θ_i = μ_k`, the pulls toward the other
//! centers are majorized by quadratics and the pull toward the own cluster
//! by `λ·(N_k − 1)·‖θ_i − μ_k‖₁`. The resulting surrogate is minimized by
//! soft-thresholding `β̂ = θ̃_i − μ_k` at
//! `γ = λ(N_k − 1) / (2(1 + λ Σ_ℓ w_{iℓ}))`.

use crate::data::{squared_distance, DataMatrix};
use crate::error::{Result, SpcError};
use crate::penalty::{rho, slope, PenaltyParams};
use crate::state::ClusterState;

/// Result of [`split_step`] for one object.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub moved: bool,
    pub new_theta: Vec<f64>,
}

/// Pieces of the soft-thresholding step, exposed for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitGeometry {
    /// Unthresholded update θ̃_i.
    pub theta_tilde: Vec<f64>,
    /// Threshold γ.
    pub gamma: f64,
    /// Curvature `1 + λ Σ w` of the quadratic part of the surrogate.
    pub curvature: f64,
}

fn soft_threshold(x: f64, gamma: f64) -> f64 {
    if x > gamma {
        x - gamma
    } else if x < -gamma {
        x + gamma
    } else {
        0.0
    }
}

/// Object-level loss `‖y_i − θ‖² + λ Σ_ℓ M_ℓ ρ(‖θ − μ_ℓ‖)`, where `M_ℓ`
/// counts the members of cluster ℓ other than object i.
pub fn object_loss(
    i: usize,
    theta: &[f64],
    state: &ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
) -> Result<f64> {
    let own = state.assignment()[i];
    let mut penalty = 0.0;
    for (l, mu) in state.centers().iter().enumerate() {
        let others = state.sizes()[l] - usize::from(l == own);
        if others > 0 {
            penalty += others as f64 * rho(squared_distance(theta, mu).sqrt(), params)?;
        }
    }
    Ok(squared_distance(data.row(i), theta) + params.lambda * penalty)
}

/// θ̃_i, γ and the surrogate curvature for object `i` sitting at its center.
pub fn split_geometry(
    i: usize,
    state: &ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
) -> Result<SplitGeometry> {
    let k = state.assignment()[i];
    let mu_k = state.center(k);
    let eta = params.eta();
    let mut total = 0.0;
    let mut pull = vec![0.0; data.p()];
    for (l, mu_l) in state.centers().iter().enumerate() {
        if l == k {
            continue;
        }
        let d = squared_distance(mu_k, mu_l).sqrt();
        if d == 0.0 {
            return Err(SpcError::CoincidentCenters(k, l));
        }
        let w = state.sizes()[l] as f64 * slope(d, eta) / (2.0 * d);
        total += w;
        for (acc, v) in pull.iter_mut().zip(mu_l) {
            *acc += w * v;
        }
    }
    let curvature = 1.0 + params.lambda * total;
    let theta_tilde = data
        .row(i)
        .iter()
        .zip(&pull)
        .map(|(y, s)| (y + params.lambda * s) / curvature)
        .collect();
    let others = state.sizes()[k].saturating_sub(1) as f64;
    Ok(SplitGeometry {
        theta_tilde,
        gamma: params.lambda * others / (2.0 * curvature),
        curvature,
    })
}

/// Decides whether object `i` leaves its cluster, and where it goes.
///
/// Components are visited in order; the first one whose `|β̂_m|` exceeds γ
/// is shrunk by γ and every later component takes its unthresholded value
/// θ̃_im. If that joint move fails to lower [`object_loss`], the fully
/// soft-thresholded point is used instead, which always does.
pub fn split_step(
    i: usize,
    state: &ClusterState,
    data: &DataMatrix,
    params: &PenaltyParams,
) -> Result<SplitOutcome> {
    if i >= data.n() {
        return Err(SpcError::InvalidParameter(format!("object {i} out of range")));
    }
    let k = state.assignment()[i];
    let mu_k = state.center(k).to_vec();
    if state.sizes()[k] == 1 {
        // A singleton has nothing to split from.
        return Ok(SplitOutcome {
            moved: false,
            new_theta: mu_k,
        });
    }
    let geo = split_geometry(i, state, data, params)?;
    let beta: Vec<f64> = geo
        .theta_tilde
        .iter()
        .zip(&mu_k)
        .map(|(t, m)| soft_threshold(t - m, geo.gamma))
        .collect();
    let Some(first) = beta.iter().position(|&b| b != 0.0) else {
        return Ok(SplitOutcome {
            moved: false,
            new_theta: mu_k,
        });
    };

    let thresholded: Vec<f64> = mu_k.iter().zip(&beta).map(|(m, b)| m + b).collect();
    let mut joint = thresholded.clone();
    joint[first + 1..].copy_from_slice(&geo.theta_tilde[first + 1..]);

    let stay = object_loss(i, &mu_k, state, data, params)?;
    let new_theta = if joint != thresholded && object_loss(i, &joint, state, data, params)? < stay {
        joint
    } else {
        thresholded
    };
    Ok(SplitOutcome {
        moved: true,
        new_theta,
    })
}

/// Applies [`split_step`] to every object in index order, moving each object
/// that unfuses into a new singleton cluster. Returns the number of splits.
pub fn split_pass(state: &mut ClusterState, data: &DataMatrix, params: &PenaltyParams) -> Result<usize> {
    let mut splits = 0;
    for i in 0..data.n() {
        let outcome = split_step(i, state, data, params)?;
        if outcome.moved {
            state.split_off(data, i, outcome.new_theta);
            splits += 1;
        }
    }
    if splits > 0 {
        state.canonicalize();
    }
    Ok(splits)
}
