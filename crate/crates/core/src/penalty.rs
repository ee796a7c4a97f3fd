//! The minimax concave penalty (MCP) and the majorization weights derived
//! from its slope.
//!
//! For a distance `t ≥ 0` the penalty is
//!
//! ```text
//! ρ(t) = t − t²/(2λδ)   if t < λδ
//!      = λδ/2           otherwise
//! ```
//!
//! `λ` sets the regularization strength and `δ` the concavity. Pairs of
//! centers farther apart than `η = λδ` feel no pull at all.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcError};

/// One `(λ, δ)` combination on the solution path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyParams {
    pub lambda: f64,
    pub delta: f64,
}

impl PenaltyParams {
    /// `lambda = 0` is accepted as the unpenalized limit.
    pub fn new(lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(SpcError::InvalidParameter(format!(
                "lambda must be finite and nonnegative, got {lambda}"
            )));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(SpcError::InvalidParameter(format!(
                "delta must be finite and positive, got {delta}"
            )));
        }
        if !(lambda * delta).is_finite() {
            return Err(SpcError::InvalidParameter(
                "lambda * delta overflows".into(),
            ));
        }
        Ok(Self { lambda, delta })
    }

    /// Attraction threshold η = λδ.
    pub fn eta(&self) -> f64 {
        self.lambda * self.delta
    }
}

fn check_distance(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(SpcError::InvalidParameter(format!(
            "penalty argument must be nonnegative, got {t}"
        )))
    }
}

/// MCP value ρ(t).
pub fn rho(t: f64, params: &PenaltyParams) -> Result<f64> {
    check_distance(t)?;
    let eta = params.eta();
    Ok(if t < eta { t - t * t / (2.0 * eta) } else { eta / 2.0 })
}

/// MCP slope (1 − t/(λδ))₊; the kink at t = λδ takes the right derivative 0.
pub fn rho_prime(t: f64, params: &PenaltyParams) -> Result<f64> {
    check_distance(t)?;
    Ok(slope(t, params.eta()))
}

#[inline]
pub(crate) fn slope(t: f64, eta: f64) -> f64 {
    if t < eta {
        1.0 - t / eta
    } else {
        0.0
    }
}

/// MM weight of center ℓ in the update of center k:
/// `N_ℓ · ρ'(d) / (2d)` with `d = ‖μ_k − μ_ℓ‖`.
pub fn weight(mu_k: &[f64], mu_l: &[f64], size_l: usize, params: &PenaltyParams) -> Result<f64> {
    let d = crate::data::pairwise_distance(mu_k, mu_l)?;
    weight_at_distance(d, size_l, params.eta())
}

#[inline]
pub(crate) fn weight_at_distance(d: f64, size_l: usize, eta: f64) -> Result<f64> {
    if d <= 0.0 {
        return Err(SpcError::InvalidParameter(
            "weight is undefined for coincident centers".into(),
        ));
    }
    Ok(size_l as f64 * slope(d, eta) / (2.0 * d))
}

/// Largest penalty a single pair can contribute, z = λ·max ρ = λ²δ/2.
pub fn max_penalty(params: &PenaltyParams) -> f64 {
    params.lambda * params.lambda * params.delta / 2.0
}
