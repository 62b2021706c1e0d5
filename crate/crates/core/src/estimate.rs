//! Per-stage confidence arcs and Hoeffding measurement budgets.
//!
//! A stage's tallies give empirical cosine and sine estimates
//! `x₀ = 2 n_x1/N - 1`, `y₀ = 2 n_y1/N - 1`; their direction `atan2(y₀, x₀)`
//! is the point estimate of `(2^{k-1} θ) mod 1`, and the stage arc is the
//! width-1/3 arc centred on it.
//!
//! If both empirical probabilities are within [`PROB_DEVIATION`] of their
//! true values, the cosine/sine estimates are within `2 × 0.306 = 0.612` of
//! the truth, which caps the angular error at `arcsin(√2 · 0.612) < π/3`,
//! i.e. less than 1/6 of a turn, so the arc covers the target.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::circle::{Angle, Arc};
use crate::error::{Error, Result};
use crate::measure::StageCounts;
use crate::refine::STAGE_WIDTH;

/// Allowed deviation of an empirical outcome frequency from its probability.
pub const PROB_DEVIATION: f64 = 0.306;

/// Multiplier in `N = 5.34 ln(4l/ε)`; `1 / (2 · 0.306²) ≈ 5.3398`, rounded up.
pub const BUDGET_CONSTANT: f64 = 5.34;

/// A stage point estimate together with its confidence arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageEstimate {
    pub point: Angle,
    pub arc: Arc,
    /// Both empirical signals were exactly zero, so the direction is
    /// undefined and `point` was set to 0.
    pub degenerate: bool,
}

/// Builds the width-1/3 arc centred on the stage's atan2 estimate.
pub fn stage_arc(counts: &StageCounts) -> Result<StageEstimate> {
    if counts.per_basis == 0 {
        return Err(Error::EmptyStage);
    }
    let degenerate = 2 * counts.x_ones == counts.per_basis && 2 * counts.y_ones == counts.per_basis;
    let point = if degenerate {
        Angle::ZERO
    } else {
        Angle::new(counts.y_signal().atan2(counts.x_signal()) / TAU)
    };
    let arc = Arc::from_angle(point + (-STAGE_WIDTH / 2.0), STAGE_WIDTH)?;
    Ok(StageEstimate {
        point,
        arc,
        degenerate,
    })
}

/// Worst-case angular error (radians) of `atan2(y₀, x₀)` when the unit
/// vector `(x, y)` is perturbed by at most `alpha` in each coordinate.
pub fn angular_error_bound(alpha: f64) -> Result<f64> {
    // Admit the rounded value of 1/√2 itself.
    if !(0.0..=FRAC_1_SQRT_2 + 1e-15).contains(&alpha) {
        return Err(Error::AlphaOutOfDomain(alpha));
    }
    Ok((SQRT_2 * alpha).min(1.0).asin())
}

/// Measurement budget guaranteeing coverage `1 - ε` over `stages` stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBudget {
    pub stages: u32,
    pub epsilon: f64,
    pub per_basis: u64,
    pub total_per_stage: u64,
}

impl SampleBudget {
    /// Total channel uses `N_tot (2^l - 1)`.
    pub fn channel_uses(&self) -> u64 {
        self.total_per_stage * ((1u64 << self.stages) - 1)
    }
}

/// `N = ceil(5.34 ln(4l/ε))` per basis, twice that per stage.
pub fn sample_budget(stages: u32, epsilon: f64) -> Result<SampleBudget> {
    if stages == 0 || stages > 63 || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidBudget { stages, epsilon });
    }
    let per_basis = (BUDGET_CONSTANT * (4.0 * stages as f64 / epsilon).ln()).ceil() as u64;
    Ok(SampleBudget {
        stages,
        epsilon,
        per_basis,
        total_per_stage: 2 * per_basis,
    })
}

/// The error target `ε = 2^{-2l}` that puts the fidelity cost within a
/// log factor of the Heisenberg limit.
pub fn heisenberg_epsilon(stages: u32) -> f64 {
    0.5f64.powi(2 * stages as i32)
}

/// Checks that the Hoeffding tail `2 exp(-2 N t²)` at `t = 0.306` is small
/// enough for each basis to hit the target with probability `√(1 - ε/l)`.
pub fn coverage_guarantee_check(stages: u32, epsilon: f64, per_basis: u64) -> bool {
    if stages == 0 || !(epsilon > 0.0 && epsilon < 1.0) {
        return false;
    }
    let tail = 2.0 * (-2.0 * per_basis as f64 * PROB_DEVIATION * PROB_DEVIATION).exp();
    let x = epsilon / stages as f64;
    // 1 - √(1 - x) without cancellation.
    let allowed = x / (1.0 + (1.0 - x).sqrt());
    tail <= allowed
}
