//! Folding per-stage confidence arcs into a single arc for θ.
//!
//! Stage `k` yields an arc `L_k` for `(2^{k-1} θ) mod 1`. The running arc
//! `J_k` for the same quantity is carried forward by doubling and then
//! picking a sub-arc of `2 J_k` of the original width that agrees with
//! `L_{k+1}` as much as possible. After `l` stages, `J_l / 2^{l-1}` is an
//! arc for θ of width `width / 2^{l-1}`.
//!
//! The lower bound `z(k)` of `J_k` grows like `2^k`, so it is never stored
//! directly: only `z(k) mod 1` is kept for the case split, and
//! `z(k) / 2^{k-1}` is accumulated as `z(1) + Σ offset_j / 2^j`.

use serde::{Deserialize, Serialize};

use crate::circle::{reduce, Angle, Arc};
use crate::error::{Error, Result};

/// Width of the arcs produced by the general algorithm.
pub const STAGE_WIDTH: f64 = 1.0 / 3.0;

const LOWER_SPLIT: f64 = 1.0 / 3.0;
const UPPER_SPLIT: f64 = 2.0 / 3.0;

/// Relative tolerance when matching widths read from external input.
const WIDTH_MATCH_TOL: f64 = 1e-12;

/// Which of the three placements of `J_{k+1}` inside `2 J_k` was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefineCase {
    /// `L_{k+1}` already sits inside `2 J_k`; take it as is.
    Inside,
    /// Only the upper end of `L_{k+1}` falls in `2 J_k`; pin to the low end.
    PinLow,
    /// Only the lower end of `L_{k+1}` falls in `2 J_k`; pin to the high end.
    PinHigh,
}

/// Classifies `delta = (x(k+1) - 2 z(k)) mod 1` and returns the offset of
/// `z(k+1)` above `2 z(k)`.
pub fn classify(delta: f64) -> (RefineCase, f64) {
    if delta < LOWER_SPLIT {
        (RefineCase::Inside, delta)
    } else if delta < UPPER_SPLIT {
        (RefineCase::PinHigh, LOWER_SPLIT)
    } else {
        (RefineCase::PinLow, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementState {
    stage: u32,
    frac_lower: f64,
    accum_estimate: f64,
    width: f64,
}

impl RefinementState {
    /// Starts the fold from the first stage arc (`J_1 = L_1`).
    pub fn init(first: &Arc) -> Result<Self> {
        if first.width() > STAGE_WIDTH {
            return Err(Error::RefineWidthTooLarge(first.width()));
        }
        let lower = first.lower().value();
        Ok(RefinementState {
            stage: 1,
            frac_lower: lower,
            accum_estimate: lower,
            width: first.width(),
        })
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    /// `z(k) mod 1`.
    pub fn frac_lower(&self) -> f64 {
        self.frac_lower
    }

    /// `z(k) / 2^{k-1}`, unreduced.
    pub fn accum_estimate(&self) -> f64 {
        self.accum_estimate
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// The current arc `J_k` for `(2^{k-1} θ) mod 1`.
    pub fn current_arc(&self) -> Arc {
        Arc::new(self.frac_lower, self.width).expect("width validated at init")
    }

    /// Folds in the next stage arc.
    pub fn step(&self, next: &Arc) -> Result<Self> {
        self.step_with_case(next).map(|(s, _)| s)
    }

    /// Like [`step`](Self::step), also reporting which case fired.
    pub fn step_with_case(&self, next: &Arc) -> Result<(Self, RefineCase)> {
        if (next.width() - self.width).abs() > WIDTH_MATCH_TOL * self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                got: next.width(),
            });
        }
        let doubled = 2.0 * self.frac_lower;
        let delta = reduce(next.lower().value() - doubled);
        let (case, offset) = classify(delta);
        let next_state = RefinementState {
            stage: self.stage + 1,
            frac_lower: reduce(doubled + offset),
            accum_estimate: self.accum_estimate + offset * 0.5f64.powi(self.stage as i32),
            width: self.width,
        };
        Ok((next_state, case))
    }

    /// Final arc `J_l / 2^{l-1}` for θ and its midpoint as the estimate.
    pub fn finish(&self) -> (Angle, Arc) {
        let scale = 0.5f64.powi(self.stage as i32 - 1);
        let final_width = self.width * scale;
        let arc = Arc::new(self.accum_estimate, final_width).expect("positive width");
        let estimate = Angle::new(self.accum_estimate + final_width / 2.0);
        (estimate, arc)
    }
}

/// Folds a whole sequence of stage arcs; `arcs[k-1]` is `L_k`.
pub fn refine_arcs(arcs: &[Arc]) -> Result<(Angle, Arc)> {
    let (first, rest) = arcs
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("at least one stage arc is required".into()))?;
    let mut state = RefinementState::init(first)?;
    for arc in rest {
        state = state.step(arc)?;
    }
    Ok(state.finish())
}
