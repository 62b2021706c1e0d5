//! End-to-end estimation pipeline and Monte Carlo experiments.

mod coverage;
pub mod output;
mod scaling;

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{circ_dist, Angle, Arc};
use crate::error::{Error, Result};
use crate::estimate::stage_arc;
use crate::measure::{sample_stage, NoiseModel};
use crate::refine::RefinementState;
use crate::stream::RandomStream;

pub use coverage::{
    coverage_experiment, coverage_table, run_trials, table1, table2, CoverageReport, TableCell,
    TABLE1_STAGES, TABLE1_TOTALS, TABLE2_NOISE_EXPONENTS, TABLE2_STAGES, TABLE2_TOTAL,
};
pub use scaling::{heisenberg_slope, scaling_experiment, ScalingRow};

/// Largest supported stage count; the final arc width `2^{-(l-1)}/3` stays
/// well above the f64 resolution of θ.
pub const MAX_STAGES: u32 = 48;

/// How each trial's true θ is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaSource {
    /// Uniform on `[0, 1)`, drawn from the trial's own stream.
    Uniform,
    Fixed(Angle),
    /// `θ_i = (i + 1/2) / trials`.
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub stages: u32,
    /// Measurements per stage, split evenly between the x and y bases.
    pub total_per_stage: u64,
    pub noise: NoiseModel,
    pub trials: u64,
    pub seed: u64,
    pub theta_source: ThetaSource,
    /// Per-stage totals overriding `total_per_stage`; `stage_totals[k-1]`
    /// applies to stage `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_totals: Option<Vec<u64>>,
}

impl ExperimentConfig {
    /// Uniform-θ configuration with a fixed per-stage total.
    pub fn new(
        stages: u32,
        total_per_stage: u64,
        noise: NoiseModel,
        trials: u64,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            stages,
            total_per_stage,
            noise,
            trials,
            seed,
            theta_source: ThetaSource::Uniform,
            stage_totals: None,
        }
    }

    pub fn with_theta(mut self, source: ThetaSource) -> Self {
        self.theta_source = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_STAGES).contains(&self.stages) {
            return Err(Error::InvalidConfig(format!(
                "stages must be in 1..={MAX_STAGES}, got {}",
                self.stages
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        let check_total = |total: u64| {
            if total == 0 || !total.is_multiple_of(2) {
                Err(Error::InvalidConfig(format!(
                    "measurements per stage must be a positive even number, got {total}"
                )))
            } else {
                Ok(())
            }
        };
        match &self.stage_totals {
            Some(totals) => {
                if totals.len() != self.stages as usize {
                    return Err(Error::InvalidConfig(format!(
                        "{} per-stage totals given for {} stages",
                        totals.len(),
                        self.stages
                    )));
                }
                totals.iter().try_for_each(|&t| check_total(t))
            }
            None => check_total(self.total_per_stage),
        }
    }

    /// Measurements per basis at `stage`.
    pub fn per_basis(&self, stage: u32) -> u64 {
        let total = match &self.stage_totals {
            Some(t) => t[stage as usize - 1],
            None => self.total_per_stage,
        };
        total / 2
    }

    /// Total channel uses of one run, `Σ_k N_tot(k) 2^{k-1}`.
    pub fn channel_uses(&self) -> u64 {
        (1..=self.stages)
            .map(|k| 2 * self.per_basis(k) * (1u64 << (k - 1)))
            .sum()
    }

    /// The true θ for trial `index`.
    pub fn theta_for(&self, index: u64, rng: &mut RandomStream) -> Angle {
        match self.theta_source {
            ThetaSource::Uniform => Angle::new(rng.random::<f64>()),
            ThetaSource::Fixed(theta) => theta,
            ThetaSource::Grid => Angle::new((index as f64 + 0.5) / self.trials as f64),
        }
    }

    /// Half the final arc length, `1 / (2^l · 3)`.
    pub fn half_arc_length(&self) -> f64 {
        half_arc_length(self.stages)
    }
}

pub fn half_arc_length(stages: u32) -> f64 {
    0.5f64.powi(stages as i32) / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub theta: Angle,
    pub estimate: Angle,
    pub final_arc: Arc,
    /// The final arc contains θ.
    pub hit: bool,
    /// Stages whose empirical direction vector was exactly zero.
    pub degenerate_stages: u32,
}

/// Runs all stages for one true θ and folds the stage arcs.
pub fn run_trial(
    theta: Angle,
    cfg: &ExperimentConfig,
    rng: &mut RandomStream,
) -> Result<TrialOutcome> {
    cfg.validate()?;
    run_trial_unchecked(theta, cfg, rng)
}

pub(crate) fn run_trial_unchecked(
    theta: Angle,
    cfg: &ExperimentConfig,
    rng: &mut RandomStream,
) -> Result<TrialOutcome> {
    let mut degenerate_stages = 0;
    let mut state: Option<RefinementState> = None;
    for stage in 1..=cfg.stages {
        let counts = sample_stage(theta, stage, cfg.per_basis(stage), cfg.noise, rng)?;
        let est = stage_arc(&counts)?;
        degenerate_stages += est.degenerate as u32;
        state = Some(match state {
            None => RefinementState::init(&est.arc)?,
            Some(s) => s.step(&est.arc)?,
        });
    }
    let (estimate, final_arc) = state.expect("at least one stage").finish();
    Ok(TrialOutcome {
        theta,
        estimate,
        final_arc,
        hit: final_arc.contains(theta),
        degenerate_stages,
    })
}

/// `1 - |tr(U_est⁻¹ U_θ)|² / 4 = sin²(π (θ̂ - θ))` for the diagonal phase
/// rotation.
pub fn fidelity_cost(estimate: Angle, theta: Angle) -> f64 {
    (PI * circ_dist(estimate, theta)).sin().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(stages: u32, total: u64) -> ExperimentConfig {
        ExperimentConfig::new(stages, total, NoiseModel::NOISELESS, 1, 1)
    }

    #[test]
    fn fidelity_cost_examples() {
        let t = Angle::new(0.3);
        assert_eq!(fidelity_cost(t, t), 0.0);
        assert!((fidelity_cost(t + 0.5, t) - 1.0).abs() < 1e-12);
        let d = half_arc_length(3);
        assert!((fidelity_cost(t + d, t) - 0.017_037_086_855_465_844).abs() < 1e-9);
        assert!((fidelity_cost(t + d, t) - (PI / 24.0).sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn huge_budget_always_hits() {
        let c = cfg(3, 1_000_000);
        let mut rng = RandomStream::new(9);
        let out = run_trial(Angle::ZERO, &c, &mut rng).unwrap();
        assert!(out.hit);
        assert!(circ_dist(out.estimate, Angle::ZERO) <= 1.0 / 24.0);
    }

    #[test]
    fn single_stage_concentrates() {
        let c = cfg(1, 2_000_000);
        for (i, theta) in [0.0, 0.123, 0.5, 0.77, 0.999].into_iter().enumerate() {
            let mut rng = RandomStream::derive(10, i as u64);
            let out = run_trial(Angle::new(theta), &c, &mut rng).unwrap();
            assert!(circ_dist(out.estimate, Angle::new(theta)) < 1e-2);
        }
    }

    #[test]
    fn seeded_trial_is_deterministic() {
        let c = cfg(6, 30);
        let a = run_trial(Angle::new(0.3), &c, &mut RandomStream::new(77)).unwrap();
        let b = run_trial(Angle::new(0.3), &c, &mut RandomStream::new(77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hit_matches_distance_criterion() {
        let c = cfg(6, 20);
        for i in 0..5000u64 {
            let mut rng = RandomStream::derive(3, i);
            let theta = c.theta_for(i, &mut rng);
            let out = run_trial(theta, &c, &mut rng).unwrap();
            let d = circ_dist(out.estimate, theta);
            let bound = c.half_arc_length();
            // Equal away from the arc endpoints.
            if (d - bound).abs() > 1e-12 {
                assert_eq!(out.hit, d < bound, "θ={theta} est={}", out.estimate);
            }
            assert!((out.final_arc.width() - 2.0 * bound).abs() < 1e-15);
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0, 30).validate().is_err());
        assert!(cfg(MAX_STAGES + 1, 30).validate().is_err());
        assert!(cfg(3, 31).validate().is_err());
        assert!(cfg(3, 0).validate().is_err());
        let mut c = cfg(3, 30);
        c.trials = 0;
        assert!(c.validate().is_err());

        let mut c = cfg(3, 30);
        c.stage_totals = Some(vec![10, 20]);
        assert!(c.validate().is_err());
        c.stage_totals = Some(vec![10, 20, 40]);
        c.validate().unwrap();
        assert_eq!(c.per_basis(3), 20);
        assert_eq!(c.channel_uses(), 10 + 40 + 160);
    }

    #[test]
    fn theta_sources() {
        let mut rng = RandomStream::new(0);
        let c = cfg(2, 10).with_theta(ThetaSource::Fixed(Angle::new(0.4)));
        assert_eq!(c.theta_for(5, &mut rng), Angle::new(0.4));
        let mut c = cfg(2, 10).with_theta(ThetaSource::Grid);
        c.trials = 4;
        assert_eq!(c.theta_for(1, &mut rng).value(), 0.375);
    }
}
