//! Fidelity cost against total channel uses.

use std::ops::RangeInclusive;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fidelity_cost, run_trial_unchecked, ExperimentConfig};
use crate::error::{Error, Result};
use crate::estimate::{heisenberg_epsilon, sample_budget};
use crate::measure::NoiseModel;
use crate::stream::RandomStream;

const ROW_STREAM_BASE: u64 = 0x5CA1_0000_0000_0000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub stages: u32,
    pub epsilon: f64,
    pub total_per_stage: u64,
    /// `N_tot (2^l - 1)`.
    pub channel_uses: u64,
    pub mean_cost: f64,
    pub coverage: f64,
}

/// For each `l`, sizes the stages for `ε = 2^{-2l}` and averages the
/// fidelity cost over `trials` uniformly random θ.
pub fn scaling_experiment(
    stages: RangeInclusive<u32>,
    trials: u64,
    noise: NoiseModel,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    stages
        .map(|l| {
            let epsilon = heisenberg_epsilon(l);
            let budget = sample_budget(l, epsilon)?;
            let row_seed = RandomStream::derive(seed, ROW_STREAM_BASE + l as u64).next_u64();
            let cfg = ExperimentConfig::new(l, budget.total_per_stage, noise, trials, row_seed);
            cfg.validate()?;
            let outcomes: Vec<(f64, bool)> = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = RandomStream::derive(cfg.seed, i);
                    let theta = cfg.theta_for(i, &mut rng);
                    run_trial_unchecked(theta, &cfg, &mut rng)
                        .map(|o| (fidelity_cost(o.estimate, theta), o.hit))
                })
                .collect::<Result<_>>()?;
            // Sequential sum keeps the mean independent of thread count.
            let total_cost: f64 = outcomes.iter().map(|(c, _)| c).sum();
            let hits = outcomes.iter().filter(|(_, h)| *h).count();
            Ok(ScalingRow {
                stages: l,
                epsilon,
                total_per_stage: budget.total_per_stage,
                channel_uses: budget.channel_uses(),
                mean_cost: total_cost / trials as f64,
                coverage: hits as f64 / trials as f64,
            })
        })
        .collect()
}

/// Least-squares slope of `ln(cost / (ln n)²)` against `ln n`; close to -2
/// when the cost scales as `(ln n / n)²`.
pub fn heisenberg_slope(rows: &[ScalingRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            let ln_n = (r.channel_uses as f64).ln();
            (ln_n, (r.mean_cost / (ln_n * ln_n)).ln())
        })
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
