//! Coverage experiments: how often the final arc contains the true θ.

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{half_arc_length, run_trial_unchecked, ExperimentConfig, TrialOutcome};
use crate::error::Result;
use crate::measure::NoiseModel;
use crate::stream::RandomStream;

/// z-value of the two-sided 95% normal interval.
const Z_95: f64 = 1.96;

pub const TABLE1_TOTALS: [u64; 4] = [20, 30, 40, 50];
pub const TABLE1_STAGES: [u32; 4] = [6, 7, 8, 9];
/// Noise rates `2^{-e}` for `e` in this list.
pub const TABLE2_NOISE_EXPONENTS: [i32; 5] = [4, 5, 6, 7, 8];
pub const TABLE2_STAGES: [u32; 6] = [4, 5, 6, 7, 8, 9];
pub const TABLE2_TOTAL: u64 = 30;

/// Domain separator for per-cell seeds.
const CELL_STREAM_BASE: u64 = 0xC0DE_0000_0000_0000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub stages: u32,
    pub trials: u64,
    pub hits: u64,
    pub coverage: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Hit radius around the estimate, `1 / (2^l · 3)`.
    pub half_arc_length: f64,
}

impl CoverageReport {
    /// Normal-approximation 95% interval `m/M ± 1.96 √(m/M (1 - m/M) / M)`,
    /// clamped to `[0, 1]`.
    pub fn from_hits(stages: u32, trials: u64, hits: u64) -> Self {
        let coverage = hits as f64 / trials as f64;
        let half = Z_95 * (coverage * (1.0 - coverage) / trials as f64).sqrt();
        CoverageReport {
            stages,
            trials,
            hits,
            coverage,
            ci_low: (coverage - half).max(0.0),
            ci_high: (coverage + half).min(1.0),
            half_arc_length: half_arc_length(stages),
        }
    }

    /// Binomial standard error of `coverage`.
    pub fn sigma(&self) -> f64 {
        (self.coverage * (1.0 - self.coverage) / self.trials as f64).sqrt()
    }

    pub fn ci_half_width(&self) -> f64 {
        Z_95 * self.sigma()
    }
}

fn trial(cfg: &ExperimentConfig, index: u64) -> Result<TrialOutcome> {
    let mut rng = RandomStream::derive(cfg.seed, index);
    let theta = cfg.theta_for(index, &mut rng);
    run_trial_unchecked(theta, cfg, &mut rng)
}

/// Runs `cfg.trials` independent trials, each on substream `(seed, index)`.
pub fn coverage_experiment(cfg: &ExperimentConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let hits = (0..cfg.trials)
        .into_par_iter()
        .map(|i| trial(cfg, i).map(|o| o.hit as u64))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(CoverageReport::from_hits(cfg.stages, cfg.trials, hits))
}

/// Every trial outcome, in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| trial(cfg, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub noise: NoiseModel,
    pub total_per_stage: u64,
    pub report: CoverageReport,
}

/// Coverage over the grid `noise × totals × stages`, in that nesting order.
/// Each cell gets its own seed derived from `seed` and the cell index.
pub fn coverage_table(
    noise: &[NoiseModel],
    totals: &[u64],
    stages: &[u32],
    trials: u64,
    seed: u64,
) -> Result<Vec<TableCell>> {
    let mut cells = Vec::with_capacity(noise.len() * totals.len() * stages.len());
    let mut index = 0u64;
    for &nm in noise {
        for &total in totals {
            for &l in stages {
                let cell_seed = RandomStream::derive(seed, CELL_STREAM_BASE + index).next_u64();
                index += 1;
                let cfg = ExperimentConfig::new(l, total, nm, trials, cell_seed);
                cells.push(TableCell {
                    noise: nm,
                    total_per_stage: total,
                    report: coverage_experiment(&cfg)?,
                });
            }
        }
    }
    Ok(cells)
}

/// Noiseless grid: `N_tot ∈ {20, 30, 40, 50}`, `l ∈ {6..9}`.
pub fn table1(trials: u64, seed: u64) -> Result<Vec<TableCell>> {
    coverage_table(
        &[NoiseModel::NOISELESS],
        &TABLE1_TOTALS,
        &TABLE1_STAGES,
        trials,
        seed,
    )
}

/// Noisy grid at `N_tot = 30`: `r ∈ {2^-4..2^-8}`, `l ∈ {4..9}`.
pub fn table2(trials: u64, seed: u64) -> Result<Vec<TableCell>> {
    let noise: Vec<NoiseModel> = TABLE2_NOISE_EXPONENTS
        .iter()
        .map(|&e| NoiseModel::new(0.5f64.powi(e)).expect("rate in range"))
        .collect();
    coverage_table(&noise, &[TABLE2_TOTAL], &TABLE2_STAGES, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ThetaSource;
    use crate::Angle;

    #[test]
    fn report_interval() {
        let r = CoverageReport::from_hits(9, 100_000, 99_712);
        let half = 1.96 * (0.99712f64 * 0.00288 / 100_000.0).sqrt();
        assert!((r.ci_high - r.ci_low - 2.0 * half).abs() < 1e-12);
        // Widest interval over the noiseless grid is about 0.00066.
        assert!((2.0 * half - 0.00066).abs() < 0.00001);
        assert_eq!(r.half_arc_length, 1.0 / 1536.0);
    }

    #[test]
    fn report_clamps() {
        let r = CoverageReport::from_hits(3, 10, 10);
        assert_eq!((r.ci_low, r.ci_high), (1.0, 1.0));
        let r = CoverageReport::from_hits(3, 10, 0);
        assert_eq!((r.ci_low, r.ci_high), (0.0, 0.0));
        let r = CoverageReport::from_hits(3, 4, 3);
        assert!(r.ci_low >= 0.0 && r.ci_high <= 1.0);
    }

    #[test]
    fn experiment_is_reproducible() {
        let cfg = ExperimentConfig::new(6, 20, NoiseModel::NOISELESS, 3000, 5);
        assert_eq!(
            coverage_experiment(&cfg).unwrap(),
            coverage_experiment(&cfg).unwrap()
        );
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let one = single.install(|| coverage_experiment(&cfg).unwrap());
        assert_eq!(one, coverage_experiment(&cfg).unwrap());
    }

    #[test]
    fn fixed_theta_uses_it() {
        let cfg = ExperimentConfig::new(4, 40, NoiseModel::NOISELESS, 50, 1)
            .with_theta(ThetaSource::Fixed(Angle::new(0.61)));
        assert!(run_trials(&cfg)
            .unwrap()
            .iter()
            .all(|o| o.theta == Angle::new(0.61)));
    }

    #[test]
    fn invalid_config_propagates() {
        let cfg = ExperimentConfig::new(4, 31, NoiseModel::NOISELESS, 50, 1);
        assert!(coverage_experiment(&cfg).is_err());
    }

    #[test]
    fn table_shapes() {
        let t = coverage_table(
            &[NoiseModel::NOISELESS, NoiseModel::new(0.1).unwrap()],
            &[10, 20],
            &[2, 3, 4],
            10,
            0,
        )
        .unwrap();
        assert_eq!(t.len(), 12);
        assert_eq!(t[0].report.stages, 2);
        assert_eq!(t[3].total_per_stage, 20);
        assert_eq!(t[6].noise.rate(), 0.1);
    }
}
