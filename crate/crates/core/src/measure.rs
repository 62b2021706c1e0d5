//! Measurement statistics of the (optionally depolarized) phase channel.
//!
//! At stage `k` the channel is applied `m = 2^{k-1}` times to `|ψ_x⟩` and
//! the result is measured in the x or y basis. With depolarizing rate `r`
//! per use the signal amplitude contracts to `(1 - r)^m`:
//!
//! ```text
//! p_x(1; θ) = (1 + (1 - r)^m cos(2π m θ)) / 2
//! p_y(1; θ) = (1 + (1 - r)^m sin(2π m θ)) / 2
//! ```

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::circle::{reduce, Angle};
use crate::error::{Error, Result};
use crate::stream::RandomStream;

/// Up to this many trials, binomials are drawn as explicit Bernoulli loops.
const BERNOULLI_LOOP_MAX: u64 = 64;

/// Depolarizing rate `r ∈ [0, 1)` applied once per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct NoiseModel(f64);

impl NoiseModel {
    pub const NOISELESS: NoiseModel = NoiseModel(0.0);

    pub fn new(r: f64) -> Result<Self> {
        if (0.0..1.0).contains(&r) {
            Ok(NoiseModel(r))
        } else {
            Err(Error::InvalidNoise(r))
        }
    }

    pub fn rate(self) -> f64 {
        self.0
    }

    pub fn is_noiseless(self) -> bool {
        self.0 == 0.0
    }

    /// Signal amplitude `(1 - r)^m` after `m` uses.
    pub fn visibility(self, m: u64) -> f64 {
        if self.0 == 0.0 {
            1.0
        } else {
            (1.0 - self.0).powf(m as f64)
        }
    }
}

impl From<NoiseModel> for f64 {
    fn from(n: NoiseModel) -> f64 {
        n.0
    }
}

impl TryFrom<f64> for NoiseModel {
    type Error = Error;
    fn try_from(r: f64) -> Result<Self> {
        NoiseModel::new(r)
    }
}

/// `2π (m θ mod 1)`; reducing first keeps the trig argument small.
fn phase(theta: Angle, m: u64) -> f64 {
    TAU * reduce(m as f64 * theta.value())
}

/// Probability of outcome 1 when measuring in x after `m` uses.
pub fn prob_x(theta: Angle, m: u64, noise: NoiseModel) -> f64 {
    (1.0 + noise.visibility(m) * phase(theta, m).cos()) / 2.0
}

/// Probability of outcome 1 when measuring in y after `m` uses.
pub fn prob_y(theta: Angle, m: u64, noise: NoiseModel) -> f64 {
    (1.0 + noise.visibility(m) * phase(theta, m).sin()) / 2.0
}

/// Channel uses per preparation at stage `k`, i.e. `2^{k-1}`.
pub fn uses_at_stage(stage: u32) -> Result<u64> {
    if (1..=64).contains(&stage) {
        Ok(1u64 << (stage - 1))
    } else {
        Err(Error::InvalidStage(stage))
    }
}

/// Outcome tallies for one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub stage: u32,
    /// Channel uses per preparation, `2^{stage-1}`.
    pub uses: u64,
    /// Measurements per basis.
    pub per_basis: u64,
    pub x_ones: u64,
    pub y_ones: u64,
}

impl StageCounts {
    /// Checked constructor for externally supplied tallies.
    pub fn new(stage: u32, per_basis: u64, x_ones: u64, y_ones: u64) -> Result<Self> {
        let uses = uses_at_stage(stage)?;
        if per_basis == 0 {
            return Err(Error::EmptyStage);
        }
        for ones in [x_ones, y_ones] {
            if ones > per_basis {
                return Err(Error::InvalidCounts { ones, per_basis });
            }
        }
        Ok(StageCounts {
            stage,
            uses,
            per_basis,
            x_ones,
            y_ones,
        })
    }

    /// Empirical cosine estimate `2 n_x1 / N - 1`.
    pub fn x_signal(&self) -> f64 {
        2.0 * self.x_ones as f64 / self.per_basis as f64 - 1.0
    }

    /// Empirical sine estimate `2 n_y1 / N - 1`.
    pub fn y_signal(&self) -> f64 {
        2.0 * self.y_ones as f64 / self.per_basis as f64 - 1.0
    }
}

/// Exact binomial draw. Small `n` uses a Bernoulli loop, larger `n` the
/// `rand_distr` sampler.
pub fn sample_binomial(n: u64, p: f64, rng: &mut RandomStream) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if n <= BERNOULLI_LOOP_MAX {
        (0..n).filter(|_| rng.random::<f64>() < p).count() as u64
    } else {
        Binomial::new(n, p)
            .expect("p checked to lie in (0, 1)")
            .sample(rng)
    }
}

/// Simulates `per_basis` x-measurements then `per_basis` y-measurements at
/// stage `stage`.
pub fn sample_stage(
    theta: Angle,
    stage: u32,
    per_basis: u64,
    noise: NoiseModel,
    rng: &mut RandomStream,
) -> Result<StageCounts> {
    let uses = uses_at_stage(stage)?;
    if per_basis == 0 {
        return Err(Error::EmptyStage);
    }
    let x_ones = sample_binomial(per_basis, prob_x(theta, uses, noise), rng);
    let y_ones = sample_binomial(per_basis, prob_y(theta, uses, noise), rng);
    Ok(StageCounts {
        stage,
        uses,
        per_basis,
        x_ones,
        y_ones,
    })
}
