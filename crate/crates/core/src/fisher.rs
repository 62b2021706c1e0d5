//! Closed-form Fisher information of the x/y measurements and the SLD
//! quantum information of the depolarized channel after `m` uses.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::circle::{reduce, Angle};
use crate::error::{Error, Result};

/// Points in the uniform θ grid used for averaging.
pub const THETA_GRID: usize = 1024;

fn noiseless_peak(m: u64) -> f64 {
    4.0 * PI * PI * (m as f64).powi(2)
}

/// `(1 - r)^{2m}`.
fn contraction_sq(m: u64, r: f64) -> f64 {
    if r == 0.0 {
        1.0
    } else {
        (1.0 - r).powf(2.0 * m as f64)
    }
}

fn trig(theta: Angle, m: u64) -> (f64, f64) {
    (TAU * reduce(m as f64 * theta.value())).sin_cos()
}

/// Fisher information of the x-basis measurement after `m` uses.
///
/// At `r = 0` this is `4π²m²` everywhere, including the points where the
/// printed formula reads 0/0.
pub fn fisher_x(theta: Angle, m: u64, r: f64) -> f64 {
    if r == 0.0 {
        return noiseless_peak(m);
    }
    let (s, c) = trig(theta, m);
    let v = contraction_sq(m, r);
    noiseless_peak(m) * v * s * s / (1.0 - v * c * c)
}

/// Fisher information of the y-basis measurement after `m` uses.
pub fn fisher_y(theta: Angle, m: u64, r: f64) -> f64 {
    if r == 0.0 {
        return noiseless_peak(m);
    }
    let (s, c) = trig(theta, m);
    let v = contraction_sq(m, r);
    noiseless_peak(m) * v * c * c / (1.0 - v * s * s)
}

/// SLD quantum information `4π²m²(1 - r)^{2m}`; independent of θ.
pub fn sld_info(m: u64, r: f64) -> f64 {
    noiseless_peak(m) * contraction_sq(m, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoPoint {
    pub uses: u64,
    pub theta: Angle,
    pub noise: f64,
    pub fisher_x: f64,
    pub fisher_y: f64,
    pub sld: f64,
    pub sld_per_use: f64,
}

impl InfoPoint {
    pub fn at(theta: Angle, uses: u64, noise: f64) -> Self {
        let sld = sld_info(uses, noise);
        InfoPoint {
            uses,
            theta,
            noise,
            fisher_x: fisher_x(theta, uses, noise),
            fisher_y: fisher_y(theta, uses, noise),
            sld,
            sld_per_use: sld / uses as f64,
        }
    }
}

/// Where the per-use information `H(m)/m` peaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalUses {
    /// `-1 / (2 ln(1 - r))`.
    pub exact: f64,
    /// Small-noise approximation `1 / (2r)`.
    pub small_noise: f64,
    /// Stages worth running, `-log₂ r`.
    pub stages: f64,
}

pub fn optimal_uses(r: f64) -> Result<OptimalUses> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::NoFiniteOptimum(r));
    }
    Ok(OptimalUses {
        exact: -1.0 / (2.0 * (-r).ln_1p()),
        small_noise: 1.0 / (2.0 * r),
        stages: -r.log2(),
    })
}

/// One stage of the per-use information curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub stage: u32,
    pub uses: u64,
    pub sld_per_use: f64,
    /// θ-averaged `F_x / m`.
    pub fisher_x_per_use: f64,
    /// θ-averaged `F_y / m`.
    pub fisher_y_per_use: f64,
}

/// Per-use information at stages `1..=k_max` with `m = 2^{k-1}`.
pub fn info_curve(r: f64, k_max: u32) -> Result<Vec<CurvePoint>> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidNoise(r));
    }
    if !(1..=63).contains(&k_max) {
        return Err(Error::InvalidStage(k_max));
    }
    Ok((1..=k_max)
        .map(|stage| {
            let uses = 1u64 << (stage - 1);
            let (mut fx, mut fy) = (0.0, 0.0);
            for i in 0..THETA_GRID {
                let theta = Angle::new(i as f64 / THETA_GRID as f64);
                fx += fisher_x(theta, uses, r);
                fy += fisher_y(theta, uses, r);
            }
            let per_use = |total: f64| total / THETA_GRID as f64 / uses as f64;
            CurvePoint {
                stage,
                uses,
                sld_per_use: sld_info(uses, r) / uses as f64,
                fisher_x_per_use: per_use(fx),
                fisher_y_per_use: per_use(fy),
            }
        })
        .collect())
}
