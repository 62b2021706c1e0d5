//! Iterative phase estimation with circular confidence arcs.
//!
//! The estimator runs `l` stages; stage `k` applies the unknown phase
//! rotation `2^{k-1}` times, measures `N` times in each of the x and y
//! bases, and turns the tallies into a width-1/3 arc for
//! `(2^{k-1} θ) mod 1`. Folding the stage arcs together yields an arc for θ
//! of width `(1/3) / 2^{l-1}`.
//!
//! - [`circle`]: modular angle and arc arithmetic.
//! - [`refine`]: folding stage arcs into the final arc.
//! - [`measure`]: outcome probabilities under depolarizing noise and
//!   binomial sampling.
//! - [`estimate`]: stage arcs from tallies and Hoeffding sample sizes.
//! - [`fisher`]: classical and SLD information, optimal stopping.
//! - [`harness`]: Monte Carlo coverage tables and scaling studies.

pub mod circle;
pub mod error;
pub mod estimate;
pub mod fisher;
pub mod harness;
pub mod measure;
pub mod refine;
pub mod stream;

pub use circle::{circ_dist, Angle, Arc};
pub use error::{Error, Result};
pub use measure::NoiseModel;
pub use stream::RandomStream;
