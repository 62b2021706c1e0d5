use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arc width must lie in (0, 1], got {0}")]
    InvalidArcWidth(f64),

    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("cannot double an arc of width {0}: result would exceed the full circle")]
    DoublingOverflow(f64),

    #[error("refinement arcs must have width at most 1/3, got {0}")]
    RefineWidthTooLarge(f64),

    #[error("stage arc width {got} does not match refinement width {expected}")]
    WidthMismatch { expected: f64, got: f64 },

    #[error("depolarizing rate must lie in [0, 1), got {0}")]
    InvalidNoise(f64),

    #[error("stage index must be in 1..=64, got {0}")]
    InvalidStage(u32),

    #[error("measurement count per basis must be at least 1")]
    EmptyStage,

    #[error("outcome count {ones} exceeds {per_basis} measurements")]
    InvalidCounts { ones: u64, per_basis: u64 },

    #[error("alpha must lie in [0, 1/sqrt(2)], got {0}")]
    AlphaOutOfDomain(f64),

    #[error("sample budget needs stages >= 1 and epsilon in (0, 1), got stages={stages}, epsilon={epsilon}")]
    InvalidBudget { stages: u32, epsilon: f64 },

    #[error("the per-use optimum only exists for noise r in (0, 1), got {0}")]
    NoFiniteOptimum(f64),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
