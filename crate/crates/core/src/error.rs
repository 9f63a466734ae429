use alloc::boxed::Box;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("series is too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("non-positive price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },
    #[error("window length {window_len} exceeds series length {len}")]
    WindowTooLarge { window_len: usize, len: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("state left [-10, 10] at step {step}")]
    Diverged { step: usize },
    #[error("series has zero variance")]
    ConstantSeries,
    #[error("transfer entropy denominator is zero")]
    DegenerateDenominator,
    #[error("series of length {len} is too short for embedding (kappa={kappa}, tau={tau})")]
    TooShortForEmbedding { len: usize, kappa: usize, tau: usize },
    #[error("cross-map predictions are constant")]
    DegeneratePrediction,
    #[error("value {0} outside the admissible range")]
    OutOfRange(f64),
    #[error("measure series are not aligned on the same windows")]
    MisalignedWindows,
    #[error("historical co-dependence values are constant")]
    ConstantHistory,
    #[error("portfolio variance is negative ({0})")]
    NegativeVariance(f64),
    #[error("target return {target} outside attainable range [{min}, {max}]")]
    InfeasibleTarget { target: f64, min: f64, max: f64 },
    #[error("no asset has a mean return above the risk-free rate")]
    NoExcessReturn,
    #[error("window {window}: {source}")]
    InWindow { window: usize, source: Box<Error> },
    #[error("surrogate realization {realization}: {source}")]
    InRealization { realization: usize, source: Box<Error> },
    #[error("rebalance at sample {index}: {source}")]
    AtRebalance { index: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn in_window(self, window: usize) -> Self {
        Error::InWindow { window, source: Box::new(self) }
    }

    pub(crate) fn in_realization(self, realization: usize) -> Self {
        Error::InRealization { realization, source: Box::new(self) }
    }

    pub(crate) fn at_rebalance(self, index: usize) -> Self {
        Error::AtRebalance { index, source: Box::new(self) }
    }

    /// The innermost error, with window/realization annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InWindow { source, .. }
            | Error::InRealization { source, .. }
            | Error::AtRebalance { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
