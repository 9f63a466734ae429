//! Pairwise co-dependence between time series, split into linear and nonlinear parts.
//!
//! The crate covers the whole numerical path:
//!
//! * [`timeseries`]: validated series, log returns and overlapping rolling windows
//! * [`synthetic`]: the coupled logistic difference system used as a ground-truth pair
//! * [`measures`]: Pearson correlation, normalized transfer entropy, convergent cross
//!   mapping and the embedding-parameter heuristics they depend on
//! * [`surrogates`]: Fourier-transform surrogates with shared phase rotations
//! * [`decomposition`]: nested measures over rolling measure vectors
//! * [`finance`]: a co-dependence driven pair-trading backtest and long-only
//!   Markowitz portfolios with a causality-substituted co-dependence matrix
//!
//! Nothing here touches the filesystem. The crate is `no_std` and only needs `alloc`;
//! CSV handling and the command line live in the companion `nlcausal-cli` crate.
#![no_std]
#![warn(missing_debug_implementations)]
// `!(a > b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decomposition;
mod error;
pub mod fft;
pub mod finance;
mod math;
pub mod measure;
pub mod measures;
pub mod stats;
pub mod surrogates;
pub mod synthetic;
pub mod timeseries;

pub use error::{Error, Result};
pub use measure::{BivariateMeasure, CodependenceKind, MeasureSettings};
pub use timeseries::{MeasureSeries, RollingConfig, TimeSeries};
