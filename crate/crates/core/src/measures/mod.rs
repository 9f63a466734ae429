//! Co-dependence measures and the embedding heuristics that feed cross mapping.

mod ccm;
mod embedding;
mod entropy;
mod transfer_entropy;

pub use ccm::{
    ccm, ccm_detailed, cross_map_skill, library_order, skill_curve, CcmConfig, CcmParams, CcmResult, ConvergenceLayout,
    LibrarySampling,
};
pub use embedding::{
    embed, false_neighbor_fraction, first_local_minimum, mutual_information, mutual_information_curve, select_kappa,
    select_tau, EmbeddingConfig, KappaSelection, ShadowManifold, TauSelection,
};
pub use entropy::{bin_indices, entropy, HistogramConfig, RangePolicy};
pub use transfer_entropy::{te_out_of_unit_count, transfer_entropy};

use crate::math::sqrt;
use crate::{Error, Result};

/// Pearson correlation of two equally long, non-constant series.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    crate::stats::pearson(x, y)
}

/// Correlation distance `sqrt(2 (1 - rho))`, mapping `[-1, 1]` onto `[0, 2]`.
pub fn correlation_distance(rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::OutOfRange(rho));
    }
    Ok(sqrt(2.0 * (1.0 - rho)))
}
