use core::sync::atomic::{AtomicUsize, Ordering};

use super::entropy::{bin_indices, joint_entropy, HistogramConfig};
use crate::math::sqrt;
use crate::{Error, Result};

static OUT_OF_UNIT: AtomicUsize = AtomicUsize::new(0);

/// How many transfer-entropy evaluations in this process fell outside `[0, 1]`.
///
/// The normalization does not bound the estimate, and values are reported unclipped.
pub fn te_out_of_unit_count() -> usize {
    OUT_OF_UNIT.load(Ordering::Relaxed)
}

/// Normalized transfer entropy from `x` to `y` at lag 1.
///
/// ```text
///        H(Y+, Y) + H(Y, X) - H(Y+, Y, X) - H(Y)
/// TE = -------------------------------------------
///             sqrt(H(Y+, Y) * H(X+, X))
/// ```
///
/// with `Y+ = y[t+1]`, `Y = y[t]`, `X = x[t]` over `t = 0 .. len-2` and entropies from
/// equal-width histograms; each series is binned once over its full length.
pub fn transfer_entropy(x: &[f64], y: &[f64], cfg: &HistogramConfig) -> Result<f64> {
    cfg.validate()?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 3 {
        return Err(Error::TooShort { needed: 3, got: x.len() });
    }
    let bx = bin_indices(x, cfg);
    let by = bin_indices(y, cfg);
    let n = x.len() - 1;
    let (y_next, y_now, x_now, x_next): (&[u32], &[u32], &[u32], &[u32]) = (&by[1..], &by[..n], &bx[..n], &bx[1..]);
    let bins = cfg.bins_per_dim;

    let h_yy = joint_entropy(&[y_next, y_now], bins);
    let h_yx = joint_entropy(&[y_now, x_now], bins);
    let h_yyx = joint_entropy(&[y_next, y_now, x_now], bins);
    let h_y = joint_entropy(&[y_now], bins);
    let h_xx = joint_entropy(&[x_next, x_now], bins);

    let denominator = sqrt(h_yy * h_xx);
    if !(denominator > 0.0) {
        return Err(Error::DegenerateDenominator);
    }
    let te = (h_yy + h_yx - h_yyx - h_y) / denominator;
    if !(0.0..=1.0).contains(&te) {
        OUT_OF_UNIT.fetch_add(1, Ordering::Relaxed);
    }
    Ok(te)
}
