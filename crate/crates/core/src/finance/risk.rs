use alloc::vec::Vec;

use crate::stats::{mean, sample_std};
use crate::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.01;

/// Historical value at risk: the lower `alpha` quantile of `returns`, as a positive loss.
///
/// The quantile interpolates linearly between order statistics at position `h = n alpha`
/// (1-based); positions below the first order statistic are clamped to it, so a tail
/// thinner than one sample returns the worst observation exactly.
pub fn historical_var(returns: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig("alpha must lie in (0, 1)"));
    }
    if returns.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    if let Some(index) = returns.iter().position(|r| !r.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut sorted: Vec<f64> = returns.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = sorted.len() as f64 * alpha;
    let lower = h as usize;
    let q = if lower < 1 {
        sorted[0]
    } else if lower >= sorted.len() {
        sorted[sorted.len() - 1]
    } else {
        let frac = h - lower as f64;
        sorted[lower - 1] + frac * (sorted[lower] - sorted[lower - 1])
    };
    Ok(0.0 - q)
}

/// True when the sample is too short for the tail to hold a single observation.
pub fn var_sample_is_short(len: usize, alpha: f64) -> bool {
    (len as f64) * alpha < 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub var_alpha: f64,
    pub alpha: f64,
    pub stdev: f64,
    /// Per-period `(mean - risk_free) / stdev`; zero for a riskless path.
    pub sharpe: f64,
    pub final_value: f64,
}

impl RiskReport {
    /// Summarizes a value path through its simple per-period returns.
    pub fn from_values(values: &[f64], alpha: f64, risk_free: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort { needed: 2, got: values.len() });
        }
        let returns: Vec<f64> = values.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
        let stdev = if returns.len() > 1 { sample_std(&returns) } else { 0.0 };
        let sharpe = if stdev > 0.0 { (mean(&returns) - risk_free) / stdev } else { 0.0 };
        Ok(Self {
            var_alpha: historical_var(&returns, alpha)?,
            alpha,
            stdev,
            sharpe,
            final_value: values[values.len() - 1],
        })
    }
}
