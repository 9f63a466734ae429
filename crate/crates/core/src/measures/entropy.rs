use alloc::vec::Vec;

use crate::math::ln;
use crate::{Error, Result};

/// How the value range of each dimension is split into bins.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RangePolicy {
    /// Equal-width bins between the minimum and maximum of the data at hand.
    #[default]
    PerWindow,
    /// Equal-width bins over fixed bounds; values outside land in the edge bins.
    Fixed { min: f64, max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramConfig {
    pub bins_per_dim: usize,
    pub range: RangePolicy,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        Self { bins_per_dim: 8, range: RangePolicy::PerWindow }
    }
}

impl HistogramConfig {
    pub fn new(bins_per_dim: usize) -> Result<Self> {
        let cfg = Self { bins_per_dim, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bins_per_dim < 2 {
            return Err(Error::InvalidConfig("at least two bins per dimension are required"));
        }
        if let RangePolicy::Fixed { min, max } = self.range {
            if !(min < max) {
                return Err(Error::InvalidConfig("fixed histogram range must satisfy min < max"));
            }
        }
        Ok(())
    }
}

/// Bin index of every sample of one dimension.
pub fn bin_indices(x: &[f64], cfg: &HistogramConfig) -> Vec<u32> {
    let bins = cfg.bins_per_dim;
    let (lo, hi) = match cfg.range {
        RangePolicy::PerWindow => {
            x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
        }
        RangePolicy::Fixed { min, max } => (min, max),
    };
    let width = (hi - lo) / bins as f64;
    x.iter()
        .map(|&v| {
            if !(width > 0.0) {
                return 0;
            }
            let raw = (v - lo) / width;
            if raw <= 0.0 {
                0
            } else {
                (raw as usize).min(bins - 1) as u32
            }
        })
        .collect()
}

/// Plug-in entropy (nats) of the joint histogram of already binned columns.
pub(crate) fn joint_entropy(columns: &[&[u32]], bins: usize) -> f64 {
    let n = columns.first().map_or(0, |c| c.len());
    if n == 0 {
        return 0.0;
    }
    let mut cells: Vec<u64> =
        (0..n).map(|t| columns.iter().fold(0u64, |acc, col| acc * bins as u64 + u64::from(col[t]))).collect();
    cells.sort_unstable();
    let total = n as f64;
    let mut h = 0.0;
    let mut run = 1usize;
    for i in 1..=cells.len() {
        if i < cells.len() && cells[i] == cells[i - 1] {
            run += 1;
        } else {
            let p = run as f64 / total;
            h -= p * ln(p);
            run = 1;
        }
    }
    // a single occupied cell gives -1 * ln(1) = -0.0
    h.max(0.0)
}

/// Entropy (nats) of `d`-dimensional samples given as `d` equally long columns.
///
/// Each column is binned on its own; empty cells contribute nothing.
pub fn entropy(columns: &[&[f64]], cfg: &HistogramConfig) -> Result<f64> {
    cfg.validate()?;
    let Some(first) = columns.first() else {
        return Err(Error::InvalidConfig("at least one dimension is required"));
    };
    if first.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    if let Some(bad) = columns.iter().find(|c| c.len() != first.len()) {
        return Err(Error::LengthMismatch { left: first.len(), right: bad.len() });
    }
    let binned: Vec<Vec<u32>> = columns.iter().map(|c| bin_indices(c, cfg)).collect();
    let refs: Vec<&[u32]> = binned.iter().map(Vec::as_slice).collect();
    Ok(joint_entropy(&refs, cfg.bins_per_dim))
}
