//! Delay embedding and the heuristics for choosing its parameters.

use alloc::vec::Vec;

use super::entropy::{bin_indices, joint_entropy, HistogramConfig};
use crate::math::sqrt;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    /// Embedding dimension.
    pub kappa: usize,
    /// Delay in samples.
    pub tau: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self { kappa: 2, tau: 1 }
    }
}

impl EmbeddingConfig {
    pub fn new(kappa: usize, tau: usize) -> Result<Self> {
        if kappa == 0 || tau == 0 {
            return Err(Error::InvalidConfig("kappa and tau must be positive"));
        }
        Ok(Self { kappa, tau })
    }

    /// Number of delay vectors a series of length `len` yields.
    pub fn point_count(&self, len: usize) -> usize {
        len.saturating_sub((self.kappa - 1) * self.tau)
    }
}

/// Delay vectors `(x[j], x[j - tau], ..., x[j - (kappa - 1) tau])`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowManifold {
    dim: usize,
    coords: Vec<f64>,
    time_index: Vec<usize>,
}

impl ShadowManifold {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.time_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_index.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Source-sample index of each point (the index of its first coordinate).
    pub fn time_index(&self) -> &[usize] {
        &self.time_index
    }

    pub(crate) fn sq_distance(&self, i: usize, j: usize) -> f64 {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

pub fn embed(x: &[f64], cfg: &EmbeddingConfig) -> Result<ShadowManifold> {
    if cfg.kappa == 0 || cfg.tau == 0 {
        return Err(Error::InvalidConfig("kappa and tau must be positive"));
    }
    let count = cfg.point_count(x.len());
    let span = (cfg.kappa - 1) * cfg.tau;
    if x.len() <= span {
        return Err(Error::TooShortForEmbedding { len: x.len(), kappa: cfg.kappa, tau: cfg.tau });
    }
    let mut coords = Vec::with_capacity(count * cfg.kappa);
    let mut time_index = Vec::with_capacity(count);
    for j in span..x.len() {
        time_index.push(j);
        for lag in 0..cfg.kappa {
            coords.push(x[j - lag * cfg.tau]);
        }
    }
    Ok(ShadowManifold { dim: cfg.kappa, coords, time_index })
}

/// Histogram mutual information between `x[t]` and `x[t - lag]`.
pub fn mutual_information(x: &[f64], lag: usize, cfg: &HistogramConfig) -> Result<f64> {
    cfg.validate()?;
    if lag >= x.len() {
        return Err(Error::TooShort { needed: lag + 1, got: x.len() });
    }
    let binned = bin_indices(x, cfg);
    Ok(mi_of_binned(&binned, lag, cfg.bins_per_dim))
}

fn mi_of_binned(binned: &[u32], lag: usize, bins: usize) -> f64 {
    let now = &binned[lag..];
    let past = &binned[..binned.len() - lag];
    let mi = joint_entropy(&[now], bins) + joint_entropy(&[past], bins) - joint_entropy(&[now, past], bins);
    mi.max(0.0)
}

/// Mutual information at lags `0..=max_lag`.
pub fn mutual_information_curve(x: &[f64], max_lag: usize, cfg: &HistogramConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if max_lag >= x.len() {
        return Err(Error::TooShort { needed: max_lag + 1, got: x.len() });
    }
    let binned = bin_indices(x, cfg);
    Ok((0..=max_lag).map(|lag| mi_of_binned(&binned, lag, cfg.bins_per_dim)).collect())
}

/// Smallest index `l >= 1` with `curve[l - 1] > curve[l] < curve[l + 1]`.
pub fn first_local_minimum(curve: &[f64]) -> Option<usize> {
    (1..curve.len().saturating_sub(1)).find(|&l| curve[l - 1] > curve[l] && curve[l] < curve[l + 1])
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauSelection {
    pub tau: usize,
    /// Set when no local minimum was found and `tau` fell back to 1.
    pub fallback: bool,
    /// Mutual information at lags `0..=max_lag`; lag 0 is the entropy of the series.
    pub curve: Vec<f64>,
}

/// Delay at the first local minimum of the mutual-information curve.
pub fn select_tau(x: &[f64], max_lag: usize, cfg: &HistogramConfig) -> Result<TauSelection> {
    if max_lag < 2 {
        return Err(Error::InvalidConfig("max_lag must be at least 2"));
    }
    let curve = mutual_information_curve(x, max_lag, cfg)?;
    Ok(match first_local_minimum(&curve) {
        Some(tau) => TauSelection { tau, fallback: false, curve },
        None => TauSelection { tau: 1, fallback: true, curve },
    })
}

/// Fraction of false nearest neighbours when going from dimension `dim` to `dim + 1`.
///
/// Uses forward delay vectors `(x[i], x[i + tau], ..., x[i + (dim - 1) tau])`
/// extended by `x[i + dim * tau]`. A neighbour is false when that extra coordinate
/// separates the pair by more than `tolerance` times their distance in `dim`
/// dimensions. Points whose nearest neighbour coincides with them are skipped.
pub fn false_neighbor_fraction(x: &[f64], tau: usize, dim: usize, tolerance: f64) -> Result<f64> {
    if dim == 0 || tau == 0 {
        return Err(Error::InvalidConfig("dimension and delay must be positive"));
    }
    let span = dim * tau;
    if x.len() < span + 3 {
        return Err(Error::TooShortForEmbedding { len: x.len(), kappa: dim + 1, tau });
    }
    let count = x.len() - span;
    let coord = |i: usize, l: usize| x[i + l * tau];
    let mut considered = 0usize;
    let mut false_count = 0usize;
    for i in 0..count {
        let mut best = f64::INFINITY;
        let mut best_j = i;
        for j in 0..count {
            if j == i {
                continue;
            }
            let mut d = 0.0;
            for l in 0..dim {
                let diff = coord(i, l) - coord(j, l);
                d += diff * diff;
                if d >= best {
                    break;
                }
            }
            if d < best {
                best = d;
                best_j = j;
            }
        }
        if !(best > 0.0) {
            continue;
        }
        considered += 1;
        let extra = (coord(i, dim) - coord(best_j, dim)).abs();
        if extra / sqrt(best) > tolerance {
            false_count += 1;
        }
    }
    if considered == 0 {
        return Ok(0.0);
    }
    Ok(false_count as f64 / considered as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaSelection {
    pub kappa: usize,
    /// Set when the false-neighbour fraction never fell below 1% and `kappa` was capped.
    pub capped: bool,
    /// False-neighbour fraction for dimensions `1..=kappa` as evaluated.
    pub fractions: Vec<f64>,
}

pub const FNN_ACCEPT_FRACTION: f64 = 0.01;

/// Smallest dimension whose false-nearest-neighbour fraction is below 1%.
pub fn select_kappa(x: &[f64], tau: usize, max_dim: usize, fnn_tolerance: f64) -> Result<KappaSelection> {
    if max_dim < 2 {
        return Err(Error::InvalidConfig("max_dim must be at least 2"));
    }
    let mut fractions = Vec::new();
    for dim in 1..=max_dim {
        let f = false_neighbor_fraction(x, tau, dim, fnn_tolerance)?;
        fractions.push(f);
        if f < FNN_ACCEPT_FRACTION {
            return Ok(KappaSelection { kappa: dim, capped: false, fractions });
        }
    }
    Ok(KappaSelection { kappa: max_dim, capped: true, fractions })
}
