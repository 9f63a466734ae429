//! Convergent cross mapping.
//!
//! `ccm(cause, effect)` embeds the *effect* series and cross-predicts the *cause* from
//! its delay vectors: when `cause` drives `effect`, the effect's attractor carries the
//! cause's signature and the prediction skill grows with the library size.
//!
//! Predictions use simplex weights over the `neighbor_count` nearest library points,
//! `w = exp(-d / d_min)`, normalized to one; the query point itself is never its own
//! neighbour and distance ties go to the lower time index. When the nearest neighbours
//! coincide with the query (`d_min = 0`), only those zero-distance neighbours get weight,
//! split equally.
//!
//! The skill vector `rho` over the library lengths is checked for convergence over
//! `windows` nested windows (see [`ConvergenceLayout`]): the standard deviation must
//! not increase from one window to the next and the last one must fall below
//! `convergence_threshold`. A converged run returns the mean of the
//! last `tail_count` skills; anything else returns exactly `0`.

use alloc::vec;
use alloc::vec::Vec;

use super::embedding::{embed, EmbeddingConfig, ShadowManifold};
use crate::math::{exp, pow, sqrt};
use crate::stats::{mean, pearson, variance};
use crate::{Error, Result};

/// How the skill vector is cut into windows for the convergence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvergenceLayout {
    /// Windows anchored at the largest library: `rho[..]`, `rho[n/w..]`, ...,
    /// `rho[(w-1)n/w..]`. Read from the last window backwards they expand in equal steps.
    #[default]
    Trailing,
    /// Prefixes growing by equal steps: `rho[..n/w]`, `rho[..2n/w]`, ..., `rho[..n]`.
    Leading,
    /// Disjoint blocks of (nearly) equal size, in library order.
    Blocks,
}

/// Which delay vectors make up a library of a given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LibrarySampling {
    /// The earliest points in time.
    Prefix,
    /// Points spread evenly over the series via a bit-reversed ordering; libraries
    /// of increasing length stay nested.
    #[default]
    Spread,
}

/// Cross-mapping settings that do not depend on the series length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcmParams {
    pub embedding: EmbeddingConfig,
    /// Number of geometrically spaced library lengths.
    pub library_count: usize,
    /// Smallest library length before the `5 * kappa * tau` floor is applied.
    pub min_library: usize,
    pub convergence_threshold: f64,
    pub tail_count: usize,
    /// Defaults to `kappa + 1` when unset.
    pub neighbor_count: Option<usize>,
    pub windows: usize,
    pub layout: ConvergenceLayout,
    pub sampling: LibrarySampling,
}

impl Default for CcmParams {
    fn default() -> Self {
        Self {
            embedding: EmbeddingConfig { kappa: 3, tau: 1 },
            library_count: 20,
            min_library: 50,
            convergence_threshold: 0.05,
            tail_count: 3,
            neighbor_count: None,
            windows: 8,
            layout: ConvergenceLayout::default(),
            sampling: LibrarySampling::default(),
        }
    }
}

impl CcmParams {
    /// Concrete configuration for a series of `series_len` samples.
    ///
    /// Library lengths run geometrically from `max(min_library, 5 kappa tau)` up to the
    /// number of delay vectors; duplicates after rounding are dropped.
    pub fn config_for(&self, series_len: usize) -> Result<CcmConfig> {
        let e = self.embedding;
        let points = e.point_count(series_len);
        let neighbor_count = self.neighbor_count.unwrap_or(e.kappa + 1);
        let floor = self.min_library.max(5 * e.kappa * e.tau).max(neighbor_count + 1);
        let lo = floor.min(points);
        if self.library_count < 2 || points < e.kappa + 2 || lo < neighbor_count + 1 {
            return Err(Error::TooShortForEmbedding { len: series_len, kappa: e.kappa, tau: e.tau });
        }
        let hi = points;
        let steps = self.library_count - 1;
        let ratio = pow(hi as f64 / lo as f64, 1.0 / steps as f64);
        let mut lengths: Vec<usize> = Vec::with_capacity(self.library_count);
        for i in 0..=steps {
            let l = if i == steps { hi } else { (lo as f64 * pow(ratio, i as f64) + 0.5) as usize };
            let l = l.clamp(lo, hi);
            if lengths.last().is_none_or(|&prev| l > prev) {
                lengths.push(l);
            }
        }
        let cfg = CcmConfig {
            embedding: e,
            library_lengths: lengths,
            convergence_threshold: self.convergence_threshold,
            tail_count: self.tail_count,
            neighbor_count,
            windows: self.windows,
            layout: self.layout,
            sampling: self.sampling,
        };
        cfg.validate(points)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcmConfig {
    pub embedding: EmbeddingConfig,
    pub library_lengths: Vec<usize>,
    pub convergence_threshold: f64,
    pub tail_count: usize,
    pub neighbor_count: usize,
    pub windows: usize,
    pub layout: ConvergenceLayout,
    pub sampling: LibrarySampling,
}

impl CcmConfig {
    /// Default configuration for a series of `series_len` samples.
    pub fn with_defaults(series_len: usize, embedding: EmbeddingConfig) -> Result<Self> {
        CcmParams { embedding, ..CcmParams::default() }.config_for(series_len)
    }

    pub fn validate(&self, point_count: usize) -> Result<()> {
        let l = &self.library_lengths;
        if l.is_empty() || l[0] == 0 || l.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("library lengths must be positive and strictly increasing"));
        }
        if *l.last().unwrap() > point_count {
            return Err(Error::InvalidConfig("library length exceeds the number of delay vectors"));
        }
        if self.neighbor_count == 0 || self.neighbor_count >= l[0] {
            return Err(Error::InvalidConfig("neighbor_count must be positive and below the smallest library"));
        }
        if self.tail_count == 0 || self.tail_count > l.len() {
            return Err(Error::InvalidConfig("tail_count must lie in 1..=library count"));
        }
        if self.windows == 0 || self.windows > l.len() {
            return Err(Error::InvalidConfig("convergence windows must lie in 1..=library count"));
        }
        if !(self.convergence_threshold > 0.0) {
            return Err(Error::InvalidConfig("convergence threshold must be positive"));
        }
        Ok(())
    }
}

/// Cross-map skill for each library length in `library_lengths`.
///
/// Every point of `source` is predicted; `target` is indexed by the source-sample
/// index of the points, so it must be the series aligned with the one embedded.
pub fn skill_curve(
    source: &ShadowManifold,
    target: &[f64],
    library_lengths: &[usize],
    neighbor_count: usize,
    sampling: LibrarySampling,
) -> Result<Vec<f64>> {
    let points = source.len();
    let Some(&max_lib) = library_lengths.last() else {
        return Ok(Vec::new());
    };
    if library_lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("library lengths must be strictly increasing"));
    }
    if max_lib > points {
        return Err(Error::InvalidConfig("library length exceeds the number of delay vectors"));
    }
    if neighbor_count == 0 || neighbor_count >= library_lengths[0] {
        return Err(Error::InvalidConfig("neighbor_count must be positive and below the library length"));
    }
    let times = source.time_index();
    if times.last().is_some_and(|&t| t >= target.len()) {
        return Err(Error::LengthMismatch { left: target.len(), right: times[points - 1] + 1 });
    }
    let actual: Vec<f64> = times.iter().map(|&t| target[t]).collect();

    let order = library_order(points, sampling);
    let mut predictions = vec![vec![0.0; points]; library_lengths.len()];
    // (squared distance, point index), kept sorted ascending
    let mut nearest: Vec<(f64, usize)> = Vec::with_capacity(neighbor_count + 1);
    for query in 0..points {
        nearest.clear();
        let mut scanned = 0;
        for (li, &lib) in library_lengths.iter().enumerate() {
            for &j in &order[scanned..lib] {
                if j == query {
                    continue;
                }
                let d = source.sq_distance(query, j);
                let before = |e: &(f64, usize)| e.0 < d || (e.0 == d && e.1 < j);
                if nearest.len() == neighbor_count && before(&nearest[neighbor_count - 1]) {
                    continue;
                }
                let pos = nearest.partition_point(before);
                nearest.insert(pos, (d, j));
                nearest.truncate(neighbor_count);
            }
            scanned = lib;
            predictions[li][query] = weighted_prediction(&nearest, times, target);
        }
    }

    predictions
        .iter()
        .map(|pred| {
            let (lo, hi) = pred.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
            if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(1.0) {
                return Err(Error::DegeneratePrediction);
            }
            pearson(pred, &actual)
        })
        .collect()
}

/// The order in which delay vectors enter the library; a library of length `L` is
/// the first `L` entries.
pub fn library_order(points: usize, sampling: LibrarySampling) -> Vec<usize> {
    match sampling {
        LibrarySampling::Prefix => (0..points).collect(),
        LibrarySampling::Spread => {
            let mut seen = vec![false; points];
            let mut order = Vec::with_capacity(points);
            let bits = usize::BITS - points.leading_zeros();
            // bit-reversed counter: every prefix is spread evenly over time
            for i in 0..(1usize << bits) {
                let r = i.reverse_bits() >> (usize::BITS - bits);
                let idx = ((r as u128 * points as u128) >> bits) as usize;
                if !seen[idx] {
                    seen[idx] = true;
                    order.push(idx);
                }
            }
            order.extend((0..points).filter(|&i| !seen[i]));
            order
        }
    }
}

fn weighted_prediction(nearest: &[(f64, usize)], times: &[usize], target: &[f64]) -> f64 {
    let d_min = sqrt(nearest[0].0);
    if d_min == 0.0 {
        let zeros: Vec<usize> = nearest.iter().take_while(|n| n.0 == 0.0).map(|n| n.1).collect();
        return zeros.iter().map(|&j| target[times[j]]).sum::<f64>() / zeros.len() as f64;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &(d2, j) in nearest {
        let w = exp(-sqrt(d2) / d_min);
        num += w * target[times[j]];
        den += w;
    }
    num / den
}

/// Skill of predicting `target` from `source` using the first `library_len` points.
pub fn cross_map_skill(
    source: &ShadowManifold,
    target: &[f64],
    library_len: usize,
    neighbor_count: usize,
) -> Result<f64> {
    skill_curve(source, target, &[library_len], neighbor_count, LibrarySampling::Prefix).map(|v| v[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcmResult {
    pub skills: Vec<f64>,
    pub window_stds: Vec<f64>,
    pub converged: bool,
    pub value: f64,
}

pub(crate) fn window_stds(skills: &[f64], windows: usize, layout: ConvergenceLayout) -> Vec<f64> {
    let n = skills.len();
    (0..windows)
        .map(|w| {
            let (start, end) = match layout {
                ConvergenceLayout::Trailing => (w * n / windows, n),
                ConvergenceLayout::Leading => (0, (w + 1) * n / windows),
                ConvergenceLayout::Blocks => (w * n / windows, (w + 1) * n / windows),
            };
            sqrt(variance(&skills[start..end]))
        })
        .collect()
}

/// Cross-mapping causality `cause -> effect` with the full convergence diagnostics.
pub fn ccm_detailed(cause: &[f64], effect: &[f64], cfg: &CcmConfig) -> Result<CcmResult> {
    if cause.len() != effect.len() {
        return Err(Error::LengthMismatch { left: cause.len(), right: effect.len() });
    }
    let manifold = embed(effect, &cfg.embedding)?;
    if manifold.len() < cfg.embedding.kappa + 2 {
        return Err(Error::TooShortForEmbedding {
            len: effect.len(),
            kappa: cfg.embedding.kappa,
            tau: cfg.embedding.tau,
        });
    }
    cfg.validate(manifold.len())?;
    let skills = skill_curve(&manifold, cause, &cfg.library_lengths, cfg.neighbor_count, cfg.sampling)?;
    let window_stds = window_stds(&skills, cfg.windows, cfg.layout);
    let decreasing = window_stds.windows(2).all(|w| w[1] <= w[0]);
    let converged = decreasing && window_stds.last().is_some_and(|&s| s < cfg.convergence_threshold);
    let value = if converged { mean(&skills[skills.len() - cfg.tail_count..]) } else { 0.0 };
    Ok(CcmResult { skills, window_stds, converged, value })
}

/// Cross-mapping causality `cause -> effect`: the converged skill, or exactly 0.
pub fn ccm(cause: &[f64], effect: &[f64], cfg: &CcmConfig) -> Result<f64> {
    ccm_detailed(cause, effect, cfg).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{simulate, CoupledDifferenceParams};
    use rand::{Rng, SeedableRng};

    fn logistic(n: usize, x0: f64) -> Vec<f64> {
        let mut v = x0;
        (0..n)
            .map(|_| {
                v = 3.8 * v * (1.0 - v);
                v
            })
            .collect()
    }

    fn brute_force_skill(source: &ShadowManifold, target: &[f64], lib: usize, k: usize) -> f64 {
        let times = source.time_index();
        let mut pred = Vec::new();
        let mut act = Vec::new();
        for q in 0..source.len() {
            let mut cand: Vec<(f64, usize)> =
                (0..lib).filter(|&j| j != q).map(|j| (sqrt(source.sq_distance(q, j)), j)).collect();
            cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            cand.truncate(k);
            let dmin = cand[0].0;
            let (mut num, mut den) = (0.0, 0.0);
            for &(d, j) in &cand {
                let w = if dmin == 0.0 {
                    if d == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (-d / dmin).exp()
                };
                num += w * target[times[j]];
                den += w;
            }
            pred.push(num / den);
            act.push(target[times[q]]);
        }
        pearson(&pred, &act).unwrap()
    }

    #[test]
    fn incremental_neighbours_match_brute_force() {
        let (x, y) = simulate(&CoupledDifferenceParams::default(), 400).unwrap();
        let m = embed(y.values(), &EmbeddingConfig::new(2, 1).unwrap()).unwrap();
        let libs = [20, 45, 100, 250, 399];
        let curve = skill_curve(&m, x.values(), &libs, 3, LibrarySampling::Prefix).unwrap();
        for (s, &lib) in curve.iter().zip(&libs) {
            let want = brute_force_skill(&m, x.values(), lib, 3);
            assert!((s - want).abs() < 1e-12, "lib {lib}: {s} vs {want}");
        }
    }

    #[test]
    fn self_cross_map_approaches_one() {
        let x = logistic(2000, 0.3);
        let m = embed(&x, &EmbeddingConfig::new(2, 1).unwrap()).unwrap();
        let small = cross_map_skill(&m, &x, 30, 3).unwrap();
        let full = cross_map_skill(&m, &x, m.len(), 3).unwrap();
        assert!(full > 0.95, "{full}");
        assert!(full >= small);
    }

    #[test]
    fn independent_noise_has_no_skill() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let a: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let m = embed(&a, &EmbeddingConfig::new(2, 1).unwrap()).unwrap();
        let s = cross_map_skill(&m, &b, m.len(), 3).unwrap();
        assert!(s.abs() < 0.1, "{s}");
    }

    #[test]
    fn coupled_skill_grows_with_library() {
        let (x, y) = simulate(&CoupledDifferenceParams::default(), 1200).unwrap();
        let m = embed(y.values(), &EmbeddingConfig::new(2, 1).unwrap()).unwrap();
        let s200 = cross_map_skill(&m, x.values(), 200, 3).unwrap();
        let s1000 = cross_map_skill(&m, x.values(), 1000, 3).unwrap();
        assert!(s1000 > s200, "{s200} vs {s1000}");
    }

    #[test]
    fn duplicate_points_split_weight() {
        let nearest = [(0.0, 0), (0.0, 1), (4.0, 2)];
        let times = [0, 1, 2];
        let target = [1.0, 3.0, 100.0];
        assert_eq!(weighted_prediction(&nearest, &times, &target), 2.0);
    }

    #[test]
    fn constant_predictions_are_degenerate() {
        let x: Vec<f64> = (0..60).map(|i| i as f64).collect();
        let m = embed(&x, &EmbeddingConfig::new(2, 1).unwrap()).unwrap();
        let flat = vec![5.0; 60];
        assert_eq!(cross_map_skill(&m, &flat, 30, 3), Err(Error::DegeneratePrediction));
    }

    #[test]
    fn self_ccm_converges() {
        let x = logistic(2000, 0.21);
        let cfg = CcmParams::default().config_for(x.len()).unwrap();
        let r = ccm_detailed(&x, &x, &cfg).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1.0).abs() < 0.05, "{}", r.value);
    }

    #[test]
    fn default_library_grid() {
        let cfg = CcmConfig::with_defaults(500, EmbeddingConfig::default()).unwrap();
        assert_eq!(cfg.library_lengths.len(), 20);
        assert_eq!(cfg.library_lengths[0], 50);
        assert_eq!(*cfg.library_lengths.last().unwrap(), 499);
        assert_eq!(cfg.neighbor_count, 3);
        let cfg = CcmParams::default().config_for(500).unwrap();
        assert_eq!(*cfg.library_lengths.last().unwrap(), 498);
        assert_eq!(cfg.neighbor_count, 4);
    }

    #[test]
    fn window_layouts() {
        let s = [0.0, 2.0, 1.0, 1.0];
        assert_eq!(window_stds(&s, 2, ConvergenceLayout::Blocks), vec![1.0, 0.0]);
        let e = window_stds(&s, 2, ConvergenceLayout::Leading);
        assert_eq!(e[0], 1.0);
        assert!((e[1] - 0.5f64.sqrt()).abs() < 1e-15);
        let t = window_stds(&s, 2, ConvergenceLayout::Trailing);
        assert!((t[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(t[1], 0.0);
    }
}
