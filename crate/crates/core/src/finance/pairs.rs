//! Co-dependence driven pair trading.
//!
//! The co-dependence of the two return series is measured on short windows ending every
//! `stride` samples. At each window end the latest value is scored against the values of
//! the preceding `floor((hist_window - short_window) / stride)` windows, which together
//! span `hist_window` samples. A score above `+z_threshold` goes short A / long B, below
//! `-z_threshold` long A / short B, and `|z| < exit_threshold` closes the position.
//!
//! A position decided at the end of return sample `t` earns from sample `t + 1` on:
//! `step_return[s] = position[s] * (r_a[s] - r_b[s])` on log returns, and the cumulative
//! return is their running sum.

use alloc::vec;
use alloc::vec::Vec;

use crate::measure::{BivariateMeasure, CodependenceKind, MeasureSettings};
use crate::stats::{mean, sample_std};
use crate::timeseries::{log_returns, rolling_apply, MeasureSeries, RollingConfig};
use crate::{Error, Result};

/// `(current - mean(hist)) / sd(hist)` with the sample standard deviation.
pub fn zscore(current: f64, hist_values: &[f64]) -> Result<f64> {
    if hist_values.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: hist_values.len() });
    }
    if hist_values.iter().all(|&v| v == hist_values[0]) {
        return Err(Error::ConstantHistory);
    }
    let sd = sample_std(hist_values);
    if !(sd > 0.0) {
        return Err(Error::ConstantHistory);
    }
    Ok((current - mean(hist_values)) / sd)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Position {
    /// Long A, short B.
    LongAShortB,
    #[default]
    Flat,
    /// Short A, long B.
    ShortALongB,
}

impl Position {
    pub fn sign(self) -> f64 {
        match self {
            Position::LongAShortB => 1.0,
            Position::Flat => 0.0,
            Position::ShortALongB => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        self.sign() as i8
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTradingConfig {
    pub hist_window: usize,
    pub short_window: usize,
    pub z_threshold: f64,
    pub exit_threshold: f64,
    pub codependence: CodependenceKind,
    pub settings: MeasureSettings,
}

impl Default for PairTradingConfig {
    fn default() -> Self {
        Self {
            hist_window: 1000,
            short_window: 250,
            z_threshold: 1.5,
            exit_threshold: 0.5,
            codependence: CodependenceKind::Correlation,
            settings: MeasureSettings::default(),
        }
    }
}

impl PairTradingConfig {
    /// Number of past co-dependence values forming the history at `stride`.
    pub fn history_count(&self, stride: usize) -> Result<usize> {
        if self.short_window == 0 || self.short_window >= self.hist_window {
            return Err(Error::InvalidConfig("short_window must be positive and below hist_window"));
        }
        if !(self.z_threshold > 0.0) || !(self.exit_threshold >= 0.0) || self.exit_threshold > self.z_threshold {
            return Err(Error::InvalidConfig("need 0 <= exit_threshold <= z_threshold and z_threshold > 0"));
        }
        if stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1"));
        }
        let m = (self.hist_window - self.short_window) / stride;
        if m < 2 {
            return Err(Error::InvalidConfig("history spans fewer than two co-dependence values"));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairBacktest {
    /// Co-dependence on each short window.
    pub codependence: MeasureSeries,
    /// Return-sample index of every scored decision, with its z-score (0 for a flat history).
    pub decisions: Vec<(usize, f64)>,
    /// Position held over each return sample.
    pub positions: Vec<Position>,
    pub step_returns: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl PairBacktest {
    pub fn total_return(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Runs the strategy on return series with an already computed co-dependence series.
pub fn backtest_with_codependence(
    returns_a: &[f64],
    returns_b: &[f64],
    codependence: MeasureSeries,
    cfg: &PairTradingConfig,
    stride: usize,
) -> Result<PairBacktest> {
    if returns_a.len() != returns_b.len() {
        return Err(Error::LengthMismatch { left: returns_a.len(), right: returns_b.len() });
    }
    let m = cfg.history_count(stride)?;
    let n = returns_a.len();
    if codependence.window_ends().last().is_some_and(|&e| e >= n) {
        return Err(Error::MisalignedWindows);
    }
    let values = codependence.values();
    let ends = codependence.window_ends();
    let mut positions = vec![Position::Flat; n];
    let mut decisions = Vec::new();
    let mut state = Position::Flat;
    for k in m..values.len() {
        let z = match zscore(values[k], &values[k - m..k]) {
            Ok(z) => z,
            Err(Error::ConstantHistory) => 0.0,
            Err(e) => return Err(e.in_window(k)),
        };
        if z > cfg.z_threshold {
            state = Position::ShortALongB;
        } else if z < -cfg.z_threshold {
            state = Position::LongAShortB;
        } else if z.abs() < cfg.exit_threshold {
            state = Position::Flat;
        }
        let t = ends[k];
        decisions.push((t, z));
        let until = ends.get(k + 1).map_or(n, |&e| e + 1);
        for p in &mut positions[t + 1..until.min(n)] {
            *p = state;
        }
    }
    let step_returns: Vec<f64> = (0..n).map(|s| positions[s].sign() * (returns_a[s] - returns_b[s])).collect();
    let mut acc = 0.0;
    let cumulative = step_returns
        .iter()
        .map(|r| {
            acc += r;
            acc
        })
        .collect();
    Ok(PairBacktest { codependence, decisions, positions, step_returns, cumulative })
}

/// Full backtest on two price series: log returns, rolling co-dependence, positions.
pub fn pair_trading_backtest(
    prices_a: &[f64],
    prices_b: &[f64],
    cfg: &PairTradingConfig,
    stride: usize,
) -> Result<PairBacktest> {
    if prices_a.len() != prices_b.len() {
        return Err(Error::LengthMismatch { left: prices_a.len(), right: prices_b.len() });
    }
    cfg.history_count(stride)?;
    let ra = log_returns(prices_a)?;
    let rb = log_returns(prices_b)?;
    let rolling = RollingConfig::new(cfg.short_window, stride)?;
    let measure = cfg.codependence.measure(&cfg.settings);
    let codep = rolling_apply(&ra, &rb, &rolling, &measure as &dyn BivariateMeasure)?;
    backtest_with_codependence(&ra, &rb, codep, cfg, stride)
}
