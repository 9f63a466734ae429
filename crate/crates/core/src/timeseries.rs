//! Series containers, log returns and overlapping rolling windows.
//!
//! Windows are numbered from 0 internally. Window `w` covers samples
//! `w * stride ..= w * stride + window_len - 1`, and a [`MeasureSeries`] records the
//! index of each window's last sample so results line up with the source data.

use alloc::string::String;
use alloc::vec::Vec;

use crate::math::ln;
use crate::measure::BivariateMeasure;
use crate::{Error, Result};

/// An ordered sequence of finite samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    label: Option<String>,
}

impl TimeSeries {
    /// Builds a series, rejecting NaN and infinite samples.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Log returns `log(p[t+1]) - log(p[t])`; the output is one sample shorter.
    pub fn log_returns(&self) -> Result<TimeSeries> {
        log_returns(&self.values).map(|values| TimeSeries { values, label: self.label.clone() })
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Log returns of a price slice.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>> {
    if prices.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: prices.len() });
    }
    for (index, &value) in prices.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositivePrice { index, value });
        }
    }
    Ok(prices.windows(2).map(|w| ln(w[1]) - ln(w[0])).collect())
}

/// Window length and stride, both in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RollingConfig {
    pub window_len: usize,
    pub stride: usize,
}

impl Default for RollingConfig {
    fn default() -> Self {
        Self { window_len: 1000, stride: 20 }
    }
}

impl RollingConfig {
    pub fn new(window_len: usize, stride: usize) -> Result<Self> {
        let cfg = Self { window_len, stride };
        if window_len == 0 {
            return Err(Error::InvalidConfig("window_len must be positive"));
        }
        if stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1"));
        }
        Ok(cfg)
    }

    /// `floor((len - window_len) / stride) + 1`, or an error when the window does not fit.
    pub fn window_count(&self, len: usize) -> Result<usize> {
        if self.window_len == 0 || self.stride == 0 {
            return Err(Error::InvalidConfig("window_len and stride must be positive"));
        }
        if self.window_len > len {
            return Err(Error::WindowTooLarge { window_len: self.window_len, len });
        }
        Ok((len - self.window_len) / self.stride + 1)
    }

    /// Half-open sample range of window `w`.
    pub fn window_range(&self, w: usize) -> core::ops::Range<usize> {
        let start = w * self.stride;
        start..start + self.window_len
    }
}

/// Borrowed views of every window of `series`.
pub fn rolling_windows<'a>(series: &'a [f64], cfg: &RollingConfig) -> Result<Vec<&'a [f64]>> {
    let count = cfg.window_count(series.len())?;
    Ok((0..count).map(|w| &series[cfg.window_range(w)]).collect())
}

/// A measure evaluated on each rolling window.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSeries {
    values: Vec<f64>,
    window_ends: Vec<usize>,
}

impl MeasureSeries {
    pub fn new(values: Vec<f64>, window_ends: Vec<usize>) -> Result<Self> {
        if values.len() != window_ends.len() {
            return Err(Error::LengthMismatch { left: values.len(), right: window_ends.len() });
        }
        if window_ends.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("window_ends must be strictly increasing"));
        }
        Ok(Self { values, window_ends })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn window_ends(&self) -> &[usize] {
        &self.window_ends
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sub-series of entries `range`, keeping the window alignment.
    pub fn slice(&self, range: core::ops::Range<usize>) -> MeasureSeries {
        MeasureSeries { values: self.values[range.clone()].to_vec(), window_ends: self.window_ends[range].to_vec() }
    }
}

/// Evaluates `measure` on every aligned window pair of `x` and `y`.
///
/// The window index is passed to [`BivariateMeasure::evaluate_at`] so that randomized
/// measures draw an independent, reproducible stream per window.
pub fn rolling_apply<M>(x: &[f64], y: &[f64], cfg: &RollingConfig, measure: &M) -> Result<MeasureSeries>
where
    M: BivariateMeasure + ?Sized,
{
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let count = cfg.window_count(x.len())?;
    let mut values = Vec::with_capacity(count);
    let mut window_ends = Vec::with_capacity(count);
    for w in 0..count {
        let range = cfg.window_range(w);
        let v = measure.evaluate_at(w as u64, &x[range.clone()], &y[range.clone()]).map_err(|e| e.in_window(w))?;
        values.push(v);
        window_ends.push(range.end - 1);
    }
    Ok(MeasureSeries { values, window_ends })
}
