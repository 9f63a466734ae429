//! Nested measures: how much of a rolling co-dependence series is linear, nonlinear,
//! or already explained by correlation.
//!
//! All quantities are squared Pearson correlations between two aligned
//! [`MeasureSeries`], so they are invariant under positive (indeed any non-degenerate)
//! affine transforms of either input.

use alloc::string::String;
use alloc::vec::Vec;

use crate::stats::pearson;
use crate::timeseries::{MeasureSeries, RollingConfig};
use crate::{Error, Result};

/// Pearson correlation between two measure series computed on the same windows.
pub fn nested_correlation(a: &MeasureSeries, b: &MeasureSeries) -> Result<f64> {
    if a.window_ends() != b.window_ends() {
        return Err(Error::MisalignedWindows);
    }
    pearson(a.values(), b.values())
}

fn r_squared(a: &MeasureSeries, b: &MeasureSeries) -> Result<f64> {
    let r = nested_correlation(a, b)?;
    Ok((r * r).min(1.0))
}

/// Share of the variability of `psi` explained by its surrogate counterpart.
pub fn linear_fraction(psi: &MeasureSeries, psi_surrogate: &MeasureSeries) -> Result<f64> {
    r_squared(psi, psi_surrogate)
}

/// `1 - linear_fraction`; the two always sum to exactly one.
pub fn nonlinear_fraction(psi: &MeasureSeries, psi_surrogate: &MeasureSeries) -> Result<f64> {
    linear_fraction(psi, psi_surrogate).map(|r2| 1.0 - r2)
}

/// Share of the causality series `psi` explained by the rolling correlation `rho`.
pub fn fallacy(psi: &MeasureSeries, rho: &MeasureSeries) -> Result<f64> {
    r_squared(psi, rho)
}

/// [`fallacy`] applied to the surrogate measure: how much linear causality correlation captures.
pub fn fallacy_linear(psi_surrogate: &MeasureSeries, rho: &MeasureSeries) -> Result<f64> {
    r_squared(psi_surrogate, rho)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub measure_name: String,
    /// Ordered pair; for directional measures the first element is the putative cause.
    pub pair: (String, String),
    pub linear_fraction: f64,
    pub nonlinear_fraction: f64,
    pub fallacy: f64,
    pub fallacy_linear: f64,
}

impl DecompositionReport {
    /// Builds a report from a measure, its surrogate version and the rolling correlation.
    pub fn compute(
        measure_name: impl Into<String>,
        pair: (String, String),
        psi: &MeasureSeries,
        psi_surrogate: &MeasureSeries,
        rho: &MeasureSeries,
    ) -> Result<Self> {
        let linear = linear_fraction(psi, psi_surrogate)?;
        Ok(Self {
            measure_name: measure_name.into(),
            pair,
            linear_fraction: linear,
            nonlinear_fraction: 1.0 - linear,
            fallacy: fallacy(psi, rho)?,
            fallacy_linear: fallacy_linear(psi_surrogate, rho)?,
        })
    }

    /// One report per second-level window over the measure series.
    ///
    /// Returns the index (into the measure series) of each window's last element with
    /// its report.
    pub fn rolling(
        measure_name: &str,
        pair: &(String, String),
        psi: &MeasureSeries,
        psi_surrogate: &MeasureSeries,
        rho: &MeasureSeries,
        cfg: &RollingConfig,
    ) -> Result<Vec<(usize, Self)>> {
        if psi.window_ends() != psi_surrogate.window_ends() || psi.window_ends() != rho.window_ends() {
            return Err(Error::MisalignedWindows);
        }
        let count = cfg.window_count(psi.len())?;
        (0..count)
            .map(|w| {
                let r = cfg.window_range(w);
                let last = psi.window_ends()[r.end - 1];
                Self::compute(
                    measure_name,
                    pair.clone(),
                    &psi.slice(r.clone()),
                    &psi_surrogate.slice(r.clone()),
                    &rho.slice(r),
                )
                .map(|rep| (last, rep))
                .map_err(|e| e.in_window(w))
            })
            .collect()
    }
}
