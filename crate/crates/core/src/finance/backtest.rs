//! Periodically rebalanced long-only portfolio.
//!
//! Rebalancing happens at the end of every rolling window over the log returns (window
//! `rolling.window_len`, every `rolling.stride` samples). Means, volatilities and the
//! co-dependence matrix come from that trailing window only; the new weights are bought
//! at the next price and then held without trading until the following rebalance.
//! When no asset beats the risk-free rate the max-Sharpe objective is undefined and that
//! rebalance uses the min-risk weights instead.
//!
//! Surrogate measures draw their phases from stream
//! `(rebalance * n + i) * n + j` for the ordered asset pair `(i, j)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::portfolio::{max_sharpe_weights, min_risk_weights, CoDependenceMatrix};
use super::risk::{RiskReport, DEFAULT_ALPHA};
use crate::measure::{BivariateMeasure, CodependenceKind, MeasureSettings};
use crate::stats::{mean, pearson, sample_std};
use crate::timeseries::{log_returns, RollingConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    MinRisk { target_return: Option<f64> },
    MaxSharpe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioConfig {
    pub objective: Objective,
    pub codependence: CodependenceKind,
    pub settings: MeasureSettings,
    /// Estimation window and rebalance stride.
    pub rolling: RollingConfig,
    pub alpha: f64,
    pub risk_free: f64,
}

impl Default for PortfolioConfig {
    fn default() -> Self {
        Self {
            objective: Objective::MinRisk { target_return: None },
            codependence: CodependenceKind::Correlation,
            settings: MeasureSettings::default(),
            rolling: RollingConfig::default(),
            alpha: DEFAULT_ALPHA,
            risk_free: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioBacktest {
    /// Price index at which each set of weights was bought.
    pub rebalance_indices: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    /// Price index of `values[0]`; equals the first rebalance index.
    pub value_start: usize,
    /// Portfolio value, starting at 1.
    pub values: Vec<f64>,
    pub risk: RiskReport,
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

/// Co-dependence of every ordered pair of return windows, plus the correlation signs.
pub fn estimate_codependence(
    labels: &[String],
    windows: &[&[f64]],
    kind: CodependenceKind,
    settings: &MeasureSettings,
    context: u64,
) -> Result<CoDependenceMatrix> {
    let n = windows.len();
    let measure = kind.measure(settings);
    let mut values = vec![0.0; n * n];
    let mut signs = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
        signs[i * n + i] = 1.0;
        for j in 0..n {
            if i == j || is_constant(windows[i]) || is_constant(windows[j]) {
                continue;
            }
            if j > i {
                let r = pearson(windows[i], windows[j])?;
                signs[i * n + j] = r;
                signs[j * n + i] = r;
            }
            if kind == CodependenceKind::Correlation {
                values[i * n + j] = pearson(windows[i], windows[j])?;
            } else if kind.is_directional() || j > i {
                let stream = (context * n as u64 + i as u64) * n as u64 + j as u64;
                values[i * n + j] = measure.evaluate_at(stream, windows[i], windows[j])?;
                if !kind.is_directional() {
                    values[j * n + i] = values[i * n + j];
                }
            }
        }
    }
    let sign_source = (kind != CodependenceKind::Correlation).then_some(signs);
    CoDependenceMatrix::new(labels.to_vec(), values, kind, sign_source)
}

/// Rebalancing backtest over aligned price series.
pub fn rebalance_backtest(labels: &[String], prices: &[&[f64]], cfg: &PortfolioConfig) -> Result<PortfolioBacktest> {
    let n = prices.len();
    if n == 0 {
        return Err(Error::InvalidConfig("no assets"));
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch { left: labels.len(), right: n });
    }
    let len = prices[0].len();
    if let Some(p) = prices.iter().find(|p| p.len() != len) {
        return Err(Error::LengthMismatch { left: p.len(), right: len });
    }
    let returns: Vec<Vec<f64>> = prices.iter().map(|p| log_returns(p)).collect::<Result<_>>()?;
    let count = cfg.rolling.window_count(len - 1)?;
    let mut rebalance_indices = Vec::with_capacity(count);
    let mut weights_history = Vec::with_capacity(count);
    for r in 0..count {
        let range = cfg.rolling.window_range(r);
        let buy_at = range.end;
        let w = if n == 1 {
            vec![1.0]
        } else {
            let windows: Vec<&[f64]> = returns.iter().map(|x| &x[range.clone()]).collect();
            estimate_weights(labels, &windows, cfg, r as u64).map_err(|e| e.at_rebalance(buy_at))?
        };
        rebalance_indices.push(buy_at);
        weights_history.push(w);
    }
    let value_start = rebalance_indices[0];
    let mut values = Vec::with_capacity(len - value_start);
    let mut holdings = vec![0.0; n];
    let mut value = 1.0;
    let mut next = 0;
    for q in value_start..len {
        if q > value_start {
            value = (0..n).map(|i| holdings[i] * prices[i][q]).sum();
        }
        if next < rebalance_indices.len() && rebalance_indices[next] == q {
            let w = &weights_history[next];
            for i in 0..n {
                holdings[i] = value * w[i] / prices[i][q];
            }
            next += 1;
        }
        values.push(value);
    }
    let risk = RiskReport::from_values(&values, cfg.alpha, cfg.risk_free)?;
    Ok(PortfolioBacktest { rebalance_indices, weights: weights_history, value_start, values, risk })
}

fn estimate_weights(labels: &[String], windows: &[&[f64]], cfg: &PortfolioConfig, context: u64) -> Result<Vec<f64>> {
    let means: Vec<f64> = windows.iter().map(|w| mean(w)).collect();
    let vols: Vec<f64> = windows.iter().map(|w| sample_std(w)).collect();
    let codep = estimate_codependence(labels, windows, cfg.codependence, &cfg.settings, context)?;
    match cfg.objective {
        Objective::MinRisk { target_return } => min_risk_weights(&means, &vols, &codep, target_return),
        Objective::MaxSharpe => match max_sharpe_weights(&means, &vols, &codep, cfg.risk_free) {
            Err(Error::NoExcessReturn) => min_risk_weights(&means, &vols, &codep, None),
            other => other,
        },
    }
}
