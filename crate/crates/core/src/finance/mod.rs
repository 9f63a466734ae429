//! Applications of the co-dependence measures: a pair-trading backtest, long-only
//! Markowitz portfolios and their risk figures.

pub mod backtest;
mod linalg;
pub mod pairs;
pub mod portfolio;
pub mod risk;

pub use backtest::{estimate_codependence, rebalance_backtest, Objective, PortfolioBacktest, PortfolioConfig};
pub use pairs::{backtest_with_codependence, pair_trading_backtest, zscore, PairBacktest, PairTradingConfig, Position};
pub use portfolio::{max_sharpe_weights, min_risk_weights, portfolio_variance, sharpe_ratio, CoDependenceMatrix};
pub use risk::{historical_var, var_sample_is_short, RiskReport, DEFAULT_ALPHA};
