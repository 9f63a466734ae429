use nlcausal_core::finance::rebalance_backtest;

use super::{load_input, Outcome};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{num, OutputDir};

pub const WEIGHTS: &str = "weights.csv";
pub const VALUES: &str = "values.csv";
pub const RISK: &str = "risk.csv";

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let data = load_input(cfg)?;
    let pc = cfg.portfolio()?;
    let labels = data.labels();
    let prices: Vec<&[f64]> = data.series.iter().map(|s| s.values()).collect();
    let bt = rebalance_backtest(&labels, &prices, &pc).map_err(|e| CliError::core("portfolio", e))?;
    let mut out = OutputDir::create(&cfg.output_dir)?;

    let mut w = out.csv(WEIGHTS)?;
    w.write_record(["date_index", "date", "asset", "weight"])?;
    for (idx, weights) in bt.rebalance_indices.iter().zip(&bt.weights) {
        for (label, weight) in labels.iter().zip(weights) {
            w.write_record([idx.to_string(), data.date(*idx).to_string(), label.clone(), num(*weight)])?;
        }
    }
    w.flush().map_err(|e| CliError::io(out.path(WEIGHTS), e))?;

    let mut w = out.csv(VALUES)?;
    w.write_record(["index", "date", "value"])?;
    for (k, v) in bt.values.iter().enumerate() {
        let idx = bt.value_start + k;
        w.write_record([idx.to_string(), data.date(idx).to_string(), num(*v)])?;
    }
    w.flush().map_err(|e| CliError::io(out.path(VALUES), e))?;

    let r = &bt.risk;
    let mut w = out.csv(RISK)?;
    w.write_record(["objective", "codep", "alpha", "var_alpha", "stdev", "sharpe", "final_value"])?;
    w.write_record([
        cfg.portfolio.objective.clone(),
        pc.codependence.name().to_string(),
        num(r.alpha),
        num(r.var_alpha),
        num(r.stdev),
        num(r.sharpe),
        num(r.final_value),
    ])?;
    w.flush().map_err(|e| CliError::io(out.path(RISK), e))?;
    out.write_manifest("portfolio", cfg, 0)?;
    Ok(Outcome { failures: 0 })
}
