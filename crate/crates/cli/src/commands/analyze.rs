use nlcausal_core::{BivariateMeasure, CodependenceKind, MeasureSettings, RollingConfig};

use super::{load_input, prepare, Outcome};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::ingest::Dataset;
use crate::output::{num, OutputDir};

pub const FILE: &str = "measures.csv";
pub const ANALYZE_HEADER: [&str; 8] =
    ["window_end", "date", "asset_a", "asset_b", "direction", "measure", "value", "error"];

/// One measure value on one window. For directed measures `asset_a` is the putative cause.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    /// Input row (0-based, header excluded) of the window's last sample.
    pub window_end: usize,
    pub asset_a: String,
    pub asset_b: String,
    pub directed: bool,
    pub measure: CodependenceKind,
    pub value: std::result::Result<f64, String>,
}

/// Every requested measure on every window of every pair.
///
/// Rows are ordered by pair (label order), measure (request order), direction, window.
pub fn analyze_rows(
    series: &[(String, Vec<f64>)],
    offset: usize,
    kinds: &[CodependenceKind],
    settings: &MeasureSettings,
    rolling: &RollingConfig,
) -> Result<Vec<MeasureRow>> {
    let len = series.first().map_or(0, |s| s.1.len());
    let count = rolling.window_count(len).map_err(|e| CliError::core("rolling windows", e))?;
    let mut rows = Vec::new();
    for i in 0..series.len() {
        for j in i + 1..series.len() {
            for &kind in kinds {
                let measure = kind.measure(settings);
                let directions: &[(usize, usize)] = if kind.is_directional() { &[(i, j), (j, i)] } else { &[(i, j)] };
                for &(a, b) in directions {
                    for w in 0..count {
                        let r = rolling.window_range(w);
                        let value = measure
                            .evaluate_at(w as u64, &series[a].1[r.clone()], &series[b].1[r.clone()])
                            .map_err(|e| e.to_string());
                        rows.push(MeasureRow {
                            window_end: r.end - 1 + offset,
                            asset_a: series[a].0.clone(),
                            asset_b: series[b].0.clone(),
                            directed: kind.is_directional(),
                            measure: kind,
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub(crate) fn compute(cfg: &RunConfig, data: &Dataset, kinds: &[CodependenceKind]) -> Result<Vec<MeasureRow>> {
    let (series, offset) = prepare(data, cfg.transform)?;
    if series.len() < 2 {
        return Err(CliError::Config("at least two assets are required".into()));
    }
    analyze_rows(&series, offset, kinds, &cfg.measure_settings()?, &cfg.rolling()?)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let data = load_input(cfg)?;
    let kinds = cfg.measure_kinds()?;
    let rows = compute(cfg, &data, &kinds)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut w = out.csv(FILE)?;
    w.write_record(ANALYZE_HEADER)?;
    let mut failures = 0;
    for row in &rows {
        let (value, error) = match &row.value {
            Ok(v) => (num(*v), String::new()),
            Err(e) => {
                failures += 1;
                eprintln!("{} {}->{} window ending {}: {e}", row.measure, row.asset_a, row.asset_b, row.window_end);
                (String::new(), e.clone())
            }
        };
        w.write_record([
            row.window_end.to_string(),
            data.date(row.window_end).to_string(),
            row.asset_a.clone(),
            row.asset_b.clone(),
            if row.directed { "directed" } else { "undirected" }.to_string(),
            row.measure.name().to_string(),
            value,
            error,
        ])?;
    }
    w.flush().map_err(|e| CliError::io(out.path(FILE), e))?;
    if failures > 0 {
        eprintln!("{failures} of {} measure evaluations failed", rows.len());
    }
    out.write_manifest("analyze", cfg, failures)?;
    Ok(Outcome { failures })
}
