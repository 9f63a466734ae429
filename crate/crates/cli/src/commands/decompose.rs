use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use nlcausal_core::decomposition::DecompositionReport;
use nlcausal_core::{CodependenceKind, MeasureSeries, RollingConfig};

use super::analyze::{self, MeasureRow, ANALYZE_HEADER};
use super::{load_input, Outcome};
use crate::config::{parse_kind, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{num, OutputDir};

pub const FILE: &str = "decomposition.csv";
const HEADER: [&str; 10] = [
    "asset_a",
    "asset_b",
    "direction",
    "measure",
    "window_end",
    "linear_fraction",
    "nonlinear_fraction",
    "fallacy",
    "fallacy_linear",
    "error",
];

/// One output line: a report, or the reason the pair could not be decomposed.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionRow {
    pub asset_a: String,
    pub asset_b: String,
    pub directed: bool,
    pub measure: CodependenceKind,
    /// Last window of a second-level window; `None` for a whole-series report.
    pub window_end: Option<usize>,
    pub report: std::result::Result<DecompositionReport, String>,
}

type Key = (String, String, CodependenceKind);

fn series_of(rows: &[&MeasureRow]) -> std::result::Result<MeasureSeries, String> {
    let mut values = Vec::with_capacity(rows.len());
    let mut ends = Vec::with_capacity(rows.len());
    for r in rows {
        match &r.value {
            Ok(v) => values.push(*v),
            Err(e) => return Err(format!("{} window ending {}: {e}", r.measure, r.window_end)),
        }
        ends.push(r.window_end);
    }
    MeasureSeries::new(values, ends).map_err(|e| e.to_string())
}

/// Decomposes every measure against its surrogate counterpart and the Pearson series.
///
/// Pearson itself is decomposed only when its surrogate series is present; otherwise it is
/// just the linear reference.
pub fn decompose_rows(rows: &[MeasureRow], nested: Option<RollingConfig>) -> Vec<DecompositionRow> {
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, Vec<&MeasureRow>> = HashMap::new();
    for r in rows {
        let key = (r.asset_a.clone(), r.asset_b.clone(), r.measure);
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    let mut out = Vec::new();
    let has_surrogate_pearson = order.iter().any(|k| k.2 == CodependenceKind::SurrogateCorrelation);
    let targets =
        order.iter().filter(|k| !k.2.is_surrogate() && (k.2 != CodependenceKind::Correlation || has_surrogate_pearson));
    for key in targets {
        let (a, b, kind) = key;
        let directed = kind.is_directional();
        let fail = |msg: String| DecompositionRow {
            asset_a: a.clone(),
            asset_b: b.clone(),
            directed,
            measure: *kind,
            window_end: None,
            report: Err(msg),
        };
        let find = |k: CodependenceKind, undirected: bool| {
            groups.get(&(a.clone(), b.clone(), k)).or_else(|| {
                if undirected {
                    groups.get(&(b.clone(), a.clone(), k))
                } else {
                    None
                }
            })
        };
        let Some(surrogate_rows) = find(kind.surrogate(), !directed) else {
            out.push(fail(format!("no {} series", kind.surrogate())));
            continue;
        };
        let Some(rho_rows) = find(CodependenceKind::Correlation, true) else {
            out.push(fail("no pearson series".into()));
            continue;
        };
        let parts =
            (|| Ok::<_, String>((series_of(&groups[key])?, series_of(surrogate_rows)?, series_of(rho_rows)?)))();
        let (psi, psi_s, rho) = match parts {
            Ok(p) => p,
            Err(e) => {
                out.push(fail(e));
                continue;
            }
        };
        let pair = (a.clone(), b.clone());
        match nested {
            None => {
                let report =
                    DecompositionReport::compute(kind.name(), pair, &psi, &psi_s, &rho).map_err(|e| e.to_string());
                out.push(DecompositionRow { report, ..fail(String::new()) });
            }
            Some(cfg) => match DecompositionReport::rolling(kind.name(), &pair, &psi, &psi_s, &rho, &cfg) {
                Ok(reports) => out.extend(reports.into_iter().map(|(end, report)| DecompositionRow {
                    window_end: Some(end),
                    report: Ok(report),
                    ..fail(String::new())
                })),
                Err(e) => out.push(fail(e.to_string())),
            },
        }
    }
    out
}

fn read_analyze_file(path: &Path) -> Result<Option<Vec<MeasureRow>>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    if rdr.headers()?.iter().ne(ANALYZE_HEADER) {
        return Ok(None);
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let bad = |column: &str, message: String| CliError::Parse { row, column: column.into(), message };
        let window_end = record[0].parse().map_err(|_| bad("window_end", "not an index".into()))?;
        let measure = parse_kind(&record[5]).map_err(|e| bad("measure", e.to_string()))?;
        let value = if record[7].is_empty() {
            Ok(record[6].parse::<f64>().map_err(|_| bad("value", "not a number".into()))?)
        } else {
            Err(record[7].to_string())
        };
        rows.push(MeasureRow {
            window_end,
            asset_a: record[2].to_string(),
            asset_b: record[3].to_string(),
            directed: &record[4] == "directed",
            measure,
            value,
        });
    }
    Ok(Some(rows))
}

/// Requested measures plus the surrogate and Pearson series the decomposition needs.
fn expanded_kinds(cfg: &RunConfig) -> Result<Vec<CodependenceKind>> {
    let mut kinds = Vec::new();
    for k in cfg.measure_kinds()? {
        for extra in [k.base(), k.base().surrogate(), CodependenceKind::Correlation] {
            if !kinds.contains(&extra) {
                kinds.push(extra);
            }
        }
    }
    Ok(kinds)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let input = cfg.input.as_deref().ok_or_else(|| CliError::Config("--input is required".into()))?;
    let rows = match read_analyze_file(Path::new(input))? {
        Some(rows) => rows,
        None => {
            let data = load_input(cfg)?;
            analyze::compute(cfg, &data, &expanded_kinds(cfg)?)?
        }
    };
    let nested = match cfg.decompose.nested_window_len {
        Some(len) => Some(
            RollingConfig::new(len, cfg.decompose.nested_stride.unwrap_or(1))
                .map_err(|e| CliError::Config(e.to_string()))?,
        ),
        None => None,
    };
    let reports = decompose_rows(&rows, nested);
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut w = out.csv(FILE)?;
    w.write_record(HEADER)?;
    let mut failures = 0;
    for r in &reports {
        let direction = if r.directed { "directed" } else { "undirected" };
        let end = r.window_end.map(|e| e.to_string()).unwrap_or_default();
        let mut record = vec![r.asset_a.clone(), r.asset_b.clone(), direction.into(), r.measure.name().into(), end];
        match &r.report {
            Ok(rep) => {
                record.extend([rep.linear_fraction, rep.nonlinear_fraction, rep.fallacy, rep.fallacy_linear].map(num));
                record.push(String::new());
            }
            Err(e) => {
                failures += 1;
                eprintln!("{} {}->{}: {e}", r.measure, r.asset_a, r.asset_b);
                record.extend(std::iter::repeat_n(String::new(), 4));
                record.push(e.clone());
            }
        }
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| CliError::io(out.path(FILE), e))?;
    out.write_manifest("decompose", cfg, failures)?;
    Ok(Outcome { failures })
}
