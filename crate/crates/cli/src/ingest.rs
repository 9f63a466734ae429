//! CSV input: a header row, an optional leading `date` column, one numeric column per asset.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use nlcausal_core::TimeSeries;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Contents of the `date` column, when present.
    pub dates: Option<Vec<String>>,
    pub series: Vec<TimeSeries>,
}

impl Dataset {
    pub fn labels(&self) -> Vec<String> {
        self.series.iter().map(|s| s.label().unwrap_or_default().to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.series.first().map_or(0, |s| s.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn find(&self, label: &str) -> Result<&TimeSeries> {
        self.series.iter().find(|s| s.label() == Some(label)).ok_or_else(|| CliError::UnknownAsset(label.to_string()))
    }

    /// The date of data row `index`, or an empty string.
    pub fn date(&self, index: usize) -> &str {
        self.dates.as_ref().and_then(|d| d.get(index)).map_or("", |s| s.as_str())
    }
}

pub fn ingest_csv(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let has_date = headers.first().is_some_and(|h| h.eq_ignore_ascii_case("date"));
    let asset_headers = &headers[usize::from(has_date)..];
    if asset_headers.is_empty() {
        return Err(CliError::EmptyInput);
    }
    let mut dates = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); asset_headers.len()];
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::Parse { row, column: String::new(), message: e.to_string() })?;
        if record.len() != headers.len() {
            return Err(CliError::Parse {
                row,
                column: String::new(),
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        if has_date {
            dates.push(record[0].to_string());
        }
        for (c, name) in asset_headers.iter().enumerate() {
            let cell = &record[c + usize::from(has_date)];
            let value: f64 = cell.parse().map_err(|_| CliError::Parse {
                row,
                column: name.clone(),
                message: if cell.is_empty() { "missing value".into() } else { format!("not a number: {cell:?}") },
            })?;
            if !value.is_finite() {
                return Err(CliError::Parse { row, column: name.clone(), message: "value is not finite".into() });
            }
            columns[c].push(value);
        }
    }
    if columns[0].is_empty() {
        return Err(CliError::EmptyInput);
    }
    let series = columns
        .into_iter()
        .zip(asset_headers)
        .map(|(values, name)| {
            TimeSeries::new(values).map(|s| s.with_label(name.clone())).map_err(|e| CliError::core(name.clone(), e))
        })
        .collect::<Result<_>>()?;
    Ok(Dataset { dates: has_date.then_some(dates), series })
}
