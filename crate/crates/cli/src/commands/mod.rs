mod analyze;
mod decompose;
mod pairtrade;
mod portfolio;
mod simulate;

use std::path::Path;

pub use analyze::{analyze_rows, MeasureRow, ANALYZE_HEADER};
pub use decompose::decompose_rows;

use crate::args::{Cli, Command};
use crate::config::{RunConfig, Transform};
use crate::error::{CliError, Result};
use crate::ingest::{ingest_csv, Dataset};

/// How a command ended when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    /// Rows, pairs or measures that could not be computed.
    pub failures: usize,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Simulate(a) => simulate::run(&a.config()?),
        Command::Analyze(a) => analyze::run(&a.config()?),
        Command::Decompose(a) => decompose::run(&a.config()?),
        Command::Pairtrade(a) => pairtrade::run(&a.config()?),
        Command::Portfolio(a) => portfolio::run(&a.config()?),
        Command::Defaults => {
            print!("{}", RunConfig::default().to_toml());
            Ok(Outcome { failures: 0 })
        }
    }
}

fn load_input(cfg: &RunConfig) -> Result<Dataset> {
    let input = cfg.input.as_deref().ok_or_else(|| CliError::Config("--input is required".into()))?;
    ingest_csv(Path::new(input))
}

pub(crate) type Labelled = Vec<(String, Vec<f64>)>;

/// Labelled transformed series, and the input row of transformed sample 0.
pub(crate) fn prepare(data: &Dataset, transform: Transform) -> Result<(Labelled, usize)> {
    let offset = match transform {
        Transform::None => 0,
        Transform::LogReturns => 1,
    };
    let series =
        data.series
            .iter()
            .zip(data.labels())
            .map(|(s, label)| {
                let values = match transform {
                    Transform::None => s.values().to_vec(),
                    Transform::LogReturns => nlcausal_core::timeseries::log_returns(s.values())
                        .map_err(|e| CliError::core(label.clone(), e))?,
                };
                Ok((label, values))
            })
            .collect::<Result<_>>()?;
    Ok((series, offset))
}
