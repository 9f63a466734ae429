//! Batch pipelines over CSV price data: simulation, rolling co-dependence, linear/nonlinear
//! decomposition, pair trading and portfolio backtests.
//!
//! Every command writes long-format CSV files plus a `manifest.toml` with the resolved
//! configuration into the output directory. Exit status: 0 on success, 1 when some
//! pairs or windows failed, 2 on a fatal error.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::{CliError, Result};
pub use ingest::{ingest_csv, ingest_reader, Dataset};
