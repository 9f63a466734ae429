use nlcausal_core::synthetic::simulate;

use super::Outcome;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{num, OutputDir};

pub const FILE: &str = "simulated.csv";

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.simulate.n == 0 {
        return Err(CliError::Config("n must be positive".into()));
    }
    let params = cfg.simulation()?;
    let (x, y) = simulate(&params, cfg.simulate.n).map_err(|e| CliError::core("simulate", e))?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut w = out.csv(FILE)?;
    w.write_record(["x", "y"])?;
    for (a, b) in x.values().iter().zip(y.values()) {
        w.write_record([num(*a), num(*b)])?;
    }
    w.flush().map_err(|e| CliError::io(out.path(FILE), e))?;
    out.write_manifest("simulate", cfg, 0)?;
    Ok(Outcome { failures: 0 })
}
