use nlcausal_core::finance::pair_trading_backtest;

use super::{load_input, Outcome};
use crate::config::{parse_kind, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{num, OutputDir};

pub const FILE: &str = "pairtrade.csv";
pub const SUMMARY: &str = "pairtrade_summary.csv";

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let data = load_input(cfg)?;
    let p = &cfg.pairtrade;
    let (Some(a), Some(b)) = (&p.asset_a, &p.asset_b) else {
        return Err(CliError::Config("--asset-a and --asset-b are required".into()));
    };
    let sa = data.find(a)?;
    let sb = data.find(b)?;
    let kinds = p.codep.iter().map(|k| parse_kind(k)).collect::<Result<Vec<_>>>()?;
    if kinds.is_empty() {
        return Err(CliError::Config("no co-dependence measure requested".into()));
    }
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut w = out.csv(FILE)?;
    w.write_record(["measure", "t", "date", "z", "position", "step_return", "cumulative_return"])?;
    let mut summary = Vec::new();
    let mut failures = 0;
    for kind in kinds {
        let tc = cfg.pair_trading(kind)?;
        match pair_trading_backtest(sa.values(), sb.values(), &tc, cfg.rolling.stride) {
            Ok(bt) => {
                let mut decisions = bt.decisions.iter().peekable();
                for s in 0..bt.positions.len() {
                    let z = match decisions.peek() {
                        Some(&&(t, z)) if t == s => {
                            decisions.next();
                            num(z)
                        }
                        _ => String::new(),
                    };
                    // Return sample `s` ends at input row `s + 1`.
                    w.write_record([
                        kind.name().to_string(),
                        (s + 1).to_string(),
                        data.date(s + 1).to_string(),
                        z,
                        bt.positions[s].as_i8().to_string(),
                        num(bt.step_returns[s]),
                        num(bt.cumulative[s]),
                    ])?;
                }
                summary.push([kind.name().to_string(), num(bt.total_return()), String::new()]);
            }
            Err(e) => {
                failures += 1;
                eprintln!("pairtrade with {kind}: {e}");
                summary.push([kind.name().to_string(), String::new(), e.to_string()]);
            }
        }
    }
    w.flush().map_err(|e| CliError::io(out.path(FILE), e))?;
    let mut s = out.csv(SUMMARY)?;
    s.write_record(["measure", "final_cumulative_return", "error"])?;
    for row in &summary {
        s.write_record(row)?;
    }
    s.flush().map_err(|e| CliError::io(out.path(SUMMARY), e))?;
    out.write_manifest("pairtrade", cfg, failures)?;
    Ok(Outcome { failures })
}
