//! Command-line flags. Every flag is optional and overrides the configuration file,
//! which in turn overrides the built-in defaults (`nlcausal defaults` prints them).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{RunConfig, Transform};

#[derive(Debug, Parser)]
#[command(name = "nlcausal", version, about = "Linear and nonlinear causality between time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the coupled logistic pair as a two-column CSV.
    Simulate(SimulateArgs),
    /// Rolling co-dependence for every asset pair, in long format.
    Analyze(AnalyzeArgs),
    /// Linear/nonlinear fractions and correlation fallacy per pair and measure.
    Decompose(DecomposeArgs),
    /// Co-dependence z-score pair-trading backtest.
    Pairtrade(PairtradeArgs),
    /// Rebalanced long-only portfolio with its risk report.
    Portfolio(PortfolioArgs),
    /// Print the default configuration file.
    Defaults,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long)]
    pub output_dir: Option<String>,
    /// Seed for surrogate phases [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Input CSV: header row, optional leading `date` column, one column per asset.
    #[arg(long)]
    pub input: Option<String>,
    /// Comma-separated measures: pearson, te, ccm, surrogate-pearson, surrogate-te,
    /// surrogate-ccm [default: pearson,te,ccm].
    #[arg(long, value_delimiter = ',')]
    pub measures: Option<Vec<String>>,
    /// Rolling window length in samples [default: 1000].
    #[arg(long)]
    pub window_len: Option<usize>,
    /// Rolling window stride in samples [default: 20].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Surrogate realizations per window [default: 50].
    #[arg(long)]
    pub surrogates: Option<usize>,
    /// Histogram bins per dimension for transfer entropy [default: 8].
    #[arg(long)]
    pub bins: Option<usize>,
    /// Series transform applied before measuring [default: log-returns].
    #[arg(long, value_enum)]
    pub transform: Option<Transform>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of samples [default: 1000].
    #[arg(long)]
    pub n: Option<usize>,
    /// Use the literal self-term variant instead of the canonical one.
    #[arg(long)]
    pub literal: bool,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub y0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `--input` may be an `analyze` output file or raw series.
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Second-level window over the measure series, in windows.
    #[arg(long)]
    pub nested_window_len: Option<usize>,
    /// Second-level stride, in windows [default: 1].
    #[arg(long)]
    pub nested_stride: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PairtradeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long)]
    pub asset_a: Option<String>,
    #[arg(long)]
    pub asset_b: Option<String>,
    /// Comma-separated co-dependence measures, one backtest each [default: pearson].
    #[arg(long, value_delimiter = ',')]
    pub codep: Option<Vec<String>>,
    /// History length in samples [default: 1000].
    #[arg(long)]
    pub hist_window: Option<usize>,
    /// Short co-dependence window in samples [default: 250].
    #[arg(long)]
    pub short_window: Option<usize>,
    /// Entry threshold on |z| [default: 1.5].
    #[arg(long)]
    pub z_threshold: Option<f64>,
    /// Exit threshold on |z| [default: 0.5].
    #[arg(long)]
    pub exit_threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PortfolioArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// min-risk or max-sharpe [default: min-risk].
    #[arg(long)]
    pub objective: Option<String>,
    /// Co-dependence measure substituted for correlation [default: pearson].
    #[arg(long)]
    pub codep: Option<String>,
    /// VaR tail probability [default: 0.01].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Per-period risk-free rate [default: 0].
    #[arg(long)]
    pub risk_free: Option<f64>,
    /// Target mean return for min-risk.
    #[arg(long)]
    pub target_return: Option<f64>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl CommonArgs {
    pub fn base_config(&self) -> crate::error::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set(&mut cfg.output_dir, self.output_dir.clone());
        set(&mut cfg.seed, self.seed);
        Ok(cfg)
    }
}

impl MeasureArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if self.input.is_some() {
            cfg.input = self.input.clone();
        }
        set(&mut cfg.measures, self.measures.clone());
        set(&mut cfg.rolling.window_len, self.window_len);
        set(&mut cfg.rolling.stride, self.stride);
        set(&mut cfg.surrogate.realizations, self.surrogates);
        set(&mut cfg.histogram.bins, self.bins);
        set(&mut cfg.transform, self.transform);
    }
}

impl SimulateArgs {
    pub fn config(&self) -> crate::error::Result<RunConfig> {
        let mut cfg = self.common.base_config()?;
        set(&mut cfg.simulate.n, self.n);
        if self.literal {
            cfg.simulate.variant = "literal".into();
        }
        set(&mut cfg.simulate.x0, self.x0);
        set(&mut cfg.simulate.y0, self.y0);
        Ok(cfg)
    }
}

impl AnalyzeArgs {
    pub fn config(&self) -> crate::error::Result<RunConfig> {
        let mut cfg = self.common.base_config()?;
        self.measure.apply(&mut cfg);
        Ok(cfg)
    }
}

impl DecomposeArgs {
    pub fn config(&self) -> crate::error::Result<RunConfig> {
        let mut cfg = self.common.base_config()?;
        self.measure.apply(&mut cfg);
        if self.nested_window_len.is_some() {
            cfg.decompose.nested_window_len = self.nested_window_len;
        }
        if self.nested_stride.is_some() {
            cfg.decompose.nested_stride = self.nested_stride;
        }
        Ok(cfg)
    }
}

impl PairtradeArgs {
    pub fn config(&self) -> crate::error::Result<RunConfig> {
        let mut cfg = self.common.base_config()?;
        self.measure.apply(&mut cfg);
        let p = &mut cfg.pairtrade;
        if self.asset_a.is_some() {
            p.asset_a = self.asset_a.clone();
        }
        if self.asset_b.is_some() {
            p.asset_b = self.asset_b.clone();
        }
        set(&mut p.codep, self.codep.clone());
        set(&mut p.hist_window, self.hist_window);
        set(&mut p.short_window, self.short_window);
        set(&mut p.z_threshold, self.z_threshold);
        set(&mut p.exit_threshold, self.exit_threshold);
        Ok(cfg)
    }
}

impl PortfolioArgs {
    pub fn config(&self) -> crate::error::Result<RunConfig> {
        let mut cfg = self.common.base_config()?;
        self.measure.apply(&mut cfg);
        let p = &mut cfg.portfolio;
        set(&mut p.objective, self.objective.clone());
        set(&mut p.codep, self.codep.clone());
        set(&mut p.alpha, self.alpha);
        set(&mut p.risk_free, self.risk_free);
        if self.target_return.is_some() {
            p.target_return = self.target_return;
        }
        Ok(cfg)
    }
}
