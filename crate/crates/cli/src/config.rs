//! Run configuration: built-in defaults, overridden by a TOML file, overridden by flags.

use std::path::Path;

use nlcausal_core::finance::{Objective, PairTradingConfig, PortfolioConfig, DEFAULT_ALPHA};
use nlcausal_core::measures::{CcmParams, ConvergenceLayout, EmbeddingConfig, HistogramConfig, LibrarySampling};
use nlcausal_core::surrogates::SurrogateConfig;
use nlcausal_core::synthetic::{CoupledDifferenceParams, SelfTerm};
use nlcausal_core::{CodependenceKind, MeasureSettings, RollingConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    None,
    LogReturns,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub input: Option<String>,
    pub output_dir: String,
    pub transform: Transform,
    pub measures: Vec<String>,
    pub rolling: RollingSection,
    pub surrogate: SurrogateSection,
    pub histogram: HistogramSection,
    pub ccm: CcmSection,
    pub simulate: SimulateSection,
    pub decompose: DecomposeSection,
    pub pairtrade: PairtradeSection,
    pub portfolio: PortfolioSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            input: None,
            output_dir: "out".into(),
            transform: Transform::LogReturns,
            measures: vec!["pearson".into(), "te".into(), "ccm".into()],
            rolling: RollingSection::default(),
            surrogate: SurrogateSection::default(),
            histogram: HistogramSection::default(),
            ccm: CcmSection::default(),
            simulate: SimulateSection::default(),
            decompose: DecomposeSection::default(),
            pairtrade: PairtradeSection::default(),
            portfolio: PortfolioSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RollingSection {
    pub window_len: usize,
    pub stride: usize,
}

impl Default for RollingSection {
    fn default() -> Self {
        let r = RollingConfig::default();
        Self { window_len: r.window_len, stride: r.stride }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurrogateSection {
    pub realizations: usize,
}

impl Default for SurrogateSection {
    fn default() -> Self {
        Self { realizations: SurrogateConfig::default().realizations }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HistogramSection {
    pub bins: usize,
}

impl Default for HistogramSection {
    fn default() -> Self {
        Self { bins: HistogramConfig::default().bins_per_dim }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CcmSection {
    pub kappa: usize,
    pub tau: usize,
    pub library_count: usize,
    pub min_library: usize,
    pub threshold: f64,
    pub tail_count: usize,
    pub windows: usize,
    pub neighbor_count: Option<usize>,
    /// `trailing`, `leading` or `blocks`.
    pub layout: String,
    /// `spread` or `prefix`.
    pub sampling: String,
}

impl Default for CcmSection {
    fn default() -> Self {
        let p = CcmParams::default();
        Self {
            kappa: p.embedding.kappa,
            tau: p.embedding.tau,
            library_count: p.library_count,
            min_library: p.min_library,
            threshold: p.convergence_threshold,
            tail_count: p.tail_count,
            windows: p.windows,
            neighbor_count: p.neighbor_count,
            layout: "trailing".into(),
            sampling: "spread".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub n: usize,
    /// `canonical` or `literal`.
    pub variant: String,
    pub r_x: f64,
    pub r_y: f64,
    pub beta_x_to_y: f64,
    pub beta_y_to_x: f64,
    pub x0: f64,
    pub y0: f64,
    pub transient: usize,
}

impl Default for SimulateSection {
    fn default() -> Self {
        let p = CoupledDifferenceParams::default();
        Self {
            n: 1000,
            variant: "canonical".into(),
            r_x: p.r_x,
            r_y: p.r_y,
            beta_x_to_y: p.beta_x_to_y,
            beta_y_to_x: p.beta_y_to_x,
            x0: p.x0,
            y0: p.y0,
            transient: p.transient,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecomposeSection {
    /// Second-level window over the measure series; unset reports one row per pair.
    pub nested_window_len: Option<usize>,
    pub nested_stride: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairtradeSection {
    pub asset_a: Option<String>,
    pub asset_b: Option<String>,
    pub hist_window: usize,
    pub short_window: usize,
    pub z_threshold: f64,
    pub exit_threshold: f64,
    pub codep: Vec<String>,
}

impl Default for PairtradeSection {
    fn default() -> Self {
        let p = PairTradingConfig::default();
        Self {
            asset_a: None,
            asset_b: None,
            hist_window: p.hist_window,
            short_window: p.short_window,
            z_threshold: p.z_threshold,
            exit_threshold: p.exit_threshold,
            codep: vec!["pearson".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortfolioSection {
    /// `min-risk` or `max-sharpe`.
    pub objective: String,
    pub codep: String,
    pub alpha: f64,
    pub risk_free: f64,
    pub target_return: Option<f64>,
}

impl Default for PortfolioSection {
    fn default() -> Self {
        Self {
            objective: "min-risk".into(),
            codep: "pearson".into(),
            alpha: DEFAULT_ALPHA,
            risk_free: 0.0,
            target_return: None,
        }
    }
}

fn config_error(e: nlcausal_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

pub fn parse_kind(name: &str) -> Result<CodependenceKind> {
    name.parse().map_err(|_| CliError::Config(format!("unknown measure {name:?}")))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn rolling(&self) -> Result<RollingConfig> {
        RollingConfig::new(self.rolling.window_len, self.rolling.stride).map_err(config_error)
    }

    pub fn measure_kinds(&self) -> Result<Vec<CodependenceKind>> {
        if self.measures.is_empty() {
            return Err(CliError::Config("no measures requested".into()));
        }
        self.measures.iter().map(|m| parse_kind(m)).collect()
    }

    pub fn measure_settings(&self) -> Result<MeasureSettings> {
        let histogram = HistogramConfig::new(self.histogram.bins).map_err(config_error)?;
        let surrogate = SurrogateConfig { realizations: self.surrogate.realizations, seed: self.seed };
        surrogate.validate().map_err(config_error)?;
        let c = &self.ccm;
        let layout = match c.layout.as_str() {
            "trailing" => ConvergenceLayout::Trailing,
            "leading" => ConvergenceLayout::Leading,
            "blocks" => ConvergenceLayout::Blocks,
            other => return Err(CliError::Config(format!("unknown ccm layout {other:?}"))),
        };
        let sampling = match c.sampling.as_str() {
            "spread" => LibrarySampling::Spread,
            "prefix" => LibrarySampling::Prefix,
            other => return Err(CliError::Config(format!("unknown ccm sampling {other:?}"))),
        };
        if c.threshold.is_nan() || c.threshold <= 0.0 || c.tail_count == 0 || c.windows == 0 || c.library_count < 2 {
            return Err(CliError::Config(
                "ccm: threshold, tail_count, windows and library_count must be positive".into(),
            ));
        }
        let ccm = CcmParams {
            embedding: EmbeddingConfig::new(c.kappa, c.tau).map_err(config_error)?,
            library_count: c.library_count,
            min_library: c.min_library,
            convergence_threshold: c.threshold,
            tail_count: c.tail_count,
            neighbor_count: c.neighbor_count,
            windows: c.windows,
            layout,
            sampling,
        };
        Ok(MeasureSettings { histogram, ccm, surrogate })
    }

    pub fn simulation(&self) -> Result<CoupledDifferenceParams> {
        let s = &self.simulate;
        let self_term = match s.variant.as_str() {
            "canonical" => SelfTerm::Canonical,
            "literal" => SelfTerm::Literal,
            other => return Err(CliError::Config(format!("unknown simulation variant {other:?}"))),
        };
        let p = CoupledDifferenceParams {
            r_x: s.r_x,
            r_y: s.r_y,
            beta_y_to_x: s.beta_y_to_x,
            beta_x_to_y: s.beta_x_to_y,
            x0: s.x0,
            y0: s.y0,
            transient: s.transient,
            self_term,
        };
        p.validate().map_err(config_error)?;
        Ok(p)
    }

    pub fn pair_trading(&self, kind: CodependenceKind) -> Result<PairTradingConfig> {
        let p = &self.pairtrade;
        let cfg = PairTradingConfig {
            hist_window: p.hist_window,
            short_window: p.short_window,
            z_threshold: p.z_threshold,
            exit_threshold: p.exit_threshold,
            codependence: kind,
            settings: self.measure_settings()?,
        };
        cfg.history_count(self.rolling.stride).map_err(config_error)?;
        Ok(cfg)
    }

    pub fn portfolio(&self) -> Result<PortfolioConfig> {
        let p = &self.portfolio;
        let objective = match p.objective.as_str() {
            "min-risk" => Objective::MinRisk { target_return: p.target_return },
            "max-sharpe" => Objective::MaxSharpe,
            other => return Err(CliError::Config(format!("unknown objective {other:?}"))),
        };
        if !(p.alpha > 0.0 && p.alpha < 1.0) {
            return Err(CliError::Config("alpha must lie in (0, 1)".into()));
        }
        Ok(PortfolioConfig {
            objective,
            codependence: parse_kind(&p.codep)?,
            settings: self.measure_settings()?,
            rolling: self.rolling()?,
            alpha: p.alpha,
            risk_free: p.risk_free,
        })
    }
}
