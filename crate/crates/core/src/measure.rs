//! The bivariate-measure abstraction and the built-in co-dependence measures.

use core::fmt;
use core::str::FromStr;

use crate::measures::{ccm, pearson, transfer_entropy, CcmParams, HistogramConfig};
use crate::surrogates::{surrogate_measure_in_stream, SurrogateConfig};
use crate::{Error, Result};

/// A real-valued function of two equally long series.
///
/// Directional measures read `evaluate(x, y)` as the influence of `x` on `y`.
pub trait BivariateMeasure {
    fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64>;

    /// Evaluation inside a numbered context (a rolling window, a rebalance date).
    /// Randomized measures use the context to select their random stream.
    fn evaluate_at(&self, context: u64, x: &[f64], y: &[f64]) -> Result<f64> {
        let _ = context;
        self.evaluate(x, y)
    }
}

impl<F> BivariateMeasure for F
where
    F: Fn(&[f64], &[f64]) -> Result<f64>,
{
    fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self(x, y)
    }
}

/// Built-in co-dependence measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodependenceKind {
    Correlation,
    TransferEntropy,
    Ccm,
    SurrogateCorrelation,
    SurrogateTransferEntropy,
    SurrogateCcm,
}

impl CodependenceKind {
    pub const ALL: [CodependenceKind; 6] = [
        CodependenceKind::Correlation,
        CodependenceKind::TransferEntropy,
        CodependenceKind::Ccm,
        CodependenceKind::SurrogateCorrelation,
        CodependenceKind::SurrogateTransferEntropy,
        CodependenceKind::SurrogateCcm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodependenceKind::Correlation => "pearson",
            CodependenceKind::TransferEntropy => "te",
            CodependenceKind::Ccm => "ccm",
            CodependenceKind::SurrogateCorrelation => "surrogate-pearson",
            CodependenceKind::SurrogateTransferEntropy => "surrogate-te",
            CodependenceKind::SurrogateCcm => "surrogate-ccm",
        }
    }

    /// Whether `evaluate(x, y)` and `evaluate(y, x)` differ.
    pub fn is_directional(self) -> bool {
        !matches!(self, CodependenceKind::Correlation | CodependenceKind::SurrogateCorrelation)
    }

    pub fn is_surrogate(self) -> bool {
        matches!(
            self,
            CodependenceKind::SurrogateCorrelation
                | CodependenceKind::SurrogateTransferEntropy
                | CodependenceKind::SurrogateCcm
        )
    }

    /// The plain measure a surrogate kind averages, or the kind itself.
    pub fn base(self) -> CodependenceKind {
        match self {
            CodependenceKind::SurrogateCorrelation => CodependenceKind::Correlation,
            CodependenceKind::SurrogateTransferEntropy => CodependenceKind::TransferEntropy,
            CodependenceKind::SurrogateCcm => CodependenceKind::Ccm,
            other => other,
        }
    }

    /// The surrogate counterpart of a plain measure, or the kind itself.
    pub fn surrogate(self) -> CodependenceKind {
        match self {
            CodependenceKind::Correlation => CodependenceKind::SurrogateCorrelation,
            CodependenceKind::TransferEntropy => CodependenceKind::SurrogateTransferEntropy,
            CodependenceKind::Ccm => CodependenceKind::SurrogateCcm,
            other => other,
        }
    }

    /// The measure bound to `settings`.
    pub fn measure(self, settings: &MeasureSettings) -> KindMeasure {
        KindMeasure { kind: self, settings: *settings }
    }
}

impl fmt::Display for CodependenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodependenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().as_str() {
            "pearson" | "correlation" => CodependenceKind::Correlation,
            "te" | "transfer-entropy" => CodependenceKind::TransferEntropy,
            "ccm" => CodependenceKind::Ccm,
            "surrogate-pearson" | "surrogate-correlation" => CodependenceKind::SurrogateCorrelation,
            "surrogate-te" => CodependenceKind::SurrogateTransferEntropy,
            "surrogate-ccm" => CodependenceKind::SurrogateCcm,
            _ => return Err(Error::InvalidConfig("unknown measure name")),
        };
        Ok(kind)
    }
}

/// Parameters shared by the built-in measures.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeasureSettings {
    pub histogram: HistogramConfig,
    pub ccm: CcmParams,
    pub surrogate: SurrogateConfig,
}

/// A [`CodependenceKind`] together with its settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KindMeasure {
    pub kind: CodependenceKind,
    pub settings: MeasureSettings,
}

impl KindMeasure {
    fn evaluate_plain(kind: CodependenceKind, settings: &MeasureSettings, x: &[f64], y: &[f64]) -> Result<f64> {
        match kind {
            CodependenceKind::Correlation => pearson(x, y),
            CodependenceKind::TransferEntropy => transfer_entropy(x, y, &settings.histogram),
            CodependenceKind::Ccm => {
                let cfg = settings.ccm.config_for(x.len())?;
                ccm(x, y, &cfg)
            }
            _ => unreachable!("surrogate kinds are dispatched separately"),
        }
    }
}

impl BivariateMeasure for KindMeasure {
    fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.evaluate_at(0, x, y)
    }

    fn evaluate_at(&self, context: u64, x: &[f64], y: &[f64]) -> Result<f64> {
        let settings = &self.settings;
        if self.kind.is_surrogate() {
            let base = self.kind.base();
            let inner = |a: &[f64], b: &[f64]| Self::evaluate_plain(base, settings, a, b);
            surrogate_measure_in_stream(&inner, x, y, &settings.surrogate, context)
        } else {
            Self::evaluate_plain(self.kind, settings, x, y)
        }
    }
}
