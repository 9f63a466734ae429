//! Fourier-transform surrogates.
//!
//! A surrogate keeps every Fourier amplitude of the input and rotates the phase of each
//! coefficient by a random angle. The DC bin and, for even lengths, the Nyquist bin are
//! left untouched and the negative frequencies mirror the positive ones, so the inverse
//! transform is real. Both series of a pair receive the same rotations, which keeps their
//! cross-spectral phase differences and therefore their Pearson correlation.
//!
//! # Random stream
//!
//! Phases come from ChaCha8 seeded with `seed_from_u64(seed)`; the ChaCha stream id is
//! the evaluation context (the rolling-window index, 0 for a single evaluation). For
//! each realization in turn, one phase is drawn per free frequency `k = 1, 2, ...` as
//! `(next_u64 >> 11) * 2^-53 * 2 pi`, giving a uniform value on `[0, 2 pi)`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::fft;
use crate::math::sin_cos;
use crate::measure::BivariateMeasure;
use crate::{Error, Result};

pub const DEFAULT_REALIZATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurrogateConfig {
    /// Number of realizations averaged (`K`).
    pub realizations: usize,
    pub seed: u64,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        Self { realizations: DEFAULT_REALIZATIONS, seed: 0 }
    }
}

impl SurrogateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidConfig("at least one surrogate realization is required"));
        }
        Ok(())
    }
}

/// Number of coefficients whose phase can be randomized for a real series of length `n`.
pub fn free_phase_count(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// Phase rotations for the free coefficients `1..=free_phase_count(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    series_len: usize,
    phases: Vec<f64>,
}

impl PhaseVector {
    /// The identity rotation.
    pub fn zeros(series_len: usize) -> Self {
        Self { series_len, phases: alloc::vec![0.0; free_phase_count(series_len)] }
    }

    pub fn from_phases(series_len: usize, phases: Vec<f64>) -> Result<Self> {
        let want = free_phase_count(series_len);
        if phases.len() != want {
            return Err(Error::LengthMismatch { left: phases.len(), right: want });
        }
        Ok(Self { series_len, phases })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }
}

/// The generator used for phase draws in evaluation context `stream`.
pub fn phase_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws i.i.d. uniform phases on `[0, 2 pi)` for a series of length `n`.
pub fn draw_phases<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> PhaseVector {
    let phases =
        (0..free_phase_count(n)).map(|_| (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * TAU).collect();
    PhaseVector { series_len: n, phases }
}

/// The Fourier coefficients of a real series, ready for repeated phase rotation.
#[derive(Debug, Clone)]
pub struct Spectrum {
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn of(series: &[f64]) -> Self {
        Self { coefficients: fft::forward_real(series) }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }

    /// Rotated inverse transform, together with the largest imaginary part discarded.
    pub fn rotate(&self, phases: &PhaseVector) -> Result<(Vec<f64>, f64)> {
        let n = self.coefficients.len();
        if phases.series_len != n {
            return Err(Error::LengthMismatch { left: n, right: phases.series_len });
        }
        let mut buf = self.coefficients.clone();
        for (i, &phi) in phases.phases.iter().enumerate() {
            let k = i + 1;
            let (s, c) = sin_cos(phi);
            let rotated = buf[k] * Complex64::new(c, s);
            buf[k] = rotated;
            buf[n - k] = rotated.conj();
        }
        fft::inverse(&mut buf);
        let residue = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        Ok((buf.into_iter().map(|c| c.re).collect(), residue))
    }
}

/// Surrogate of `series` under the given phase rotations.
pub fn apply_phases(series: &[f64], phases: &PhaseVector) -> Result<Vec<f64>> {
    if series.len() != phases.series_len {
        return Err(Error::LengthMismatch { left: series.len(), right: phases.series_len });
    }
    Spectrum::of(series).rotate(phases).map(|(s, _)| s)
}

/// Surrogates of both series under one shared set of rotations.
pub fn surrogate_pair(x: &[f64], y: &[f64], phases: &PhaseVector) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok((apply_phases(x, phases)?, apply_phases(y, phases)?))
}

/// Mean of `measure` over `cfg.realizations` shared-phase surrogate pairs (stream 0).
pub fn surrogate_measure<M>(measure: &M, x: &[f64], y: &[f64], cfg: &SurrogateConfig) -> Result<f64>
where
    M: BivariateMeasure + ?Sized,
{
    surrogate_measure_in_stream(measure, x, y, cfg, 0)
}

/// [`surrogate_measure`] drawing its phases from ChaCha stream `stream`.
pub fn surrogate_measure_in_stream<M>(
    measure: &M,
    x: &[f64],
    y: &[f64],
    cfg: &SurrogateConfig,
    stream: u64,
) -> Result<f64>
where
    M: BivariateMeasure + ?Sized,
{
    cfg.validate()?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: x.len() });
    }
    let mut rng = phase_rng(cfg.seed, stream);
    let draws: Vec<PhaseVector> = (0..cfg.realizations).map(|_| draw_phases(x.len(), &mut rng)).collect();
    let sx = Spectrum::of(x);
    let sy = Spectrum::of(y);
    let mut total = 0.0;
    for (k, phases) in draws.iter().enumerate() {
        let (xs, _) = sx.rotate(phases)?;
        let (ys, _) = sy.rotate(phases)?;
        total += measure.evaluate(&xs, &ys).map_err(|e| e.in_realization(k))?;
    }
    Ok(total / cfg.realizations as f64)
}

/// A measure evaluated on surrogates instead of the original pair.
#[derive(Debug, Clone)]
pub struct SurrogateMeasure<M> {
    pub inner: M,
    pub config: SurrogateConfig,
}

impl<M: BivariateMeasure> BivariateMeasure for SurrogateMeasure<M> {
    fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        surrogate_measure_in_stream(&self.inner, x, y, &self.config, 0)
    }

    fn evaluate_at(&self, context: u64, x: &[f64], y: &[f64]) -> Result<f64> {
        surrogate_measure_in_stream(&self.inner, x, y, &self.config, context)
    }
}
