//! Two coupled logistic maps.
//!
//! ```text
//! x(t+1) = x(t) * (r_x - r_x * x(t) - beta_yx * y(t))
//! y(t+1) = y(t) * (r_y - r_y * y(t) - beta_xy * x(t))
//! ```
//!
//! The pair decouples into independent chaotic maps when both couplings are zero and
//! shows sign-changing ("mirage") correlations under the default parameters.
//! [`SelfTerm::Literal`] swaps the `y` self-term for `r_y * x(t)`, as the system is
//! sometimes printed.

use alloc::vec::Vec;

use crate::{Error, Result, TimeSeries};

/// Which variable appears in the self-limiting term of the `y` update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfTerm {
    /// `r_y * y(t)`, the standard coupled logistic form.
    #[default]
    Canonical,
    /// `r_y * x(t)`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledDifferenceParams {
    pub r_x: f64,
    pub r_y: f64,
    /// Coupling from `y` into the `x` update.
    pub beta_y_to_x: f64,
    /// Coupling from `x` into the `y` update.
    pub beta_x_to_y: f64,
    pub x0: f64,
    pub y0: f64,
    /// Initial iterations discarded before recording.
    pub transient: usize,
    pub self_term: SelfTerm,
}

impl Default for CoupledDifferenceParams {
    fn default() -> Self {
        Self {
            r_x: 3.8,
            r_y: 3.5,
            beta_y_to_x: 0.02,
            beta_x_to_y: 0.1,
            x0: 0.4,
            y0: 0.2,
            transient: 100,
            self_term: SelfTerm::Canonical,
        }
    }
}

impl CoupledDifferenceParams {
    pub fn validate(&self) -> Result<()> {
        let interior = |v: f64| v > 0.0 && v < 1.0;
        if !interior(self.x0) || !interior(self.y0) {
            return Err(Error::InvalidConfig("initial states must lie in (0, 1)"));
        }
        let finite = [self.r_x, self.r_y, self.beta_y_to_x, self.beta_x_to_y];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("parameters must be finite"));
        }
        Ok(())
    }
}

/// Iterates the system and returns `n` samples of each variable after the transient.
pub fn simulate(params: &CoupledDifferenceParams, n: usize) -> Result<(TimeSeries, TimeSeries)> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidConfig("sample count must be positive"));
    }
    let total = params.transient + n;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let (mut x, mut y) = (params.x0, params.y0);
    for step in 0..total {
        if step >= params.transient {
            xs.push(x);
            ys.push(y);
        }
        let self_y = match params.self_term {
            SelfTerm::Canonical => y,
            SelfTerm::Literal => x,
        };
        let nx = x * (params.r_x - params.r_x * x - params.beta_y_to_x * y);
        let ny = y * (params.r_y - params.r_y * self_y - params.beta_x_to_y * x);
        if !(-10.0..=10.0).contains(&nx) || !(-10.0..=10.0).contains(&ny) {
            return Err(Error::Diverged { step: step + 1 });
        }
        x = nx;
        y = ny;
    }
    Ok((TimeSeries::new(xs)?.with_label("x"), TimeSeries::new(ys)?.with_label("y")))
}
