//! Small descriptive statistics shared by the measures and the finance routines.

use crate::math::sqrt;
use crate::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance (divides by `n`).
pub fn variance(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (divides by `n - 1`).
pub fn sample_std(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    let ss: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    sqrt(ss / (x.len() - 1) as f64)
}

/// Pearson product-moment correlation.
///
/// Fails with [`Error::ConstantSeries`] when either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: x.len() });
    }
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::ConstantSeries);
    }
    // sqrt(s * s) == s exactly, so a series correlates with itself at exactly 1.
    let prod = sxx * syy;
    let den = if prod.is_normal() { sqrt(prod) } else { sqrt(sxx) * sqrt(syy) };
    Ok((sxy / den).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn sample_std_of_pair() {
        assert!((sample_std(&[0.0, 2.0]) - core::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn self_correlation_is_exactly_one() {
        let mut v = 0.3;
        for n in 2..300 {
            let x: Vec<f64> = (0..n)
                .map(|_| {
                    v = 3.9 * v * (1.0 - v);
                    v * 1e3 - 7.0
                })
                .collect();
            assert_eq!(pearson(&x, &x).unwrap(), 1.0);
            let neg: Vec<f64> = x.iter().map(|a| -a).collect();
            assert_eq!(pearson(&x, &neg).unwrap(), -1.0);
        }
    }

    #[test]
    fn pearson_rejects_constant() {
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::ConstantSeries));
    }
}
