//! Long-only Markowitz portfolios on a causality-substituted co-dependence matrix.
//!
//! For a co-dependence matrix `psi` of a non-correlation kind the variance uses
//! `theta_ij = psi_ij * sgn(rho_ij)` with the signs taken from the correlation matrix, and
//! a unit diagonal. Before optimization `theta` is symmetrized and its eigenvalues are
//! clipped from below at [`EIGEN_FLOOR`] so that the program is convex.
//!
//! Both programs run FISTA (accelerated projected gradient) with step `1 / L`, `L` the
//! largest eigenvalue of the Hessian, and gradient-based restarts. Iteration stops when
//! no coordinate moves by more than [`TOLERANCE`] or after [`MAX_ITERATIONS`].
//!
//! * Minimum risk minimizes `w' S w` over the simplex (Euclidean projection by sorting).
//!   A target return is met by bisection on the multiplier of `mu' w`.
//! * Maximum Sharpe minimizes `y' S y - 2 (mu - r_f)' y` over `y >= 0` and normalizes
//!   `w = y / sum(y)`. Along any ray `y = t v` the optimum value is
//!   `-((mu - r_f)' v)^2 / v' S v`, so the minimizer points at the tangency portfolio.
//!
//! Both start from equal weights, so a symmetric problem keeps a symmetric solution.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::linalg::{compose, mat_vec, quad_form, symmetric_eigen};
use crate::math::sqrt;
use crate::measure::CodependenceKind;
use crate::{Error, Result};

pub const EIGEN_FLOOR: f64 = 1e-8;
pub const TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CoDependenceMatrix {
    pub assets: Vec<String>,
    /// Row-major `n x n`; entry `(i, j)` is the measure `i -> j`.
    pub values: Vec<f64>,
    pub kind: CodependenceKind,
    /// Correlation matrix whose signs are applied to non-correlation measures.
    pub sign_source: Option<Vec<f64>>,
}

impl CoDependenceMatrix {
    pub fn new(
        assets: Vec<String>,
        values: Vec<f64>,
        kind: CodependenceKind,
        sign_source: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = assets.len();
        if n == 0 {
            return Err(Error::InvalidConfig("co-dependence matrix needs at least one asset"));
        }
        if values.len() != n * n {
            return Err(Error::LengthMismatch { left: values.len(), right: n * n });
        }
        if let Some(s) = &sign_source {
            if s.len() != n * n {
                return Err(Error::LengthMismatch { left: s.len(), right: n * n });
            }
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { assets, values, kind, sign_source })
    }

    pub fn dim(&self) -> usize {
        self.assets.len()
    }

    /// `theta_ij = psi_ij * sgn(rho_ij)` (plain `psi` for correlation), unit diagonal.
    pub fn substituted(&self) -> Vec<f64> {
        let n = self.dim();
        let mut theta = self.values.clone();
        if self.kind != CodependenceKind::Correlation {
            if let Some(signs) = &self.sign_source {
                for (t, s) in theta.iter_mut().zip(signs) {
                    if *s < 0.0 {
                        *t = -*t;
                    } else if *s == 0.0 {
                        *t = 0.0;
                    }
                }
            }
        }
        for i in 0..n {
            theta[i * n + i] = 1.0;
        }
        theta
    }

    /// Symmetrized substituted matrix with eigenvalues clipped at [`EIGEN_FLOOR`].
    pub fn repaired(&self) -> Vec<f64> {
        let n = self.dim();
        let theta = self.substituted();
        let mut sym = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = 0.5 * (theta[i * n + j] + theta[j * n + i]);
            }
        }
        let (mut vals, vecs) = symmetric_eigen(&sym, n);
        if vals.iter().all(|&v| v >= EIGEN_FLOOR) {
            return sym;
        }
        for v in &mut vals {
            *v = v.max(EIGEN_FLOOR);
        }
        let mut out = compose(&vals, &vecs, n);
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (out[i * n + j] + out[j * n + i]);
                out[i * n + j] = m;
                out[j * n + i] = m;
            }
        }
        out
    }
}

fn check_dims(n: usize, weights_or_means: usize, vols: &[f64]) -> Result<()> {
    if weights_or_means != n {
        return Err(Error::LengthMismatch { left: weights_or_means, right: n });
    }
    if vols.len() != n {
        return Err(Error::LengthMismatch { left: vols.len(), right: n });
    }
    if let Some(index) = vols.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// `sum_ij w_i w_j sigma_i sigma_j theta_ij` on the substituted (unrepaired) matrix.
pub fn portfolio_variance(weights: &[f64], vols: &[f64], codep: &CoDependenceMatrix) -> Result<f64> {
    let n = codep.dim();
    check_dims(n, weights.len(), vols)?;
    let theta = codep.substituted();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += weights[i] * weights[j] * vols[i] * vols[j] * theta[i * n + j];
        }
    }
    if total < 0.0 {
        let scale: f64 = (0..n).map(|i| weights[i].abs() * vols[i]).sum::<f64>();
        if total < -1e-12 * scale * scale {
            return Err(Error::NegativeVariance(total));
        }
        return Ok(0.0);
    }
    Ok(total)
}

/// Covariance-like Hessian `sigma_i sigma_j theta_ij` on the repaired matrix.
fn covariance(vols: &[f64], codep: &CoDependenceMatrix) -> Vec<f64> {
    let n = vols.len();
    let theta = codep.repaired();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = vols[i] * vols[j] * theta[i * n + j];
        }
    }
    s
}

fn largest_eigenvalue(s: &[f64], n: usize) -> f64 {
    symmetric_eigen(s, n).0.into_iter().fold(0.0, f64::max)
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut shift = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            shift = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - shift).max(0.0);
    }
}

fn project_orthant(v: &mut [f64]) {
    for x in v.iter_mut() {
        *x = x.max(0.0);
    }
}

/// FISTA with gradient restarts on `x' S x - 2 c' x` over the set given by `project`.
fn fista(s: &[f64], c: &[f64], start: Vec<f64>, lipschitz: f64, project: fn(&mut [f64])) -> Vec<f64> {
    let n = c.len();
    if !(lipschitz > 0.0) {
        return start;
    }
    let step = 1.0 / lipschitz;
    let mut x = start;
    let mut y = x.clone();
    let mut t = 1.0;
    let mut grad = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_ITERATIONS {
        mat_vec(s, &y, &mut grad);
        for i in 0..n {
            next[i] = y[i] - step * 2.0 * (grad[i] - c[i]);
        }
        project(&mut next);
        let moved = (0..n).map(|i| (next[i] - x[i]).abs()).fold(0.0, f64::max);
        let restart = (0..n).map(|i| (y[i] - next[i]) * (next[i] - x[i])).sum::<f64>() > 0.0;
        let t_next = if restart { 1.0 } else { 0.5 * (1.0 + sqrt(1.0 + 4.0 * t * t)) };
        let momentum = if restart { 0.0 } else { (t - 1.0) / t_next };
        for i in 0..n {
            y[i] = next[i] + momentum * (next[i] - x[i]);
        }
        core::mem::swap(&mut x, &mut next);
        t = t_next;
        if moved <= TOLERANCE {
            break;
        }
    }
    x
}

fn min_risk_with_multiplier(s: &[f64], mean_returns: &[f64], lambda: f64, lipschitz: f64) -> Vec<f64> {
    let n = mean_returns.len();
    let c: Vec<f64> = mean_returns.iter().map(|m| 0.5 * lambda * m).collect();
    fista(s, &c, vec![1.0 / n as f64; n], lipschitz, project_simplex)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Long-only minimum-variance weights, optionally constrained to `mu' w = target`.
pub fn min_risk_weights(
    mean_returns: &[f64],
    vols: &[f64],
    codep: &CoDependenceMatrix,
    target_return: Option<f64>,
) -> Result<Vec<f64>> {
    let n = codep.dim();
    check_dims(n, mean_returns.len(), vols)?;
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let s = covariance(vols, codep);
    let lipschitz = 2.0 * largest_eigenvalue(&s, n);
    let Some(target) = target_return else {
        return Ok(min_risk_with_multiplier(&s, mean_returns, 0.0, lipschitz));
    };
    let lo = mean_returns.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mean_returns.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-12 * hi.abs().max(lo.abs()).max(1.0);
    if !(target >= lo - slack && target <= hi + slack) {
        return Err(Error::InfeasibleTarget { target, min: lo, max: hi });
    }
    if target >= hi - slack || target <= lo + slack {
        // Only the extreme-return assets qualify; minimize risk among them.
        let extreme = if target >= hi - slack { hi } else { lo };
        let keep: Vec<usize> = (0..n).filter(|&i| mean_returns[i] == extreme).collect();
        let mut w = vec![0.0; n];
        if keep.len() == 1 {
            w[keep[0]] = 1.0;
            return Ok(w);
        }
        let k = keep.len();
        let sub: Vec<f64> =
            keep.iter().flat_map(|&i| keep.iter().map(move |&j| (i, j))).map(|(i, j)| s[i * n + j]).collect();
        let l = 2.0 * largest_eigenvalue(&sub, k);
        let sub_w = fista(&sub, &vec![0.0; k], vec![1.0 / k as f64; k], l, project_simplex);
        for (&i, v) in keep.iter().zip(sub_w) {
            w[i] = v;
        }
        return Ok(w);
    }
    let achieved = |lambda: f64| {
        let w = min_risk_with_multiplier(&s, mean_returns, lambda, lipschitz);
        let r = dot(&w, mean_returns);
        (w, r)
    };
    let (w0, r0) = achieved(0.0);
    if (r0 - target).abs() <= slack {
        return Ok(w0);
    }
    let sign = if r0 < target { 1.0 } else { -1.0 };
    let mut inner = 0.0;
    let mut outer = sign * lipschitz.max(1e-12) / (hi - lo);
    loop {
        let (w, r) = achieved(outer);
        if (r - target).abs() <= slack {
            return Ok(w);
        }
        if sign * (r - target) > 0.0 {
            break;
        }
        inner = outer;
        outer *= 4.0;
        if outer.abs() > 1e300 {
            return Ok(w);
        }
    }
    let mut best = w0;
    for _ in 0..200 {
        let mid = 0.5 * (inner + outer);
        let (w, r) = achieved(mid);
        best = w;
        if (r - target).abs() <= slack || mid == inner || mid == outer {
            break;
        }
        if sign * (r - target) < 0.0 {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    Ok(best)
}

/// Long-only tangency weights maximizing `(mu' w - r_f) / sigma_p`.
pub fn max_sharpe_weights(
    mean_returns: &[f64],
    vols: &[f64],
    codep: &CoDependenceMatrix,
    risk_free: f64,
) -> Result<Vec<f64>> {
    let n = codep.dim();
    check_dims(n, mean_returns.len(), vols)?;
    let excess: Vec<f64> = mean_returns.iter().map(|m| m - risk_free).collect();
    if excess.iter().all(|&e| !(e > 0.0)) {
        return Err(Error::NoExcessReturn);
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let s = covariance(vols, codep);
    let lipschitz = 2.0 * largest_eigenvalue(&s, n);
    if !(lipschitz > 0.0) {
        // No risk at all: every positive-excess portfolio has unbounded Sharpe.
        let best = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let keep: Vec<bool> = excess.iter().map(|&e| e == best).collect();
        let k = keep.iter().filter(|&&b| b).count() as f64;
        return Ok(keep.iter().map(|&b| if b { 1.0 / k } else { 0.0 }).collect());
    }
    // Scale the start to the unconstrained optimum along the equal-weight ray.
    let ones = vec![1.0 / n as f64; n];
    let along = dot(&excess, &ones).max(0.0) / quad_form(&s, &ones).max(f64::MIN_POSITIVE);
    let start: Vec<f64> = ones.iter().map(|w| w * along).collect();
    let y = fista(&s, &excess, start, lipschitz, project_orthant);
    let total: f64 = y.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NoExcessReturn);
    }
    Ok(y.iter().map(|v| v / total).collect())
}

/// `(mu' w - r_f) / sqrt(w' S w)` on the repaired matrix.
pub fn sharpe_ratio(
    weights: &[f64],
    mean_returns: &[f64],
    vols: &[f64],
    codep: &CoDependenceMatrix,
    risk_free: f64,
) -> Result<f64> {
    let n = codep.dim();
    check_dims(n, mean_returns.len(), vols)?;
    let s = covariance(vols, codep);
    let var = quad_form(&s, weights);
    Ok((dot(weights, mean_returns) - risk_free) / sqrt(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::{Rng, SeedableRng};

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn corr(values: Vec<f64>) -> CoDependenceMatrix {
        let n = (values.len() as f64).sqrt() as usize;
        CoDependenceMatrix::new(names(n), values, CodependenceKind::Correlation, None).unwrap()
    }

    fn random_psd(rng: &mut impl Rng, n: usize) -> Vec<f64> {
        let a: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = (0..n).map(|k| a[i * n + k] * a[j * n + k]).sum();
            }
        }
        let d: Vec<f64> = (0..n).map(|i| c[i * n + i].sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] /= d[i] * d[j];
            }
        }
        c
    }

    #[test]
    fn single_and_uncorrelated_variance() {
        let one = corr(vec![1.0]);
        assert!((portfolio_variance(&[1.0], &[0.2], &one).unwrap() - 0.04).abs() < 1e-15);
        let two = corr(vec![1.0, 0.0, 0.0, 1.0]);
        let v = portfolio_variance(&[0.5, 0.5], &[0.3, 0.3], &two).unwrap();
        assert!((v - 0.09 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn substitution_applies_signs() {
        let rho = vec![1.0, -0.5, 0.2, -0.5, 1.0, 0.0, 0.2, 0.0, 1.0];
        let psi = vec![0.9, 0.7, 0.4, 0.6, 0.8, 0.3, 0.5, 0.1, 0.95];
        let m = CoDependenceMatrix::new(names(3), psi, CodependenceKind::Ccm, Some(rho)).unwrap();
        let theta = m.substituted();
        assert_eq!(theta, vec![1.0, -0.7, 0.4, -0.6, 1.0, 0.0, 0.5, 0.0, 1.0]);
    }

    #[test]
    fn indefinite_matrix_is_flagged() {
        let m = corr(vec![1.0, -1.0, -1.0, -1.0, 1.0, -1.0, -1.0, -1.0, 1.0]);
        let w = [1.0 / 3.0; 3];
        assert!(matches!(portfolio_variance(&w, &[1.0; 3], &m), Err(Error::NegativeVariance(_))));
        let (vals, _) = symmetric_eigen(&m.repaired(), 3);
        assert!(vals.iter().all(|&v| v >= EIGEN_FLOOR * 0.999));
    }

    #[test]
    fn simplex_projection() {
        let mut v = [0.2, 0.2, 0.6];
        project_simplex(&mut v);
        assert!((v[0] - 0.2).abs() < 1e-15 && (v[2] - 0.6).abs() < 1e-15);
        let mut v = [3.0, 0.0, -1.0];
        project_simplex(&mut v);
        assert_eq!(v, [1.0, 0.0, 0.0]);
        let mut v = [0.5, 0.5, 0.5, 0.5];
        project_simplex(&mut v);
        assert_eq!(v, [0.25; 4]);
    }

    #[test]
    fn min_risk_closed_forms() {
        let m = corr(vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let w = min_risk_weights(&[0.0; 3], &[0.2; 3], &m, None).unwrap();
        for x in &w {
            assert!((x - 1.0 / 3.0).abs() < 1e-9);
        }
        let m = corr(vec![1.0, 0.0, 0.0, 1.0]);
        let w = min_risk_weights(&[0.0; 2], &[0.1, 0.2], &m, None).unwrap();
        assert!((w[0] - 0.8).abs() < 1e-8 && (w[1] - 0.2).abs() < 1e-8, "{w:?}");
    }

    #[test]
    fn min_risk_with_target() {
        let m = corr(vec![1.0, 0.0, 0.0, 1.0]);
        let mu = [0.01, 0.03];
        let w = min_risk_weights(&mu, &[0.1, 0.2], &m, Some(0.02)).unwrap();
        assert!((dot(&w, &mu) - 0.02).abs() < 1e-9, "{w:?}");
        assert!((w[0] - 0.5).abs() < 1e-6);
        let w = min_risk_weights(&mu, &[0.1, 0.2], &m, Some(0.03)).unwrap();
        assert_eq!(w, vec![0.0, 1.0]);
        assert!(matches!(min_risk_weights(&mu, &[0.1, 0.2], &m, Some(0.05)), Err(Error::InfeasibleTarget { .. })));
    }

    #[test]
    fn max_sharpe_cases() {
        let m = corr(vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let w = max_sharpe_weights(&[0.10, 0.01, 0.02], &[0.1, 0.3, 0.3], &m, 0.02).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-8, "{w:?}");
        let m = corr(vec![1.0, 0.3, 0.3, 1.0]);
        let w = max_sharpe_weights(&[0.05, 0.05], &[0.2, 0.2], &m, 0.0).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-12);
        assert_eq!(max_sharpe_weights(&[0.0, -0.1], &[0.2, 0.2], &m, 0.0), Err(Error::NoExcessReturn));
    }

    #[test]
    fn optimizers_beat_simple_portfolios() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let n = rng.random_range(2..6);
            let m = corr(random_psd(&mut rng, n));
            let vols: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..0.4)).collect();
            let mu: Vec<f64> = (0..n).map(|_| rng.random_range(-0.02..0.1)).collect();
            let w = min_risk_weights(&mu, &vols, &m, None).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-8 && w.iter().all(|&x| x >= 0.0));
            let best = portfolio_variance(&w, &vols, &m).unwrap();
            let eq = vec![1.0 / n as f64; n];
            assert!(best <= portfolio_variance(&eq, &vols, &m).unwrap() + 1e-12);
            for i in 0..n {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                assert!(best <= portfolio_variance(&e, &vols, &m).unwrap() + 1e-12);
            }
            if mu.iter().any(|&x| x > 0.0) {
                let w = max_sharpe_weights(&mu, &vols, &m, 0.0).unwrap();
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-8);
                let s = sharpe_ratio(&w, &mu, &vols, &m, 0.0).unwrap();
                assert!(s >= sharpe_ratio(&eq, &mu, &vols, &m, 0.0).unwrap() - 1e-9);
            }
        }
    }
}
