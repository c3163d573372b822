//! Type I / type II error trade-off for a one-sample Gaussian test with known
//! dispersion, and the matching sample-size rule.

use serde::Serialize;

use crate::distributions::{std_normal_cdf, std_normal_upper_critical};
use crate::error::{ensure_finite, ensure_open_unit, Error, Result};
use crate::Tail;

/// Design of a one-sample test: standardized effect `δ = μ/σ`, sample count and tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianTestModel {
    effect_size: f64,
    n: u32,
    tail: Tail,
}

impl GaussianTestModel {
    pub fn new(effect_size: f64, n: u32, tail: Tail) -> Result<Self> {
        ensure_finite("effect size", effect_size)?;
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        Ok(GaussianTestModel { effect_size, n, tail })
    }

    pub fn one_sided(effect_size: f64, n: u32) -> Result<Self> {
        Self::new(effect_size, n, Tail::OneSidedUpper)
    }

    pub fn effect_size(&self) -> f64 {
        self.effect_size
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Mean of the standardized statistic under the alternative, `√n·δ`.
    pub fn noncentrality(&self) -> f64 {
        f64::from(self.n).sqrt() * self.effect_size
    }
}

/// Probability that a test at level `alpha` rejects when the statistic is
/// N(shift, 1).
pub(crate) fn rejection_probability(alpha: f64, shift: f64, tail: Tail) -> f64 {
    match tail {
        Tail::OneSidedUpper => {
            let c = std_normal_upper_critical(alpha);
            std_normal_cdf(shift - c)
        }
        Tail::TwoSided => {
            let c = std_normal_upper_critical(0.5 * alpha);
            std_normal_cdf(shift - c) + std_normal_cdf(-c - shift)
        }
    }
}

/// β(α) = Φ(c_α − √n·δ) for the one-sided test.
pub fn type2_error(alpha: f64, model: &GaussianTestModel) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    let shift = model.noncentrality();
    Ok(match model.tail {
        Tail::OneSidedUpper => std_normal_cdf(std_normal_upper_critical(alpha) - shift),
        Tail::TwoSided => 1.0 - rejection_probability(alpha, shift, Tail::TwoSided),
    })
}

/// 1 − β(α). Evaluated directly so it stays accurate when β is close to 1.
pub fn power(alpha: f64, model: &GaussianTestModel) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    Ok(rejection_probability(alpha, model.noncentrality(), model.tail))
}

/// Smallest whole n with n ≥ {σ(c_α + c_β)/μ*}².
pub fn required_sample_size(alpha: f64, beta: f64, mu_star: f64, sigma: f64) -> Result<u64> {
    let n = sample_size_exact(alpha, beta, mu_star, sigma)?;
    if n > u64::MAX as f64 {
        return Err(Error::Infeasible(format!("required sample size {n:e} overflows")));
    }
    Ok((n.ceil() as u64).max(1))
}

/// The real-valued sample size before rounding up.
pub fn sample_size_exact(alpha: f64, beta: f64, mu_star: f64, sigma: f64) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    ensure_open_unit("beta", beta)?;
    ensure_finite("mu_star", mu_star)?;
    ensure_finite("sigma", sigma)?;
    if mu_star == 0.0 {
        return Err(Error::domain("mu_star = 0 needs an infinite sample"));
    }
    if sigma <= 0.0 {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let c_alpha = std_normal_upper_critical(alpha);
    let c_beta = std_normal_upper_critical(beta);
    let root = sigma * (c_alpha + c_beta) / mu_star;
    Ok(root * root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_model_gives_beta_one_minus_alpha() {
        let m = GaussianTestModel::one_sided(0.0, 1).unwrap();
        assert!((type2_error(0.05, &m).unwrap() - 0.95).abs() < 1e-12);
        assert!((power(0.05, &m).unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn worked_example() {
        let m = GaussianTestModel::one_sided(0.5, 10).unwrap();
        // 40-digit reference: Φ(1.644854 − 1.581139)
        assert!((type2_error(0.05, &m).unwrap() - 0.525_401_338_754_555_5).abs() < 1e-12);
        assert!((power(0.05, &m).unwrap() - 0.474_598_661_245_444_5).abs() < 1e-12);
    }

    #[test]
    fn sample_size_example() {
        let n = sample_size_exact(0.05, 0.2, 0.5, 1.0).unwrap();
        assert!((n - 24.730_228_928_079_08).abs() < 1e-9);
        assert_eq!(required_sample_size(0.05, 0.2, 0.5, 1.0).unwrap(), 25);
        let doubled = sample_size_exact(0.05, 0.2, 0.5, 2.0).unwrap();
        assert!((doubled / n - 4.0).abs() < 1e-12);
        assert!(required_sample_size(0.005, 0.2, 0.5, 1.0).unwrap() > 25);
    }

    #[test]
    fn invalid_inputs() {
        let m = GaussianTestModel::one_sided(0.5, 10).unwrap();
        assert!(type2_error(0.0, &m).is_err());
        assert!(type2_error(1.0, &m).is_err());
        assert!(GaussianTestModel::one_sided(0.5, 0).is_err());
        assert!(GaussianTestModel::one_sided(f64::NAN, 3).is_err());
        assert!(matches!(required_sample_size(0.05, 0.2, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(required_sample_size(0.05, 0.2, 0.5, -1.0).is_err());
    }

    #[test]
    fn two_sided_null_size() {
        let m = GaussianTestModel::new(0.0, 4, Tail::TwoSided).unwrap();
        assert!((power(0.05, &m).unwrap() - 0.05).abs() < 1e-12);
    }
}
