//! Diagnostic-screening model of the false positive rate.
//!
//! `Pr(H0 | +) = αφ / (αφ + (1 − β)(1 − φ))`, its prior-odds form with
//! `R = (1 − φ)/φ`, its partial derivatives, the variant that couples β to α
//! through a Gaussian test, and the replication-rate factor obtained by solving
//! the odds form for α.

use serde::Serialize;

use crate::error::{ensure_finite, ensure_open_unit, Error, Result};
use crate::error_tradeoff::{type2_error, GaussianTestModel};

/// Inputs to the screening formula; all three lie strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScreeningParams {
    alpha: f64,
    power: f64,
    prior_null: f64,
}

impl ScreeningParams {
    pub fn new(alpha: f64, power: f64, prior_null: f64) -> Result<Self> {
        ensure_open_unit("alpha", alpha)?;
        ensure_open_unit("power", power)?;
        ensure_open_unit("prior probability of the null", prior_null)?;
        Ok(ScreeningParams { alpha, power, prior_null })
    }

    pub fn from_odds(alpha: f64, power: f64, odds: PriorOdds) -> Result<Self> {
        Self::new(alpha, power, odds.prior_null())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn beta(&self) -> f64 {
        1.0 - self.power
    }

    pub fn prior_null(&self) -> f64 {
        self.prior_null
    }

    pub fn odds(&self) -> PriorOdds {
        PriorOdds((1.0 - self.prior_null) / self.prior_null)
    }
}

/// Prior odds `R = (1 − φ)/φ` that the alternative holds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PriorOdds(f64);

impl PriorOdds {
    pub fn new(r: f64) -> Result<Self> {
        if r > 0.0 && r.is_finite() {
            Ok(PriorOdds(r))
        } else {
            Err(Error::domain(format!("prior odds must be positive and finite, got {r}")))
        }
    }

    pub fn from_prior_null(prior_null: f64) -> Result<Self> {
        ensure_open_unit("prior probability of the null", prior_null)?;
        Ok(PriorOdds((1.0 - prior_null) / prior_null))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// φ = 1/(1 + R).
    pub fn prior_null(self) -> f64 {
        1.0 / (1.0 + self.0)
    }
}

pub fn false_positive_rate(params: &ScreeningParams) -> f64 {
    let false_pos = params.alpha * params.prior_null;
    let true_pos = params.power * (1.0 - params.prior_null);
    false_pos / (false_pos + true_pos)
}

/// `α / (α + (1 − β)R)`.
pub fn false_positive_rate_odds(alpha: f64, power: f64, odds: PriorOdds) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    ensure_open_unit("power", power)?;
    // R = α/(1 − β) is the half-rate boundary; pin it so rounding in (1 − β)R
    // cannot push the boundary value off 1/2.
    if odds.value() == alpha / power {
        return Ok(0.5);
    }
    Ok(alpha / (alpha + power * odds.value()))
}

/// Prior odds at which the false positive rate is exactly one half.
pub fn half_rate_odds(alpha: f64, power: f64) -> Result<PriorOdds> {
    ensure_open_unit("alpha", alpha)?;
    ensure_open_unit("power", power)?;
    PriorOdds::new(alpha / power)
}

/// Partial derivatives of the false positive rate with respect to α and β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FprGradient {
    pub d_alpha: f64,
    pub d_beta: f64,
}

pub fn fpr_gradient(params: &ScreeningParams) -> FprGradient {
    let phi = params.prior_null;
    let power = params.power;
    let denom = params.alpha * phi + power * (1.0 - phi);
    let denom2 = denom * denom;
    FprGradient {
        d_alpha: phi * power * (1.0 - phi) / denom2,
        d_beta: params.alpha * phi * (1.0 - phi) / denom2,
    }
}

/// One row of a coupled false-positive-rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FprPoint {
    pub alpha: f64,
    pub beta: f64,
    pub fpr: f64,
}

/// False positive rate along a grid of α where β is the type II error of a
/// one-sided Gaussian test at each α.
pub fn combined_fpr_curve(
    effect_size: f64,
    n: u32,
    prior_null: f64,
    alphas: &[f64],
) -> Result<Vec<FprPoint>> {
    let model = GaussianTestModel::one_sided(effect_size, n)?;
    ensure_open_unit("prior probability of the null", prior_null)?;
    alphas
        .iter()
        .map(|&alpha| {
            let beta = type2_error(alpha, &model)?;
            let power = 1.0 - beta;
            if power <= 0.0 {
                return Err(Error::domain(format!("power underflows to zero at alpha = {alpha}")));
            }
            let fpr = false_positive_rate(&ScreeningParams::new(alpha, power, prior_null)?);
            Ok(FprPoint { alpha, beta, fpr })
        })
        .collect()
}

/// Factor by which α must be divided to raise the true positive rate γ
/// `n_fold` times: `r = n(1 − γ)/(1 − nγ)`. Independent of `(1 − β)R`.
pub fn replication_threshold_factor(gamma: f64, n_fold: f64) -> Result<f64> {
    ensure_open_unit("true positive rate", gamma)?;
    ensure_finite("n_fold", n_fold)?;
    if n_fold < 1.0 {
        return Err(Error::domain(format!("n_fold must be at least 1, got {n_fold}")));
    }
    let target = n_fold * gamma;
    if target >= 1.0 {
        return Err(Error::Infeasible(format!(
            "cannot raise a true positive rate of {gamma} by a factor of {n_fold}: \
             requires gamma < 1/{n_fold}"
        )));
    }
    Ok(n_fold * (1.0 - gamma) / (1.0 - target))
}

/// True positive rate at which dividing α by `r` raises γ `n_fold` times.
/// Inverts [`replication_threshold_factor`]: `γ = (r − n)/(n(r − 1))`.
pub fn gamma_for_factor(r: f64, n_fold: f64) -> Result<f64> {
    ensure_finite("r", r)?;
    ensure_finite("n_fold", n_fold)?;
    if n_fold < 1.0 {
        return Err(Error::domain(format!("n_fold must be at least 1, got {n_fold}")));
    }
    if r <= n_fold {
        return Err(Error::Infeasible(format!(
            "a threshold factor of {r} cannot raise the true positive rate {n_fold}-fold; \
             the factor must exceed {n_fold}"
        )));
    }
    Ok((r - n_fold) / (n_fold * (r - 1.0)))
}

/// α that yields true positive rate γ given `κ = (1 − β)R`: `κ(1 − γ)/γ`.
pub fn alpha_for_true_positive_rate(gamma: f64, kappa: f64) -> Result<f64> {
    ensure_open_unit("true positive rate", gamma)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    Ok(kappa * (1.0 - gamma) / gamma)
}
