//! Distribution of the p-value of a one-sample Gaussian test when the
//! alternative holds, and the reproducibility probability of an observed
//! result.

use serde::Serialize;

use crate::distributions::{std_normal_cdf, std_normal_quantile, std_normal_upper_critical};
use crate::error::{ensure_finite, ensure_open_unit, Error, Result};
use crate::error_tradeoff::rejection_probability;
use crate::Tail;

/// Standardized effect `δ = μ/σ` and sample count of the study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlternativeSpec {
    delta: f64,
    n: u32,
}

impl AlternativeSpec {
    pub fn new(delta: f64, n: u32) -> Result<Self> {
        ensure_finite("delta", delta)?;
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        Ok(AlternativeSpec { delta, n })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `√n·δ`.
    pub fn shift(&self) -> f64 {
        f64::from(self.n).sqrt() * self.delta
    }
}

/// An observed study outcome, given in any of three equivalent forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservedResult {
    /// Two-sided p-value.
    PValue(f64),
    /// Observed standardized statistic `d_o = √n·δ_o`.
    Statistic(f64),
    Estimate { estimate: f64, stderr: f64 },
}

impl ObservedResult {
    /// `d_o`; from a p-value via `d_o = −Φ⁻¹(p_o/2)`.
    pub fn statistic(&self) -> Result<f64> {
        match *self {
            ObservedResult::PValue(p) => {
                ensure_open_unit("observed p-value", p)?;
                Ok(-std_normal_quantile(0.5 * p))
            }
            ObservedResult::Statistic(d) => ensure_finite("observed statistic", d),
            ObservedResult::Estimate { estimate, stderr } => {
                ensure_finite("estimate", estimate)?;
                if !(stderr > 0.0 && stderr.is_finite()) {
                    return Err(Error::domain(format!("standard error must be positive, got {stderr}")));
                }
                Ok(estimate / stderr)
            }
        }
    }

    /// Two-sided p-value `2(1 − Φ(|d_o|))`.
    pub fn p_value(&self) -> Result<f64> {
        match *self {
            ObservedResult::PValue(p) => ensure_open_unit("observed p-value", p),
            _ => Ok(2.0 * std_normal_cdf(-self.statistic()?.abs())),
        }
    }
}

/// `g_δ(p) = φ(c_p − √n·δ)/φ(c_p)` for the one-sided test.
pub fn pdf_under_alternative(p: f64, spec: &AlternativeSpec) -> Result<f64> {
    ensure_open_unit("p", p)?;
    let c = std_normal_upper_critical(p);
    let a = spec.shift();
    // φ(c − a)/φ(c) = exp(a·c − a²/2)
    Ok((a * c - 0.5 * a * a).exp())
}

/// `G_δ(p) = 1 − Φ(c_p − √n·δ)` for the one-sided test.
pub fn cdf_under_alternative(p: f64, spec: &AlternativeSpec) -> Result<f64> {
    cdf_under_alternative_tail(p, spec, Tail::OneSidedUpper)
}

/// `Pr(P ≤ p)` under the alternative for either tail convention.
pub fn cdf_under_alternative_tail(p: f64, spec: &AlternativeSpec, tail: Tail) -> Result<f64> {
    ensure_open_unit("p", p)?;
    Ok(rejection_probability(p, spec.shift(), tail))
}

/// `F(α) = 1 − Φ(c_{α/2} − d_o) + Φ(−c_{α/2} − d_o)`: the probability that a
/// two-sided repeat at level α rejects when the true effect equals the
/// observed one.
pub fn reproducibility_probability(observed: &ObservedResult, alpha: f64) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    let d = observed.statistic()?;
    Ok(rejection_probability(alpha, d, Tail::TwoSided))
}
