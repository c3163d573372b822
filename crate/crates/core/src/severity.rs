//! Severity assessment of one-directional claims from summary statistics.
//!
//! For a claim `θ > b` the severity is the probability of a worse fit
//! (an estimate smaller than the one observed) if `θ` were only `b`:
//! `SEV = F((estimate − b)/stderr)` with `F` the reference distribution.
//! The same machinery gives confidence limits and p-values, which are dual to
//! severity at fixed levels.

use serde::{Deserialize, Serialize};

use crate::distributions::{std_normal_cdf, std_normal_quantile, t_cdf, student_t_quantile};
use crate::error::{ensure_finite, ensure_open_unit, Error, Result};
use crate::Tail;

/// Point estimate, its standard error, observation count and degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStats {
    estimate: f64,
    stderr: f64,
    n: u32,
    df: u32,
}

impl SummaryStats {
    pub fn new(estimate: f64, stderr: f64, n: u32, df: u32) -> Result<Self> {
        ensure_finite("estimate", estimate)?;
        if !(stderr > 0.0 && stderr.is_finite()) {
            return Err(Error::domain(format!("standard error must be positive, got {stderr}")));
        }
        if n == 0 {
            return Err(Error::domain("observation count must be at least 1"));
        }
        if df == 0 {
            return Err(Error::domain("degrees of freedom must be at least 1"));
        }
        Ok(SummaryStats { estimate, stderr, n, df })
    }

    /// Regression convention: `df = n − 2`.
    pub fn for_regression(estimate: f64, stderr: f64, n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("a regression needs at least 3 observations, got {n}")));
        }
        Self::new(estimate, stderr, n, n - 2)
    }

    pub fn estimate(&self) -> f64 {
        self.estimate
    }

    pub fn stderr(&self) -> f64 {
        self.stderr
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn df(&self) -> u32 {
        self.df
    }

    /// `estimate / stderr`.
    pub fn statistic(&self) -> f64 {
        self.estimate / self.stderr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimDirection {
    GreaterThan,
    LessThan,
}

/// The claim `θ > bound` or `θ < bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeverityClaim {
    pub direction: ClaimDirection,
    pub bound: f64,
}

impl SeverityClaim {
    pub fn greater_than(bound: f64) -> Self {
        SeverityClaim { direction: ClaimDirection::GreaterThan, bound }
    }

    pub fn less_than(bound: f64) -> Self {
        SeverityClaim { direction: ClaimDirection::LessThan, bound }
    }
}

/// Sampling distribution used for the standardized estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceDist {
    #[default]
    Normal,
    /// Student-t with the summary's degrees of freedom.
    StudentT,
}

impl ReferenceDist {
    fn cdf(self, x: f64, df: u32) -> f64 {
        match self {
            ReferenceDist::Normal => std_normal_cdf(x),
            ReferenceDist::StudentT => t_cdf(x, f64::from(df)),
        }
    }

    fn quantile(self, p: f64, df: u32) -> Result<f64> {
        match self {
            ReferenceDist::Normal => Ok(std_normal_quantile(p)),
            ReferenceDist::StudentT => student_t_quantile(p, df),
        }
    }
}

pub fn severity(stats: &SummaryStats, claim: &SeverityClaim, reference: ReferenceDist) -> Result<f64> {
    ensure_finite("claim bound", claim.bound)?;
    let z = (stats.estimate - claim.bound) / stats.stderr;
    Ok(match claim.direction {
        ClaimDirection::GreaterThan => reference.cdf(z, stats.df),
        ClaimDirection::LessThan => reference.cdf(-z, stats.df),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeverityPoint {
    pub bound: f64,
    pub severity: f64,
}

/// Severity of `θ > b` for each bound `b`.
pub fn severity_curve(
    stats: &SummaryStats,
    bounds: &[f64],
    reference: ReferenceDist,
) -> Result<Vec<SeverityPoint>> {
    bounds
        .iter()
        .map(|&bound| {
            Ok(SeverityPoint {
                bound,
                severity: severity(stats, &SeverityClaim::greater_than(bound), reference)?,
            })
        })
        .collect()
}

/// Lower confidence limit at confidence `level`, the bound `b` for which the
/// claim `θ > b` passes with severity exactly `level`.
pub fn confidence_lower_limit(stats: &SummaryStats, level: f64, reference: ReferenceDist) -> Result<f64> {
    ensure_open_unit("confidence level", level)?;
    if level == 0.5 {
        return Ok(stats.estimate);
    }
    Ok(stats.estimate - reference.quantile(level, stats.df)? * stats.stderr)
}

/// p-value of `H0: θ = 0` from the standardized estimate.
pub fn p_value_from_summary(stats: &SummaryStats, tail: Tail, reference: ReferenceDist) -> f64 {
    let z = stats.statistic();
    match tail {
        Tail::OneSidedUpper => reference.cdf(-z, stats.df),
        Tail::TwoSided => (2.0 * reference.cdf(-z.abs(), stats.df)).min(1.0),
    }
}
