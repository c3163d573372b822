//! Expected-cost analysis of a critical value.
//!
//! A test rejects when the statistic exceeds `c`. With null and alternative
//! statistic distributions `F0`, `F1`, prior probability `φ` of the null and
//! error costs `P0` (type I) and `P1` (type II), the expected cost is
//! `C(c) = φ(1 − F0(c))P0 + (1 − φ)F1(c)P1`.

use serde::Serialize;

use crate::distributions::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
use crate::error::{ensure_closed_unit, ensure_finite, ensure_open_unit, Error, Result};

/// Distribution of the test statistic under one hypothesis.
pub trait StatisticDistribution {
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    /// Upper tail `1 − F(x)`; override when it can be computed without cancellation.
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gaussian {
    pub mean: f64,
    pub sd: f64,
}

impl Gaussian {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        ensure_finite("mean", mean)?;
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(Error::domain(format!("standard deviation must be positive, got {sd}")));
        }
        Ok(Gaussian { mean, sd })
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.mean + self.sd * std_normal_quantile(p)
    }
}

impl StatisticDistribution for Gaussian {
    fn cdf(&self, x: f64) -> f64 {
        std_normal_cdf((x - self.mean) / self.sd)
    }

    fn pdf(&self, x: f64) -> f64 {
        std_normal_pdf((x - self.mean) / self.sd) / self.sd
    }

    fn sf(&self, x: f64) -> f64 {
        std_normal_cdf((self.mean - x) / self.sd)
    }
}

/// Error costs, prior and Gaussian statistic distributions with common σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostParams {
    cost_type1: f64,
    cost_type2: f64,
    prior_good: f64,
    mu0: f64,
    mu1: f64,
    sigma: f64,
}

impl CostParams {
    /// Costs may be zero; the prior may sit on either end of [0, 1].
    pub fn new(
        cost_type1: f64,
        cost_type2: f64,
        prior_good: f64,
        mu0: f64,
        mu1: f64,
        sigma: f64,
    ) -> Result<Self> {
        for (name, cost) in [("type I cost", cost_type1), ("type II cost", cost_type2)] {
            if !(cost >= 0.0 && cost.is_finite()) {
                return Err(Error::domain(format!("{name} must be non-negative, got {cost}")));
            }
        }
        ensure_closed_unit("prior probability of the null", prior_good)?;
        Gaussian::new(mu0, sigma)?;
        Gaussian::new(mu1, sigma)?;
        Ok(CostParams { cost_type1, cost_type2, prior_good, mu0, mu1, sigma })
    }

    pub fn cost_type1(&self) -> f64 {
        self.cost_type1
    }

    pub fn cost_type2(&self) -> f64 {
        self.cost_type2
    }

    pub fn prior_good(&self) -> f64 {
        self.prior_good
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Cost ratio Ψ = P1/P0.
    pub fn cost_ratio(&self) -> f64 {
        self.cost_type2 / self.cost_type1
    }

    pub fn null(&self) -> Gaussian {
        Gaussian { mean: self.mu0, sd: self.sigma }
    }

    pub fn alternative(&self) -> Gaussian {
        Gaussian { mean: self.mu1, sd: self.sigma }
    }
}

/// Expected cost for arbitrary statistic distributions.
pub fn expected_cost_with<D0, D1>(
    c: f64,
    prior_good: f64,
    cost_type1: f64,
    cost_type2: f64,
    null: &D0,
    alternative: &D1,
) -> f64
where
    D0: StatisticDistribution + ?Sized,
    D1: StatisticDistribution + ?Sized,
{
    prior_good * null.sf(c) * cost_type1 + (1.0 - prior_good) * alternative.cdf(c) * cost_type2
}

pub fn expected_cost(c: f64, params: &CostParams) -> f64 {
    expected_cost_with(
        c,
        params.prior_good,
        params.cost_type1,
        params.cost_type2,
        &params.null(),
        &params.alternative(),
    )
}

/// `C'(c) = −φP0 f0(c) + (1 − φ)P1 f1(c)`.
pub fn cost_derivative(c: f64, params: &CostParams) -> f64 {
    let phi = params.prior_good;
    -phi * params.cost_type1 * params.null().pdf(c)
        + (1.0 - phi) * params.cost_type2 * params.alternative().pdf(c)
}

pub fn cost_second_derivative(c: f64, params: &CostParams) -> f64 {
    let s2 = params.sigma * params.sigma;
    let phi = params.prior_good;
    // f'(x) = −(x − μ)/σ² · f(x)
    phi * params.cost_type1 * (c - params.mu0) / s2 * params.null().pdf(c)
        - (1.0 - phi) * params.cost_type2 * (c - params.mu1) / s2 * params.alternative().pdf(c)
}

/// `c* = σ²/(μ0 − μ1)·log[(1 − φ)P1/(φP0)] + (μ0 + μ1)/2`.
pub fn closed_form_minimizer(params: &CostParams) -> Result<f64> {
    check_minimizable(params)?;
    let p = params;
    let log_ratio = ((1.0 - p.prior_good) * p.cost_type2 / (p.prior_good * p.cost_type1)).ln();
    Ok(p.sigma * p.sigma / (p.mu0 - p.mu1) * log_ratio + 0.5 * (p.mu0 + p.mu1))
}

fn check_minimizable(params: &CostParams) -> Result<()> {
    if params.mu0 >= params.mu1 {
        return Err(Error::domain(format!(
            "the stationary point is a minimum only when mu0 < mu1 (got mu0 = {}, mu1 = {})",
            params.mu0, params.mu1
        )));
    }
    ensure_open_unit("prior probability of the null", params.prior_good)?;
    if params.cost_type1 <= 0.0 || params.cost_type2 <= 0.0 {
        return Err(Error::domain("both error costs must be positive to locate a minimum"));
    }
    Ok(())
}

/// Result of the derivative-free search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericMinimum {
    pub critical_value: f64,
    pub cost: f64,
    pub iterations: u32,
}

/// Golden-section search on `[μ0 − 10σ, μ1 + 10σ]`, polished by Newton steps
/// on the first-order condition.
pub fn numeric_minimizer(params: &CostParams) -> Result<NumericMinimum> {
    check_minimizable(params)?;
    let f = |c: f64| expected_cost(c, params);
    let (mut a, mut b) = (params.mu0 - 10.0 * params.sigma, params.mu1 + 10.0 * params.sigma);
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while b - a > 1e-9 * params.sigma && iterations < 500 {
        iterations += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let mut c = 0.5 * (a + b);
    for _ in 0..8 {
        let h = cost_second_derivative(c, params);
        if h.is_nan() || h <= 0.0 {
            break;
        }
        let step = cost_derivative(c, params) / h;
        if !step.is_finite() || step.abs() > params.sigma {
            break;
        }
        c -= step;
        iterations += 1;
        if step.abs() < 1e-15 * c.abs().max(params.sigma) {
            break;
        }
    }
    Ok(NumericMinimum { critical_value: c, cost: f(c), iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostTrend {
    IncreasingInAlpha,
    DecreasingInAlpha,
    Stationary,
}

/// Whether raising α (lowering `c`) raises or lowers the expected cost at `c`.
///
/// Cost increases with α exactly when `Ψ(1 − φ)/φ < f0(c)/f1(c)`. The
/// inequality is compared as `φP0 f0(c)` against `(1 − φ)P1 f1(c)`; a relative
/// gap below 1e-9 counts as stationary.
pub fn cost_monotonicity_region(c: f64, params: &CostParams) -> CostTrend {
    let phi = params.prior_good;
    let lhs = phi * params.cost_type1 * params.null().pdf(c);
    let rhs = (1.0 - phi) * params.cost_type2 * params.alternative().pdf(c);
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 || (lhs - rhs).abs() <= 1e-9 * scale {
        CostTrend::Stationary
    } else if rhs < lhs {
        CostTrend::IncreasingInAlpha
    } else {
        CostTrend::DecreasingInAlpha
    }
}

/// α = 1 − F0(c).
pub fn alpha_from_critical(c: f64, params: &CostParams) -> f64 {
    params.null().sf(c)
}

/// Inverse of [`alpha_from_critical`]: `c = μ0 + σΦ⁻¹(1 − α)`.
pub fn critical_from_alpha(alpha: f64, params: &CostParams) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    Ok(params.mu0 - params.sigma * std_normal_quantile(alpha))
}
