//! Monte Carlo counterparts of the analytic formulas.
//!
//! Trials are split into fixed-size chunks. Chunk `i` draws from a
//! `ChaCha8Rng` seeded with `seed_from_u64(seed)` and switched to stream `i`,
//! so every chunk is independent of how chunks are scheduled. Chunk tallies
//! are merged by addition, which makes serial and parallel runs bit-identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::decision_cost::CostParams;
use crate::distributions::{std_normal_cdf, std_normal_upper_critical};
use crate::error::{ensure_closed_unit, ensure_finite, ensure_open_unit, Error, Result};
use crate::Tail;

/// Identifier of the generator family and splitting rule, recorded in outputs.
pub const RNG_ALGORITHM: &str = "chacha8:seed_from_u64(seed),stream=chunk_index";
/// Trials per chunk. Part of the reproducibility contract.
pub const CHUNK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub num_trials: u64,
    pub seed: u64,
    /// Probability that a simulated study tests a true null; 0 and 1 allowed.
    pub prior_null: f64,
    pub alpha: f64,
    pub effect_size: f64,
    pub n_per_study: u32,
    pub tail: Tail,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_trials == 0 {
            return Err(Error::domain("num_trials must be at least 1"));
        }
        ensure_closed_unit("prior_null", self.prior_null)?;
        ensure_open_unit("alpha", self.alpha)?;
        ensure_finite("effect_size", self.effect_size)?;
        if self.n_per_study == 0 {
            return Err(Error::domain("n_per_study must be at least 1"));
        }
        Ok(())
    }

    fn shift(&self) -> f64 {
        f64::from(self.n_per_study).sqrt() * self.effect_size
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `f(chunk_index, len)` on every chunk and returns the results in chunk order.
fn map_chunks<T, F>(num_trials: u64, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let chunks = num_trials.div_ceil(CHUNK_SIZE);
    let len_of = |i: u64| (num_trials - i * CHUNK_SIZE).min(CHUNK_SIZE);
    match execution {
        Execution::Parallel => (0..chunks).into_par_iter().map(|i| f(i, len_of(i))).collect(),
        Execution::Serial => (0..chunks).map(|i| f(i, len_of(i))).collect(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    true_pos: u64,
    false_pos: u64,
    true_neg: u64,
    false_neg: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            true_pos: self.true_pos + o.true_pos,
            false_pos: self.false_pos + o.false_pos,
            true_neg: self.true_neg + o.true_neg,
            false_neg: self.false_neg + o.false_neg,
        }
    }
}

/// Confusion counts from a family of simulated studies and the rates derived
/// from them. Rates whose denominator is zero are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimOutcome {
    pub num_trials: u64,
    pub true_pos: u64,
    pub false_pos: u64,
    pub true_neg: u64,
    pub false_neg: u64,
    /// false_pos / (false_pos + true_pos)
    pub empirical_fpr: Option<f64>,
    pub mc_stderr_fpr: Option<f64>,
    /// true_pos / (true_pos + false_neg)
    pub empirical_power: Option<f64>,
    pub mc_stderr_power: Option<f64>,
    /// false_pos / (false_pos + true_neg)
    pub empirical_size: Option<f64>,
    pub mc_stderr_size: Option<f64>,
}

fn ratio(num: u64, den: u64) -> (Option<f64>, Option<f64>) {
    if den == 0 {
        return (None, None);
    }
    let p = num as f64 / den as f64;
    (Some(p), Some((p * (1.0 - p) / den as f64).sqrt()))
}

impl SimOutcome {
    fn from_tally(num_trials: u64, t: Tally) -> Self {
        let (empirical_fpr, mc_stderr_fpr) = ratio(t.false_pos, t.false_pos + t.true_pos);
        let (empirical_power, mc_stderr_power) = ratio(t.true_pos, t.true_pos + t.false_neg);
        let (empirical_size, mc_stderr_size) = ratio(t.false_pos, t.false_pos + t.true_neg);
        SimOutcome {
            num_trials,
            true_pos: t.true_pos,
            false_pos: t.false_pos,
            true_neg: t.true_neg,
            false_neg: t.false_neg,
            empirical_fpr,
            mc_stderr_fpr,
            empirical_power,
            mc_stderr_power,
            empirical_size,
            mc_stderr_size,
        }
    }

    pub fn positives(&self) -> u64 {
        self.true_pos + self.false_pos
    }

    /// The empirical false positive rate, or an error when no study rejected.
    pub fn fpr(&self) -> Result<f64> {
        self.empirical_fpr
            .ok_or_else(|| Error::Degenerate("no positives: the empirical false positive rate is undefined".into()))
    }
}

fn rejects(stat: f64, critical: f64, tail: Tail) -> bool {
    match tail {
        Tail::OneSidedUpper => stat > critical,
        Tail::TwoSided => stat.abs() > critical,
    }
}

fn critical_value(alpha: f64, tail: Tail) -> f64 {
    match tail {
        Tail::OneSidedUpper => std_normal_upper_critical(alpha),
        Tail::TwoSided => std_normal_upper_critical(0.5 * alpha),
    }
}

pub fn simulate_studies(config: &SimConfig) -> Result<SimOutcome> {
    simulate_studies_with(config, Execution::Parallel)
}

/// Each trial draws the truth (null with probability `prior_null`), then a
/// standardized statistic from N(0, 1) or N(√n·δ, 1), and rejects beyond `c_α`.
pub fn simulate_studies_with(config: &SimConfig, execution: Execution) -> Result<SimOutcome> {
    config.validate()?;
    let critical = critical_value(config.alpha, config.tail);
    let shift = config.shift();
    let tallies = map_chunks(config.num_trials, execution, |chunk, len| {
        let mut rng = chunk_rng(config.seed, chunk);
        let mut t = Tally::default();
        for _ in 0..len {
            let is_null = rng.random::<f64>() < config.prior_null;
            let z: f64 = rng.sample(StandardNormal);
            let stat = if is_null { z } else { z + shift };
            match (is_null, rejects(stat, critical, config.tail)) {
                (true, true) => t.false_pos += 1,
                (true, false) => t.true_neg += 1,
                (false, true) => t.true_pos += 1,
                (false, false) => t.false_neg += 1,
            }
        }
        t
    });
    let total = tallies.into_iter().fold(Tally::default(), |a, b| a + b);
    Ok(SimOutcome::from_tally(config.num_trials, total))
}

/// Empirical p-value distribution compared with a reference CDF.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PValueSummary {
    pub num_draws: u64,
    /// Empirical quantiles of the p-value at orders 0.1, …, 0.9.
    pub deciles: Vec<f64>,
    /// Empirical CDF at 0.1, …, 0.9.
    pub ecdf_at_deciles: Vec<f64>,
    /// Reference CDF at 0.1, …, 0.9.
    pub reference_at_deciles: Vec<f64>,
    /// Binomial standard error of the empirical CDF at each decile point.
    pub stderr_at_deciles: Vec<f64>,
    /// Kolmogorov distance between the empirical and reference CDFs.
    pub sup_distance: f64,
}

pub fn simulate_pvalues(config: &SimConfig) -> Result<PValueSummary> {
    simulate_pvalues_with(config, Execution::Parallel)
}

/// Draws p-values of the test in `config` under the alternative `δ`
/// (`prior_null` is ignored; `δ = 0` gives the null distribution).
pub fn simulate_pvalues_with(config: &SimConfig, execution: Execution) -> Result<PValueSummary> {
    config.validate()?;
    let shift = config.shift();
    let tail = config.tail;
    let p_of = move |stat: f64| match tail {
        Tail::OneSidedUpper => std_normal_cdf(-stat),
        Tail::TwoSided => (2.0 * std_normal_cdf(-stat.abs())).min(1.0),
    };
    let chunks = map_chunks(config.num_trials, execution, |chunk, len| {
        let mut rng = chunk_rng(config.seed, chunk);
        (0..len)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                p_of(z + shift)
            })
            .collect::<Vec<f64>>()
    });
    let mut ps: Vec<f64> = chunks.into_iter().flatten().collect();
    ps.sort_by(f64::total_cmp);

    let reference = |p: f64| -> f64 {
        if p <= 0.0 {
            0.0
        } else if p >= 1.0 {
            1.0
        } else {
            crate::error_tradeoff::rejection_probability(p, shift, tail)
        }
    };
    let n = ps.len() as f64;
    let mut sup_distance = 0.0_f64;
    for (i, &p) in ps.iter().enumerate() {
        let f = reference(p);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        sup_distance = sup_distance.max(above).max(below);
    }

    let orders: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let deciles = orders
        .iter()
        .map(|&q| {
            let idx = ((q * n).ceil() as usize).clamp(1, ps.len()) - 1;
            ps[idx]
        })
        .collect();
    let ecdf_at_deciles: Vec<f64> = orders
        .iter()
        .map(|&q| ps.partition_point(|&p| p <= q) as f64 / n)
        .collect();
    let reference_at_deciles: Vec<f64> = orders.iter().map(|&q| reference(q)).collect();
    let stderr_at_deciles = reference_at_deciles
        .iter()
        .map(|&g| (g * (1.0 - g) / n).sqrt())
        .collect();
    Ok(PValueSummary {
        num_draws: config.num_trials,
        deciles,
        ecdf_at_deciles,
        reference_at_deciles,
        stderr_at_deciles,
        sup_distance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub num_trials: u64,
}

pub fn simulate_expected_cost(c: f64, params: &CostParams, config: &SimConfig) -> Result<CostEstimate> {
    simulate_expected_cost_with(c, params, config, Execution::Parallel)
}

/// Average incurred cost of the rule "reject when the statistic exceeds `c`".
/// Only `num_trials` and `seed` are taken from `config`.
pub fn simulate_expected_cost_with(
    c: f64,
    params: &CostParams,
    config: &SimConfig,
    execution: Execution,
) -> Result<CostEstimate> {
    ensure_finite("critical value", c)?;
    if config.num_trials == 0 {
        return Err(Error::domain("num_trials must be at least 1"));
    }
    let sums = map_chunks(config.num_trials, execution, |chunk, len| {
        let mut rng = chunk_rng(config.seed, chunk);
        let (mut s, mut s2) = (0.0_f64, 0.0_f64);
        for _ in 0..len {
            let good = rng.random::<f64>() < params.prior_good();
            let z: f64 = rng.sample(StandardNormal);
            let mean = if good { params.mu0() } else { params.mu1() };
            let stat = mean + params.sigma() * z;
            let cost = match (good, stat > c) {
                (true, true) => params.cost_type1(),
                (false, false) => params.cost_type2(),
                _ => 0.0,
            };
            s += cost;
            s2 += cost * cost;
        }
        (s, s2)
    });
    let (s, s2) = sums.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = config.num_trials as f64;
    let mean = s / n;
    let var = if config.num_trials > 1 {
        ((s2 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(CostEstimate { mean, stderr: (var / n).sqrt(), num_trials: config.num_trials })
}
