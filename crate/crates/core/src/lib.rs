//! Error-statistics toolkit.
//!
//! Analytic routines for the Neyman-Pearson error trade-off, the diagnostic
//! screening model of the false positive rate, expected-cost critical values,
//! p-value distributions under the alternative, severity assessment and lag
//! regression on short annual series. Every analytic formula has a Monte Carlo
//! counterpart in [`mc_oracle`].

pub mod cli;
pub mod decision_cost;
pub mod distributions;
pub mod error;
pub mod error_tradeoff;
pub mod mc_oracle;
pub mod pvalue_dist;
pub mod screening;
pub mod severity;
pub mod timeseries;

pub use error::{Error, Result};

/// Tail convention of a one-sample test on a standardized statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Reject for large values of the statistic.
    #[default]
    OneSidedUpper,
    /// Reject for large absolute values of the statistic.
    TwoSided,
}
