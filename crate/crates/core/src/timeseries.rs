//! Lag regression and lagged correlation on short, gap-free series.
//!
//! The lag-τ pair set is `(Y_{t−τ}, Y_t)` for `t = τ..len`. Both the
//! regression `Y_t = β0 + β1·Y_{t−τ} + ε_t` and the lagged correlation are
//! computed on that same pair set with separate window means, so the
//! regression t statistic and `r·√(n−2)/√(1−r²)` coincide.

use std::io::Read;
use std::path::Path;

use serde::Serialize;

use crate::distributions::t_cdf;
use crate::error::{ensure_finite, Error, Result};
use crate::severity::SummaryStats;

/// An ordered, gap-free series of observations with an integer label on the
/// first one (for annual data, the first year).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    values: Vec<f64>,
    start_label: i64,
}

impl Series {
    pub fn new(values: Vec<f64>, start_label: i64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::domain(format!(
                "a series needs at least 3 observations, got {}",
                values.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            ensure_finite(&format!("observation {i}"), v)?;
        }
        Ok(Series { values, start_label })
    }

    /// Reads `label,value` rows with a header. Labels must be consecutive
    /// integers; empty or non-numeric values are rejected with their line.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header_len = rdr
            .headers()
            .map_err(|e| csv_error(e, 1))?
            .len();
        if header_len != 2 {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected a header with 2 columns (label,value), found {header_len}"),
            });
        }
        let mut values = Vec::new();
        let mut start_label = None;
        let mut prev_label: Option<i64> = None;
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error(e, 0))?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 2 fields, found {}", record.len()),
                });
            }
            let label: i64 = record[0].parse().map_err(|_| Error::Parse {
                line,
                message: format!("label {:?} is not an integer", &record[0]),
            })?;
            let raw = &record[1];
            if raw.is_empty() {
                return Err(Error::Parse { line, message: format!("missing value for label {label}") });
            }
            let value: f64 = raw.parse().map_err(|_| Error::Parse {
                line,
                message: format!("value {raw:?} is not a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse { line, message: format!("value {raw:?} is not finite") });
            }
            if let Some(prev) = prev_label {
                if label != prev + 1 {
                    return Err(Error::Parse {
                        line,
                        message: format!("label {label} does not follow {prev}; gaps are not allowed"),
                    });
                }
            } else {
                start_label = Some(label);
            }
            prev_label = Some(label);
            values.push(value);
        }
        Series::new(values, start_label.unwrap_or(0))
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Series::from_csv_reader(std::io::BufReader::new(file))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start_label(&self) -> i64 {
        self.start_label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The lag-τ predictor and response windows.
    fn lag_windows(&self, tau: usize) -> (&[f64], &[f64]) {
        (&self.values[..self.len() - tau], &self.values[tau..])
    }
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    match e.kind() {
        csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
        _ => Error::Parse { line, message: e.to_string() },
    }
}

/// Least-squares fit of the lag-τ model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagFit {
    pub tau: usize,
    pub beta0: f64,
    pub beta1: f64,
    pub stderr_beta1: f64,
    pub r: f64,
    pub n_pairs: usize,
    pub t_stat: f64,
    pub p_two_sided_t: f64,
}

impl LagFit {
    /// Slope summary with `df = n_pairs − 2`.
    pub fn slope_summary(&self) -> Result<SummaryStats> {
        SummaryStats::for_regression(self.beta1, self.stderr_beta1, self.n_pairs as u32)
    }
}

struct Moments {
    sxx: f64,
    syy: f64,
    sxy: f64,
    mean_x: f64,
    mean_y: f64,
    /// Sums of squares at or below these are rounding noise about the mean.
    floor_x: f64,
    floor_y: f64,
}

impl Moments {
    fn flat_x(&self) -> bool {
        self.sxx <= self.floor_x
    }

    fn flat_y(&self) -> bool {
        self.syy <= self.floor_y
    }
}

fn noise_floor(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let e = 8.0 * f64::EPSILON * scale;
    v.len() as f64 * e * e
}

fn centered_moments(x: &[f64], y: &[f64]) -> Moments {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Moments { sxx, syy, sxy, mean_x, mean_y, floor_x: noise_floor(x), floor_y: noise_floor(y) }
}

pub fn lag_regression(series: &Series, tau: usize) -> Result<LagFit> {
    if tau == 0 {
        return Err(Error::domain("lag must be at least 1"));
    }
    if tau + 2 >= series.len() {
        return Err(Error::domain(format!(
            "lag {tau} leaves fewer than 3 pairs in a series of length {}",
            series.len()
        )));
    }
    let (x, y) = series.lag_windows(tau);
    let n_pairs = x.len();
    let m = centered_moments(x, y);
    if m.flat_x() {
        return Err(Error::Degenerate("the lagged predictor has zero variance".into()));
    }
    if m.flat_y() {
        return Err(Error::Degenerate("the response has zero variance".into()));
    }
    let beta1 = m.sxy / m.sxx;
    let beta0 = m.mean_y - beta1 * m.mean_x;
    let r = (m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0);
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let e = b - beta0 - beta1 * a;
            e * e
        })
        .sum();
    if rss <= 64.0 * f64::EPSILON * m.syy {
        return Err(Error::Degenerate(format!(
            "perfect fit at lag {tau} (r = {r}): the residual variance is zero"
        )));
    }
    let df = (n_pairs - 2) as f64;
    let stderr_beta1 = (rss / df / m.sxx).sqrt();
    let t_stat = beta1 / stderr_beta1;
    let p_two_sided_t = (2.0 * t_cdf(-t_stat.abs(), df)).min(1.0);
    Ok(LagFit { tau, beta0, beta1, stderr_beta1, r, n_pairs, t_stat, p_two_sided_t })
}

/// Correlation of the lag-τ pairs. `tau = 0` gives 1 for any non-constant series.
pub fn autocorrelation(series: &Series, tau: usize) -> Result<f64> {
    if tau + 1 >= series.len() {
        return Err(Error::domain(format!(
            "lag {tau} leaves fewer than 2 pairs in a series of length {}",
            series.len()
        )));
    }
    let (x, y) = series.lag_windows(tau);
    let m = centered_moments(x, y);
    if m.flat_x() || m.flat_y() {
        return Err(Error::Degenerate(format!("a lag-{tau} window has zero variance")));
    }
    if tau == 0 {
        return Ok(1.0);
    }
    Ok((m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationTest {
    pub t: f64,
    pub df: u32,
    pub p_two_sided: f64,
}

/// `t = r·√(n−2)/√(1−r²)` with a two-sided p-value from Student-t on `n − 2` df.
pub fn t_from_correlation(r: f64, n: u32) -> Result<CorrelationTest> {
    ensure_finite("r", r)?;
    if n < 3 {
        return Err(Error::domain(format!("need at least 3 observations, got {n}")));
    }
    if r.abs() > 1.0 {
        return Err(Error::domain(format!("correlation must lie in [-1, 1], got {r}")));
    }
    if r.abs() == 1.0 {
        return Err(Error::Degenerate("|r| = 1 gives an infinite t statistic".into()));
    }
    let df = n - 2;
    let t = r * f64::from(df).sqrt() / (1.0 - r * r).sqrt();
    let p_two_sided = (2.0 * t_cdf(-t.abs(), f64::from(df))).min(1.0);
    Ok(CorrelationTest { t, df, p_two_sided })
}

/// Inverse of [`t_from_correlation`]: `r = t/√(t² + n − 2)`.
pub fn correlation_from_t(t: f64, n: u32) -> Result<f64> {
    ensure_finite("t", t)?;
    if n < 3 {
        return Err(Error::domain(format!("need at least 3 observations, got {n}")));
    }
    Ok(t / (t * t + f64::from(n - 2)).sqrt())
}
