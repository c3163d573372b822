//! Probability kernels: standard Gaussian and Student-t.
//!
//! The Gaussian cdf combines a positive-term Taylor series (|x| < 3) with the
//! Laplace continued fraction for the Mills ratio (|x| >= 3), so both tails are
//! computed without cancellation. Student-t uses the regularized incomplete
//! beta function. Quantiles are found with Newton iterations on the log tail
//! probability, kept inside a shrinking bisection bracket.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SERIES_CUTOFF: f64 = 3.0;

/// A probability in the closed unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("probability must lie in [0, 1], got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }

    /// True for values strictly inside (0, 1).
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// A quantile of the standard Gaussian together with its order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantile {
    pub value: f64,
    pub order: Probability,
}

impl Quantile {
    pub fn standard_normal(order: Probability) -> Result<Self> {
        Ok(Quantile {
            value: normal_quantile(order.value())?,
            order,
        })
    }

    /// The `(1 - p)`-th percentile, i.e. the upper critical value `c_p`.
    pub fn upper_critical(p: Probability) -> Result<Self> {
        Ok(Quantile {
            value: upper_critical_value(p.value())?,
            order: p.complement(),
        })
    }
}

pub fn normal_pdf(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(std_normal_pdf(x))
}

pub fn normal_cdf(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(std_normal_cdf(x))
}

/// Upper tail probability `1 - Φ(x)`, accurate in relative terms for large x.
pub fn normal_sf(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(std_normal_cdf(-x))
}

pub fn normal_quantile(p: f64) -> Result<f64> {
    check_open_probability(p)?;
    Ok(std_normal_quantile(p))
}

/// `c_p`, the `(1 - p)`-th percentile of the standard Gaussian.
pub fn upper_critical_value(p: f64) -> Result<f64> {
    check_open_probability(p)?;
    Ok(std_normal_upper_critical(p))
}

pub fn student_t_cdf(x: f64, df: u32) -> Result<f64> {
    ensure_finite("x", x)?;
    check_df(df)?;
    Ok(t_cdf(x, f64::from(df)))
}

/// Upper tail probability of Student-t.
pub fn student_t_sf(x: f64, df: u32) -> Result<f64> {
    ensure_finite("x", x)?;
    check_df(df)?;
    Ok(t_cdf(-x, f64::from(df)))
}

pub fn student_t_pdf(x: f64, df: u32) -> Result<f64> {
    ensure_finite("x", x)?;
    check_df(df)?;
    Ok(t_pdf(x, f64::from(df)))
}

pub fn student_t_quantile(p: f64, df: u32) -> Result<f64> {
    check_open_probability(p)?;
    check_df(df)?;
    let df = f64::from(df);
    Ok(if p == 0.5 {
        0.0
    } else if p > 0.5 {
        t_upper_quantile(1.0 - p, df)
    } else {
        -t_upper_quantile(p, df)
    })
}

fn check_open_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("quantile order must lie in (0, 1), got {p}")))
    }
}

fn check_df(df: u32) -> Result<()> {
    if df >= 1 {
        Ok(())
    } else {
        Err(Error::domain("degrees of freedom must be at least 1"))
    }
}

// Unchecked kernels shared with the rest of the crate.

pub(crate) fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

pub(crate) fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        1.0 - upper_tail(x)
    } else {
        upper_tail(-x)
    }
}

pub(crate) fn std_normal_quantile(p: f64) -> f64 {
    if p == 0.5 {
        0.0
    } else if p < 0.5 {
        -upper_tail_inverse(p)
    } else {
        // 1 - p is exact for p >= 0.5
        upper_tail_inverse(1.0 - p)
    }
}

pub(crate) fn std_normal_upper_critical(p: f64) -> f64 {
    -std_normal_quantile(p)
}

/// 1 - Φ(x) for x >= 0.
fn upper_tail(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_CUTOFF {
        // Φ(x) - 1/2 = φ(x) Σ x^(2k+1) / (2k+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 1.0;
        loop {
            term *= x2 / (2.0 * k + 1.0);
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
            k += 1.0;
        }
        0.5 - std_normal_pdf(x) * sum
    } else if x > 40.0 {
        0.0
    } else {
        std_normal_pdf(x) * mills_ratio_cf(x)
    }
}

/// Mills ratio (1 - Φ(x)) / φ(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))),
/// evaluated with the modified Lentz algorithm.
fn mills_ratio_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..2000 {
        let a = k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// Solves 1 - Φ(y) = q for y >= 0, with 0 < q < 1/2.
fn upper_tail_inverse(q: f64) -> f64 {
    let ln_q = q.ln();
    // Abramowitz & Stegun 26.2.22 starting point
    let t = (-2.0 * ln_q).sqrt();
    let mut y = t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
    let (mut lo, mut hi) = (0.0_f64, 40.0_f64);
    y = y.clamp(lo, hi);
    for _ in 0..200 {
        let tail = upper_tail(y);
        if tail > q {
            lo = y;
        } else {
            hi = y;
        }
        // Newton on ln(1 - Φ(y)) - ln q
        let g = tail.ln() - ln_q;
        let slope = -std_normal_pdf(y) / tail;
        let mut next = y - g / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - y).abs();
        y = next;
        if step <= 1e-15 * y.max(1.0) || hi - lo <= 1e-15 * y.max(1.0) {
            break;
        }
    }
    y
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7, n = 9.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta I_x(a, b); `y` must equal `1 - x` and is passed
/// separately so callers can supply it without cancellation.
pub(crate) fn reg_inc_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * y.ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, y) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..100_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

pub(crate) fn t_pdf(x: f64, df: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (df + 1.0))
        - ln_gamma(0.5 * df)
        - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (df + 1.0) * (x * x / df).ln_1p()).exp()
}

pub(crate) fn t_cdf(x: f64, df: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let x2 = x * x;
    let z = df / (df + x2);
    let w = x2 / (df + x2);
    let tail = 0.5 * reg_inc_beta(0.5 * df, 0.5, z, w);
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Solves Pr(T > x) = q for x > 0, with 0 < q < 1/2.
fn t_upper_quantile(q: f64, df: f64) -> f64 {
    let ln_q = q.ln();
    let sf = |x: f64| t_cdf(-x, df);
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while sf(hi) > q {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    let mut x = upper_tail_inverse(q).clamp(lo, hi);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..400 {
        let tail = sf(x);
        if tail > q {
            lo = x;
        } else {
            hi = x;
        }
        let g = tail.ln() - ln_q;
        let slope = -t_pdf(x, df) / tail;
        let mut next = x - g / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 1e-15 * x.max(1.0) || hi - lo <= 1e-15 * x.max(1.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdf_at_zero() {
        assert!((normal_pdf(0.0).unwrap() - 0.398_942_280_4).abs() < 1e-10);
        assert_eq!(normal_pdf(1.3).unwrap(), normal_pdf(-1.3).unwrap());
    }

    #[test]
    fn cdf_frozen_values() {
        assert_eq!(normal_cdf(0.0).unwrap(), 0.5);
        // reference values from 40-digit arithmetic
        let cases = [
            (1.96, 0.975_002_104_851_779_6),
            (-5.46, 2.380_672_916_270_036_6e-8),
            (-8.0, 6.220_960_574_271_784e-16),
            (8.0, 0.999_999_999_999_999_4),
        ];
        for (x, want) in cases {
            let got = normal_cdf(x).unwrap();
            assert!((got - want).abs() < 1e-15, "Φ({x}) = {got}, want {want}");
        }
        // relative accuracy in the far tail
        let got = normal_cdf(-5.46).unwrap();
        assert!((got / 2.380_672_916_270_036_6e-8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cdf_continuous_across_series_cutoff() {
        let below = std_normal_cdf(-(SERIES_CUTOFF - 1e-12));
        let above = std_normal_cdf(-(SERIES_CUTOFF + 1e-12));
        assert!((below - above).abs() < 1e-14);
    }

    #[test]
    fn quantile_frozen_values() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        assert!((normal_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((normal_quantile(0.95).unwrap() - 1.644_853_626_951_472_7).abs() < 1e-12);
        assert!((upper_critical_value(0.05).unwrap() - 1.644_853_626_951_472_7).abs() < 1e-12);
    }

    #[test]
    fn non_finite_and_out_of_range_inputs_rejected() {
        assert!(normal_pdf(f64::NAN).is_err());
        assert!(normal_cdf(f64::INFINITY).is_err());
        for p in [0.0, 1.0, -0.1, 1.1, f64::NAN] {
            assert!(normal_quantile(p).is_err(), "p = {p}");
            assert!(student_t_quantile(p, 3).is_err(), "p = {p}");
        }
        assert!(student_t_cdf(0.5, 0).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert!(Probability::new(1.5).is_err());
    }

    #[test]
    fn t_cdf_frozen_values() {
        let cases = [
            (1.65, 1, 0.826_564_429_086_964_6),
            (1.65, 2, 0.879_636_503_864_120_8),
            (1.65, 5, 0.920_072_117_958_451_1),
            (-2.5, 13, 0.013_294_391_405_428_74),
            (3.4958, 13, 0.998_027_151_351_322_1),
            (0.3, 30, 0.616_876_947_357_823_6),
            (1.65, 10_000, 0.950_512_829_007_566_8),
            (4.0, 3, 0.985_995_771_994_926_9),
            (-0.7, 7, 0.253_258_776_097_799_9),
        ];
        for (x, df, want) in cases {
            let got = student_t_cdf(x, df).unwrap();
            assert!((got - want).abs() < 1e-12, "T_{df}({x}) = {got}, want {want}");
        }
        assert_eq!(student_t_cdf(0.0, 9).unwrap(), 0.5);
    }

    #[test]
    fn t_quantile_frozen_values() {
        assert_eq!(student_t_quantile(0.5, 7).unwrap(), 0.0);
        assert!((student_t_quantile(0.95, 13).unwrap() - 1.770_933_395_986_873).abs() < 1e-10);
        assert!((student_t_quantile(0.975, 4).unwrap() - 2.776_445_105_197_794).abs() < 1e-10);
        assert!((student_t_quantile(0.025, 4).unwrap() + 2.776_445_105_197_794).abs() < 1e-10);
    }

    #[test]
    fn ln_gamma_integers() {
        let mut fact = 1.0_f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-12, "n = {n}");
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }
}
