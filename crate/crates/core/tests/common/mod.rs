//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

pub fn phi_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

pub fn phi_inv(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

pub fn t_cdf(x: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df).expect("valid df").cdf(x)
}

/// Adaptive Simpson quadrature on [a, b].
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Central difference with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Bisection for a sign change of `f` on [lo, hi].
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Brute-force grid minimizer followed by ternary refinement.
pub fn grid_argmin<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let steps = 4000;
    let mut best = lo;
    let mut best_v = f64::INFINITY;
    for i in 0..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let v = f(x);
        if v < best_v {
            best_v = v;
            best = x;
        }
    }
    let h = (hi - lo) / steps as f64;
    let (mut a, mut b) = (best - h, best + h);
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    0.5 * (a + b)
}

pub struct OlsFit {
    pub beta0: f64,
    pub beta1: f64,
    pub stderr_beta1: f64,
    pub r: f64,
}

/// OLS of y on [1, x] by solving the raw (uncentered) 2×2 normal equations.
pub fn ols_normal_equations(x: &[f64], y: &[f64]) -> OlsFit {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    // [n sx; sx sxx] [b0; b1] = [sy; sxy]
    let det = n * sxx - sx * sx;
    let beta0 = (sxx * sy - sx * sxy) / det;
    let beta1 = (n * sxy - sx * sy) / det;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - beta0 - beta1 * a).powi(2))
        .sum();
    // (XᵀX)⁻¹ lower-right entry is n/det
    let stderr_beta1 = (rss / (n - 2.0) * n / det).sqrt();
    let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
    OlsFit { beta0, beta1, stderr_beta1, r }
}

/// Pearson correlation of the lag-τ pairs computed directly from its definition.
pub fn pair_correlation(values: &[f64], tau: usize) -> f64 {
    let pairs: Vec<(f64, f64)> = (tau..values.len()).map(|t| (values[t - tau], values[t])).collect();
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let vx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let vy: f64 = pairs.iter().map(|p| (p.1 - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// AR(1) series `y_t = c + a·y_{t−1} + e_t` with uniform noise; its own RNG
/// family so it shares nothing with the library's simulator.
pub fn synthetic_ar1(seed: u64, len: usize, a: f64, noise: f64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut y = rng.random_range(-1.0..1.0);
    (0..len)
        .map(|_| {
            y = 0.3 + a * y + noise * rng.random_range(-1.0..1.0);
            y
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
