mod common;

use errstat::decision_cost::{closed_form_minimizer, expected_cost, CostParams};
use errstat::error_tradeoff::{power, GaussianTestModel};
use errstat::mc_oracle::{
    simulate_expected_cost, simulate_expected_cost_with, simulate_pvalues, simulate_pvalues_with,
    simulate_studies, simulate_studies_with, Execution, SimConfig, CHUNK_SIZE,
};
use errstat::screening::{false_positive_rate, ScreeningParams};
use errstat::{Error, Tail};

const TRIALS: u64 = 400_000;

fn config(prior_null: f64, alpha: f64, effect_size: f64, n: u32) -> SimConfig {
    SimConfig {
        num_trials: TRIALS,
        seed: 42,
        prior_null,
        alpha,
        effect_size,
        n_per_study: n,
        tail: Tail::OneSidedUpper,
    }
}

/// Effect size giving `target` power at level `alpha` with one observation.
fn effect_for_power(alpha: f64, target: f64) -> f64 {
    common::phi_inv(1.0 - alpha) + common::phi_inv(target)
}

fn within(empirical: f64, analytic: f64, stderr: f64, k: f64) -> bool {
    (empirical - analytic).abs() <= k * stderr
}

#[test]
fn fpr_agreement_at_five_points() {
    let points = [(0.5, 0.05, 0.5, 10), (0.2, 0.01, 0.8, 4), (0.8, 0.05, 0.3, 20), (0.9, 0.1, 1.0, 3), (0.5, 0.005, 0.6, 25)];
    for (i, &(phi, alpha, delta, n)) in points.iter().enumerate() {
        let mut cfg = config(phi, alpha, delta, n);
        cfg.seed = 1000 + i as u64;
        let out = simulate_studies(&cfg).unwrap();
        let pw = power(alpha, &GaussianTestModel::one_sided(delta, n).unwrap()).unwrap();
        let analytic = false_positive_rate(&ScreeningParams::new(alpha, pw, phi).unwrap());
        let se = out.mc_stderr_fpr.unwrap();
        assert!(within(out.fpr().unwrap(), analytic, se, 3.0), "point {i}: {out:?} vs {analytic}");
        assert!(within(out.empirical_power.unwrap(), pw, out.mc_stderr_power.unwrap(), 3.0));
    }
}

#[test]
fn size_calibration_with_only_nulls() {
    let out = simulate_studies(&config(1.0, 0.05, 0.5, 10)).unwrap();
    assert_eq!(out.true_pos + out.false_neg, 0);
    let se = (0.05_f64 * 0.95 / TRIALS as f64).sqrt();
    assert!(within(out.false_pos as f64 / TRIALS as f64, 0.05, se, 3.0));
    assert_eq!(out.empirical_power, None);
    assert_eq!(out.fpr().unwrap(), 1.0);
}

#[test]
fn two_sided_power() {
    let mut cfg = config(0.0, 0.05, 0.4, 9);
    cfg.tail = Tail::TwoSided;
    let out = simulate_studies(&cfg).unwrap();
    let pw = power(0.05, &GaussianTestModel::new(0.4, 9, Tail::TwoSided).unwrap()).unwrap();
    assert!(within(out.empirical_power.unwrap(), pw, out.mc_stderr_power.unwrap(), 3.0));
}

#[test]
fn true_positive_rate_doubles_at_replication_factor() {
    // R = 1/10 and power held at 0.8, so κ = (1 − β)R = 0.08; γ = 0.25 needs α = 3κ
    let phi = 10.0 / 11.0;
    let kappa = 0.08;
    let alpha = 3.0 * kappa;
    let r = errstat::screening::replication_threshold_factor(0.25, 2.0).unwrap();
    assert!((r - 3.0).abs() < 1e-12);
    for (a, want) in [(alpha, 0.25), (alpha / r, 0.5)] {
        let cfg = config(phi, a, effect_for_power(a, 0.8), 1);
        let out = simulate_studies(&cfg).unwrap();
        let tpr = 1.0 - out.fpr().unwrap();
        assert!(within(tpr, want, out.mc_stderr_fpr.unwrap(), 3.0), "alpha {a}: {tpr}");
    }
}

#[test]
fn pvalue_deciles_match_alternative_cdf() {
    let summary = simulate_pvalues(&config(0.0, 0.05, 0.5, 10)).unwrap();
    for k in 0..9 {
        let (e, g, s) = (summary.ecdf_at_deciles[k], summary.reference_at_deciles[k], summary.stderr_at_deciles[k]);
        assert!(within(e, g, s, 3.0), "decile {k}: {e} vs {g}");
    }
    let null = simulate_pvalues(&config(0.0, 0.05, 0.0, 10)).unwrap();
    assert!(null.sup_distance < 0.002 * (1e6 / TRIALS as f64).sqrt());
    for (k, q) in null.deciles.iter().enumerate() {
        assert!((q - (k + 1) as f64 / 10.0).abs() < 0.005);
    }
}

#[test]
fn expected_cost_agreement() {
    let p = CostParams::new(1.0, 1.0, 0.5, 0.0, 1.0, 1.0).unwrap();
    let c = closed_form_minimizer(&p).unwrap();
    let est = simulate_expected_cost(c, &p, &config(0.5, 0.05, 0.0, 1)).unwrap();
    assert!(within(est.mean, expected_cost(c, &p), est.stderr, 3.0), "{est:?}");

    let q = CostParams::new(2.0, 5.0, 0.3, -0.5, 1.5, 1.3).unwrap();
    for c in [-1.0, 0.4, 2.0] {
        let est = simulate_expected_cost(c, &q, &config(0.5, 0.05, 0.0, 1)).unwrap();
        assert!(within(est.mean, expected_cost(c, &q), est.stderr, 3.0), "c = {c}");
    }

    let free = CostParams::new(0.0, 0.0, 0.5, 0.0, 1.0, 1.0).unwrap();
    let zero = simulate_expected_cost(0.5, &free, &config(0.5, 0.05, 0.0, 1)).unwrap();
    assert_eq!(zero.mean, 0.0);
    assert_eq!(zero.stderr, 0.0);
}

#[test]
fn determinism_and_execution_independence() {
    let mut cfg = config(0.5, 0.05, 0.5, 10);
    cfg.num_trials = 3 * CHUNK_SIZE + 123;
    let a = simulate_studies_with(&cfg, Execution::Serial).unwrap();
    let b = simulate_studies_with(&cfg, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, simulate_studies(&cfg).unwrap());
    let pa = simulate_pvalues_with(&cfg, Execution::Serial).unwrap();
    let pb = simulate_pvalues_with(&cfg, Execution::Parallel).unwrap();
    assert_eq!(pa, pb);
    let p = CostParams::new(1.0, 2.0, 0.5, 0.0, 1.0, 1.0).unwrap();
    assert_eq!(
        simulate_expected_cost_with(0.3, &p, &cfg, Execution::Serial).unwrap(),
        simulate_expected_cost_with(0.3, &p, &cfg, Execution::Parallel).unwrap()
    );
    let mut other = cfg;
    other.seed = 43;
    assert_ne!(simulate_studies(&other).unwrap(), a);
}

#[test]
fn invalid_configs() {
    let mut cfg = config(0.5, 0.05, 0.5, 10);
    cfg.num_trials = 0;
    assert!(matches!(simulate_studies(&cfg), Err(Error::Domain(_))));
    assert!(matches!(simulate_pvalues(&cfg), Err(Error::Domain(_))));
    let mut cfg = config(0.5, 0.0, 0.5, 10);
    assert!(simulate_studies(&cfg).is_err());
    cfg.alpha = 0.05;
    cfg.n_per_study = 0;
    assert!(simulate_studies(&cfg).is_err());
    let mut cfg = config(1.5, 0.05, 0.5, 10);
    assert!(simulate_studies(&cfg).is_err());
    cfg.prior_null = 0.5;
    cfg.effect_size = f64::NAN;
    assert!(simulate_studies(&cfg).is_err());
}

#[test]
fn no_positives_is_explicit() {
    let mut cfg = config(1.0, 1e-12, 0.0, 1);
    cfg.num_trials = 1000;
    let out = simulate_studies(&cfg).unwrap();
    assert_eq!(out.true_pos + out.false_pos, 0);
    assert_eq!(out.empirical_fpr, None);
    assert!(matches!(out.fpr(), Err(Error::Degenerate(_))));
}
