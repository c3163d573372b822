mod common;

use errstat::error_tradeoff::{power, required_sample_size, sample_size_exact, type2_error, GaussianTestModel};
use errstat::pvalue_dist::{cdf_under_alternative, cdf_under_alternative_tail, AlternativeSpec};
use errstat::{Error, Tail};
use proptest::prelude::*;

#[test]
fn null_effect() {
    let m = GaussianTestModel::one_sided(0.0, 1).unwrap();
    assert!((type2_error(0.05, &m).unwrap() - 0.95).abs() < 1e-12);
    assert!((power(0.05, &m).unwrap() - 0.05).abs() < 1e-12);
    let two = GaussianTestModel::new(0.0, 4, Tail::TwoSided).unwrap();
    assert!((power(0.05, &two).unwrap() - 0.05).abs() < 1e-12);
}

#[test]
fn worked_example() {
    let m = GaussianTestModel::one_sided(0.5, 10).unwrap();
    let oracle = common::phi_cdf(common::phi_inv(0.95) - 10_f64.sqrt() * 0.5);
    let beta = type2_error(0.05, &m).unwrap();
    assert!((beta - 0.525_401_338_754_555_5).abs() < 1e-12);
    assert!((beta - oracle).abs() < 1e-12);
    assert!((power(0.05, &m).unwrap() - 0.474_598_661_245_444_5).abs() < 1e-12);
}

#[test]
fn sample_size_examples() {
    assert!((sample_size_exact(0.05, 0.2, 0.5, 1.0).unwrap() - 24.730_228_928_079_08).abs() < 1e-9);
    assert_eq!(required_sample_size(0.05, 0.2, 0.5, 1.0).unwrap(), 25);
    let m = GaussianTestModel::one_sided(0.5, 25).unwrap();
    assert!(power(0.05, &m).unwrap() >= 0.8);
    let m24 = GaussianTestModel::one_sided(0.5, 24).unwrap();
    assert!(power(0.05, &m24).unwrap() < 0.8);

    let base = sample_size_exact(0.05, 0.2, 0.5, 1.0).unwrap();
    let doubled = sample_size_exact(0.05, 0.2, 0.5, 2.0).unwrap();
    assert!((doubled / base - 4.0).abs() < 1e-12);
    assert!(required_sample_size(0.005, 0.2, 0.5, 1.0).unwrap() > 25);
    // negative effects need the same n
    assert_eq!(required_sample_size(0.05, 0.2, -0.5, 1.0).unwrap(), 25);
}

#[test]
fn sample_size_errors() {
    assert!(matches!(required_sample_size(0.05, 0.2, 0.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(required_sample_size(0.05, 0.2, 0.5, 0.0), Err(Error::Domain(_))));
    assert!(matches!(required_sample_size(0.0, 0.2, 0.5, 1.0), Err(Error::Domain(_))));
    assert!(matches!(required_sample_size(0.05, 1.0, 0.5, 1.0), Err(Error::Domain(_))));
    assert!(GaussianTestModel::one_sided(0.5, 0).is_err());
    assert!(GaussianTestModel::one_sided(f64::NAN, 3).is_err());
    let m = GaussianTestModel::one_sided(0.5, 3).unwrap();
    assert!(matches!(type2_error(1.0, &m), Err(Error::Domain(_))));
}

#[test]
fn beta_decreasing_in_alpha_on_grid() {
    for delta in [0.2, 0.5, 0.8] {
        let m = GaussianTestModel::one_sided(delta, 1).unwrap();
        let mut prev = 1.0;
        for k in 1..1000 {
            let b = type2_error(k as f64 / 1000.0, &m).unwrap();
            assert!(b < prev);
            prev = b;
        }
    }
}

proptest! {
    #[test]
    fn beta_monotone(alpha in 0.001_f64..0.99, delta in 0.05_f64..2.0, n in 1_u32..200) {
        let m = GaussianTestModel::one_sided(delta, n).unwrap();
        let b = type2_error(alpha, &m).unwrap();
        prop_assert!(b > 0.0 && b < 1.0);
        let bigger_alpha = type2_error(alpha + 0.005, &m).unwrap();
        prop_assert!(bigger_alpha < b);
        let bigger_n = type2_error(alpha, &GaussianTestModel::one_sided(delta, n + 1).unwrap()).unwrap();
        prop_assert!(bigger_n < b);
        let bigger_delta = type2_error(alpha, &GaussianTestModel::one_sided(delta * 1.01, n).unwrap()).unwrap();
        prop_assert!(bigger_delta < b);
    }

    #[test]
    fn null_beta_is_complement(alpha in 1e-6_f64..(1.0 - 1e-6), n in 1_u32..1000) {
        let m = GaussianTestModel::one_sided(0.0, n).unwrap();
        prop_assert!((type2_error(alpha, &m).unwrap() - (1.0 - alpha)).abs() < 1e-8);
    }

    #[test]
    fn power_complements_beta(alpha in 1e-4_f64..0.999, delta in -3.0_f64..3.0, n in 1_u32..100, two in any::<bool>()) {
        let tail = if two { Tail::TwoSided } else { Tail::OneSidedUpper };
        let m = GaussianTestModel::new(delta, n, tail).unwrap();
        prop_assert!((power(alpha, &m).unwrap() + type2_error(alpha, &m).unwrap() - 1.0).abs() < 1e-12);
        let spec = AlternativeSpec::new(delta, n).unwrap();
        prop_assert!((cdf_under_alternative_tail(alpha, &spec, tail).unwrap() - power(alpha, &m).unwrap()).abs() < 1e-12);
        if !two {
            prop_assert!((cdf_under_alternative(alpha, &spec).unwrap() - power(alpha, &m).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn required_n_reaches_power(alpha in 0.001_f64..0.2, beta in 0.01_f64..0.5, mu in 0.05_f64..2.0, sigma in 0.2_f64..3.0) {
        let n = required_sample_size(alpha, beta, mu, sigma).unwrap();
        prop_assume!(n < u64::from(u32::MAX));
        let m = GaussianTestModel::one_sided(mu / sigma, n as u32).unwrap();
        prop_assert!(power(alpha, &m).unwrap() >= 1.0 - beta - 1e-12);
        if n > 1 {
            let m1 = GaussianTestModel::one_sided(mu / sigma, (n - 1) as u32).unwrap();
            prop_assert!(power(alpha, &m1).unwrap() < 1.0 - beta + 1e-9);
        }
    }
}
