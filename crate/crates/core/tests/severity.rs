mod common;

use errstat::severity::{
    confidence_lower_limit, p_value_from_summary, severity, severity_curve, ReferenceDist, SeverityClaim,
    SummaryStats,
};
use errstat::Tail;
use proptest::prelude::*;

fn reference_stats() -> SummaryStats {
    SummaryStats::new(0.5782, 0.1654, 15, 13).unwrap()
}

#[test]
fn reference_values() {
    let s = reference_stats();
    let sev = severity(&s, &SeverityClaim::greater_than(0.30529), ReferenceDist::Normal).unwrap();
    assert!((sev - common::phi_cdf((0.5782 - 0.30529) / 0.1654)).abs() < 1e-9);
    assert!((sev - 0.950_528_531_966_351_9).abs() < 1e-12);
    assert!((sev - 0.95).abs() < 1e-3);
    let p = p_value_from_summary(&s, Tail::OneSidedUpper, ReferenceDist::Normal);
    assert!((p - 2.37e-4).abs() < 0.02e-4);
    let p_t = p_value_from_summary(&s, Tail::TwoSided, ReferenceDist::StudentT);
    assert!((p_t - 2.0 * common::t_cdf(-0.5782 / 0.1654, 13.0)).abs() < 1e-9);
    assert!((p_t - 3.945_940_685_570_037e-3).abs() < 1e-12);
    assert!(p_t > 3e-3 && p_t < 5e-3);
    let lcl = confidence_lower_limit(&s, 0.95, ReferenceDist::Normal).unwrap();
    assert!((lcl - 0.30529).abs() < 2.5e-3);
}

#[test]
fn curve_anchors() {
    let s = reference_stats();
    let c = common::phi_inv(0.95);
    let bounds = [0.30529, s.estimate(), s.estimate() - c * s.stderr(), -1e3];
    let curve = severity_curve(&s, &bounds, ReferenceDist::Normal).unwrap();
    assert!((curve[0].severity - 0.950_528_531_966_351_9).abs() < 1e-12);
    assert_eq!(curve[1].severity, 0.5);
    assert!((curve[2].severity - 0.95).abs() < 1e-9);
    assert_eq!(curve[3].severity, 1.0);
    let grid: Vec<f64> = (0..100).map(|k| -0.2 + 0.015 * k as f64).collect();
    let curve = severity_curve(&s, &grid, ReferenceDist::StudentT).unwrap();
    for w in curve.windows(2) {
        assert!(w[1].severity < w[0].severity);
    }
}

#[test]
fn zero_estimate() {
    let s = SummaryStats::new(0.0, 0.4, 10, 8).unwrap();
    assert_eq!(p_value_from_summary(&s, Tail::OneSidedUpper, ReferenceDist::Normal), 0.5);
    assert_eq!(p_value_from_summary(&s, Tail::TwoSided, ReferenceDist::StudentT), 1.0);
    assert_eq!(severity(&s, &SeverityClaim::greater_than(0.0), ReferenceDist::Normal).unwrap(), 0.5);
}

#[test]
fn duality_levels() {
    let s = reference_stats();
    for reference in [ReferenceDist::Normal, ReferenceDist::StudentT] {
        for level in [0.8, 0.9, 0.95, 0.99] {
            let b = confidence_lower_limit(&s, level, reference).unwrap();
            let sev = severity(&s, &SeverityClaim::greater_than(b), reference).unwrap();
            assert!((sev - level).abs() < 1e-10, "{reference:?} {level}");
        }
    }
    assert_eq!(confidence_lower_limit(&s, 0.5, ReferenceDist::Normal).unwrap(), s.estimate());
    assert!(confidence_lower_limit(&s, 1.0, ReferenceDist::Normal).is_err());
}

#[test]
fn invalid_inputs() {
    assert!(SummaryStats::new(0.5, 0.0, 10, 8).is_err());
    assert!(SummaryStats::new(0.5, -1.0, 10, 8).is_err());
    assert!(SummaryStats::new(f64::NAN, 1.0, 10, 8).is_err());
    assert!(SummaryStats::new(0.5, 1.0, 10, 0).is_err());
    let s = reference_stats();
    assert!(severity(&s, &SeverityClaim::greater_than(f64::INFINITY), ReferenceDist::Normal).is_err());
    assert_eq!(SummaryStats::for_regression(0.5, 0.1, 15).unwrap().df(), 13);
}

proptest! {
    #[test]
    fn scale_invariance(est in -5.0_f64..5.0, se in 0.01_f64..3.0, bound in -5.0_f64..5.0, df in 1_u32..60) {
        let s = SummaryStats::new(est, se, df + 2, df).unwrap();
        let k = 7.3;
        let t = SummaryStats::new(est * k, se * k, df + 2, df).unwrap();
        for reference in [ReferenceDist::Normal, ReferenceDist::StudentT] {
            let a = severity(&s, &SeverityClaim::greater_than(bound), reference).unwrap();
            let b = severity(&t, &SeverityClaim::greater_than(bound * k), reference).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            let less = severity(&s, &SeverityClaim::less_than(bound), reference).unwrap();
            prop_assert!((a + less - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn severity_decreasing_in_bound(est in -2.0_f64..2.0, se in 0.05_f64..2.0, b in -3.0_f64..3.0, db in 0.01_f64..1.0) {
        let s = SummaryStats::new(est, se, 20, 18).unwrap();
        let hi = severity(&s, &SeverityClaim::greater_than(b), ReferenceDist::Normal).unwrap();
        let lo = severity(&s, &SeverityClaim::greater_than(b + db), ReferenceDist::Normal).unwrap();
        prop_assert!(lo <= hi);
    }

    #[test]
    fn duality_round_trip(est in -2.0_f64..2.0, se in 0.05_f64..2.0, level in 0.51_f64..0.999, df in 1_u32..100) {
        let s = SummaryStats::new(est, se, df + 2, df).unwrap();
        for reference in [ReferenceDist::Normal, ReferenceDist::StudentT] {
            let b = confidence_lower_limit(&s, level, reference).unwrap();
            let sev = severity(&s, &SeverityClaim::greater_than(b), reference).unwrap();
            prop_assert!((sev - level).abs() < 1e-10);
        }
    }
}
