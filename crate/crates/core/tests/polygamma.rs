mod common;

use approx::assert_relative_eq;
use common::{factorial, phi_deriv_series, polygamma_series, rel};
use proptest::prelude::*;
use trigamma_cm::finite_diff::{derivative, default_step};
use trigamma_cm::polygamma::{phi, phi_deriv, polygamma};
use trigamma_cm::{EvalPoint, Error, Polygamma, PrecisionPolicy};

#[test]
fn landmark_values_match_series_oracle() {
    assert_relative_eq!(polygamma(1, 1.0).unwrap(), polygamma_series(1, 1.0), max_relative = 1e-13);
    assert_relative_eq!(polygamma(1, 1.0).unwrap(), 1.644_934_066_848_226_4, max_relative = 1e-15);
    assert_relative_eq!(polygamma(2, 1.0).unwrap(), -2.404_113_806_319_188, max_relative = 1e-15);
    assert_relative_eq!(phi(1.0).unwrap(), 0.644_934_066_848_226_4, max_relative = 1e-15);
    assert_relative_eq!(polygamma(1, 2.0).unwrap() - polygamma(1, 3.0).unwrap(), 0.25, max_relative = 1e-15);
}

#[test]
fn frozen_high_precision_values() {
    // 40-digit reference evaluations
    let psi = [
        (1, 0.5, 4.934_802_200_544_679_309_4),
        (3, 0.001, 6_000_000_000_006.469_114_1),
        (5, 7.25, 0.001_667_357_519_228_255_994),
        (8, 30.0, -8.757_097_753_984_774_435_9e-9),
        (12, 2.0, -58_779.889_831_452_426_877),
        (1, 1e5, 0.000_010_000_050_000_166_666_667),
    ];
    for (k, x, want) in psi {
        let got = polygamma(k, x).unwrap();
        assert!(rel(got, want) < 1e-15, "psi^({k})({x}) = {got}, want {want}");
    }
    let phis = [
        (0, 0.01, 99.016_212_135_283_132_201),
        (0, 3.0, 0.184_802_200_544_679_309_42),
        (2, 0.2, 247.692_926_744_073_289_91),
        (4, 1.0, 22.536_102_944_370_383_838),
        (7, 12.0, -7.136_815_382_976_037_777e-6),
        (10, 0.05, 7.431_782_399_999_798_812e20),
        (11, 100.0, -2.075_625_209_087_178_978_5e-17),
    ];
    for (k, x, want) in phis {
        let got = phi_deriv(k, x).unwrap();
        assert!(rel(got, want) < 1e-14, "Phi^({k})({x}) = {got}, want {want}");
    }
}

#[test]
fn scaled_limits() {
    assert!(rel(1e-6 * phi(1e-6).unwrap(), 1.0) < 1e-5);
    assert!(rel(1e6 * phi(1e6).unwrap(), 0.5) < 1e-5);
    assert!(rel(-(1e-6f64).powi(4) * phi_deriv(3, 1e-6).unwrap(), 6.0) < 1e-4);
    for k in 0..=6 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let near = sign * 1e-4f64.powi(k as i32 + 1) * phi_deriv(k, 1e-4).unwrap();
        let far = sign * 1e4f64.powi(k as i32 + 1) * phi_deriv(k, 1e4).unwrap();
        assert!(rel(near, factorial(k)) < 0.01, "k={k} near {near}");
        assert!(rel(far, factorial(k) / 2.0) < 0.01, "k={k} far {far}");
    }
}

#[test]
fn derivative_signs_on_points() {
    for k in 0..=6 {
        for x in [0.5, 1.0, 5.0] {
            let v = phi_deriv(k, x).unwrap();
            assert_eq!(v.signum(), if k % 2 == 0 { 1.0 } else { -1.0 }, "k={k} x={x}");
        }
    }
}

#[test]
fn consistent_with_finite_differences() {
    for k in 1..=6 {
        for x in [0.5, 1.0, 2.0, 10.0] {
            let f = |y: f64| phi_deriv(k - 1, y);
            let est = derivative(&f, x, 1, default_step(x, 1, 0.0)).unwrap();
            let exact = phi_deriv(k, x).unwrap();
            assert!(
                (est.value - exact).abs() <= est.error.max(1e-12 * exact.abs()),
                "k={k} x={x}: {est:?} vs {exact}"
            );
        }
    }
}

#[test]
fn order_and_policy_errors() {
    assert!(matches!(polygamma(0, 1.0), Err(Error::InvalidParameter(_))));
    assert!(matches!(polygamma(13, 1.0), Err(Error::OrderOutOfRange { .. })));
    assert!(matches!(phi_deriv(12, 1.0), Err(Error::OrderOutOfRange { .. })));
    assert!(EvalPoint::new(0.0).is_err());
    assert!(EvalPoint::new(-1.0).is_err());
    assert!(EvalPoint::new(f64::NAN).is_err());

    let policy = PrecisionPolicy {
        target_tolerance: 1e-7,
        crossover: 4.0,
        ..PrecisionPolicy::default()
    };
    assert!(Polygamma::new(policy, 12).is_err());

    let wide = Polygamma::new(PrecisionPolicy::default(), 20).unwrap();
    let v = wide.polygamma(18, EvalPoint::new(3.0).unwrap()).unwrap();
    assert!(rel(v, polygamma_series(18, 3.0)) < 1e-12);
}

proptest! {
    #[test]
    fn recurrence(k in 1usize..=10, lx in -3.0f64..3.0) {
        let x = 10f64.powf(lx);
        let lhs = polygamma(k, x).unwrap() - polygamma(k, x + 1.0).unwrap();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let rhs = sign * factorial(k) / x.powi(k as i32 + 1);
        // the difference cancels about x/k leading digits
        let tol = 1e-14 * (1.0 + x / k as f64);
        prop_assert!(rel(lhs, rhs) <= tol, "k={} x={} lhs={} rhs={}", k, x, lhs, rhs);
    }

    #[test]
    fn agrees_with_series(k in 1usize..=8, lx in -2.0f64..2.5) {
        let x = 10f64.powf(lx);
        let got = polygamma(k, x).unwrap();
        prop_assert!(rel(got, polygamma_series(k, x)) < 1e-12);
    }

    #[test]
    fn phi_derivatives_agree_with_series(k in 0usize..=6, lx in -1.0f64..1.5) {
        let x = 10f64.powf(lx);
        // the series oracle cancels for large x; keep to where it holds 1e-9
        let got = phi_deriv(k, x).unwrap();
        prop_assert!(rel(got, phi_deriv_series(k, x)) < 1e-9);
    }

    #[test]
    fn sign_patterns(k in 1usize..=11, lx in -4.0f64..4.0) {
        let x = 10f64.powf(lx);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!(sign * polygamma(k, x).unwrap() > 0.0);
        let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(sign * phi_deriv(k - 1, x).unwrap() > 0.0);
    }
}
