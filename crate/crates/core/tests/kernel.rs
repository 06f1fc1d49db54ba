mod common;

use approx::assert_relative_eq;
use common::{bracket_series, h_series};
use proptest::prelude::*;
use trigamma_cm::grid::log_grid;
use trigamma_cm::kernel::{
    coefficient_via_f, extract_bracket_coefficients, h, h_ratio, h_ratio_product,
    maclaurin_coefficients, printed_coefficient, series_coefficient_check, KernelPoint,
};

#[test]
fn landmarks() {
    assert_eq!(h(0.0), 0.5);
    // e(e−2)/(e−1)² to 20 digits
    assert_relative_eq!(h(1.0), 0.661_303_112_661_534_100_6, max_relative = 1e-15);
    assert!((h(1e4) - 1.0).abs() < 1e-12);
}

#[test]
fn maclaurin_matches_formal_division() {
    let oracle = h_series(12);
    let lib = maclaurin_coefficients();
    assert!(lib.len() >= 7);
    for (i, c) in lib.iter().enumerate() {
        assert!((c - oracle[i]).abs() <= 1e-12 * oracle[i].abs() + 1e-15, "coefficient {i}: {c} vs {}", oracle[i]);
    }
    for t in [-1e-2, -3e-3, 1e-4, 2e-3, 1e-2] {
        let poly = oracle.iter().rev().fold(0.0, |acc, c| acc * t + c);
        assert!((h(t) - poly).abs() < 1e-12, "t={t}");
    }
}

#[test]
fn increasing_and_bounded_on_grid() {
    let grid = log_grid(1e-6, 1e4, 400).unwrap();
    let values: Vec<f64> = grid.iter().map(|&t| h(t)).collect();
    for (v, t) in values.iter().zip(&grid) {
        // 1 − h(t) drops below half an ulp of 1 near t = 40
        let upper_ok = if *t < 35.0 { *v < 1.0 } else { *v <= 1.0 };
        assert!(*v >= 0.5 && upper_ok, "h({t}) = {v}");
    }
    // beyond t ≈ 40 the deviation from 1 is below one ulp
    for (w, t) in values.windows(2).zip(&grid) {
        if *t < 35.0 {
            assert!(w[1] > w[0], "not increasing after t = {t}");
        } else {
            assert!(w[1] >= w[0]);
        }
    }
}

#[test]
fn ratio_examples() {
    let v = h_ratio(0.3, 1e-4).unwrap();
    assert!((v - 2f64.powf(-0.7)).abs() < 1e-6);
    assert_relative_eq!(v, 0.615_572_206_744_274_7, max_relative = 1e-14);
    assert!((h_ratio(0.5, 1e3).unwrap() - 1.0).abs() < 1e-3);
    assert!(h_ratio(0.5, 1.0).unwrap() < h_ratio(0.5, 2.0).unwrap());

    assert!((h_ratio_product(0.25, 1e-4).unwrap() - 0.5).abs() < 1e-4);
    // 0.3 and 0.7 do not sum to 1 in binary, so agreement is to rounding
    let (a, b) = (h_ratio_product(0.3, 2.5).unwrap(), h_ratio_product(0.7, 2.5).unwrap());
    assert!((a - b).abs() <= 4.0 * f64::EPSILON * a);
    assert_eq!(h_ratio_product(0.25, 2.5).unwrap(), h_ratio_product(0.75, 2.5).unwrap());
    assert!((h_ratio_product(0.5, 1e3).unwrap() - 1.0).abs() < 1e-3);

    assert!(h_ratio(0.0, 1.0).is_err());
    assert!(h_ratio(1.0, 1.0).is_err());
    assert!(h_ratio(0.5, 0.0).is_err());
    assert!(KernelPoint::new(-1.0, None).is_err());
    assert!(KernelPoint::new(1.0, Some(1.5)).is_err());
}

#[test]
fn ratios_increasing_on_grid() {
    let grid = log_grid(1e-3, 10.0, 100).unwrap();
    for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let lower = (s - 1.0f64).exp2();
        let mut prev = f64::NEG_INFINITY;
        let mut prev_p = f64::NEG_INFINITY;
        for &t in &grid {
            let v = h_ratio(s, t).unwrap();
            let p = h_ratio_product(s, t).unwrap();
            assert!(v > prev && v > lower && v < 1.0, "s={s} t={t} v={v}");
            assert!(p > prev_p && p > 0.5 && p < 1.0, "s={s} t={t} p={p}");
            prev = v;
            prev_p = p;
        }
    }
}

#[test]
fn bracket_coefficients_match_term_by_term_expansion() {
    for s in [0.25, 0.5, 0.75] {
        let orders: Vec<usize> = (0..=11).collect();
        let oracle = bracket_series(s, &orders);
        let extracted = extract_bracket_coefficients(s, &orders).unwrap();
        let s3 = s * s * s;
        for k in 0..=6 {
            // the bracket vanishes to sixth order
            assert!(oracle[k].abs() < 1e-13, "oracle order {k}: {}", oracle[k]);
            assert!(extracted[k].0.abs() < 1e-10, "extracted order {k}: {}", extracted[k].0);
        }
        for k in 7..=11 {
            let p = -oracle[k] / s3;
            let printed = printed_coefficient(k, s).unwrap();
            assert!(((p - printed) / printed).abs() < 1e-8, "s={s} k={k}: {p} vs {printed}");
            assert!(((extracted[k].0 - printed) / printed).abs() < 1e-8);
        }
    }
}

#[test]
fn printed_examples() {
    assert_relative_eq!(printed_coefficient(7, 0.5).unwrap(), 1.0 / 72.0, max_relative = 1e-15);
    assert_eq!(printed_coefficient(7, 1.0).unwrap(), 0.0);
    let want = (22.0 * 0.875 + 15.0 * 0.25) / 2160.0;
    assert_relative_eq!(printed_coefficient(9, 0.5).unwrap(), want, max_relative = 1e-15);
    let r = series_coefficient_check(0.5, &[7, 8, 9, 10, 11]).unwrap();
    assert!(r.iter().all(|c| c.rel_residual <= 1e-8));
    assert!(series_coefficient_check(0.5, &[6]).is_err());
}

#[test]
fn f_sum_reproduces_higher_coefficients() {
    for s in [0.3, 0.6] {
        let orders: Vec<usize> = (7..=16).collect();
        let oracle = bracket_series(s, &orders);
        for (i, &k) in orders.iter().enumerate() {
            let want = -oracle[i] / (s * s * s);
            let got = coefficient_via_f(k, s);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-12), "s={s} k={k}: {got} vs {want}");
        }
    }
}

proptest! {
    #[test]
    fn reflection(t in 0.0f64..50.0) {
        prop_assert!((h(-t) + h(t) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bounded(t in 0.0f64..1e4) {
        let v = h(t);
        prop_assert!((0.5..=1.0).contains(&v));
    }

    #[test]
    fn product_symmetric(s in 0.01f64..0.99, t in 1e-3f64..1e3) {
        let a = h_ratio_product(s, t).unwrap();
        let b = h_ratio_product(1.0 - s, t).unwrap();
        prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * a);
    }

    #[test]
    fn ratio_range(s in 0.01f64..0.99, t in 1e-3f64..30.0) {
        let v = h_ratio(s, t).unwrap();
        prop_assert!(v > (s - 1.0).exp2() && v < 1.0);
    }
}
