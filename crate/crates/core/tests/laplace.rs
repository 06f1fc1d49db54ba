mod common;

use common::{phi_deriv_series, rel};
use proptest::prelude::*;
use trigamma_cm::grid::log_grid;
use trigamma_cm::laplace::{
    beta_weight, bernstein_integrand, convolution_kernel, frak_y, frak_y_reciprocal_substituted,
    laplace_of_convolution, laplace_phi_deriv, QuadratureConfig, Subdivision,
};
use trigamma_cm::polygamma::phi_deriv;
use trigamma_cm::ratio::sharp_constant;
use trigamma_cm::EvalPoint;

fn pt(x: f64) -> EvalPoint {
    EvalPoint::new(x).unwrap()
}

#[test]
fn representation_matches_series_oracle() {
    let cfg = QuadratureConfig::default();
    for k in 0..=6 {
        for x in [0.2, 1.0, 4.0, 20.0] {
            let q = laplace_phi_deriv(k, pt(x), &cfg).unwrap();
            let oracle = phi_deriv_series(k, x);
            assert!(rel(q, oracle) < 1e-8, "k={k} x={x}: {q} vs {oracle}");
            assert!(rel(q, phi_deriv(k, x).unwrap()) < 1e-10);
        }
    }
}

#[test]
fn fixed_panels_agree_with_adaptive() {
    let fixed = QuadratureConfig {
        subdivision: Subdivision::Fixed,
        ..QuadratureConfig::default()
    };
    for k in [0, 2, 5] {
        let q = laplace_phi_deriv(k, pt(1.5), &fixed).unwrap();
        assert!(rel(q, phi_deriv(k, 1.5).unwrap()) < 1e-9, "k={k}");
    }
}

#[test]
fn convolution_examples() {
    let cfg = QuadratureConfig::default();
    // h ≈ 1/2 near the origin, so the kernel behaves like t^{m+n+1} m! n!/(4 (m+n+1)!)
    for (m, n) in [(0, 0), (1, 0), (2, 3)] {
        let t: f64 = 1e-4;
        let c = sharp_constant(m, n).unwrap().as_f64();
        let want = t.powi((m + n + 1) as i32) / (4.0 * c);
        assert!(rel(convolution_kernel(m, n, t, &cfg).unwrap(), want) < 1e-3);
    }
    let a = convolution_kernel(1, 3, 2.5, &cfg).unwrap();
    let b = convolution_kernel(3, 1, 2.5, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(convolution_kernel(0, 0, 0.0, &cfg).is_err());
    assert!(convolution_kernel(0, 0, -1.0, &cfg).is_err());
}

#[test]
fn frak_y_ranges_and_monotone() {
    let cfg = QuadratureConfig::default();
    let grid = log_grid(1e-3, 1e3, 40).unwrap();
    for m in 0..=4 {
        for n in 0..=4 {
            let c = sharp_constant(m, n).unwrap().as_f64();
            let mut prev = f64::INFINITY;
            for &t in &grid {
                let v = frak_y(m, n, t, &cfg).unwrap();
                assert!(v > c * (1.0 - 1e-9) && v < 2.0 * c * (1.0 + 1e-9), "m={m} n={n} t={t} v={v}");
                assert!(v <= prev * (1.0 + 1e-10), "m={m} n={n} t={t}");
                prev = v;
            }
        }
    }
}

#[test]
fn substituted_form_agrees() {
    let cfg = QuadratureConfig::default();
    for (m, n) in [(0, 0), (1, 2), (3, 3)] {
        for t in [1e-2, 0.7, 5.0, 60.0] {
            let direct = 1.0 / frak_y(m, n, t, &cfg).unwrap();
            let sub = frak_y_reciprocal_substituted(m, n, t, &cfg).unwrap();
            assert!(rel(sub, direct) < 1e-10, "m={m} n={n} t={t}: {sub} vs {direct}");
        }
    }
}

#[test]
fn beta_weight_examples() {
    let w = beta_weight(0, 0).unwrap();
    assert_eq!(w.closed_form, 2.0);
    assert!(w.relative_gap() < 1e-15);
    let w = beta_weight(2, 3).unwrap();
    assert!((w.closed_form - 64.0 / 60.0).abs() < 1e-15);
    assert!(w.relative_gap() < 1e-13);
    for m in 0..=8 {
        for n in 0..=8 {
            assert!(beta_weight(m, n).unwrap().relative_gap() < 1e-12);
        }
    }
}

#[test]
fn convolution_theorem() {
    let cfg = QuadratureConfig::default();
    for (m, n) in [(0, 0), (1, 1), (2, 0)] {
        let x = 1.0;
        let lhs = laplace_of_convolution(m, n, pt(x), &cfg).unwrap().value;
        let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = sign * phi_deriv(m, x).unwrap() * phi_deriv(n, x).unwrap();
        assert!(rel(lhs, rhs) < 1e-6, "m={m} n={n}: {lhs} vs {rhs}");
    }
}

#[test]
fn boundary_sharpness() {
    let cfg = QuadratureConfig::default();
    for m in 0..=3 {
        for n in 0..=3 {
            let c = sharp_constant(m, n).unwrap().as_f64();
            // slightly above C the integrand goes negative for large t
            let above = bernstein_integrand(m, n, c * (1.0 + 1e-2), 1e4, &cfg).unwrap();
            assert!(above < 0.0, "m={m} n={n}: {above}");
            // slightly below 2C it stays positive for small t
            let below = bernstein_integrand(m, n, 2.0 * c * (1.0 - 1e-2), 1e-2, &cfg).unwrap();
            assert!(below > 0.0, "m={m} n={n}: {below}");
            for t in [1e-2, 1.0, 200.0, 1e4] {
                assert!(bernstein_integrand(m, n, c, t, &cfg).unwrap() >= 0.0);
                assert!(bernstein_integrand(m, n, 2.0 * c, t, &cfg).unwrap() <= 0.0);
            }
        }
    }
}

#[test]
fn config_rejections() {
    let loose = QuadratureConfig {
        tolerance: 1e-3,
        ..QuadratureConfig::default()
    };
    assert!(laplace_phi_deriv(0, pt(1.0), &loose).is_err());
    let early = QuadratureConfig {
        truncation: Some(1.0),
        ..QuadratureConfig::default()
    };
    assert!(laplace_phi_deriv(0, pt(1.0), &early).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reciprocal_in_range(m in 0usize..=4, n in 0usize..=4, lt in -3.0f64..3.0) {
        let cfg = QuadratureConfig::default();
        let t = 10f64.powf(lt);
        let c = sharp_constant(m, n).unwrap().as_f64();
        let r = frak_y_reciprocal_substituted(m, n, t, &cfg).unwrap();
        prop_assert!(r > 0.5 / c * (1.0 - 1e-9) && r < 1.0 / c * (1.0 + 1e-9));
    }
}
