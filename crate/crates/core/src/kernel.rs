//! The Laplace kernel of `Φ`,
//!
//! ```text
//! h(t) = e^t (e^t − 1 − t) / (e^t − 1)²,   h(0) = 1/2,
//! ```
//!
//! so that `Φ(x) = ∫₀^∞ h(t) e^{−xt} dt`, together with the ratio functions
//! `h(st)/h(t)^s` and `h(st) h((1−s)t)/h(t)` and a check of the Taylor
//! coefficients of the exponential polynomial that controls the sign of
//! `d/dt [h(st)/h(t)^s]`.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bernoulli;
use crate::error::{Error, Result};
use crate::lemma_f;

/// Below this `|t|` the Maclaurin polynomial is used.
const SMALL_T: f64 = 1e-3;
/// At and above this `t` the `e^{−t}` form is used.
const EXP_NEG_FORM_T: f64 = 0.5;
/// Degree of the small-`t` polynomial.
pub const MACLAURIN_DEGREE: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    t: f64,
    s: Option<f64>,
}

impl KernelPoint {
    pub fn new(t: f64, s: Option<f64>) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("kernel abscissa t = {t} must be ≥ 0")));
        }
        if let Some(s) = s {
            check_s(s)?;
        }
        Ok(Self { t, s })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> Option<f64> {
        self.s
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("ratio parameter s = {s} must lie in (0, 1)")))
    }
}

fn check_t_positive(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} must be positive")))
    }
}

/// Maclaurin coefficients of `h`: `c_0 = 1/2`, `c_p = B_{p+1}/p!` for odd `p`,
/// all other coefficients zero.
pub fn maclaurin_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let b = bernoulli::bernoulli_rationals(MACLAURIN_DEGREE + 1);
        let mut c = vec![0.0; MACLAURIN_DEGREE + 1];
        c[0] = 0.5;
        let mut fact = num_rational::BigRational::from_integer(1.into());
        for n in 1..=MACLAURIN_DEGREE {
            fact *= num_rational::BigRational::from_integer(n.into());
            if n % 2 == 1 {
                c[n] = (&b[n + 1] / &fact).to_f64().unwrap_or(0.0);
            }
        }
        c
    })
}

/// `e^t − 1 − t` without cancellation for small `t`.
fn expm1_minus_t(t: f64) -> f64 {
    if t.abs() >= 0.5 {
        return t.exp_m1() - t;
    }
    let mut term = t * t * 0.5;
    let mut sum = term;
    let mut n = 2.0;
    while term.abs() > f64::EPSILON * 0.25 * sum.abs() {
        n += 1.0;
        term *= t / n;
        sum += term;
    }
    sum
}

/// The kernel `h(t)`; total on the real line, with `h(−t) = 1 − h(t)`.
pub fn h(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t < 0.0 {
        return 1.0 - h(-t);
    }
    if t < SMALL_T {
        let c = maclaurin_coefficients();
        return c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci);
    }
    if t < EXP_NEG_FORM_T {
        let tail = expm1_minus_t(t);
        let em = t + tail;
        return (1.0 + em) * tail / (em * em);
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    let q = (-t).exp();
    let one_minus_q = -(-t).exp_m1();
    (one_minus_q - t * q) / (one_minus_q * one_minus_q)
}

/// `h(st) / h(t)^s`, increasing in `t` from `2^{s−1}` to `1`.
pub fn h_ratio(s: f64, t: f64) -> Result<f64> {
    check_s(s)?;
    check_t_positive(t)?;
    Ok(h(s * t) / (s * h(t).ln()).exp())
}

/// `h(st) h((1−s)t) / h(t)`, increasing in `t` from `1/2` to `1`, symmetric in `s ↔ 1−s`.
pub fn h_ratio_product(s: f64, t: f64) -> Result<f64> {
    check_s(s)?;
    check_t_positive(t)?;
    Ok(ratio_product_unchecked(s, t))
}

pub(crate) fn ratio_product_unchecked(s: f64, t: f64) -> f64 {
    let (a, b) = if s <= 0.5 { (s, 1.0 - s) } else { (1.0 - s, s) };
    h(a * t) * h(b * t) / h(t)
}

/// Closed forms of the Taylor coefficients of orders 7 through 11 of the
/// polynomial `P(t)` with `d/dt[h(st)/h(t)^s] = s⁴ e^{(1+s)t} P(t) / [(e^t−1)³ (e^{st}−1)³ h(t)^{s+1}]`.
pub fn printed_coefficient(order: usize, s: f64) -> Option<f64> {
    let p = |k: i32| s.powi(k);
    Some(match order {
        7 => (1.0 - s) / 36.0,
        8 => (1.0 - p(2)) / 45.0,
        9 => (22.0 * (1.0 - p(3)) + 15.0 * (s - p(2))) / 2160.0,
        10 => (52.0 * (1.0 - p(4)) + 63.0 * (s - p(3))) / 15120.0,
        11 => (285.0 * (1.0 - p(5)) + 470.0 * (s - p(4)) + 238.0 * (p(2) - p(3))) / 302400.0,
        _ => return None,
    })
}

/// The exponential polynomial `E(t)` with `d/dt[h(st)/h(t)^s] = −s e^{(1+s)t} E(t) / [(e^t−1)³(e^{st}−1)³ h(t)^{s+1}]`.
fn bracket(z: Complex64, s: f64) -> (Complex64, f64) {
    let e = |a: f64| (z * a).exp();
    let terms = [
        (z - 2.0) * e(1.0 + 2.0 * s),
        (z + 2.0) * e(2.0 * s),
        (2.0 - s * z) * e(2.0 + s),
        z * (4.0 * (s - 1.0)) * e(1.0 + s),
        -(z * z * (2.0 * s) + z * (3.0 * s) + 2.0) * e(s),
        -(z * s + 2.0) * e(2.0),
        (z * z * (2.0 * s) + z * 3.0 + 2.0) * e(1.0),
        z * (s - 1.0),
    ];
    let sum = terms.iter().sum();
    let scale = terms.iter().map(|c| c.norm()).sum();
    (sum, scale)
}

/// Contour-integral extraction radius and sample count.
const CONTOUR_RADIUS: f64 = 2.0;
const CONTOUR_POINTS: usize = 96;

/// Taylor coefficients of `P(t) = −E(t)/s³` extracted numerically by the
/// trapezoidal rule on a circle (Cauchy's formula), with a roundoff estimate.
pub fn extract_bracket_coefficients(s: f64, orders: &[usize]) -> Result<Vec<(f64, f64)>> {
    check_s(s)?;
    let n = CONTOUR_POINTS;
    let samples: Vec<(Complex64, Complex64, f64)> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let z = Complex64::from_polar(CONTOUR_RADIUS, theta);
            let (v, scale) = bracket(z, s);
            (z, v, scale)
        })
        .collect();
    let max_scale = samples.iter().map(|x| x.2).fold(0.0, f64::max);
    let s3 = s * s * s;
    Ok(orders
        .iter()
        .map(|&k| {
            let acc: Complex64 = samples
                .iter()
                .map(|(z, v, _)| v / z.powi(k as i32))
                .sum();
            let coeff = -(acc.re / n as f64) / s3;
            let accuracy = 8.0 * f64::EPSILON * max_scale / CONTOUR_RADIUS.powi(k as i32) / s3;
            (coeff, accuracy)
        })
        .collect())
}

/// Coefficient of `t^k` in `P(t)` assembled from `F(m, k)` for `3 ≤ m < k/2`.
pub fn coefficient_via_f(k: usize, s: f64) -> f64 {
    let mut sum = 0.0;
    let mut m = 3;
    while 2 * m < k {
        let f = lemma_f::f_unchecked(m as f64, k as f64);
        let denom = factorial(m - 1) * factorial(k - m - 1);
        sum += 2.0 * f * (s.powi(m as i32) - s.powi((k - m) as i32)) / denom;
        m += 1;
    }
    sum / (s * s * s)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientResidual {
    pub order: usize,
    pub extracted: f64,
    pub printed: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    /// Estimated absolute accuracy of the extraction.
    pub accuracy: f64,
}

/// Relative accuracy the extraction must reach for a residual to be meaningful.
pub const COEFFICIENT_TARGET: f64 = 1e-8;

/// Compares numerically extracted Taylor coefficients with their closed forms.
pub fn series_coefficient_check(s: f64, orders: &[usize]) -> Result<Vec<CoefficientResidual>> {
    for &k in orders {
        if !(7..=11).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "coefficient order {k} outside 7..=11"
            )));
        }
    }
    let extracted = extract_bracket_coefficients(s, orders)?;
    orders
        .iter()
        .zip(extracted)
        .map(|(&order, (value, accuracy))| {
            let printed = printed_coefficient(order, s).expect("order range checked");
            let rel_accuracy = accuracy / printed.abs();
            if !(rel_accuracy <= COEFFICIENT_TARGET) {
                return Err(Error::ToleranceUnattainable {
                    target: COEFFICIENT_TARGET,
                    achieved: rel_accuracy,
                });
            }
            let abs_residual = (value - printed).abs();
            Ok(CoefficientResidual {
                order,
                extracted: value,
                printed,
                abs_residual,
                rel_residual: abs_residual / printed.abs(),
                accuracy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn values_at_landmarks() {
        assert_eq!(h(0.0), 0.5);
        let e = std::f64::consts::E;
        assert_relative_eq!(h(1.0), e * (e - 2.0) / ((e - 1.0) * (e - 1.0)), max_relative = 1e-15);
        assert_relative_eq!(h(1.0), 0.661_303_112_661_534_1, max_relative = 1e-15);
        assert!((h(1e4) - 1.0).abs() < 1e-12);
        assert_eq!(h(f64::INFINITY), 1.0);
        assert!(h(f64::MAX).is_finite());
    }

    #[test]
    fn branches_join_smoothly() {
        // 40-digit reference values on both sides of each switch point
        let cases = [
            (0.5, 0.582_645_038_020_416_401_7),
            (0.499_999_999_999_5, 0.582_645_038_020_335_121_1),
            (1e-3, 0.500_166_666_661_111_111_3),
            (0.000_999_999_999_999, 0.500_166_666_661_110_944_6),
        ];
        for (t, want) in cases {
            assert_relative_eq!(h(t), want, max_relative = 4e-16);
        }
    }

    #[test]
    fn negative_arguments_reflect() {
        for &t in &[1e-5, 0.2, 3.0] {
            assert_relative_eq!(h(-t) + h(t), 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn kernel_point_validation() {
        assert!(KernelPoint::new(-1.0, None).is_err());
        assert!(KernelPoint::new(1.0, Some(1.0)).is_err());
        let p = KernelPoint::new(2.0, Some(0.25)).unwrap();
        assert_eq!((p.t(), p.s()), (2.0, Some(0.25)));
    }

    #[test]
    fn ratio_endpoints() {
        let r = h_ratio(0.3, 1e-4).unwrap();
        assert!((r - 2f64.powf(-0.7)).abs() < 1e-6);
        assert!((r - 0.615_572).abs() < 1e-5);
        assert!((h_ratio(0.5, 1e3).unwrap() - 1.0).abs() < 1e-3);
        assert!(h_ratio(0.5, 1.0).unwrap() < h_ratio(0.5, 2.0).unwrap());
        assert!(h_ratio(0.0, 1.0).is_err());
        assert!(h_ratio(0.5, 0.0).is_err());
    }

    #[test]
    fn ratio_product_endpoints_and_symmetry() {
        assert!((h_ratio_product(0.25, 1e-4).unwrap() - 0.5).abs() < 1e-4);
        assert!((h_ratio_product(0.5, 1e3).unwrap() - 1.0).abs() < 1e-3);
        for &t in &[1e-3, 0.7, 4.0, 90.0] {
            let a = h_ratio_product(0.3, t).unwrap();
            let b = h_ratio_product(0.7, t).unwrap();
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * a, "t={t}");
        }
    }

    #[test]
    fn printed_order_seven_at_half() {
        assert_relative_eq!(printed_coefficient(7, 0.5).unwrap(), 1.0 / 72.0);
        assert!(printed_coefficient(12, 0.5).is_none());
    }

    #[test]
    fn extraction_matches_printed_forms() {
        for &s in &[0.25, 0.5, 0.75] {
            let res = series_coefficient_check(s, &[7, 8, 9, 10, 11]).unwrap();
            for r in res {
                assert!(r.rel_residual <= 1e-8, "{r:?}");
            }
        }
    }

    #[test]
    fn order_seven_vanishes_as_s_approaches_one() {
        let s = 1.0 - 1e-9;
        let (c, acc) = extract_bracket_coefficients(s, &[7]).unwrap()[0];
        assert!(c.abs() < 1e-10 + acc, "{c}");
        assert!(series_coefficient_check(s, &[7]).is_err());
    }

    #[test]
    fn f_sum_reproduces_coefficients() {
        for &s in &[0.2, 0.5, 0.8] {
            let orders: Vec<usize> = (7..=18).collect();
            let ex = extract_bracket_coefficients(s, &orders).unwrap();
            for (k, (c, acc)) in orders.iter().zip(ex) {
                let via_f = coefficient_via_f(*k, s);
                assert!((via_f - c).abs() <= 10.0 * acc + 1e-12 * c.abs(), "k={k} s={s}");
            }
        }
    }
}
