//! The two-variable function
//!
//! ```text
//! F(x, y) = 2(1/x − 1/(y−x)) + ½(2^{y−x}/(y−x) − 2^x/x) − (2^{y−x} − 2^x)/((y−x)x)
//!         = [2(y−2x) + 2^{x−1}(2 − y + x + (x−2) 2^{y−2x})] / (x(y−x)),
//! ```
//!
//! its positivity on `y > 2x > 2(2 + 1/ln 2)` and on integer pairs `6 ≤ 2m < k`,
//! the inequality `2^t > 1 + t/(x−2)` behind both, and an exploratory sign map.

use rayon::prelude::*;
use serde::Serialize;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// `2 + 1/ln 2`: above this `x` the key inequality holds for every `t > 0`.
pub const KEY_THRESHOLD: f64 = 2.0 + std::f64::consts::LOG2_E;

/// Relative size below which a region-map value counts as zero.
pub const NEAR_ZERO_RELATIVE: f64 = 1e-10;

/// Largest `y − x` evaluated directly before switching to log space.
const DIRECT_EXPONENT_LIMIT: f64 = 1000.0;

/// A point of the domain `0 < 2x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FPoint {
    x: f64,
    y: f64,
}

impl FPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x > 0.0 && 2.0 * x < y && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::DomainViolation { x, y })
        }
    }

    /// Only `x, y > 0` and `x ≠ y` are required; used by the exploratory map.
    pub fn relaxed(x: f64, y: f64) -> Result<Self> {
        if x > 0.0 && y > 0.0 && x != y && x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::DomainViolation { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Three-term form of `F`, accumulated in double-double.
pub fn f_value(p: FPoint) -> f64 {
    f_unchecked(p.x, p.y)
}

pub(crate) fn f_unchecked(x: f64, y: f64) -> f64 {
    let d = DoubleDouble::from_f64(y) - x;
    if d.hi > DIRECT_EXPONENT_LIMIT {
        return rearranged_unchecked(x, y).0;
    }
    let ln2 = std::f64::consts::LN_2;
    // One rounded value of 2^{y−x} is shared by both terms, so the x = 2
    // cancellation stays exact.
    let p = DoubleDouble::from_f64(d.hi.exp2()) * (1.0 + d.lo * ln2);
    let q = DoubleDouble::from_f64(x.exp2());
    let xd = DoubleDouble::from_f64(x);
    let first = (xd.recip() - d.recip()) * 2.0;
    let second = (p / d - q / xd) * 0.5;
    let third = (p - q) / (d * xd);
    (first + second - third).to_f64()
}

/// Rearranged single-fraction form of `F`.
pub fn f_rearranged(p: FPoint) -> f64 {
    rearranged_unchecked(p.x, p.y).0
}

/// Returns `(F, scale)` where `scale` bounds the magnitude of the summands.
fn rearranged_unchecked(x: f64, y: f64) -> (f64, f64) {
    let xd = DoubleDouble::from_f64(x);
    let d = DoubleDouble::from_f64(y) - x;
    let denom = xd * d;
    let linear = (DoubleDouble::from_f64(y) - xd * 2.0) * 2.0;
    let pow_x = DoubleDouble::from_f64((x - 1.0).exp2());
    let mid = pow_x * ((DoubleDouble::from_f64(2.0) - y) + x);
    let lead = DoubleDouble::from_f64(x) - 2.0;
    // (x−2)·2^{x−1}·2^{y−2x} = (x−2)·2^{y−x−1}
    let exponent = d.hi - 1.0 + d.lo;
    if exponent <= DIRECT_EXPONENT_LIMIT {
        let big = lead * (exponent.exp2());
        let num = linear + mid + big;
        let scale = (linear.abs() + mid.abs() + big.abs()) / denom.abs();
        ((num / denom).to_f64(), scale.to_f64())
    } else {
        let small = ((linear + mid) / denom).to_f64();
        let log_mag = exponent + lead.to_f64().abs().log2() - denom.to_f64().log2();
        let big = lead.signum() * log_mag.exp2();
        (small + big, small.abs() + big.abs())
    }
}

/// `t / (2^t − 1)`, decreasing on `(0, ∞)` from `1/ln 2` to `0`.
pub fn t_over_pow2_minus_one(t: f64) -> f64 {
    t / (t * std::f64::consts::LN_2).exp_m1()
}

/// `2^t > 1 + t/(x−2)` for `t > 0`, `x > 2`.
pub fn key_inequality(t: f64, x: f64) -> Result<bool> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    if !(x > 2.0) {
        return Err(Error::InvalidParameter(format!("x = {x} must exceed 2")));
    }
    Ok((t * std::f64::consts::LN_2).exp_m1() > t / (x - 2.0))
}

/// Outcome of the integer-sequence check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceCheck {
    pub m: u32,
    pub k: u32,
    /// `F(m, k) > 0`.
    pub positive: bool,
    /// `F(m, k)` itself.
    pub margin: f64,
    /// For `m ≥ 4`: `(k−2m)/(2^{k−2m}−1) < m−2`.
    pub sufficient_inequality: Option<bool>,
    /// For `m = 3`: `(2^k − 32k + 128)/(48(k−3))`.
    pub closed_form_m3: Option<f64>,
}

pub fn f_sequence_positive(m: u32, k: u32) -> Result<SequenceCheck> {
    if !(6 <= 2 * m && 2 * m < k) {
        return Err(Error::InvalidParameter(format!(
            "sequence check needs 6 ≤ 2m < k, got m = {m}, k = {k}"
        )));
    }
    let margin = f_value(FPoint::new(m as f64, k as f64)?);
    let sufficient_inequality = (m >= 4).then(|| {
        let gap = (k - 2 * m) as f64;
        t_over_pow2_minus_one(gap) < (m - 2) as f64
    });
    let closed_form_m3 = (m == 3).then(|| {
        let kf = k as f64;
        (kf.exp2() - 32.0 * kf + 128.0) / (48.0 * (kf - 3.0))
    });
    Ok(SequenceCheck {
        m,
        k,
        positive: margin > 0.0,
        margin,
        sufficient_inequality,
        closed_form_m3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
    NearZero,
    /// Outside `0 < x < y/2`.
    Outside,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::NearZero => "0",
            Sign::Outside => ".",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub x: f64,
    pub y: f64,
    pub sign: Sign,
    /// `F(x, y)`, `NaN` outside the domain.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major by `y`, then `x`.
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn count(&self, sign: Sign) -> usize {
        self.cells.iter().filter(|c| c.sign == sign).count()
    }
}

pub fn classify(x: f64, y: f64) -> RegionCell {
    if !(x > 0.0 && 2.0 * x < y) {
        return RegionCell {
            x,
            y,
            sign: Sign::Outside,
            value: f64::NAN,
        };
    }
    let (value, scale) = rearranged_unchecked(x, y);
    let sign = if value.abs() <= NEAR_ZERO_RELATIVE * scale {
        Sign::NearZero
    } else if value > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    };
    RegionCell { x, y, sign, value }
}

/// Sign of `F` on an inclusive `resolution × resolution` grid.
pub fn sign_region_map(
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
) -> Result<RegionMap> {
    if resolution <= 1 {
        return Err(Error::InvalidParameter(format!(
            "region map resolution must exceed 1, got {resolution}"
        )));
    }
    let xs = crate::grid::linear_grid(x_range.0, x_range.1, resolution)?;
    let ys = crate::grid::linear_grid(y_range.0, y_range.1, resolution)?;
    let cells = ys
        .par_iter()
        .flat_map_iter(|&y| xs.iter().map(move |&x| classify(x, y)))
        .collect();
    Ok(RegionMap { xs, ys, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn domain_is_enforced() {
        assert!(FPoint::new(3.0, 6.0).is_err());
        assert!(FPoint::new(0.0, 1.0).is_err());
        assert!(FPoint::new(3.0, 6.5).is_ok());
        assert!(FPoint::relaxed(3.0, 3.0).is_err());
        assert!(FPoint::relaxed(5.0, 3.0).is_ok());
    }

    #[test]
    fn known_values() {
        let p = FPoint::new(3.0, 7.0).unwrap();
        assert!((f_value(p) - 1.0 / 6.0).abs() < 1e-12);
        assert!((f_rearranged(p) - 1.0 / 6.0).abs() < 1e-12);
        for y in [5.0, 8.0, 10.0, 20.0] {
            let p = FPoint::new(2.0, y).unwrap();
            assert!(f_value(p).abs() < 1e-10, "y={y}");
            assert_eq!(f_rearranged(p), 0.0);
        }
        assert!(f_value(FPoint::new(4.0, 9.0).unwrap()) > 0.0);
        assert!(f_rearranged(FPoint::new(3.5, 8.0).unwrap()) > 0.0);
    }

    #[test]
    fn huge_exponent_stays_finite() {
        let p = FPoint::new(3.0, 900.0).unwrap();
        let a = f_value(p);
        let b = f_rearranged(p);
        assert!(a.is_finite() && a > 0.0);
        assert_relative_eq!(a, b, max_relative = 1e-12);
        let far = FPoint::new(3.0, 1030.0).unwrap();
        assert!(f_rearranged(far).is_infinite() || f_rearranged(far) > 1e300);
        let log_space = FPoint::new(1.5, 1010.0).unwrap();
        assert!(f_rearranged(log_space) < -1e290);
    }

    #[test]
    fn key_inequality_cases() {
        assert!(key_inequality(1.0, 2.5).map(|b| !b).unwrap());
        for &t in &[1e-6, 0.1, 1.0, 10.0, 100.0] {
            assert!(key_inequality(t, 3.45).unwrap(), "t={t}");
        }
        assert!(!key_inequality(1e-6, 2.5).unwrap());
        assert!(key_inequality(0.0, 3.0).is_err());
        assert!(key_inequality(1.0, 2.0).is_err());
    }

    #[test]
    fn sequence_cases() {
        let c = f_sequence_positive(3, 7).unwrap();
        assert!(c.positive);
        assert!((c.margin - 1.0 / 6.0).abs() < 1e-12);
        assert!((c.closed_form_m3.unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(c.sufficient_inequality, None);
        let c = f_sequence_positive(4, 9).unwrap();
        assert!(c.positive && c.sufficient_inequality == Some(true));
        assert!(f_sequence_positive(2, 7).is_err());
        assert!(f_sequence_positive(3, 6).is_err());
    }

    #[test]
    fn region_map_signs() {
        assert!(sign_region_map((0.0, 1.0), (4.0, 5.0), 1).is_err());
        let m = sign_region_map((2.0, 3.0), (8.0, 20.0), 20).unwrap();
        for (i, c) in m.cells.iter().enumerate() {
            if i % 20 == 0 {
                assert_eq!(c.sign, Sign::NearZero, "{c:?}");
            } else {
                assert_eq!(c.sign, Sign::Positive, "{c:?}");
            }
        }
        let m = sign_region_map((0.0, 6.0), (4.0, 40.0), 30).unwrap();
        assert!(m.cells.iter().filter(|c| c.x == 0.0).all(|c| c.sign == Sign::Outside));
        assert_eq!(m.cells.len(), 900);
    }
}
