//! Even-index Bernoulli numbers, generated exactly with big rationals and
//! rounded once to double-double.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dd::DoubleDouble;

/// Number of even-index Bernoulli numbers kept, `B_0, B_2, …, B_{2(COUNT-1)}`.
pub const COUNT: usize = 80;

static TABLE: OnceLock<Vec<DoubleDouble>> = OnceLock::new();

/// Exact Bernoulli numbers `B_0..=B_n` (convention `B_1 = -1/2`).
pub fn bernoulli_rationals(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    // Row i of Pascal's triangle at the top of iteration i.
    let mut binom: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for i in 1..=n {
        let mut next = vec![BigInt::one(); i + 2];
        for j in 1..=i {
            next[j] = &binom[j - 1] + &binom[j];
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * BigRational::from_integer(next[j].clone());
            }
        }
        binom = next;
        b.push(-acc / BigRational::from_integer(BigInt::from(i + 1)));
    }
    b
}

pub fn rational_to_dd(r: &BigRational) -> DoubleDouble {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() || hi == 0.0 {
        return DoubleDouble::from_f64(hi);
    }
    let rest = r - BigRational::from_float(hi).expect("finite");
    let lo = rest.to_f64().unwrap_or(0.0);
    DoubleDouble::new(hi, lo)
}

/// `B_{2j}` for `j = 0..COUNT`.
pub fn even_table() -> &'static [DoubleDouble] {
    TABLE.get_or_init(|| {
        let all = bernoulli_rationals(2 * (COUNT - 1));
        all.iter().step_by(2).map(rational_to_dd).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_are_exact() {
        let b = bernoulli_rationals(12);
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[6], r(1, 42));
        assert_eq!(b[12], r(-691, 2730));
        assert!(b[3].is_zero() && b[11].is_zero());
    }

    #[test]
    fn table_has_alternating_signs() {
        let t = even_table();
        assert_eq!(t.len(), COUNT);
        for (j, v) in t.iter().enumerate().skip(1) {
            let expected = if j % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(v.signum(), expected, "B_{}", 2 * j);
        }
        // B_30 = 8615841276005 / 14322
        let b30 = 8615841276005.0 / 14322.0;
        assert!((t[15].to_f64() - b30).abs() / b30 < 1e-15);
    }
}
