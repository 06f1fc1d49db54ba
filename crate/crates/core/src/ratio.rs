//! Combinations of derivatives of `Φ`:
//!
//! * `Y_{m,n} = Φ^{(m+n+1)} / (Φ^{(m)} Φ^{(n)})` and `𝒴_{m,n;ω} = Φ^{(m+n+1)} + ω Φ^{(m)} Φ^{(n)}`,
//! * the special cases `H_β`, `𝔥_α`, `𝔍_{k,λ}`, `J_{k,μ}`, `𝒥_{k,m}`,
//! * the sharp constant `C = (m+n+1)!/(m! n!)` with `−2C < Y_{m,n} < −C`,
//! * `Φ^{(m+n+1)}[Φ^{(m)}Φ^{(n)}]′ − Φ^{(m+n+2)}Φ^{(m)}Φ^{(n)}`, the numerator of `−Y′_{m,n}`.
//!
//! Products and sums are formed in double-double before rounding, since
//! `𝒴` at `ω = C` cancels its leading singular terms exactly as `x → 0⁺`.

use serde::Serialize;

use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{Error, Result};
use crate::polygamma::{EvalPoint, Polygamma, MAX_SUPPORTED_ORDER};

/// `C = (m+n+1)!/(m! n!)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SharpConstant {
    pub m: usize,
    pub n: usize,
    pub value: u128,
}

impl SharpConstant {
    pub fn as_f64(&self) -> f64 {
        self.value as f64
    }
}

pub fn sharp_constant(m: usize, n: usize) -> Result<SharpConstant> {
    for order in [m, n] {
        if order > MAX_SUPPORTED_ORDER {
            return Err(Error::OrderOutOfRange {
                order,
                max: MAX_SUPPORTED_ORDER,
            });
        }
    }
    let (lo, hi) = if m < n { (m, n) } else { (n, m) };
    // C(m+n, lo), built so every intermediate is an integer
    let mut binom: u128 = 1;
    for i in 1..=lo {
        binom = binom * (hi + i) as u128 / i as u128;
    }
    Ok(SharpConstant {
        m,
        n,
        value: binom * (m + n + 1) as u128,
    })
}

/// Double-double value together with the summed magnitude of its terms,
/// which bounds the rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accumulated {
    pub value: DoubleDouble,
    pub scale: f64,
}

impl Accumulated {
    /// Absolute error bound after rounding to `f64`.
    pub fn error_bound(&self) -> f64 {
        64.0 * DD_EPSILON * self.scale + f64::EPSILON * self.value.to_f64().abs()
    }
}

/// Evaluator for the ratio family, sharing one polygamma configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct RatioFunctions {
    pg: Polygamma,
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 1..=k {
        c = c * (n - k + i) as f64 / i as f64;
    }
    c.round()
}

impl RatioFunctions {
    pub fn new(pg: Polygamma) -> Self {
        Self { pg }
    }

    pub fn polygamma(&self) -> &Polygamma {
        &self.pg
    }

    fn d(&self, k: usize, p: EvalPoint) -> Result<DoubleDouble> {
        self.pg.phi_deriv_dd(k, p)
    }

    fn checked_ratio(&self, num: DoubleDouble, den: DoubleDouble, p: EvalPoint) -> Result<DoubleDouble> {
        let den_f = den.to_f64();
        if !num.is_finite() || !den.is_finite() || den_f.abs() < f64::MIN_POSITIVE {
            return Err(Error::DenominatorUnderflow(p.x()));
        }
        Ok(num / den)
    }

    /// `Φ^{(top)} / (Φ^{(a)} Φ^{(b)})`.
    fn triple_ratio(&self, top: usize, a: usize, b: usize, p: EvalPoint) -> Result<DoubleDouble> {
        let num = self.d(top, p)?;
        let den = self.d(a, p)? * self.d(b, p)?;
        self.checked_ratio(num, den, p)
    }

    /// `Y_{m,n}(x)`.
    pub fn y(&self, m: usize, n: usize, p: EvalPoint) -> Result<f64> {
        Ok(self.y_dd(m, n, p)?.to_f64())
    }

    /// `Y_{m,n}(x)` before rounding. Near `x = 0` the distance to `−C` is of
    /// relative size `x^{min(m,n)+1}`, which only double-double resolves.
    pub fn y_dd(&self, m: usize, n: usize, p: EvalPoint) -> Result<DoubleDouble> {
        self.triple_ratio(m + n + 1, m, n, p)
    }

    /// `𝒴_{m,n;ω}(x)` in double-double, with its term magnitude.
    pub fn cal_y_acc(&self, m: usize, n: usize, omega: f64, p: EvalPoint) -> Result<Accumulated> {
        self.cal_y_derivative(m, n, omega, 0, p)
    }

    pub fn cal_y(&self, m: usize, n: usize, omega: f64, p: EvalPoint) -> Result<f64> {
        Ok(self.cal_y_acc(m, n, omega, p)?.value.to_f64())
    }

    /// `d^j/dx^j 𝒴_{m,n;ω}(x) = Φ^{(m+n+1+j)} + ω Σ_i C(j,i) Φ^{(m+i)} Φ^{(n+j−i)}`.
    pub fn cal_y_derivative(
        &self,
        m: usize,
        n: usize,
        omega: f64,
        j: usize,
        p: EvalPoint,
    ) -> Result<Accumulated> {
        let top = self.d(m + n + 1 + j, p)?;
        let product = self.product_derivative(m, n, j, p)?;
        let weighted = product.value * omega;
        Ok(Accumulated {
            value: top + weighted,
            scale: top.abs().to_f64() + omega.abs() * product.scale,
        })
    }

    /// `d^r/dx^r [Φ^{(m)} Φ^{(n)}]`.
    fn product_derivative(&self, m: usize, n: usize, r: usize, p: EvalPoint) -> Result<Accumulated> {
        let mut value = DoubleDouble::ZERO;
        let mut scale = 0.0;
        for i in 0..=r {
            let term = self.d(m + i, p)? * self.d(n + r - i, p)? * binomial(r, i);
            value += term;
            scale += term.abs().to_f64();
        }
        Ok(Accumulated { value, scale })
    }

    /// `H_β(x) = Φ′(x) / Φ(x)^β`.
    pub fn h_beta(&self, beta: f64, p: EvalPoint) -> Result<f64> {
        let num = self.d(1, p)?;
        let base = self.d(0, p)?;
        let den = positive_power(base, beta, p)?;
        Ok(self.checked_ratio(num, den, p)?.to_f64())
    }

    /// `𝔥_α(x) = Φ′(x) + α Φ(x)²`.
    pub fn frak_h(&self, alpha: f64, p: EvalPoint) -> Result<f64> {
        let phi = self.d(0, p)?;
        Ok((self.d(1, p)? + phi.sqr() * alpha).to_f64())
    }

    /// `𝔍_{k,λ}(x) = Φ^{(2k+1)}(x) + λ [Φ^{(k)}(x)]²`.
    pub fn frak_j(&self, k: usize, lambda: f64, p: EvalPoint) -> Result<f64> {
        let base = self.d(k, p)?;
        Ok((self.d(2 * k + 1, p)? + base.sqr() * lambda).to_f64())
    }

    /// `J_{k,μ}(x) = Φ^{(2k+1)}(x) / [(−1)^k Φ^{(k)}(x)]^μ`.
    pub fn j(&self, k: usize, mu: f64, p: EvalPoint) -> Result<f64> {
        let mut base = self.d(k, p)?;
        if k % 2 == 1 {
            base = -base;
        }
        let den = positive_power(base, mu, p)?;
        Ok(self.checked_ratio(self.d(2 * k + 1, p)?, den, p)?.to_f64())
    }

    /// `𝒥_{k,m}(x) = Φ^{(2k+2)} / (Φ^{(k−m)} Φ^{(k+m+1)})` for `k ≥ m`.
    pub fn cal_j(&self, k: usize, m: usize, p: EvalPoint) -> Result<f64> {
        Ok(self.cal_j_dd(k, m, p)?.to_f64())
    }

    pub fn cal_j_dd(&self, k: usize, m: usize, p: EvalPoint) -> Result<DoubleDouble> {
        if m > k {
            return Err(Error::InvalidParameter(format!("calJ needs k ≥ m, got k = {k}, m = {m}")));
        }
        self.triple_ratio(2 * k + 2, k - m, k + m + 1, p)
    }

    /// `Φ^{(m+n+1)}[Φ^{(m)}Φ^{(n)}]′ − Φ^{(m+n+2)}Φ^{(m)}Φ^{(n)} = −Y′_{m,n}·[Φ^{(m)}Φ^{(n)}]²`.
    pub fn remark_expression(&self, m: usize, n: usize, p: EvalPoint) -> Result<f64> {
        Ok(self.remark_derivative(m, n, 0, p)?.value.to_f64())
    }

    /// `j`-th derivative of [`Self::remark_expression`] by the Leibniz rule.
    pub fn remark_derivative(&self, m: usize, n: usize, j: usize, p: EvalPoint) -> Result<Accumulated> {
        let a = m + n + 1;
        let mut value = DoubleDouble::ZERO;
        let mut scale = 0.0;
        for i in 0..=j {
            let c = binomial(j, i);
            let first = self.d(a + i, p)? * self.product_derivative(m, n, j - i + 1, p)?.value * c;
            let second = self.d(a + 1 + i, p)? * self.product_derivative(m, n, j - i, p)?.value * c;
            value += first - second;
            scale += first.abs().to_f64() + second.abs().to_f64();
        }
        Ok(Accumulated { value, scale })
    }
}

/// `base^e` for a positive base; integer exponents stay in double-double.
fn positive_power(base: DoubleDouble, e: f64, p: EvalPoint) -> Result<DoubleDouble> {
    if !(base.hi > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "power of a non-positive base at x = {}",
            p.x()
        )));
    }
    if e.fract() == 0.0 && e.abs() <= 64.0 {
        Ok(base.powi(e as i32))
    } else {
        let b = base.to_f64();
        Ok(DoubleDouble::from_f64((e * b.ln()).exp()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64) -> EvalPoint {
        EvalPoint::new(x).unwrap()
    }

    #[test]
    fn sharp_constants() {
        assert_eq!(sharp_constant(0, 0).unwrap().value, 1);
        assert_eq!(sharp_constant(0, 1).unwrap().value, 2);
        assert_eq!(sharp_constant(1, 2).unwrap().value, 12);
        assert_eq!(sharp_constant(2, 1).unwrap().value, 12);
        assert_eq!(sharp_constant(1, 1).unwrap().value, 6);
        // (2k+2)!/(k!(k+1)!) at k = 3 equals C(3, 4)
        assert_eq!(sharp_constant(3, 4).unwrap().value, 40320 / (6 * 24));
        assert!(sharp_constant(41, 0).is_err());
        assert_eq!(
            sharp_constant(40, 40).unwrap().value,
            81 * 107_507_208_733_336_176_461_620u128
        );
    }

    #[test]
    fn y_basics() {
        let r = RatioFunctions::default();
        for &x in &[1e-3, 0.5, 1.0, 7.0, 1e3] {
            let v = r.y(0, 0, pt(x)).unwrap();
            assert!(v > -2.0 && v < -1.0, "x={x} v={v}");
        }
        assert_eq!(r.y(1, 2, pt(3.0)).unwrap(), r.y(2, 1, pt(3.0)).unwrap());
        let c = 12.0;
        assert!((r.y(1, 2, pt(1e-4)).unwrap() + c).abs() < 0.01 * c);
        assert!(r.y(6, 6, pt(1.0)).is_err());
    }

    #[test]
    fn cal_y_identities() {
        let r = RatioFunctions::default();
        for &x in &[0.05, 1.0, 20.0] {
            let p = pt(x);
            assert!(r.cal_y(0, 0, 0.0, p).unwrap() < 0.0);
            assert_eq!(r.cal_y(0, 0, 1.7, p).unwrap(), r.frak_h(1.7, p).unwrap());
            assert_eq!(r.cal_y(2, 2, 30.0, p).unwrap(), r.frak_j(2, 30.0, p).unwrap());
            assert_eq!(r.cal_y(1, 3, 5.0, p).unwrap(), r.cal_y(3, 1, 5.0, p).unwrap());
            assert_eq!(r.cal_j(1, 0, p).unwrap(), r.y(1, 2, p).unwrap());
            assert_eq!(r.h_beta(2.0, p).unwrap(), r.y(0, 0, p).unwrap());
        }
    }

    #[test]
    fn j_limits() {
        let r = RatioFunctions::default();
        let v = r.j(1, 2.0, pt(1e-4)).unwrap();
        assert!((v + 6.0).abs() < 0.06, "{v}");
        assert!(r.j(1, 1.5, pt(1.0)).unwrap() < 0.0);
    }

    #[test]
    fn cal_j_requires_k_ge_m() {
        let r = RatioFunctions::default();
        assert!(r.cal_j(1, 2, pt(1.0)).is_err());
    }

    #[test]
    fn remark_expression_positive() {
        let r = RatioFunctions::default();
        assert!(r.remark_expression(0, 0, pt(1.0)).unwrap() > 0.0);
    }

    #[test]
    fn extreme_points_report_instead_of_nan() {
        let r = RatioFunctions::default();
        let e = r.y(4, 4, pt(1e-40)).unwrap_err();
        assert_eq!(e, Error::DenominatorUnderflow(1e-40));
    }
}
