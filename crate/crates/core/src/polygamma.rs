//! Polygamma functions `ψ^{(k)}` and the derivatives of `Φ(x) = x ψ'(x) − 1`.
//!
//! Evaluation shifts `x` upward with `ψ^{(k)}(x) = ψ^{(k)}(x+1) + (−1)^{k+1} k!/x^{k+1}`
//! until it passes the crossover abscissa, then sums the Bernoulli asymptotic
//! expansion
//!
//! ```text
//! ψ^{(k)}(y) ~ (−1)^{k+1} [ (k−1)!/y^k + k!/(2 y^{k+1}) + Σ_{j≥1} B_{2j} (2j+k−1)!/((2j)! y^{2j+k}) ]
//! ```
//!
//! All of it runs in double-double arithmetic, so combinations such as
//! `x ψ^{(k+1)}(x) + k ψ^{(k)}(x)`, which cancel by a factor `~2x` for large
//! `x`, still keep far more than `f64` precision.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bernoulli;
use crate::dd::{DoubleDouble, DD_EPSILON};
use crate::error::{Error, Result};

/// Default highest polygamma order.
pub const DEFAULT_MAX_ORDER: usize = 12;
/// Hard ceiling on configurable orders.
pub const MAX_SUPPORTED_ORDER: usize = 40;

/// A strictly positive abscissa.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EvalPoint(f64);

impl EvalPoint {
    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() && x > 0.0 {
            Ok(Self(x))
        } else {
            Err(Error::InvalidPoint(x))
        }
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for EvalPoint {
    type Error = Error;
    fn try_from(x: f64) -> Result<Self> {
        Self::new(x)
    }
}

/// Derivative orders `(m, n)`, or a single order `k = m` when `n` is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivOrders {
    pub m: usize,
    pub n: Option<usize>,
}

impl DerivOrders {
    pub fn pair(m: usize, n: usize, max_order: usize) -> Result<Self> {
        for order in [m, n] {
            if order > max_order {
                return Err(Error::OrderOutOfRange {
                    order,
                    max: max_order,
                });
            }
        }
        Ok(Self { m, n: Some(n) })
    }

    pub fn single(k: usize, max_order: usize) -> Result<Self> {
        if k > max_order {
            return Err(Error::OrderOutOfRange {
                order: k,
                max: max_order,
            });
        }
        Ok(Self { m: k, n: None })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Relative tolerance every polygamma value must meet, in `(0, 1e-6]`.
    pub target_tolerance: f64,
    /// Bits of significand the asymptotic series is converged to, `53..=106`.
    pub working_bits: u32,
    /// Abscissa above which the asymptotic expansion is used, `≥ 8`.
    pub crossover: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            target_tolerance: 1e-15,
            working_bits: 106,
            crossover: 25.0,
        }
    }
}

impl PrecisionPolicy {
    pub fn validate(&self) -> Result<()> {
        let tol = self.target_tolerance;
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(Error::InvalidPolicy(format!(
                "target tolerance {tol:e} outside (0, 1e-6]"
            )));
        }
        if !(53..=106).contains(&self.working_bits) {
            return Err(Error::InvalidPolicy(format!(
                "working precision {} bits outside 53..=106",
                self.working_bits
            )));
        }
        if !(self.crossover >= 8.0 && self.crossover.is_finite()) {
            return Err(Error::InvalidPolicy(format!(
                "crossover abscissa {} below 8",
                self.crossover
            )));
        }
        let unit = self.unit_roundoff();
        if tol < 4.0 * unit {
            return Err(Error::ToleranceUnattainable {
                target: tol,
                achieved: 4.0 * unit,
            });
        }
        Ok(())
    }

    fn unit_roundoff(&self) -> f64 {
        (2.0f64).powi(-(self.working_bits as i32)).max(DD_EPSILON / 4.0)
    }
}

/// Configured evaluator for `ψ^{(k)}` and `Φ^{(k)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polygamma {
    policy: PrecisionPolicy,
    max_order: usize,
}

impl Default for Polygamma {
    fn default() -> Self {
        Self {
            policy: PrecisionPolicy::default(),
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl Polygamma {
    pub fn new(policy: PrecisionPolicy, max_order: usize) -> Result<Self> {
        policy.validate()?;
        if !(1..=MAX_SUPPORTED_ORDER).contains(&max_order) {
            return Err(Error::InvalidPolicy(format!(
                "max order {max_order} outside 1..={MAX_SUPPORTED_ORDER}"
            )));
        }
        Ok(Self { policy, max_order })
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    /// Highest polygamma order; `Φ^{(k)}` is available for `k < max_order`.
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `ψ^{(k)}(x)` for `k ≥ 1` in double-double.
    pub fn polygamma_dd(&self, k: usize, p: EvalPoint) -> Result<DoubleDouble> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "polygamma order must be at least 1".into(),
            ));
        }
        if k > self.max_order {
            return Err(Error::OrderOutOfRange {
                order: k,
                max: self.max_order,
            });
        }
        let x = p.x();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };

        // Shift upward: Σ_{j<N} 1/(x+j)^{k+1}.
        let shift = if x < self.policy.crossover {
            (self.policy.crossover - x).ceil() as usize
        } else {
            0
        };
        let mut recurrence = DoubleDouble::ZERO;
        for j in (0..shift).rev() {
            let xj = DoubleDouble::from_f64(x) + j as f64;
            recurrence += xj.recip().powi(k as i32 + 1);
        }
        let recurrence = recurrence * factorial_dd(k);

        let y = DoubleDouble::from_f64(x) + shift as f64;
        let tail = self.asymptotic_sum(k, y)?;
        Ok((recurrence + tail) * sign)
    }

    pub fn polygamma(&self, k: usize, p: EvalPoint) -> Result<f64> {
        self.polygamma_dd(k, p).map(DoubleDouble::to_f64)
    }

    /// Unsigned asymptotic sum `S` with `ψ^{(k)}(y) = (−1)^{k+1} S`.
    fn asymptotic_sum(&self, k: usize, y: DoubleDouble) -> Result<DoubleDouble> {
        let inv_y = y.recip();
        let inv_y2 = inv_y.sqr();
        let inv_yk = inv_y.powi(k as i32);
        let fact_km1 = factorial_dd(k - 1);
        let mut sum = fact_km1 * inv_yk + fact_km1 * (k as f64 * 0.5) * inv_yk * inv_y;

        let unit = self.policy.unit_roundoff();
        let table = bernoulli::even_table();
        let mut pw = inv_yk;
        let mut prev = f64::INFINITY;
        let mut achieved = f64::INFINITY;
        for (j, b2j) in table.iter().enumerate().skip(1) {
            pw *= inv_y2;
            // (2j+k−1)!/(2j)!
            let mut rising = DoubleDouble::ONE;
            for i in (2 * j + 1)..(2 * j + k) {
                rising = rising.mul_f64(i as f64);
            }
            let term = *b2j * rising * pw;
            let mag = term.abs().to_f64();
            if mag > prev {
                // asymptotic divergence; the previous term bounds the error
                break;
            }
            sum += term;
            prev = mag;
            achieved = mag / sum.abs().to_f64();
            if achieved <= unit {
                break;
            }
        }
        if achieved > self.policy.target_tolerance {
            return Err(Error::ToleranceUnattainable {
                target: self.policy.target_tolerance,
                achieved,
            });
        }
        Ok(sum)
    }

    /// `Φ(x) = x ψ'(x) − 1`.
    pub fn phi_dd(&self, p: EvalPoint) -> Result<DoubleDouble> {
        self.phi_deriv_dd(0, p)
    }

    pub fn phi(&self, p: EvalPoint) -> Result<f64> {
        self.phi_dd(p).map(DoubleDouble::to_f64)
    }

    /// `Φ^{(k)}(x) = x ψ^{(k+1)}(x) + k ψ^{(k)}(x)` for `k ≥ 1`, `Φ` itself for `k = 0`.
    pub fn phi_deriv_dd(&self, k: usize, p: EvalPoint) -> Result<DoubleDouble> {
        if k + 1 > self.max_order {
            return Err(Error::OrderOutOfRange {
                order: k,
                max: self.max_order - 1,
            });
        }
        let x = p.x();
        let upper = self.polygamma_dd(k + 1, p)? * x;
        if k == 0 {
            Ok(upper - 1.0)
        } else {
            Ok(upper + self.polygamma_dd(k, p)? * k as f64)
        }
    }

    pub fn phi_deriv(&self, k: usize, p: EvalPoint) -> Result<f64> {
        self.phi_deriv_dd(k, p).map(DoubleDouble::to_f64)
    }
}

fn factorial_dd(n: usize) -> DoubleDouble {
    (2..=n).fold(DoubleDouble::ONE, |acc, i| acc.mul_f64(i as f64))
}

fn default_evaluator() -> &'static Polygamma {
    static DEFAULT: OnceLock<Polygamma> = OnceLock::new();
    DEFAULT.get_or_init(Polygamma::default)
}

/// `ψ^{(k)}(x)` with the default policy.
pub fn polygamma(k: usize, x: f64) -> Result<f64> {
    default_evaluator().polygamma(k, EvalPoint::new(x)?)
}

/// `Φ(x) = x ψ'(x) − 1` with the default policy.
pub fn phi(x: f64) -> Result<f64> {
    default_evaluator().phi(EvalPoint::new(x)?)
}

/// `Φ^{(k)}(x)` with the default policy.
pub fn phi_deriv(k: usize, x: f64) -> Result<f64> {
    default_evaluator().phi_deriv(k, EvalPoint::new(x)?)
}
