//! Central finite differences of arbitrary order with Richardson
//! extrapolation in the step size and an explicit roundoff estimate.

use crate::error::{Error, Result};

/// Highest derivative order accepted for finite differences.
pub const MAX_FD_ORDER: usize = 8;

const SHRINK: f64 = 1.4;
const TABLE: usize = 10;
const SAFE: f64 = 2.0;

/// A derivative estimate and its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 1..=k {
        c = c * (n - k + i) as f64 / i as f64;
    }
    c.round()
}

/// Order-`n` central difference with step `h`; also returns `ε·Σ|terms|/hⁿ`.
fn central<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, n: usize, h: f64) -> Result<(f64, f64)> {
    let mut sum = 0.0;
    let mut mag = 0.0;
    for i in 0..=n {
        let offset = (n as f64 / 2.0 - i as f64) * h;
        let term = binomial(n, i) * f(x + offset)?;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        mag += term.abs();
    }
    let scale = h.powi(n as i32);
    Ok((sum / scale, 2.0 * f64::EPSILON * mag / scale))
}

/// Default first step for a function defined on `(lower, ∞)`: the stencil
/// stays inside the domain with room to spare.
pub fn default_step(x: f64, order: usize, lower: f64) -> f64 {
    let reach = if order == 0 { 1.0 } else { 2.0 / order as f64 };
    0.5 * (reach * (x - lower)).min(x.abs().max(1.0))
}

/// `order`-th derivative of `f` at `x`, starting from step `h0` and
/// shrinking it geometrically while extrapolating.
pub fn derivative<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, order: usize, h0: f64) -> Result<Estimate> {
    if order > MAX_FD_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_FD_ORDER,
        });
    }
    if order == 0 {
        let v = f(x)?;
        return Ok(Estimate {
            value: v,
            error: f64::EPSILON * v.abs(),
        });
    }
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::InvalidParameter(format!("finite-difference step {h0}")));
    }
    let con2 = SHRINK * SHRINK;
    let mut h = h0;
    let mut table = vec![vec![0.0; TABLE]; TABLE];
    let (d0, r0) = central(f, x, order, h)?;
    table[0][0] = d0;
    let mut best = Estimate {
        value: d0,
        error: f64::INFINITY,
    };
    let mut roundoff = r0;
    for i in 1..TABLE {
        h /= SHRINK;
        let (d, r) = central(f, x, order, h)?;
        table[0][i] = d;
        let mut fac = con2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= con2;
            let errt = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if errt <= best.error {
                best = Estimate {
                    value: table[j][i],
                    error: errt,
                };
                roundoff = r;
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * best.error {
            break;
        }
    }
    // the tableau difference can undershoot the true error by a small factor
    best.error = 2.0 * best.error.max(roundoff) + f64::EPSILON * best.value.abs();
    if !best.value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "non-finite finite-difference estimate at x = {x}"
        )));
    }
    Ok(best)
}
