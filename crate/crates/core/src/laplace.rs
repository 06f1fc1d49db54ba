//! Quadrature realization of the Laplace representation
//! `Φ^{(k)}(x) = (−1)^k ∫₀^∞ t^k h(t) e^{−xt} dt`, the self-convolution of
//! the moment kernels, and the ratio
//!
//! ```text
//! 𝔜_{m,n}(t) = t^{m+n+1} h(t) / ∫₀^t u^m (t−u)^n h(u) h(t−u) du.
//! ```
//!
//! Everything here is independent of the polygamma code path and serves as
//! the oracle the closed-form evaluations are checked against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{h, ratio_product_unchecked};
use crate::polygamma::{EvalPoint, MAX_SUPPORTED_ORDER};
use crate::quadrature::{adaptive_from, GaussLaguerre, GaussLegendre, Integral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subdivision {
    /// Composite Gauss–Legendre on a fixed set of panels.
    Fixed,
    /// Globally adaptive Gauss–Kronrod.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss–Laguerre nodes for the tail and Gauss–Legendre nodes per fixed panel.
    pub node_count: usize,
    /// Split point between the finite part and the tail; `None` picks
    /// `max(1, 50/x)`.
    pub truncation: Option<f64>,
    pub subdivision: Subdivision,
    /// Relative tolerance on the whole integral, split evenly between the
    /// finite part and the tail.
    pub tolerance: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            node_count: 32,
            truncation: None,
            subdivision: Subdivision::Adaptive,
            tolerance: 1e-12,
            max_panels: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 32 {
            return Err(Error::InvalidQuadrature(format!(
                "node count {} below 32",
                self.node_count
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-6) {
            return Err(Error::InvalidQuadrature(format!(
                "tolerance {:e} outside (0, 1e-6]",
                self.tolerance
            )));
        }
        if self.max_panels < 1 {
            return Err(Error::InvalidQuadrature("max_panels must be positive".into()));
        }
        Ok(())
    }

    /// Split point for abscissa `x`.
    pub fn split_for(&self, x: f64) -> Result<f64> {
        let min = 50.0 / x;
        match self.truncation {
            None => Ok(min.max(1.0)),
            Some(t) if t >= min && t.is_finite() => Ok(t),
            Some(t) => Err(Error::InvalidQuadrature(format!(
                "truncation point {t} below 50/x = {min}"
            ))),
        }
    }
}

/// `∫₀^∞ g(t) e^{−xt} dt`: finite part on `[0, T]`, tail by Gauss–Laguerre
/// after `t = T + u/x`.
pub fn laplace_transform<G: Fn(f64) -> f64>(
    g: G,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    cfg.validate()?;
    let x = EvalPoint::new(x)?.x();
    let split = cfg.split_for(x)?;
    let integrand = |t: f64| g(t) * (-x * t).exp();
    let half_tol = 0.5 * cfg.tolerance;

    let scale = 1.0 / x;
    let mut breaks = vec![0.0];
    for b in [0.1 * scale, scale, 5.0 * scale] {
        if b < split && b > *breaks.last().unwrap() {
            breaks.push(b);
        }
    }
    breaks.push(split);

    let finite = match cfg.subdivision {
        Subdivision::Adaptive => adaptive_from(&integrand, &breaks, half_tol, 0.0, cfg.max_panels)?,
        Subdivision::Fixed => fixed_composite(&integrand, &breaks, cfg.node_count, half_tol)?,
    };

    let weight = (-x * split).exp() / x;
    let tail_with = |rule: &GaussLaguerre| weight * rule.integrate(|u| g(split + u / x));
    let tail = tail_with(&GaussLaguerre::new(cfg.node_count));
    let tail_coarse = tail_with(&GaussLaguerre::new(cfg.node_count / 2));
    let tail_err = (tail - tail_coarse).abs();

    let value = finite.value + tail;
    let error = finite.error + tail_err;
    let requested = cfg.tolerance * value.abs();
    if tail_err > half_tol * value.abs() || !value.is_finite() {
        return Err(Error::QuadratureFailed {
            estimate: error,
            requested,
        });
    }
    Ok(Integral { value, error })
}

fn fixed_composite<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    nodes: usize,
    rel_tol: f64,
) -> Result<Integral> {
    const PANELS_PER_SEGMENT: usize = 8;
    let fine = GaussLegendre::new(nodes);
    let coarse = GaussLegendre::new(nodes / 2);
    let mut value = 0.0;
    let mut coarse_value = 0.0;
    for w in breaks.windows(2) {
        let step = (w[1] - w[0]) / PANELS_PER_SEGMENT as f64;
        for i in 0..PANELS_PER_SEGMENT {
            let a = w[0] + step * i as f64;
            let b = a + step;
            value += fine.integrate(f, a, b);
            coarse_value += coarse.integrate(f, a, b);
        }
    }
    let error = (value - coarse_value).abs();
    if error > rel_tol * value.abs() {
        return Err(Error::QuadratureFailed {
            estimate: error,
            requested: rel_tol * value.abs(),
        });
    }
    Ok(Integral { value, error })
}

fn check_order(k: usize) -> Result<()> {
    if k > MAX_SUPPORTED_ORDER {
        Err(Error::OrderOutOfRange {
            order: k,
            max: MAX_SUPPORTED_ORDER,
        })
    } else {
        Ok(())
    }
}

/// `∫₀^∞ t^k h(t) e^{−xt} dt = (−1)^k Φ^{(k)}(x)`.
pub fn laplace_moment(k: usize, p: EvalPoint, cfg: &QuadratureConfig) -> Result<Integral> {
    check_order(k)?;
    laplace_transform(|t| t.powi(k as i32) * h(t), p.x(), cfg)
}

/// `Φ^{(k)}(x)` by quadrature of its Laplace representation.
pub fn laplace_phi_deriv(k: usize, p: EvalPoint, cfg: &QuadratureConfig) -> Result<f64> {
    let m = laplace_moment(k, p, cfg)?;
    Ok(if k % 2 == 0 { m.value } else { -m.value })
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} must be positive")))
    }
}

/// `∫₀^t u^m (t−u)^n h(u) h(t−u) du`, integrated in `w = u − t/2`.
pub fn convolution_kernel(m: usize, n: usize, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_order(m)?;
    check_order(n)?;
    check_t(t)?;
    let half = 0.5 * t;
    let f = |w: f64| {
        let u = half + w;
        let r = half - w;
        u.powi(m as i32) * r.powi(n as i32) * h(u) * h(r)
    };
    let mut breaks = vec![-half];
    let edge = 1.0f64.min(0.25 * t);
    if half - edge > 0.0 {
        breaks.push(-half + edge);
    }
    breaks.push(0.0);
    if half - edge > 0.0 {
        breaks.push(half - edge);
    }
    breaks.push(half);
    // The integrand is symmetric under (m, n, w) ↔ (n, m, −w), so evaluate
    // with m ≤ n to make the result exactly symmetric.
    if m > n {
        return convolution_kernel(n, m, t, cfg);
    }
    Ok(adaptive_from(&f, &breaks, 0.1 * cfg.tolerance, 0.0, cfg.max_panels)?.value)
}

/// `𝔜_{m,n}(t)`.
pub fn frak_y(m: usize, n: usize, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let conv = convolution_kernel(m, n, t, cfg)?;
    Ok(t.powi((m + n + 1) as i32) * h(t) / conv)
}

/// `1/𝔜_{m,n}(t) = 2^{−(m+n+1)} ∫₋₁¹ (1+v)^m (1−v)^n h(st) h((1−s)t)/h(t) dv`, `s = (1+v)/2`.
pub fn frak_y_reciprocal_substituted(
    m: usize,
    n: usize,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_order(m)?;
    check_order(n)?;
    check_t(t)?;
    let f = |v: f64| {
        let s = 0.5 * (1.0 + v);
        (1.0 + v).powi(m as i32) * (1.0 - v).powi(n as i32) * ratio_product_unchecked(s, t)
    };
    let mut breaks = vec![-1.0];
    let edge = (4.0 / t).min(0.5);
    breaks.push(-1.0 + edge);
    breaks.push(0.0);
    breaks.push(1.0 - edge);
    breaks.push(1.0);
    let integral = adaptive_from(&f, &breaks, 0.1 * cfg.tolerance, 0.0, cfg.max_panels)?;
    Ok(integral.value / 2f64.powi((m + n + 1) as i32))
}

/// `∫₋₁¹ (1+v)^m (1−v)^n dv` by quadrature and in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaWeight {
    pub quadrature: f64,
    pub closed_form: f64,
}

impl BetaWeight {
    pub fn relative_gap(&self) -> f64 {
        (self.quadrature - self.closed_form).abs() / self.closed_form
    }
}

pub fn beta_weight(m: usize, n: usize) -> Result<BetaWeight> {
    check_order(m)?;
    check_order(n)?;
    // exact for polynomial degree ≤ 2·nodes − 1
    let rule = GaussLegendre::new(32.max((m + n) / 2 + 1));
    let quadrature = rule.integrate(
        |v| (1.0 + v).powi(m as i32) * (1.0 - v).powi(n as i32),
        -1.0,
        1.0,
    );
    let closed_form = 2f64.powi((m + n + 1) as i32) / sharp_constant_f64(m, n);
    Ok(BetaWeight {
        quadrature,
        closed_form,
    })
}

/// `(m+n+1)!/(m! n!)` as a float.
pub(crate) fn sharp_constant_f64(m: usize, n: usize) -> f64 {
    // (m+n+1)·C(m+n, m)
    let (lo, hi) = if m < n { (m, n) } else { (n, m) };
    let mut c = 1.0f64;
    for i in 1..=lo {
        c = c * (hi + i) as f64 / i as f64;
    }
    c.round() * (m + n + 1) as f64
}

/// `∫₀^∞ [∫₀^t u^m (t−u)^n h(u) h(t−u) du] e^{−xt} dt`.
pub fn laplace_of_convolution(
    m: usize,
    n: usize,
    p: EvalPoint,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let failure = std::cell::Cell::new(None);
    let result = laplace_transform(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            match convolution_kernel(m, n, t, cfg) {
                Ok(v) => v,
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            }
        },
        p.x(),
        cfg,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    result
}

/// The Bernstein integrand of `(−1)^{m+n+1}𝒴_{m,n;ω}`:
/// `[1 − ω/𝔜_{m,n}(t)] t^{m+n+1} h(t)`.
pub fn bernstein_integrand(
    m: usize,
    n: usize,
    omega: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let recip = frak_y_reciprocal_substituted(m, n, t, cfg)?;
    Ok((1.0 - omega * recip) * t.powi((m + n + 1) as i32) * h(t))
}
