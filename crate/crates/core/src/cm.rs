//! Numerical complete-monotonicity and monotonicity checks on grids.
//!
//! A function is checked by sampling `(−1)^j f^{(j)}` for `j ≤ max_order`
//! on a grid. Derivatives come from the function handle when it can supply
//! them (closed forms or differentiation under a Laplace integral), and from
//! extrapolated central differences otherwise. Every sample carries an
//! error estimate; a sample only passes when the estimate is resolved
//! against its value, so an unresolved sample is never reported as a pass.
//!
//! A passing report is a finite-order, finite-grid certificate, not a proof.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_diff::{self, MAX_FD_ORDER};
use crate::grid::is_strictly_increasing;
use crate::kernel::h;
use crate::laplace::{bernstein_integrand, laplace_transform, QuadratureConfig};
use crate::polygamma::EvalPoint;
use crate::quadrature::Integral;
use crate::ratio::{sharp_constant, RatioFunctions};

/// Where derivative values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeSource {
    Analytic,
    Quadrature,
    FiniteDifference,
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    pub error: f64,
}

/// A function on `(0, ∞)` under test.
pub trait CmFunction: Sync {
    fn value(&self, x: f64) -> Result<f64>;

    /// `f^{(order)}(x)` with an error estimate, if the handle can supply it.
    fn derivative(&self, _order: usize, _x: f64) -> Option<Result<Evaluation>> {
        None
    }

    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::Analytic
    }

    /// Left end of the domain; finite-difference stencils stay to its right.
    fn domain_lower(&self) -> f64 {
        0.0
    }
}

/// A closure on `(0, ∞)`; derivatives are taken by finite differences.
pub struct Plain<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> CmFunction for Plain<F> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok((self.0)(x))
    }
}

/// A closure defined on the whole real line, so stencils may cross zero.
pub struct Entire<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> CmFunction for Entire<F> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok((self.0)(x))
    }

    fn domain_lower(&self) -> f64 {
        f64::NEG_INFINITY
    }
}

/// A closure `(order, x) -> f^{(order)}(x)` with a relative error bound.
pub struct WithDerivatives<F> {
    pub f: F,
    pub relative_error: f64,
}

impl<F: Fn(usize, f64) -> Result<f64> + Sync> CmFunction for WithDerivatives<F> {
    fn value(&self, x: f64) -> Result<f64> {
        (self.f)(0, x)
    }

    fn derivative(&self, order: usize, x: f64) -> Option<Result<Evaluation>> {
        Some((self.f)(order, x).map(|v| Evaluation {
            value: v,
            error: self.relative_error * v.abs(),
        }))
    }
}

/// `±𝒴_{m,n;ω}` with derivatives from the Leibniz rule in double-double.
pub struct CalYHandle {
    pub ratio: RatioFunctions,
    pub m: usize,
    pub n: usize,
    pub omega: f64,
    /// Multiplies the function by `(−1)^{m+n+1}` when set.
    pub signed: bool,
}

impl CalYHandle {
    fn sign(&self) -> f64 {
        if self.signed && (self.m + self.n + 1) % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

impl CmFunction for CalYHandle {
    fn value(&self, x: f64) -> Result<f64> {
        let p = EvalPoint::new(x)?;
        Ok(self.sign() * self.ratio.cal_y(self.m, self.n, self.omega, p)?)
    }

    fn derivative(&self, order: usize, x: f64) -> Option<Result<Evaluation>> {
        let eval = || {
            let p = EvalPoint::new(x)?;
            let acc = self.ratio.cal_y_derivative(self.m, self.n, self.omega, order, p)?;
            Ok(Evaluation {
                value: self.sign() * acc.value.to_f64(),
                error: acc.error_bound(),
            })
        };
        Some(eval())
    }
}

/// `x ↦ ∫₀^∞ g(t) e^{−xt} dt`, differentiated under the integral sign.
pub struct LaplaceHandle<G> {
    pub kernel: G,
    pub config: QuadratureConfig,
}

impl<G: Fn(f64) -> f64 + Sync> LaplaceHandle<G> {
    fn moment(&self, order: usize, x: f64) -> Result<Integral> {
        laplace_transform(|t| t.powi(order as i32) * (self.kernel)(t), x, &self.config)
    }
}

impl<G: Fn(f64) -> f64 + Sync> CmFunction for LaplaceHandle<G> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.moment(0, x)?.value)
    }

    fn derivative(&self, order: usize, x: f64) -> Option<Result<Evaluation>> {
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        Some(self.moment(order, x).map(|i| Evaluation {
            value: sign * i.value,
            error: i.error,
        }))
    }

    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::Quadrature
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }
}

/// Classifies a signed sample `v ± e` against the requirement `v ≥ 0`.
pub fn classify_sample(v: f64, e: f64, tol: f64) -> Verdict {
    if !v.is_finite() || !e.is_finite() {
        return Verdict::Inconclusive;
    }
    if v + e < -tol {
        Verdict::Fail
    } else if v >= -tol && e <= v.abs().max(tol) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub order: usize,
    pub x: f64,
    /// `(−1)^order f^{(order)}(x)`.
    pub signed_value: f64,
    pub error: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderSummary {
    pub order: usize,
    pub verdict: Verdict,
    pub source: DerivativeSource,
    /// Smallest signed value over the grid and where it occurs.
    pub worst_value: f64,
    pub worst_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmReport {
    pub max_order: usize,
    pub tolerance: f64,
    pub grid: Vec<f64>,
    pub orders: Vec<OrderSummary>,
    /// Lowest order, then smallest `x`, with a failing sample.
    pub first_violation: Option<Sample>,
    pub samples: Vec<Sample>,
    pub note: String,
}

impl CmReport {
    pub fn verdict(&self) -> Verdict {
        self.orders
            .iter()
            .map(|o| o.verdict)
            .max()
            .unwrap_or(Verdict::Pass)
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || !is_strictly_increasing(grid) || !(grid[0] > 0.0) {
        return Err(Error::InvalidParameter(
            "grid must be non-empty, positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn fd_sample(f: &dyn CmFunction, order: usize, x: f64) -> Result<Evaluation> {
    let g = |y: f64| f.value(y);
    let base = finite_diff::default_step(x, order, f.domain_lower());
    let mut best: Option<finite_diff::Estimate> = None;
    // escalate to smaller starting steps while the estimate is unresolved
    for scale in [1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0] {
        let est = finite_diff::derivative(&g, x, order, base * scale)?;
        if best.map_or(true, |b| est.error < b.error) {
            best = Some(est);
        }
        let b = best.unwrap();
        if b.error <= 1e-3 * b.value.abs() {
            break;
        }
    }
    let b = best.unwrap();
    Ok(Evaluation {
        value: b.value,
        error: b.error,
    })
}

/// Checks `(−1)^j f^{(j)}(x) ≥ −tol` for `j ≤ max_order` at every grid point.
pub fn check_sign_pattern(
    f: &dyn CmFunction,
    max_order: usize,
    grid: &[f64],
    tol: f64,
) -> Result<CmReport> {
    validate_grid(grid)?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol}")));
    }
    let analytic = f.derivative(0, grid[0]).is_some();
    if !analytic && max_order > MAX_FD_ORDER {
        return Err(Error::OrderOutOfRange {
            order: max_order,
            max: MAX_FD_ORDER,
        });
    }
    let source = if analytic {
        f.derivative_source()
    } else {
        DerivativeSource::FiniteDifference
    };

    let rows: Vec<Vec<Sample>> = grid
        .par_iter()
        .map(|&x| {
            (0..=max_order)
                .map(|order| {
                    let eval = if analytic {
                        f.derivative(order, x).expect("handle supplies derivatives")?
                    } else if order == 0 {
                        let v = f.value(x)?;
                        Evaluation {
                            value: v,
                            error: f64::EPSILON * v.abs(),
                        }
                    } else {
                        fd_sample(f, order, x)?
                    };
                    let signed = if order % 2 == 0 { eval.value } else { -eval.value };
                    Ok(Sample {
                        order,
                        x,
                        signed_value: signed,
                        error: eval.error,
                        verdict: classify_sample(signed, eval.error, tol),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::with_capacity(grid.len() * (max_order + 1));
    for order in 0..=max_order {
        samples.extend(rows.iter().map(|r| r[order]));
    }
    let orders = (0..=max_order)
        .map(|order| {
            let per = &samples[order * grid.len()..(order + 1) * grid.len()];
            let worst = per
                .iter()
                .min_by(|a, b| a.signed_value.total_cmp(&b.signed_value))
                .expect("non-empty grid");
            OrderSummary {
                order,
                verdict: per.iter().map(|s| s.verdict).max().unwrap_or(Verdict::Pass),
                source: if order == 0 && !analytic { DerivativeSource::Analytic } else { source },
                worst_value: worst.signed_value,
                worst_x: worst.x,
            }
        })
        .collect();
    let first_violation = samples.iter().find(|s| s.verdict == Verdict::Fail).copied();
    let note = format!(
        "sign pattern checked to order {max_order} on {} points in [{:e}, {:e}]; finite certificate only",
        grid.len(),
        grid[0],
        grid[grid.len() - 1]
    );
    Ok(CmReport {
        max_order,
        tolerance: tol,
        grid: grid.to_vec(),
        orders,
        first_violation,
        samples,
        note,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairViolation {
    pub index: usize,
    pub x0: f64,
    pub x1: f64,
    pub v0: f64,
    pub v1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub direction: Direction,
    pub slack: f64,
    pub strict: bool,
    pub first_violation: Option<PairViolation>,
    pub min: f64,
    pub max: f64,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Whether `v0 → v1` moves in `direction`.
///
/// Non-strict: a step against the direction is tolerated up to
/// `slack·max(|v0|, |v1|)`. Strict: the step must go the right way by
/// more than that amount.
fn pair_ok(v0: f64, v1: f64, direction: Direction, slack: f64, strict: bool) -> bool {
    let step = match direction {
        Direction::Increasing => v1 - v0,
        Direction::Decreasing => v0 - v1,
    };
    let allowance = slack * v0.abs().max(v1.abs());
    if strict {
        step > allowance
    } else {
        step >= -allowance
    }
}

/// Monotonicity of already-sampled values.
pub fn scan_values(
    grid: &[f64],
    values: Vec<f64>,
    direction: Direction,
    slack: f64,
    strict: bool,
) -> Result<ScanReport> {
    if grid.len() != values.len() || !is_strictly_increasing(grid) {
        return Err(Error::InvalidParameter(
            "grid must be strictly increasing and match the values".into(),
        ));
    }
    let first_violation = (1..values.len())
        .find(|&i| !pair_ok(values[i - 1], values[i], direction, slack, strict))
        .map(|i| PairViolation {
            index: i - 1,
            x0: grid[i - 1],
            x1: grid[i],
            v0: values[i - 1],
            v1: values[i],
        });
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScanReport {
        grid: grid.to_vec(),
        values,
        direction,
        slack,
        strict,
        first_violation,
        min,
        max,
    })
}

/// Pairwise monotonicity of `f` on a grid.
pub fn check_monotone<F>(
    f: F,
    grid: &[f64],
    direction: Direction,
    slack: f64,
    strict: bool,
) -> Result<ScanReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if grid.len() < 2 || !is_strictly_increasing(grid) {
        return Err(Error::InvalidParameter(
            "monotonicity needs a strictly increasing grid of at least two points".into(),
        ));
    }
    let values = grid.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    scan_values(grid, values, direction, slack, strict)
}

/// Which side of the sharp constants `ω` falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaClass {
    /// `ω ≤ C`: `(−1)^{m+n+1}𝒴_{m,n;ω}` is completely monotonic.
    CmNegativeSide,
    /// `ω ≥ 2C`: `(−1)^{m+n}𝒴_{m,n;ω}` is completely monotonic.
    CmPositiveSide,
    /// `C < ω < 2C`: neither sign is completely monotonic.
    Neither,
}

pub fn classify_omega(m: usize, n: usize, omega: f64) -> Result<OmegaClass> {
    if !omega.is_finite() {
        return Err(Error::InvalidParameter(format!("omega = {omega}")));
    }
    let c = sharp_constant(m, n)?.as_f64();
    Ok(if omega <= c {
        OmegaClass::CmNegativeSide
    } else if omega >= 2.0 * c {
        OmegaClass::CmPositiveSide
    } else {
        OmegaClass::Neither
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPattern {
    Nonnegative,
    Nonpositive,
    SignChange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinReport {
    pub m: usize,
    pub n: usize,
    pub omega: f64,
    pub tolerance: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub observed: SignPattern,
    pub expected: OmegaClass,
    /// Observed pattern agrees with the class of `ω`.
    pub consistent: bool,
    /// A zero of the integrand located by bisection, if the sign changes.
    pub sign_change_at: Option<f64>,
}

/// Samples `[1 − ω/𝔜_{m,n}(t)] t^{m+n+1} h(t)` on `t_grid` and compares its
/// sign with the class of `ω`.
pub fn check_bernstein_integrand(
    m: usize,
    n: usize,
    omega: f64,
    t_grid: &[f64],
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<BernsteinReport> {
    validate_grid(t_grid)?;
    let expected = classify_omega(m, n, omega)?;
    let values = t_grid
        .par_iter()
        .map(|&t| bernstein_integrand(m, n, omega, t, cfg))
        .collect::<Result<Vec<_>>>()?;
    let has_pos = values.iter().any(|&v| v > tol);
    let has_neg = values.iter().any(|&v| v < -tol);
    let observed = match (has_pos, has_neg) {
        (true, true) => SignPattern::SignChange,
        (_, false) => SignPattern::Nonnegative,
        (false, true) => SignPattern::Nonpositive,
    };
    let consistent = matches!(
        (expected, observed),
        (OmegaClass::CmNegativeSide, SignPattern::Nonnegative)
            | (OmegaClass::CmPositiveSide, SignPattern::Nonpositive)
            | (OmegaClass::Neither, SignPattern::SignChange)
    );
    let sign_change_at = match observed {
        SignPattern::SignChange => {
            let i = (1..values.len())
                .find(|&i| values[i - 1] * values[i] < 0.0)
                .expect("opposite signs present");
            Some(bisect(
                |t| bernstein_integrand(m, n, omega, t, cfg),
                t_grid[i - 1],
                t_grid[i],
                values[i - 1],
            )?)
        }
        _ => None,
    };
    Ok(BernsteinReport {
        m,
        n,
        omega,
        tolerance: tol,
        grid: t_grid.to_vec(),
        values,
        observed,
        expected,
        consistent,
        sign_change_at,
    })
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let lo_sign = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)?.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioProbeReport {
    /// `B/A` increasing in `t`.
    pub hypothesis: ScanReport,
    /// `𝓛[B]/𝓛[A]` decreasing in `x`.
    pub conclusion: ScanReport,
}

impl RatioProbeReport {
    /// The conclusion holds whenever the hypothesis does.
    pub fn consistent(&self) -> bool {
        !self.hypothesis.passed() || self.conclusion.passed()
    }
}

/// Checks on grids that `B/A` increasing implies `𝓛[B]/𝓛[A]` decreasing,
/// for positive kernels `A` and `B`.
pub fn laplace_ratio_monotonicity_probe<A, B>(
    a: A,
    b: B,
    x_grid: &[f64],
    t_grid: &[f64],
    slack: f64,
    cfg: &QuadratureConfig,
) -> Result<RatioProbeReport>
where
    A: Fn(f64) -> f64 + Sync,
    B: Fn(f64) -> f64 + Sync,
{
    validate_grid(x_grid)?;
    validate_grid(t_grid)?;
    let hypothesis = check_monotone(
        |t| {
            let den = a(t);
            if !(den > 0.0) {
                return Err(Error::InvalidParameter(format!("A({t}) = {den} is not positive")));
            }
            Ok(b(t) / den)
        },
        t_grid,
        Direction::Increasing,
        slack,
        false,
    )?;
    let conclusion = check_monotone(
        |x| {
            let la = laplace_transform(&a, x, cfg)?.value;
            let lb = laplace_transform(&b, x, cfg)?.value;
            Ok(lb / la)
        },
        x_grid,
        Direction::Decreasing,
        slack,
        false,
    )?;
    Ok(RatioProbeReport {
        hypothesis,
        conclusion,
    })
}

/// `t ↦ t^k h(t)`, the Laplace kernel of `(−1)^k Φ^{(k)}`.
pub fn moment_kernel(k: usize) -> impl Fn(f64) -> f64 + Sync + Copy {
    move |t: f64| t.powi(k as i32) * h(t)
}
