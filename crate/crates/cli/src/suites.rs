use std::str::FromStr;

use rayon::prelude::*;
use trigamma_cm::cm::{
    check_bernstein_integrand, check_monotone, check_sign_pattern, classify_omega, scan_values,
    CalYHandle, CmFunction, CmReport, DerivativeSource, Direction, Evaluation, OmegaClass,
    SignPattern,
};
use trigamma_cm::finite_diff::{default_step, derivative};
use trigamma_cm::grid::{linear_grid, log_grid};
use trigamma_cm::kernel::{h, h_ratio, h_ratio_product, series_coefficient_check};
use trigamma_cm::laplace::QuadratureConfig;
use trigamma_cm::lemma_f::{
    f_rearranged, f_sequence_positive, f_value, key_inequality, sign_region_map,
    t_over_pow2_minus_one, FPoint, Sign, KEY_THRESHOLD,
};
use trigamma_cm::ratio::{sharp_constant, RatioFunctions};
use trigamma_cm::{DoubleDouble, Error, EvalPoint, Result};

use crate::report::{ClaimRecord, Observation, Status, SuiteResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    LemmaF,
    KernelH,
    Limits,
    Theorem3,
    Theorem4,
    Remark5,
    All,
}

const SUITES: &[(&str, Suite)] = &[
    ("lemma-f", Suite::LemmaF),
    ("kernel-h", Suite::KernelH),
    ("limits", Suite::Limits),
    ("theorem-3", Suite::Theorem3),
    ("theorem-4", Suite::Theorem4),
    ("remark-5", Suite::Remark5),
    ("all", Suite::All),
];

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SUITES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
                format!("unknown suite '{s}'; known: {}", known.join(", "))
            })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        SUITES.iter().find(|(_, v)| *v == self).unwrap().0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl LogGrid {
    pub const fn new(lo: f64, hi: f64, n: usize) -> Self {
        Self { lo, hi, n }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        log_grid(self.lo, self.hi, self.n)
    }

    pub fn label(&self) -> String {
        format!("log[{:e},{:e}]x{}", self.lo, self.hi, self.n)
    }
}

/// Options shared by the suites. Unset fields fall back to each claim's default.
#[derive(Debug, Clone)]
pub struct Context {
    pub ratio: RatioFunctions,
    pub quad: QuadratureConfig,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub s: Option<f64>,
    pub omega: Option<f64>,
    pub max_order: Option<usize>,
    pub tol: Option<f64>,
    pub grid: Option<LogGrid>,
    pub res: Option<usize>,
}

impl Context {
    fn pairs(&self, max: usize) -> Vec<(usize, usize)> {
        match (self.m, self.n) {
            (None, None) => (0..=max).flat_map(|m| (0..=max).map(move |n| (m, n))).collect(),
            (m, n) => vec![(m.unwrap_or(0), n.unwrap_or(0))],
        }
    }

    fn grid_or(&self, default: LogGrid) -> LogGrid {
        self.grid.unwrap_or(default)
    }
}

pub fn run(suite: Suite, ctx: &Context) -> Result<Vec<SuiteResult>> {
    let order = [
        Suite::LemmaF,
        Suite::KernelH,
        Suite::Limits,
        Suite::Theorem3,
        Suite::Theorem4,
        Suite::Remark5,
    ];
    let selected: Vec<Suite> = if suite == Suite::All {
        order.to_vec()
    } else {
        vec![suite]
    };
    selected
        .into_iter()
        .map(|s| {
            let (claims, observations) = match s {
                Suite::LemmaF => lemma_f(ctx)?,
                Suite::KernelH => kernel_h(ctx)?,
                Suite::Limits => limits(ctx)?,
                Suite::Theorem3 => theorem_3(ctx)?,
                Suite::Theorem4 => theorem_4(ctx)?,
                Suite::Remark5 => remark_5(ctx)?,
                Suite::All => unreachable!(),
            };
            Ok(SuiteResult::new(s.name(), claims, observations))
        })
        .collect()
}

struct Outcome {
    status: Status,
    margin: f64,
    detail: String,
}

impl Outcome {
    /// Passes when `margin ≥ 0`.
    fn from_margin(margin: f64, detail: String) -> Self {
        Self {
            status: Status::from_bool(margin >= 0.0),
            margin,
            detail,
        }
    }
}

type Check<'a> = Box<dyn Fn() -> ClaimRecord + Send + Sync + 'a>;

fn check<'a, F>(id: String, anchor: &'static str, grid: String, f: F) -> Check<'a>
where
    F: Fn() -> Result<Outcome> + Send + Sync + 'a,
{
    Box::new(move || match f() {
        Ok(o) => ClaimRecord {
            id: id.clone(),
            anchor,
            status: o.status,
            margin: o.margin,
            grid: grid.clone(),
            detail: o.detail,
        },
        Err(e) => ClaimRecord {
            id: id.clone(),
            anchor,
            status: Status::Inconclusive,
            margin: f64::NAN,
            grid: grid.clone(),
            detail: format!("evaluation error: {e}"),
        },
    })
}

fn run_checks(checks: Vec<Check<'_>>) -> Vec<ClaimRecord> {
    checks.par_iter().map(|c| c()).collect()
}

fn pt(x: f64) -> Result<EvalPoint> {
    EvalPoint::new(x)
}

fn rel_dev(v: f64, target: f64) -> f64 {
    ((v - target) / target).abs()
}

fn dd_values<F>(grid: &[f64], f: F) -> Result<Vec<DoubleDouble>>
where
    F: Fn(EvalPoint) -> Result<DoubleDouble> + Sync,
{
    grid.par_iter().map(|&x| f(pt(x)?)).collect()
}

/// `−2C < v < −C` at every point, compared in double-double.
fn between_constants(grid: &[f64], values: &[DoubleDouble], c: f64) -> Outcome {
    let mut margin = f64::INFINITY;
    let mut worst_x = grid[0];
    let mut ok = true;
    for (&x, &v) in grid.iter().zip(values) {
        let upper = -v - c;
        let lower = v + 2.0 * c;
        ok &= upper > DoubleDouble::ZERO && lower > DoubleDouble::ZERO;
        let gap = upper.to_f64().min(lower.to_f64()) / c;
        if gap < margin {
            margin = gap;
            worst_x = x;
        }
    }
    Outcome {
        status: Status::from_bool(ok),
        margin,
        detail: format!("C = {c}; closest relative approach at x = {worst_x:e}"),
    }
}

/// Pairwise decrease: the double rule with `slack`, and strict in double-double.
fn strictly_decreasing(grid: &[f64], values: &[DoubleDouble], slack: f64) -> Result<Outcome> {
    let rounded: Vec<f64> = values.iter().map(|v| v.to_f64()).collect();
    let scan = scan_values(grid, rounded, Direction::Decreasing, slack, false)?;
    let mut margin = f64::INFINITY;
    let mut strict = true;
    for w in values.windows(2) {
        let step = w[0] - w[1];
        strict &= step > DoubleDouble::ZERO;
        margin = margin.min((step / w[0].abs()).to_f64());
    }
    let detail = match scan.first_violation {
        Some(v) => format!("increase between x = {:e} and {:e}", v.x0, v.x1),
        None if !strict => "not strictly decreasing in double-double".to_string(),
        None => format!("range [{}, {}]", scan.min, scan.max),
    };
    Ok(Outcome {
        status: Status::from_bool(scan.passed() && strict),
        margin,
        detail,
    })
}

fn theorem_3(ctx: &Context) -> Result<(Vec<ClaimRecord>, Vec<Observation>)> {
    let spec = ctx.grid_or(LogGrid::new(1e-4, 1e4, 200));
    let grid = spec.points()?;
    let slack = ctx.tol.unwrap_or(1e-10);
    let r = ctx.ratio;
    let mut checks: Vec<Check> = Vec::new();
    for (m, n) in ctx.pairs(4) {
        let c = sharp_constant(m, n)?.as_f64();
        let g = &grid;
        checks.push(check(
            format!("Y-between-constants[m={m},n={n}]"),
            "Y(m,n,x) lies strictly between -2C and -C",
            spec.label(),
            move || Ok(between_constants(g, &dd_values(g, |p| r.y_dd(m, n, p))?, c)),
        ));
        checks.push(check(
            format!("Y-decreasing[m={m},n={n}]"),
            "Y(m,n,x) is strictly decreasing in x",
            spec.label(),
            move || strictly_decreasing(g, &dd_values(g, |p| r.y_dd(m, n, p))?, slack),
        ));
        checks.push(check(
            format!("Y-constants-sharp[m={m},n={n}]"),
            "Y(m,n,x) tends to -C at the origin and -2C at infinity",
            "x in {1e-4, 1e4}".into(),
            move || {
                let lo = rel_dev(r.y(m, n, pt(1e-4)?)?, -c);
                let hi = rel_dev(r.y(m, n, pt(1e4)?)?, -2.0 * c);
                Ok(Outcome::from_margin(
                    0.01 - lo.max(hi),
                    format!("relative deviations {lo:.3e} at 1e-4, {hi:.3e} at 1e4"),
                ))
            },
        ));
    }
    // calJ(k, m) for k ≥ m, unless a single (m, n) pair was requested
    let ks: Vec<usize> = match (ctx.k, ctx.m.or(ctx.n)) {
        (Some(k), _) => vec![k],
        (None, Some(_)) => vec![],
        (None, None) => (0..=4).collect(),
    };
    for k in ks {
        let ms: Vec<usize> = match ctx.m {
            Some(m) if ctx.k.is_some() => vec![m],
            _ => (0..=k).collect(),
        };
        for m in ms {
            if m > k {
                return Err(Error::InvalidParameter(format!("calJ needs k >= m, got k = {k}, m = {m}")));
            }
            let c = sharp_constant(k - m, k + m + 1)?.as_f64();
            let g = &grid;
            checks.push(check(
                format!("calJ-decreasing[k={k},m={m}]"),
                "calJ(k,m,x) is strictly decreasing in x",
                spec.label(),
                move || strictly_decreasing(g, &dd_values(g, |p| r.cal_j_dd(k, m, p))?, slack),
            ));
            checks.push(check(
                format!("calJ-between-constants[k={k},m={m}]"),
                "calJ(k,m,x) lies strictly between its two sharp constants",
                spec.label(),
                move || Ok(between_constants(g, &dd_values(g, |p| r.cal_j_dd(k, m, p))?, c)),
            ));
        }
    }
    Ok((run_checks(checks), vec![]))
}

/// The negation of a handle, for the `(−1)^{m+n}` sign convention.
struct Negated<'a>(&'a dyn CmFunction);

impl CmFunction for Negated<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(-self.0.value(x)?)
    }

    fn derivative(&self, order: usize, x: f64) -> Option<Result<Evaluation>> {
        self.0.derivative(order, x).map(|r| {
            r.map(|e| Evaluation {
                value: -e.value,
                error: e.error,
            })
        })
    }

    fn derivative_source(&self) -> DerivativeSource {
        self.0.derivative_source()
    }

    fn domain_lower(&self) -> f64 {
        self.0.domain_lower()
    }
}

fn sign_pattern_outcome(report: &CmReport) -> Outcome {
    let margin = report
        .orders
        .iter()
        .map(|o| o.worst_value)
        .fold(f64::INFINITY, f64::min);
    let detail = match report.first_violation {
        Some(s) => format!("order {} fails at x = {:e}: {:e}", s.order, s.x, s.signed_value),
        None => format!(
            "orders 0..={} on {} points; finite-order certificate",
            report.max_order,
            report.grid.len()
        ),
    };
    Outcome {
        status: report.verdict().into(),
        margin,
        detail,
    }
}

fn omega_consistency(
    m: usize,
    n: usize,
    omegas: &[f64],
    t_grid: &[f64],
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Outcome> {
    let mut status = Status::Pass;
    let mut mismatches = 0usize;
    let mut notes = Vec::new();
    for &omega in omegas {
        let rep = check_bernstein_integrand(m, n, omega, t_grid, tol, cfg)?;
        if rep.consistent {
            continue;
        }
        mismatches += 1;
        // a crossing just past the grid looks one-signed; that is unresolved, not wrong
        let this = if rep.expected == OmegaClass::Neither {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        status = status.max(this);
        notes.push(format!("omega = {omega}: {:?} vs {:?}", rep.observed, rep.expected));
    }
    let detail = if notes.is_empty() {
        format!("{} weights classified consistently", omegas.len())
    } else {
        notes.join("; ")
    };
    Ok(Outcome {
        status,
        margin: 0.0 - mismatches as f64,
        detail,
    })
}

fn theorem_4(ctx: &Context) -> Result<(Vec<ClaimRecord>, Vec<Observation>)> {
    let t_spec = LogGrid::new(1e-3, 1e3, 60);
    let x_spec = ctx.grid_or(LogGrid::new(1e-3, 1e3, 40));
    let t_grid = t_spec.points()?;
    let x_grid = x_spec.points()?;
    let tol = ctx.tol.unwrap_or(1e-10);
    let cm_tol = ctx.tol.unwrap_or(0.0);
    let max_order = ctx.max_order.unwrap_or(6);
    let r = ctx.ratio;
    let cfg = ctx.quad;
    if let Some(w) = ctx.omega {
        if !w.is_finite() {
            return Err(Error::InvalidParameter(format!("omega = {w}")));
        }
    }
    let mut checks: Vec<Check> = Vec::new();
    for (m, n) in ctx.pairs(2) {
        let c = sharp_constant(m, n)?.as_f64();
        let (tg, xg) = (&t_grid, &x_grid);
        checks.push(check(
            format!("integrand-nonnegative-at-C[m={m},n={n}]"),
            "Bernstein integrand of (-1)^(m+n+1) calY is nonnegative at omega = C",
            t_spec.label(),
            move || {
                let rep = check_bernstein_integrand(m, n, c, tg, tol, &cfg)?;
                let min = rep.values.iter().copied().fold(f64::INFINITY, f64::min);
                Ok(Outcome::from_margin(min + tol, format!("minimum {min:e}")))
            },
        ));
        checks.push(check(
            format!("integrand-nonpositive-at-2C[m={m},n={n}]"),
            "Bernstein integrand of (-1)^(m+n+1) calY is nonpositive at omega = 2C",
            t_spec.label(),
            move || {
                let rep = check_bernstein_integrand(m, n, 2.0 * c, tg, tol, &cfg)?;
                let max = rep.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok(Outcome::from_margin(tol - max, format!("maximum {max:e}")))
            },
        ));
        checks.push(check(
            format!("integrand-changes-sign-between[m={m},n={n}]"),
            "Bernstein integrand takes both signs at omega = 1.5C",
            t_spec.label(),
            move || {
                let rep = check_bernstein_integrand(m, n, 1.5 * c, tg, tol, &cfg)?;
                let min = rep.values.iter().copied().fold(f64::INFINITY, f64::min);
                let max = rep.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let detail = match rep.sign_change_at {
                    Some(t) => format!("sign change near t = {t:.6e}"),
                    None => "one-signed on the grid".to_string(),
                };
                Ok(Outcome {
                    status: Status::from_bool(rep.observed == SignPattern::SignChange),
                    margin: max.min(-min) - tol,
                    detail,
                })
            },
        ));
        checks.push(check(
            format!("signed-calY-cm-at-C[m={m},n={n}]"),
            "(-1)^(m+n+1) calY(m,n,C;x) has completely monotonic sign pattern",
            x_spec.label(),
            move || {
                let f = CalYHandle { ratio: r, m, n, omega: c, signed: true };
                Ok(sign_pattern_outcome(&check_sign_pattern(&f, max_order, xg, cm_tol)?))
            },
        ));
        checks.push(check(
            format!("signed-calY-cm-at-2C[m={m},n={n}]"),
            "(-1)^(m+n) calY(m,n,2C;x) has completely monotonic sign pattern",
            x_spec.label(),
            move || {
                let f = CalYHandle { ratio: r, m, n, omega: 2.0 * c, signed: true };
                Ok(sign_pattern_outcome(&check_sign_pattern(&Negated(&f), max_order, xg, cm_tol)?))
            },
        ));
        let sweep: Vec<f64> = [0.0, 0.5, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0]
            .iter()
            .map(|f| f * c)
            .collect();
        checks.push(check(
            format!("omega-thresholds[m={m},n={n}]"),
            "integrand sign pattern matches the class of omega with thresholds C and 2C",
            t_spec.label(),
            move || omega_consistency(m, n, &sweep, tg, tol, &cfg),
        ));
        if let Some(w) = ctx.omega {
            checks.push(check(
                format!("omega-class[m={m},n={n},omega={w}]"),
                "integrand sign pattern matches the class of omega with thresholds C and 2C",
                t_spec.label(),
                move || {
                    let mut o = omega_consistency(m, n, &[w], tg, tol, &cfg)?;
                    o.detail = format!("{:?}; {}", classify_omega(m, n, w)?, o.detail);
                    Ok(o)
                },
            ));
        }
    }
    Ok((run_checks(checks), vec![]))
}

fn lemma_f(ctx: &Context) -> Result<(Vec<ClaimRecord>, Vec<Observation>)> {
    let res = ctx.res.unwrap_or(100);
    if res < 2 {
        return Err(Error::InvalidParameter(format!("resolution {res} below 2")));
    }
    let mut checks: Vec<Check> = Vec::new();
    checks.push(check(
        "F-positive-at-integers".into(),
        "F(m,k) > 0 for integers 6 <= 2m < k <= 64",
        "3 <= m <= 31, 2m < k <= 64".into(),
        || {
            let mut min = f64::INFINITY;
            let mut at = (0, 0);
            for m in 3..=31u32 {
                for k in (2 * m + 1)..=64 {
                    let v = f_sequence_positive(m, k)?.margin;
                    if v < min {
                        min = v;
                        at = (m, k);
                    }
                }
            }
            Ok(Outcome {
                status: Status::from_bool(min > 0.0),
                margin: min,
                detail: format!("smallest value at (m, k) = {at:?}"),
            })
        },
    ));
    checks.push(check(
        "F-m3-closed-form".into(),
        "F(3,k) agrees with its closed form",
        "7 <= k <= 64".into(),
        || {
            let mut worst = 0.0f64;
            for k in 7..=64u32 {
                let c = f_sequence_positive(3, k)?;
                let closed = c.closed_form_m3.unwrap_or(f64::NAN);
                worst = worst.max(rel_dev(c.margin, closed));
            }
            Ok(Outcome::from_margin(1e-12 - worst, format!("worst relative gap {worst:.3e}")))
        },
    ));
    checks.push(check(
        "F-sufficient-inequality".into(),
        "the sufficient inequality for F(m,k) > 0 holds when m >= 4",
        "4 <= m <= 31, 2m < k <= 64".into(),
        || {
            let mut misses = 0usize;
            for m in 4..=31u32 {
                for k in (2 * m + 1)..=64 {
                    if f_sequence_positive(m, k)?.sufficient_inequality != Some(true) {
                        misses += 1;
                    }
                }
            }
            Ok(Outcome::from_margin(0.0 - misses as f64, format!("{misses} misses")))
        },
    ));
    let grid_label = format!("x lin[{KEY_THRESHOLD:.6},40]x{res}, y - 2x log[1e-2,1e2]x{res}");
    checks.push(check(
        "F-positive-beyond-threshold".into(),
        "F(x,y) > 0 when y > 2x > 4 + 2/ln 2",
        grid_label.clone(),
        move || {
            let xs = linear_grid(KEY_THRESHOLD * (1.0 + 1e-9), 40.0, res)?;
            let gaps = log_grid(1e-2, 1e2, res)?;
            let mut min = f64::INFINITY;
            for &x in &xs {
                for &d in &gaps {
                    min = min.min(f_value(FPoint::new(x, 2.0 * x + d)?));
                }
            }
            Ok(Outcome {
                status: Status::from_bool(min > 0.0),
                margin: min,
                detail: format!("{} points", res * res),
            })
        },
    ));
    checks.push(check(
        "F-forms-agree".into(),
        "the direct and rearranged forms of F agree",
        grid_label,
        move || {
            let xs = linear_grid(0.05, 40.0, res)?;
            let gaps = log_grid(1e-2, 1e2, res)?;
            let mut worst = 0.0f64;
            for &x in &xs {
                for &d in &gaps {
                    let p = FPoint::new(x, 2.0 * x + d)?;
                    let (a, b) = (f_value(p), f_rearranged(p));
                    worst = worst.max((a - b).abs() / a.abs().max(1.0));
                }
            }
            Ok(Outcome::from_margin(1e-12 - worst, format!("worst gap {worst:.3e}")))
        },
    ));
    checks.push(check(
        "F-at-3-7".into(),
        "F(3,7) = 1/6",
        "(3, 7)".into(),
        || {
            let gap = (f_value(FPoint::new(3.0, 7.0)?) - 1.0 / 6.0).abs();
            Ok(Outcome::from_margin(1e-12 - gap, format!("|F - 1/6| = {gap:.3e}")))
        },
    ));
    checks.push(check(
        "F-vanishes-at-x-2".into(),
        "F(2,y) = 0",
        "y in {5, 8, 20}".into(),
        || {
            let mut worst = 0.0f64;
            for y in [5.0, 8.0, 20.0] {
                worst = worst.max(f_value(FPoint::new(2.0, y)?).abs());
            }
            Ok(Outcome::from_margin(1e-10 - worst, format!("max |F(2,y)| = {worst:.3e}")))
        },
    ));
    checks.push(check(
        "key-inequality".into(),
        "t/(2^t - 1) < x - 2 for all t > 0 once x > 2 + 1/ln 2",
        "t log[1e-6,50]x200; x in {3.45, 4, 10}".into(),
        || {
            let ts = log_grid(1e-6, 50.0, 200)?;
            let mut misses = 0usize;
            for x in [3.45, 4.0, 10.0] {
                for &t in &ts {
                    if !key_inequality(t, x)? {
                        misses += 1;
                    }
                }
            }
            Ok(Outcome::from_margin(0.0 - misses as f64, format!("{misses} misses")))
        },
    ));
    checks.push(check(
        "t-over-pow2-decreasing".into(),
        "t/(2^t - 1) decreases from 1/ln 2",
        "t log[1e-8,60]x300".into(),
        || {
            let ts = log_grid(1e-8, 60.0, 300)?;
            let scan = check_monotone(|t| Ok(t_over_pow2_minus_one(t)), &ts, Direction::Decreasing, 0.0, true)?;
            let top = std::f64::consts::LOG2_E - scan.max;
            Ok(Outcome {
                status: Status::from_bool(scan.passed() && top > 0.0),
                margin: top,
                detail: format!("range [{:e}, {}]", scan.min, scan.max),
            })
        },
    ));
    Ok((run_checks(checks), region_observations()?))
}

fn region_observations() -> Result<Vec<Observation>> {
    let band = |x: (f64, f64), y: (f64, f64), inside: fn(f64, f64) -> bool| -> Result<String> {
        let map = sign_region_map(x, y, 50)?;
        let cells: Vec<_> = map.cells.iter().filter(|c| inside(c.x, c.y)).collect();
        let count = |s: Sign| cells.iter().filter(|c| c.sign == s).count();
        Ok(format!(
            "{} cells: {} positive, {} negative, {} near zero",
            cells.len(),
            count(Sign::Positive),
            count(Sign::Negative),
            count(Sign::NearZero)
        ))
    };
    Ok(vec![
        Observation {
            id: "F-sign-band-above-2".into(),
            anchor: "sign of F(x,y) for 2 < x < y/2, 10 < y < 20 (exploratory)",
            summary: band((2.0, 5.0), (10.0, 20.0), |x, y| x > 2.0 && 2.0 * x < y)?,
        },
        Observation {
            id: "F-sign-band-below-2".into(),
            anchor: "sign of F(x,y) for 0 < x < 2, y > 4 (exploratory)",
            summary: band((0.0, 2.0), (4.0, 40.0), |x, y| x > 0.0 && x < 2.0 && y > 4.0)?,
        },
    ])
}

fn kernel_h(ctx: &Context) -> Result<(Vec<ClaimRecord>, Vec<Observation>)> {
    let slack = ctx.tol.unwrap_or(1e-10);
    let ratio_spec = LogGrid::new(1e-3, 10.0, 100);
    let mut checks: Vec<Check> = Vec::new();
    checks.push(check(
        "h-at-zero".into(),
        "h(0) = 1/2",
        "t = 0".into(),
        || Ok(Outcome::from_margin(-(h(0.0) - 0.5).abs(), format!("h(0) = {}", h(0.0)))),
    ));
    checks.push(check(
        "h-reflection".into(),
        "h(-t) = 1 - h(t)",
        "t lin[0,50]x501".into(),
        || {
            let ts = linear_grid(0.0, 50.0, 501)?;
            let worst = ts.iter().map(|&t| (h(-t) + h(t) - 1.0).abs()).fold(0.0, f64::max);
            Ok(Outcome::from_margin(4.0 * f64::EPSILON - worst, format!("worst {worst:.3e}")))
        },
    ));
    checks.push(check(
        "h-increasing-bounded".into(),
        "h is strictly increasing with values in [1/2, 1)",
        "t log[1e-6,35]x400".into(),
        || {
            let ts = log_grid(1e-6, 35.0, 400)?;
            let scan = check_monotone(|t| Ok(h(t)), &ts, Direction::Increasing, 0.0, true)?;
            let margin = (scan.min - 0.5).min(1.0 - scan.max);
            Ok(Outcome {
                status: Status::from_bool(scan.passed() && margin >= 0.0),
                margin,
                detail: format!("range [{}, {}]", scan.min, scan.max),
            })
        },
    ));
    let ss: Vec<f64> = match ctx.s {
        Some(s) if !(s > 0.0 && s < 1.0) => {
            return Err(Error::InvalidParameter(format!("s = {s} outside (0, 1)")))
        }
        Some(s) => vec![s],
        None => vec![0.1, 0.25, 0.5, 0.75, 0.9],
    };
    for s in ss {
        checks.push(check(
            format!("h-ratio-increasing[s={s}]"),
            "h(st)/h(t) is strictly increasing with values in (2^(s-1), 1)",
            ratio_spec.label(),
            move || {
                let ts = ratio_spec.points()?;
                let scan = check_monotone(|t| h_ratio(s, t), &ts, Direction::Increasing, slack, true)?;
                let lower = (s - 1.0).exp2();
                let margin = (scan.min - lower).min(1.0 - scan.max);
                Ok(Outcome {
                    status: Status::from_bool(scan.passed() && margin > 0.0),
                    margin,
                    detail: format!("range [{}, {}]", scan.min, scan.max),
                })
            },
        ));
        checks.push(check(
            format!("h-ratio-product-symmetric[s={s}]"),
            "h(st)h((1-s)t)/h(t) is symmetric under s -> 1-s and lies in (1/2, 1)",
            ratio_spec.label(),
            move || {
                let ts = ratio_spec.points()?;
                let mut worst = 0.0f64;
                let mut range = (f64::INFINITY, f64::NEG_INFINITY);
                for &t in &ts {
                    let a = h_ratio_product(s, t)?;
                    let b = h_ratio_product(1.0 - s, t)?;
                    worst = worst.max((a - b).abs() / a);
                    range = (range.0.min(a), range.1.max(a));
                }
                let margin = (4.0 * f64::EPSILON - worst).min(range.0 - 0.5).min(1.0 - range.1);
                Ok(Outcome::from_margin(margin, format!("asymmetry {worst:.3e}")))
            },
        ));
    }
    for s in [0.25, 0.5, 0.75] {
        checks.push(check(
            format!("bracket-coefficients[s={s}]"),
            "Taylor coefficients of orders 7..11 of the kernel-ratio bracket match their closed forms",
            "contour extraction".into(),
            move || {
                let res = series_coefficient_check(s, &[7, 8, 9, 10, 11])?;
                let worst = res.iter().map(|c| c.rel_residual).fold(0.0, f64::max);
                Ok(Outcome::from_margin(1e-8 - worst, format!("worst relative residual {worst:.3e}")))
            },
        ));
    }
    Ok((run_checks(checks), vec![]))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn limits(ctx: &Context) -> Result<(Vec<ClaimRecord>, Vec<Observation>)> {
    let r = ctx.ratio;
    let spec = ctx.grid_or(LogGrid::new(1e-4, 1e4, 200));
    let grid = spec.points()?;
    let slack = ctx.tol.unwrap_or(1e-10);
    let mut checks: Vec<Check> = Vec::new();
    let ks: Vec<usize> = match ctx.k {
        Some(k) => vec![k],
        None => (0..=6).collect(),
    };
    for &k in &ks {
        checks.push(check(
            format!("phi-deriv-scaled-limits[k={k}]"),
            "(-1)^k x^(k+1) Phi^(k)(x) tends to k! at the origin and k!/2 at infinity",
            "x in {1e-4, 1e4}".into(),
            move || {
                let pg = r.polygamma();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let scaled = |x: f64| -> Result<f64> {
                    Ok(sign * x.powi(k as i32 + 1) * pg.phi_deriv(k, pt(x)?)?)
                };
                let lo = rel_dev(scaled(1e-4)?, factorial(k));
                let hi = rel_dev(scaled(1e4)?, factorial(k) / 2.0);
                Ok(Outcome::from_margin(
                    0.01 - lo.max(hi),
                    format!("relative deviations {lo:.3e}, {hi:.3e}"),
                ))
            },
        ));
    }
    let g = &grid;
    checks.push(check(
        "H2-decreasing".into(),
        "Phi'(x)/Phi(x)^2 is strictly decreasing",
        spec.label(),
        move || {
            let scan = check_monotone(|x| r.h_beta(2.0, pt(x)?), g, Direction::Decreasing, slack, true)?;
            let detail = match scan.first_violation {
                Some(v) => format!("no decrease between x = {:e} and {:e}", v.x0, v.x1),
                None => format!("range [{}, {}]", scan.min, scan.max),
            };
            Ok(Outcome {
                status: Status::from_bool(scan.passed()),
                margin: if scan.passed() { 0.0 } else { -1.0 },
                detail,
            })
        },
    ));
    checks.push(check(
        "H2-limits".into(),
        "Phi'(x)/Phi(x)^2 tends to -1 at the origin and -2 at infinity",
        "x in {1e-4, 1e4}".into(),
        move || {
            let lo = rel_dev(r.h_beta(2.0, pt(1e-4)?)?, -1.0);
            let hi = rel_dev(r.h_beta(2.0, pt(1e4)?)?, -2.0);
            Ok(Outcome::from_margin(0.01 - lo.max(hi), format!("relative deviations {lo:.3e}, {hi:.3e}")))
        },
    ));
    let jks: Vec<usize> = match ctx.k {
        Some(k) => vec![k],
        None => (0..=3).collect(),
    };
    for k in jks {
        checks.push(check(
            format!("J-limits[k={k},mu=2]"),
            "J(k,2,x) tends to -(2k+2)!/(2 k! (k+1)!) at the origin and -(2k+2)!/(k! (k+1)!) at infinity",
            "x in {1e-4, 1e4}".into(),
            move || {
                let top = factorial(2 * k + 2) / (factorial(k) * factorial(k + 1));
                let lo = rel_dev(r.j(k, 2.0, pt(1e-4)?)?, -0.5 * top);
                let hi = rel_dev(r.j(k, 2.0, pt(1e4)?)?, -top);
                Ok(Outcome::from_margin(0.01 - lo.max(hi), format!("relative deviations {lo:.3e}, {hi:.3e}")))
            },
        ));
    }
    Ok((run_checks(checks), vec![]))
}

/// The product-derivative expression with analytic derivatives.
struct RemarkHandle {
    ratio: RatioFunctions,
    m: usize,
    n: usize,
}

impl CmFunction for RemarkHandle {
    fn value(&self, x: f64) -> Result<f64> {
        self.ratio.remark_expression(self.m, self.n, pt(x)?)
    }

    fn derivative(&self, order: usize, x: f64) -> Option<Result<Evaluation>> {
        let eval = || {
            let acc = self.ratio.remark_derivative(self.m, self.n, order, pt(x)?)?;
            Ok(Evaluation {
                value: acc.value.to_f64(),
                error: acc.error_bound(),
            })
        };
        Some(eval())
    }
}

fn remark_5(ctx: &Context) -> Result<(Vec<ClaimRecord>, Vec<Observation>)> {
    let spec = ctx.grid_or(LogGrid::new(1e-2, 1e2, 80));
    let grid = spec.points()?;
    let r = ctx.ratio;
    let pairs = ctx.pairs(3);
    let mut checks: Vec<Check> = Vec::new();
    for &(m, n) in &pairs {
        let g = &grid;
        checks.push(check(
            format!("product-derivative-inequality[m={m},n={n}]"),
            "Phi^(m+n+1) [Phi^(m) Phi^(n)]' exceeds Phi^(m+n+2) Phi^(m) Phi^(n)",
            spec.label(),
            move || {
                let mut margin = f64::INFINITY;
                for &x in g {
                    let acc = r.remark_derivative(m, n, 0, pt(x)?)?;
                    let v = acc.value.to_f64();
                    margin = margin.min((v - acc.error_bound()) / v.abs().max(f64::MIN_POSITIVE));
                }
                Ok(Outcome {
                    status: Status::from_bool(margin > 0.0),
                    margin,
                    detail: "relative margin beyond the rounding bound".into(),
                })
            },
        ));
        checks.push(check(
            format!("product-derivative-identity[m={m},n={n}]"),
            "the expression equals -Y'(m,n,x) [Phi^(m) Phi^(n)]^2",
            "x in {0.5, 2, 5}".into(),
            move || {
                let pg = r.polygamma();
                let mut worst = 0.0f64;
                for x in [0.5, 2.0, 5.0] {
                    let f = |y: f64| r.y(m, n, pt(y)?);
                    let dy = derivative(&f, x, 1, default_step(x, 1, 0.0))?;
                    let prod = pg.phi_deriv(m, pt(x)?)? * pg.phi_deriv(n, pt(x)?)?;
                    let want = -dy.value * prod * prod;
                    worst = worst.max(rel_dev(r.remark_expression(m, n, pt(x)?)?, want));
                }
                Ok(Outcome::from_margin(1e-6 - worst, format!("worst relative gap {worst:.3e}")))
            },
        ));
    }
    let max_order = ctx.max_order.unwrap_or(4);
    let mut observations: Vec<Observation> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let f = RemarkHandle { ratio: r, m, n };
            let summary = match check_sign_pattern(&f, max_order, &grid, 0.0) {
                Ok(rep) => format!(
                    "orders 0..={max_order}: {}",
                    rep.orders.iter().map(|o| o.verdict.label()).collect::<Vec<_>>().join(" ")
                ),
                Err(e) => format!("evaluation error: {e}"),
            };
            Observation {
                id: format!("product-derivative-cm-probe[m={m},n={n}]"),
                anchor: "conjectured complete monotonicity of the expression (exploratory)",
                summary,
            }
        })
        .collect();
    observations.extend(region_observations()?);
    Ok((run_checks(checks), observations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context {
            ratio: RatioFunctions::default(),
            quad: QuadratureConfig::default(),
            m: None,
            n: None,
            k: None,
            s: None,
            omega: None,
            max_order: None,
            tol: None,
            grid: None,
            res: None,
        }
    }

    #[test]
    fn suite_names() {
        for (name, s) in SUITES {
            assert_eq!(name.parse::<Suite>().unwrap(), *s);
            assert_eq!(s.name(), *name);
        }
        assert!("theorem-5".parse::<Suite>().is_err());
    }

    #[test]
    fn pair_selection() {
        assert_eq!(ctx().pairs(2).len(), 9);
        let one = Context { m: Some(1), ..ctx() };
        assert_eq!(one.pairs(4), vec![(1, 0)]);
    }

    #[test]
    fn small_theorem_4_passes() {
        let c = Context { m: Some(0), n: Some(0), ..ctx() };
        let (claims, _) = theorem_4(&c).unwrap();
        assert!(claims.iter().all(|c| c.status == Status::Pass), "{claims:#?}");
    }

    #[test]
    fn decreasing_detects_increase() {
        let grid = [1.0, 2.0, 3.0];
        let vals = [DoubleDouble::from_f64(3.0), DoubleDouble::from_f64(2.0), DoubleDouble::from_f64(2.5)];
        assert_eq!(strictly_decreasing(&grid, &vals, 1e-10).unwrap().status, Status::Fail);
        let flat = [DoubleDouble::from_f64(3.0), DoubleDouble::new(3.0, -1e-20), DoubleDouble::from_f64(2.0)];
        let o = strictly_decreasing(&grid, &flat, 1e-10).unwrap();
        assert_eq!(o.status, Status::Pass);
        assert!(o.margin > 0.0 && o.margin < 1e-19);
    }
}
