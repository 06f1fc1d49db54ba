mod output;
mod registry;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trigamma_cm::laplace::{QuadratureConfig, Subdivision};
use trigamma_cm::lemma_f::sign_region_map;
use trigamma_cm::polygamma::MAX_SUPPORTED_ORDER;
use trigamma_cm::ratio::RatioFunctions;
use trigamma_cm::{Polygamma, PrecisionPolicy};

use crate::output::{emit, num, Csv};
use crate::registry::{Evaluator, Function, Params};
use crate::report::Report;
use crate::suites::{Context, LogGrid, Suite};

const EXIT_USAGE: u8 = 2;

/// Evaluate the Phi = x psi'(x) - 1 function family and verify its
/// monotonicity and complete-monotonicity properties numerically.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print function values, one per line
    Eval(EvalArgs),
    /// Run a verification suite and print a JSON report
    Verify(VerifyArgs),
    /// Tabulate a function on a log grid as CSV
    Scan(ScanArgs),
    /// Tabulate the sign of F(x, y) on a rectangle as CSV
    RegionMap(RegionArgs),
}

/// Precision and quadrature settings shared by every command.
#[derive(Args, Debug)]
struct Numerics {
    /// Relative tolerance every polygamma value must meet
    #[arg(long, global = true, env = "TRIGAMMA_CM_PRECISION", default_value_t = 1e-15)]
    precision: f64,
    /// Abscissa above which the asymptotic expansion is used
    #[arg(long, global = true, env = "TRIGAMMA_CM_CROSSOVER", default_value_t = 25.0)]
    crossover: f64,
    /// Gauss-Laguerre nodes for Laplace tails (at least 32)
    #[arg(long, global = true, env = "TRIGAMMA_CM_QUAD_NODES", default_value_t = 32)]
    quad_nodes: usize,
    /// Relative quadrature tolerance
    #[arg(long, global = true, env = "TRIGAMMA_CM_QUAD_TOL", default_value_t = 1e-12)]
    quad_tol: f64,
    /// Panel budget for adaptive quadrature
    #[arg(long, global = true, env = "TRIGAMMA_CM_QUAD_PANELS", default_value_t = 2000)]
    quad_panels: usize,
}

/// Function parameters; each function reads only the ones it uses.
#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long, env = "TRIGAMMA_CM_M", default_value_t = 0)]
    m: usize,
    #[arg(long, env = "TRIGAMMA_CM_N", default_value_t = 0)]
    n: usize,
    #[arg(long, env = "TRIGAMMA_CM_K", default_value_t = 0)]
    k: usize,
    /// Weight for calY and bernstein, lambda for frakJ, alpha for frakH; defaults to the sharp constant C(m, n)
    #[arg(long, env = "TRIGAMMA_CM_OMEGA", allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Kernel-ratio exponent in (0, 1)
    #[arg(long, env = "TRIGAMMA_CM_S", default_value_t = 0.5)]
    s: f64,
    /// Exponent of Phi in the denominator of H
    #[arg(long, env = "TRIGAMMA_CM_BETA", default_value_t = 2.0, allow_negative_numbers = true)]
    beta: f64,
    /// Exponent in the denominator of J
    #[arg(long, env = "TRIGAMMA_CM_MU", default_value_t = 2.0, allow_negative_numbers = true)]
    mu: f64,
    /// Second argument of F
    #[arg(long, env = "TRIGAMMA_CM_Y")]
    y: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params {
            m: self.m,
            n: self.n,
            k: self.k,
            omega: self.omega,
            s: self.s,
            beta: self.beta,
            mu: self.mu,
            y: self.y,
        }
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Function name, e.g. phi, Y, h, calJ, F
    function: Function,
    /// Points at which to evaluate
    #[arg(allow_negative_numbers = true)]
    values: Vec<f64>,
    /// More points, as an alternative to positional values
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    x: Vec<f64>,
    /// Print CSV with the point in the first column
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// lemma-f, kernel-h, limits, theorem-3, theorem-4, remark-5 or all
    suite: Suite,
    /// Restrict to one pair (m, n); an unset partner defaults to 0
    #[arg(long, env = "TRIGAMMA_CM_M")]
    m: Option<usize>,
    #[arg(long, env = "TRIGAMMA_CM_N")]
    n: Option<usize>,
    #[arg(long, env = "TRIGAMMA_CM_K")]
    k: Option<usize>,
    #[arg(long, env = "TRIGAMMA_CM_S")]
    s: Option<f64>,
    /// Extra weight to classify in theorem-4
    #[arg(long, env = "TRIGAMMA_CM_OMEGA", allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Highest derivative order for sign-pattern checks
    #[arg(long, env = "TRIGAMMA_CM_MAX_ORDER")]
    max_order: Option<usize>,
    /// Tolerance or monotonicity slack, replacing each claim's default
    #[arg(long, env = "TRIGAMMA_CM_TOL")]
    tol: Option<f64>,
    /// Override the x grid: lo hi npts
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "NPTS"], env = "TRIGAMMA_CM_LOG_GRID", value_delimiter = ',')]
    log_grid: Option<Vec<String>>,
    /// Grid resolution for the two-dimensional checks
    #[arg(long, env = "TRIGAMMA_CM_RES")]
    res: Option<usize>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    function: Function,
    /// lo hi npts
    #[arg(
        long,
        num_args = 3,
        value_names = ["LO", "HI", "NPTS"],
        env = "TRIGAMMA_CM_LOG_GRID",
        value_delimiter = ',',
        default_values = ["1e-3", "1e3", "100"]
    )]
    log_grid: Vec<String>,
    /// Slack for the monotonicity summary
    #[arg(long, env = "TRIGAMMA_CM_TOL", default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// Only F is supported
    function: String,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], env = "TRIGAMMA_CM_X_RANGE", value_delimiter = ',', default_values_t = [0.0, 6.0])]
    x: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], env = "TRIGAMMA_CM_Y_RANGE", value_delimiter = ',', default_values_t = [4.0, 40.0])]
    y: Vec<f64>,
    /// Points per axis
    #[arg(long, env = "TRIGAMMA_CM_RES", default_value_t = 100)]
    res: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure that maps to the usage/config exit code.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<u8, UsageError>;

fn ratio_functions(n: &Numerics) -> Result<RatioFunctions, UsageError> {
    let policy = PrecisionPolicy {
        target_tolerance: n.precision,
        crossover: n.crossover,
        ..PrecisionPolicy::default()
    };
    Ok(RatioFunctions::new(Polygamma::new(policy, MAX_SUPPORTED_ORDER)?))
}

fn quadrature(n: &Numerics) -> Result<QuadratureConfig, UsageError> {
    let cfg = QuadratureConfig {
        node_count: n.quad_nodes,
        truncation: None,
        subdivision: Subdivision::Adaptive,
        tolerance: n.quad_tol,
        max_panels: n.quad_panels,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_log_grid(raw: &[String]) -> Result<LogGrid, UsageError> {
    let [lo, hi, n] = raw else {
        return Err(UsageError(format!("--log-grid needs lo hi npts, got {raw:?}")));
    };
    let grid = LogGrid::new(lo.parse()?, hi.parse()?, n.parse()?);
    grid.points()?;
    Ok(grid)
}

fn cmd_eval(args: &EvalArgs, numerics: &Numerics) -> CmdResult {
    let evaluator = Evaluator {
        ratio: ratio_functions(numerics)?,
        quad: quadrature(numerics)?,
        params: args.params.params(),
    };
    let points: Vec<f64> = args.values.iter().chain(&args.x).copied().collect();
    if points.is_empty() {
        return Err(UsageError("no evaluation points given".into()));
    }
    let values = points
        .iter()
        .map(|&x| evaluator.eval(args.function, x))
        .collect::<Result<Vec<_>, _>>()?;
    let text = if args.csv {
        let mut csv = Csv::new(&[evaluator.describe(args.function)?.join(" ")], &[args.function.variable(), "value"]);
        for (x, v) in points.iter().zip(&values) {
            csv.row(&[num(*x), num(*v)]);
        }
        csv.finish()
    } else {
        values.iter().map(|v| num(*v) + "\n").collect()
    };
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, numerics: &Numerics) -> CmdResult {
    let ctx = Context {
        ratio: ratio_functions(numerics)?,
        quad: quadrature(numerics)?,
        m: args.m,
        n: args.n,
        k: args.k,
        s: args.s,
        omega: args.omega,
        max_order: args.max_order,
        tol: args.tol,
        grid: args.log_grid.as_deref().map(parse_log_grid).transpose()?,
        res: args.res,
    };
    if let Some(t) = ctx.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(UsageError(format!("tolerance {t} must be non-negative")));
        }
    }
    let report = Report::new(suites::run(args.suite, &ctx)?);
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    eprint!("{}", report.summary());
    emit(args.out.as_deref(), &json)?;
    Ok(report.exit_code())
}

fn cmd_scan(args: &ScanArgs, numerics: &Numerics) -> CmdResult {
    let evaluator = Evaluator {
        ratio: ratio_functions(numerics)?,
        quad: quadrature(numerics)?,
        params: args.params.params(),
    };
    let spec = parse_log_grid(&args.log_grid)?;
    let grid = spec.points()?;
    let values = {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&x| evaluator.eval(args.function, x))
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut meta = evaluator.describe(args.function)?;
    meta.push(format!("grid={}", spec.label()));
    let mut csv = Csv::new(&[meta.join(" ")], &[args.function.variable(), "value"]);
    for (x, v) in grid.iter().zip(&values) {
        csv.row(&[num(*x), num(*v)]);
    }
    emit(args.out.as_deref(), &csv.finish())?;
    eprintln!("{}", monotone_summary(&grid, values, args.tol)?);
    Ok(0)
}

fn monotone_summary(grid: &[f64], values: Vec<f64>, slack: f64) -> Result<String, UsageError> {
    use trigamma_cm::cm::{scan_values, Direction};
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut shape = "not monotone";
    for (dir, strict, label) in [
        (Direction::Increasing, true, "strictly increasing"),
        (Direction::Decreasing, true, "strictly decreasing"),
        (Direction::Increasing, false, "non-decreasing"),
        (Direction::Decreasing, false, "non-increasing"),
    ] {
        if scan_values(grid, values.clone(), dir, slack, strict)?.passed() {
            shape = label;
            break;
        }
    }
    Ok(format!(
        "{} points, range [{}, {}], {shape} (slack {slack:e})",
        grid.len(),
        num(min),
        num(max)
    ))
}

fn cmd_region_map(args: &RegionArgs) -> CmdResult {
    if args.function != "F" {
        return Err(UsageError(format!("region-map supports F only, got '{}'", args.function)));
    }
    let map = sign_region_map((args.x[0], args.x[1]), (args.y[0], args.y[1]), args.res)?;
    let meta = format!(
        "function=F x={}..{} y={}..{} res={} signs: + positive; - negative; 0 near zero; . outside 0<2x<y",
        args.x[0], args.x[1], args.y[0], args.y[1], args.res
    );
    let mut csv = Csv::new(&[meta], &["x", "y", "sign", "value"]);
    for c in &map.cells {
        csv.row(&[num(c.x), num(c.y), c.sign.symbol().to_string(), num(c.value)]);
    }
    emit(args.out.as_deref(), &csv.finish())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, &cli.numerics),
        Command::Verify(a) => cmd_verify(a, &cli.numerics),
        Command::Scan(a) => cmd_scan(a, &cli.numerics),
        Command::RegionMap(a) => cmd_region_map(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
