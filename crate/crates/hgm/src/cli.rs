//! Subcommands of the `hgm` binary.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::thread;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hgm_core::ode::Method;
use hgm_core::wishart::{bounds, cdf_curve, cdf_largest_root, quantile, SeriesCdf};
use hgm_core::{HgmConfig, HypParams, TiePolicy, WishartProblem};

use crate::dump;
use crate::format::{number, Cell, Format, RecordWriter};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hgm",
    version,
    about = "Largest-eigenvalue distribution of a real Wishart matrix by the holonomic gradient method",
    after_help = "Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 selftest failure.\n\
                  Logging: set HGM_LOG (error, warn, info, debug, trace)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pr[l1 < x] with stochastic-ordering bounds.
    ///
    /// Columns: x, prob, lower, upper, seconds (wall time per point).
    Cdf(CdfArgs),
    /// Percentage points. Columns: p, x.
    Quantile(QuantileArgs),
    /// CDF on an even grid in one integration pass. Columns: x, prob.
    Table(TableArgs),
    /// HGM against the truncated series. Columns: x, hgm, series, diff.
    Compare(CompareArgs),
    /// Invariant checks. Columns: check, status, detail.
    Selftest(SelftestArgs),
    /// Exact zonal-to-monomial coefficients of weight k.
    /// Columns: kappa, lambda, coeff (p/q); partitions written 3.1.1.
    Zonal(ZonalArgs),
    /// Series coefficients q_lambda(a, c). Columns: partition, weight, q.
    Coeffs(CoeffArgs),
    /// Dense Pfaffian matrix P_i(y). Columns: row, then F, d1, d2, d1.2, ...
    Pfaffian(PfaffianArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Euler,
    Rk4,
    #[value(alias = "adaptive")]
    Rk4Adaptive,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Euler => Method::Euler,
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::Rk4Adaptive => Method::Rk4Adaptive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Perturb,
    Diagonal,
    Error,
}

impl From<TieArg> for TiePolicy {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Perturb => TiePolicy::Perturb,
            TieArg::Diagonal => TiePolicy::Diagonal,
            TieArg::Error => TiePolicy::Error,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Dimension; a single --beta or --sigma value is repeated m times.
    #[arg(long)]
    pub m: Option<usize>,
    /// Degrees of freedom.
    #[arg(long)]
    pub n: f64,
    /// diag(Sigma^-1)/2, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "sigma",
        conflicts_with = "sigma"
    )]
    pub beta: Vec<f64>,
    /// Variances diag(Sigma), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Vec<f64>,
}

impl ProblemArgs {
    pub fn problem(&self) -> Result<WishartProblem, Failure> {
        let (values, from_sigma) = if self.beta.is_empty() {
            (&self.sigma, true)
        } else {
            (&self.beta, false)
        };
        let values = match self.m {
            Some(m) if values.len() == 1 => vec![values[0]; m],
            Some(m) if values.len() != m => {
                return Err(Failure::usage(format!(
                    "--m {m} but {} values given",
                    values.len()
                )));
            }
            _ => values.clone(),
        };
        let prob = if from_sigma {
            WishartProblem::from_sigma(self.n, &values)
        } else {
            WishartProblem::new(self.n, &values)
        };
        prob.map_err(Failure::from)
    }
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// Start of the integration (default max(0.01, 0.002 m^2)).
    #[arg(long)]
    pub x0: Option<f64>,
    /// Step size (default min(0.5/sum(beta), span/1e4, x0/100)).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: MethodArg,
    /// Local tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value = "perturb")]
    pub tie_policy: TieArg,
    /// Quantile search gives up beyond this x.
    #[arg(long, default_value_t = 1e6)]
    pub max_x: f64,
}

impl NumericArgs {
    pub fn config(&self, degree: Option<usize>) -> HgmConfig {
        HgmConfig {
            degree,
            x0: self.x0,
            step: self.step,
            method: self.method.into(),
            rel_tol: self.rel_tol,
            tie_policy: self.tie_policy.into(),
            max_x: self.max_x,
            ..HgmConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
    /// Read key=value defaults from a file (keys are flag names).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads for independent points.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Evaluation points, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
    /// Series truncation degree at the start point (default automatic).
    #[arg(long = "K")]
    pub degree: Option<usize>,
    /// Skip the bounds (lower and upper are printed as NaN).
    #[arg(long)]
    pub no_bounds: bool,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Probabilities, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long = "K")]
    pub degree: Option<usize>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub xmax: f64,
    /// First grid point (default xmax/points).
    #[arg(long)]
    pub xmin: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long = "K")]
    pub degree: Option<usize>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 5.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.5)]
    pub xmin: f64,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// Degree of the comparison series.
    #[arg(long = "K", default_value_t = 150)]
    pub degree: usize,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ZonalArgs {
    #[arg(long)]
    pub k: usize,
    /// Keep partitions with at most this many parts (default k).
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "K")]
    pub degree: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PfaffianArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub c: f64,
    /// Point with nonzero, distinct coordinates, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub y: Vec<f64>,
    /// Coordinate, 1-based.
    #[arg(long)]
    pub i: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Why a command stopped, with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<hgm_core::Error> for Failure {
    fn from(e: hgm_core::Error) -> Self {
        use hgm_core::Error::*;
        let code = match e {
            NonFinite { .. } | BracketFailed { .. } => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message: format!("output: {e}"),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Applies `f` to every item on up to `jobs` threads; results keep the
/// input order.
pub fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| number(*x)).collect::<Vec<_>>().join(",")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "auto".into(), |v| v.to_string())
}

fn problem_meta(
    command: &str,
    prob: &WishartProblem,
    cfg: &HgmConfig,
    x_max: Option<f64>,
) -> Vec<(String, String)> {
    let method = match cfg.method {
        Method::Euler => "euler",
        Method::Rk4 => "rk4",
        Method::Rk4Adaptive => "rk4-adaptive",
    };
    let tie = match cfg.tie_policy {
        TiePolicy::Perturb => "perturb",
        TiePolicy::Diagonal => "diagonal",
        TiePolicy::Error => "error",
    };
    let mut meta = vec![
        ("hgm".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
        ("m".into(), prob.m().to_string()),
        ("n".into(), number(prob.n())),
        ("beta".into(), join(prob.beta())),
        ("x0".into(), number(cfg.x0_for(prob.m()))),
    ];
    let step = match (cfg.step, x_max) {
        (Some(s), _) => number(s),
        (None, Some(x)) => number(cfg.step_for(prob, x)),
        (None, None) => "auto".into(),
    };
    meta.push(("step".into(), step));
    meta.push(("K".into(), opt(cfg.degree)));
    meta.push(("method".into(), method.into()));
    meta.push(("rel_tol".into(), number(cfg.rel_tol)));
    meta.push(("tie_policy".into(), tie.into()));
    meta
}

fn writer<'a>(
    out: &'a mut dyn Write,
    output: &OutputArgs,
    mut meta: Vec<(String, String)>,
    columns: &[&str],
) -> io::Result<RecordWriter<&'a mut dyn Write>> {
    meta.push(("format".into(), output.format.to_string()));
    RecordWriter::new(out, output.format, &meta, columns)
}

fn cdf(args: &CdfArgs, out: &mut dyn Write) -> Outcome {
    let prob = args.problem.problem()?;
    let cfg = args.numeric.config(args.degree);
    cfg.validate()?;
    let x_max = args.x.iter().cloned().fold(f64::NAN, f64::max);
    let mut meta = problem_meta("cdf", &prob, &cfg, Some(x_max));
    meta.push(("bounds".into(), (!args.no_bounds).to_string()));
    let rows = par_map(
        &args.x,
        args.output.jobs,
        |&x| -> Result<Vec<Cell>, hgm_core::Error> {
            let t = Instant::now();
            let p = cdf_largest_root(x, &prob, &cfg)?;
            let (lo, hi) = if args.no_bounds {
                (f64::NAN, f64::NAN)
            } else {
                bounds(x, &prob, &cfg)?
            };
            Ok(vec![
                x.into(),
                p.into(),
                lo.into(),
                hi.into(),
                t.elapsed().as_secs_f64().into(),
            ])
        },
    );
    let mut w = writer(
        out,
        &args.output,
        meta,
        &["x", "prob", "lower", "upper", "seconds"],
    )?;
    for row in rows {
        w.write(&row?)?;
    }
    w.finish()?;
    Ok(())
}

fn quantiles(args: &QuantileArgs, out: &mut dyn Write) -> Outcome {
    let prob = args.problem.problem()?;
    let cfg = args.numeric.config(args.degree);
    cfg.validate()?;
    let meta = problem_meta("quantile", &prob, &cfg, None);
    let rows = par_map(&args.p, args.output.jobs, |&p| quantile(p, &prob, &cfg));
    let mut w = writer(out, &args.output, meta, &["p", "x"])?;
    for (p, x) in args.p.iter().zip(rows) {
        w.write(&[(*p).into(), x?.into()])?;
    }
    w.finish()?;
    Ok(())
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points == 0 || !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(Failure::usage(format!(
            "bad grid: {points} points on [{lo}, {hi}]"
        )));
    }
    if points == 1 {
        return Ok(vec![hi]);
    }
    Ok((0..points)
        .map(|i| (lo * (points - 1 - i) as f64 + hi * i as f64) / (points - 1) as f64)
        .collect())
}

fn table(args: &TableArgs, out: &mut dyn Write) -> Outcome {
    let prob = args.problem.problem()?;
    let cfg = args.numeric.config(args.degree);
    cfg.validate()?;
    let lo = args.xmin.unwrap_or(args.xmax / args.points.max(1) as f64);
    let xs = grid(lo, args.xmax, args.points)?;
    let meta = problem_meta("table", &prob, &cfg, Some(args.xmax));
    let probs = cdf_curve(&xs, &prob, &cfg)?;
    let mut w = writer(out, &args.output, meta, &["x", "prob"])?;
    for (x, p) in xs.iter().zip(probs) {
        w.write(&[(*x).into(), p.into()])?;
    }
    w.finish()?;
    Ok(())
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Outcome {
    let prob = args.problem.problem()?;
    let cfg = args.numeric.config(None);
    cfg.validate()?;
    let xs = grid(args.xmin, args.xmax, args.points)?;
    let mut meta = problem_meta("compare", &prob, &cfg, Some(args.xmax));
    meta.push(("series_K".into(), args.degree.to_string()));
    let hgm = cdf_curve(&xs, &prob, &cfg)?;
    let series = SeriesCdf::new(&prob, args.degree)?;
    let mut w = writer(out, &args.output, meta, &["x", "hgm", "series", "diff"])?;
    let mut worst: f64 = 0.0;
    for (x, h) in xs.iter().zip(hgm) {
        let s = series.eval(*x)?;
        worst = worst.max((h - s).abs());
        w.write(&[(*x).into(), h.into(), s.into(), (h - s).abs().into()])?;
    }
    w.finish()?;
    log::info!("max |hgm - series| = {worst:e}");
    Ok(())
}

fn run_selftest(args: &SelftestArgs, out: &mut dyn Write) -> Outcome {
    let meta = vec![
        ("hgm".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), "selftest".into()),
    ];
    let checks = selftest::run_all();
    let mut w = writer(out, &args.output, meta, &["check", "status", "detail"])?;
    let mut failed = 0;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed);
        w.write(&[c.name.into(), status.into(), c.detail.clone().into()])?;
    }
    w.finish()?;
    if failed > 0 {
        return Err(Failure {
            code: EXIT_SELFTEST,
            message: format!("{failed} of {} checks failed", checks.len()),
        });
    }
    Ok(())
}

fn zonal(args: &ZonalArgs, out: &mut dyn Write) -> Outcome {
    if args.k == 0 {
        return Err(Failure::usage("--k must be positive"));
    }
    let m = args.m.unwrap_or(args.k).max(1);
    let meta = vec![
        ("command".into(), "zonal".into()),
        ("k".into(), args.k.to_string()),
        ("m".into(), m.to_string()),
    ];
    let mut w = writer(out, &args.output, meta, &dump::ZONAL_COLUMNS)?;
    for row in dump::zonal_rows(args.k, m) {
        w.write(&row)?;
    }
    w.finish()?;
    Ok(())
}

fn coeffs(args: &CoeffArgs, out: &mut dyn Write) -> Outcome {
    let params = HypParams::new(args.a, args.c)?;
    if args.m == 0 {
        return Err(Failure::usage("--m must be positive"));
    }
    let meta = vec![
        ("command".into(), "coeffs".into()),
        ("a".into(), number(args.a)),
        ("c".into(), number(args.c)),
        ("m".into(), args.m.to_string()),
        ("K".into(), args.degree.to_string()),
    ];
    let rows = dump::coeff_rows(params, args.degree, args.m)?;
    let mut w = writer(out, &args.output, meta, &dump::COEFF_COLUMNS)?;
    for row in rows {
        w.write(&row)?;
    }
    w.finish()?;
    Ok(())
}

fn pfaffian(args: &PfaffianArgs, out: &mut dyn Write) -> Outcome {
    let params = HypParams::new(args.a, args.c)?;
    let m = args.y.len();
    if args.i == 0 || args.i > m {
        return Err(Failure::usage(format!("--i must be in 1..={m}")));
    }
    let meta = vec![
        ("command".into(), "pfaffian".into()),
        ("a".into(), number(args.a)),
        ("c".into(), number(args.c)),
        ("y".into(), join(&args.y)),
        ("i".into(), args.i.to_string()),
    ];
    let rows = dump::pfaffian_rows(args.i - 1, &args.y, params)?;
    let columns = dump::matrix_columns(m);
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut w = writer(out, &args.output, meta, &cols)?;
    for row in rows {
        w.write(&row)?;
    }
    w.finish()?;
    Ok(())
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Cdf(a) => cdf(a, out),
        Command::Quantile(a) => quantiles(a, out),
        Command::Table(a) => table(a, out),
        Command::Compare(a) => compare(a, out),
        Command::Selftest(a) => run_selftest(a, out),
        Command::Zonal(a) => zonal(a, out),
        Command::Coeffs(a) => coeffs(a, out),
        Command::Pfaffian(a) => pfaffian(a, out),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Messages go to stderr.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let args: Vec<String> = match args
        .into_iter()
        .map(|a| a.into().into_string())
        .collect::<Result<_, _>>()
    {
        Ok(v) => v,
        Err(_) => {
            eprintln!("error: arguments must be valid UTF-8");
            return EXIT_USAGE;
        }
    };
    let args = match crate::config::expand_args(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
