//! `hypq` command-line front end.
//!
//! Exit status: 0 = everything checked out, 1 = a mathematical mismatch,
//! 2 = usage, parameter or domain error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::HypError;
use crate::frobenius::{
    closed_form_coeffs, indicial_roots, ode_from_case, ode_residual, recurrence_coeffs, Branch, ClosedFormCase,
};
use crate::report::{fmt_f64, write_coeff_table, write_identity_report, CoeffRow, CoeffTable, Format};
use crate::scalar::{parse_rational, parse_real, Rational, Scalar};
use crate::series::SeriesControl;
use crate::transforms::{
    check_identity, fit_connection_constants, lhs_eval, random_grid, rhs_eval, GridSpec, TransformCase,
};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "HYPQ_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Mismatch = 1,
    Usage = 2,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Parser)]
#[command(name = "hypq", version, about = "Quadratic transformations of 2F1 and their Frobenius-method checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate both sides of a transformation at one point
    Eval(EvalArgs),
    /// Run a seeded identity suite and write a report
    Check(CheckArgs),
    /// Compare recurrence and closed-form Frobenius coefficients exactly
    Coeffs(CoeffsArgs),
    /// ODE residual of a Frobenius series at a point
    Residual(ResidualArgs),
    /// Least-squares connection constants A, B
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = SeriesControl::default().max_terms)]
    pub max_terms: usize,
    #[arg(long, default_value_t = SeriesControl::default().rel_tol)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = SeriesControl::default().consecutive_small)]
    pub consecutive_small: usize,
}

impl SeriesArgs {
    fn control(&self) -> Result<SeriesControl, HypError> {
        SeriesControl::new(self.max_terms, self.rel_tol, self.consecutive_small)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest |x| drawn
    #[arg(long, default_value_t = GridSpec::default().x_max)]
    pub x_max: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub lambda: String,
    #[arg(long = "N", visible_alias = "n", default_value_t = 20)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub lambda: String,
    #[arg(long = "N", visible_alias = "n", default_value_t = 60)]
    pub n_max: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Coefficients from the recurrence or the closed form
    #[arg(long, default_value = "recurrence")]
    pub source: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Comma-separated sample points in (0, 1)
    #[arg(long, default_value = "0.1,0.2,0.3,0.4")]
    pub xs: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Math(HypError),
    Io(io::Error),
}

impl From<HypError> for CliError {
    fn from(e: HypError) -> Self {
        CliError::Math(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CmdResult = Result<Status, CliError>;

/// Entry point for the binary.
pub fn main_entry() -> ExitCode {
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), env_seed.as_deref(), &mut stdout.lock(), &mut stderr.lock()).into()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Status
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { Status::Usage } else { Status::Pass };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return status;
        }
    };

    let result = match &cli.command {
        Command::Eval(args) => cmd_eval(args, stdout),
        Command::Check(args) => cmd_check(args, env_seed, stdout, stderr),
        Command::Coeffs(args) => cmd_coeffs(args, stdout),
        Command::Residual(args) => cmd_residual(args, stdout),
        Command::Fit(args) => cmd_fit(args, stdout),
    };
    match result {
        Ok(status) => status,
        Err(CliError::Math(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            Status::Usage
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            Status::Usage
        }
    }
}

/// Runs `body` against stdout or the `--out` file.
fn with_output(output: &OutputArgs, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()
        }
        None => body(stdout),
    }
}

fn parse_format(output: &OutputArgs) -> Result<Format, HypError> {
    output.format.parse()
}

#[derive(Serialize)]
struct EvalOutput {
    case: TransformCase,
    a: f64,
    b: f64,
    x: f64,
    lhs: f64,
    rhs: f64,
    diff: f64,
}

fn cmd_eval(args: &EvalArgs, stdout: &mut dyn Write) -> CmdResult {
    let case: TransformCase = args.case.parse()?;
    let format = parse_format(&args.output)?;
    let ctl = args.series.control()?;
    let (a, b, x) = (parse_real(&args.a)?, parse_real(&args.b)?, parse_real(&args.x)?);
    let explain = |e: HypError| match e {
        HypError::NotConverged { .. } => {
            let z = 4.0 * x / ((1.0 + x) * (1.0 + x));
            HypError::DomainError(format!(
                "{e}; 4x/(1+x)^2 = {z} is too close to the radius of convergence |z| < 1 for --max-terms {}",
                ctl.max_terms
            ))
        }
        other => other,
    };
    let lhs = lhs_eval(case, a, b, x, &ctl).map_err(explain)?;
    let rhs = rhs_eval(case, a, b, x, &ctl).map_err(explain)?;
    let res = EvalOutput {
        case,
        a,
        b,
        x,
        lhs,
        rhs,
        diff: lhs - rhs,
    };
    with_output(&args.output, stdout, |w| match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &res)?;
            writeln!(w)
        }
        Format::Csv => {
            writeln!(w, "case,a,b,x,lhs,rhs,diff")?;
            writeln!(w, "{},{},{},{},{},{},{}", case, fmt_f64(a), fmt_f64(b), fmt_f64(x), fmt_f64(lhs), fmt_f64(rhs), fmt_f64(res.diff))
        }
        Format::Text => {
            writeln!(w, "case: {case}  a = {a}  b = {b}  x = {x}")?;
            writeln!(w, "lhs  = {lhs}")?;
            writeln!(w, "rhs  = {rhs}")?;
            writeln!(w, "diff = {:e}", res.diff)
        }
    })?;
    Ok(Status::Pass)
}

fn cmd_check(args: &CheckArgs, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let case: TransformCase = args.case.parse()?;
    let format = parse_format(&args.output)?;
    let ctl = args.series.control()?;
    if args.samples == 0 {
        return Err(HypError::InvalidParams("--samples must be at least 1".into()).into());
    }
    if !(args.tol > 0.0) {
        return Err(HypError::InvalidParams("--tol must be positive".into()).into());
    }
    if !(args.x_max > 0.0 && args.x_max < 1.0) {
        return Err(HypError::InvalidParams("--x-max must lie in (0, 1)".into()).into());
    }
    let seed = match env_seed {
        Some(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| HypError::Parse(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?,
        None => args.seed,
    };

    let spec = GridSpec {
        x_max: args.x_max,
        ..GridSpec::default()
    };
    let grid = random_grid(case, args.samples, seed, &spec);
    let mut report = check_identity(case, &grid, args.tol, &ctl);
    report.seed = Some(seed);

    with_output(&args.output, stdout, |w| write_identity_report(&report, format, w))?;
    writeln!(
        stderr,
        "{}: {} passed, {} failed, {} skipped, max rel err {:e}",
        case,
        report.n_pass,
        report.n_fail,
        report.skipped.len(),
        report.max_rel_err()
    )?;
    for s in &report.skipped {
        writeln!(stderr, "skipped a={} b={} x={}: {}", s.point.a, s.point.b, s.point.x, s.reason)?;
    }
    Ok(if report.all_passed() { Status::Pass } else { Status::Mismatch })
}

/// Exact case, parameters and branch selected by λ.
fn exact_setup(case: &str, a: &str, b: &str, lambda: &str) -> Result<(TransformCase, Rational, Rational, Rational, Branch), HypError> {
    let case: TransformCase = case.parse()?;
    let (a, b, lambda) = (parse_rational(a)?, parse_rational(b)?, parse_rational(lambda)?);
    let ode = ode_from_case(case, &a, &b);
    let roots = indicial_roots(&ode);
    if roots.lambda1 == roots.lambda2 {
        return Err(HypError::ResonantExponent(format!(
            "double indicial root {}; the second solution is logarithmic",
            roots.lambda1
        )));
    }
    let branch = if lambda == roots.lambda1 {
        Branch::Analytic
    } else if lambda == roots.lambda2 {
        Branch::Singular
    } else {
        return Err(HypError::NotIndicialRoot {
            lambda: format!("{lambda} (roots are {} and {})", roots.lambda1, roots.lambda2),
        });
    };
    Ok((case, a, b, lambda, branch))
}

fn cmd_coeffs(args: &CoeffsArgs, stdout: &mut dyn Write) -> CmdResult {
    let format = parse_format(&args.output)?;
    let (case, a, b, lambda, branch) = exact_setup(&args.case, &args.a, &args.b, &args.lambda)?;
    let ode = ode_from_case(case, &a, &b);
    let rec = recurrence_coeffs(&ode, &lambda, args.n_max, &Rational::from_i64(1))?;
    let cf = ClosedFormCase::new(case, branch);
    let closed = closed_form_coeffs(cf, &a, &b, args.n_max)?;

    let rows: Vec<CoeffRow> = rec
        .coeffs
        .iter()
        .zip(&closed.coeffs)
        .enumerate()
        .map(|(n, (r, c))| CoeffRow {
            n,
            recurrence: r.to_string(),
            closed_form: c.to_string(),
            equal: r == c,
        })
        .collect();
    let all_equal = rows.iter().all(|r| r.equal) && rec.lambda == closed.lambda;
    let table = CoeffTable {
        case: case.to_string(),
        branch: branch.to_string(),
        a: a.to_string(),
        b: b.to_string(),
        lambda: lambda.to_string(),
        formula: cf.formula().to_string(),
        rows,
        all_equal,
    };
    with_output(&args.output, stdout, |w| write_coeff_table(&table, format, w))?;
    Ok(if all_equal { Status::Pass } else { Status::Mismatch })
}

#[derive(Serialize)]
struct ResidualOutput {
    case: TransformCase,
    branch: Branch,
    source: String,
    x: f64,
    residual: f64,
    scale: f64,
    relative: f64,
    pass: bool,
}

fn cmd_residual(args: &ResidualArgs, stdout: &mut dyn Write) -> CmdResult {
    let format = parse_format(&args.output)?;
    let (case, a, b, lambda, branch) = exact_setup(&args.case, &args.a, &args.b, &args.lambda)?;
    let x = parse_real(&args.x)?;
    let ode = ode_from_case(case, &a, &b);
    let cs = match args.source.as_str() {
        "recurrence" => recurrence_coeffs(&ode, &lambda, args.n_max, &Rational::from_i64(1))?,
        "closed" | "closed-form" => closed_form_coeffs(ClosedFormCase::new(case, branch), &a, &b, args.n_max)?,
        other => {
            return Err(HypError::Parse(format!("unknown --source {other:?} (expected recurrence or closed)")).into())
        }
    };
    let r = ode_residual(&ode, &cs, x)?;
    let out = ResidualOutput {
        case,
        branch,
        source: args.source.clone(),
        x,
        residual: r.value,
        scale: r.scale,
        relative: r.relative(),
        pass: r.relative() <= args.tol,
    };
    with_output(&args.output, stdout, |w| match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &out)?;
            writeln!(w)
        }
        Format::Csv => {
            writeln!(w, "case,branch,source,x,residual,scale,relative,pass")?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                out.case, out.branch, out.source, out.x, out.residual, out.scale, out.relative, out.pass
            )
        }
        Format::Text => {
            writeln!(w, "case: {case}  branch: {branch}  source: {}  x = {x}", out.source)?;
            writeln!(w, "residual = {:e}", out.residual)?;
            writeln!(w, "scale    = {:e}", out.scale)?;
            writeln!(w, "relative = {:e}", out.relative)
        }
    })?;
    Ok(if out.pass { Status::Pass } else { Status::Mismatch })
}

#[derive(Serialize)]
struct FitOutput {
    case: TransformCase,
    a: f64,
    b: f64,
    xs: Vec<f64>,
    #[serde(rename = "A")]
    coef_a: f64,
    #[serde(rename = "B")]
    coef_b: f64,
    residual: f64,
    condition: f64,
    pass: bool,
}

fn cmd_fit(args: &FitArgs, stdout: &mut dyn Write) -> CmdResult {
    let case: TransformCase = args.case.parse()?;
    let format = parse_format(&args.output)?;
    let ctl = args.series.control()?;
    let (a, b) = (parse_real(&args.a)?, parse_real(&args.b)?);
    let xs = args
        .xs
        .split(',')
        .map(|s| parse_real(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let k = fit_connection_constants(case, a, b, &xs, &ctl)?;
    let pass = (k.coef_a - 1.0).abs() <= args.tol && k.coef_b.abs() <= args.tol;
    let out = FitOutput {
        case,
        a,
        b,
        xs,
        coef_a: k.coef_a,
        coef_b: k.coef_b,
        residual: k.residual,
        condition: k.condition,
        pass,
    };
    with_output(&args.output, stdout, |w| match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &out)?;
            writeln!(w)
        }
        Format::Csv => {
            writeln!(w, "case,a,b,A,B,residual,condition,pass")?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                out.case, out.a, out.b, out.coef_a, out.coef_b, out.residual, out.condition, out.pass
            )
        }
        Format::Text => {
            writeln!(w, "case: {case}  a = {a}  b = {b}")?;
            writeln!(w, "A = {}", out.coef_a)?;
            writeln!(w, "B = {:e}", out.coef_b)?;
            writeln!(w, "residual = {:e}  condition = {:e}", out.residual, out.condition)
        }
    })?;
    Ok(if pass { Status::Pass } else { Status::Mismatch })
}
