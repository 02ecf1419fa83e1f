use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qpsi_core::harness::{
    default_limit_params, emit_report, eval_series_file, limit_depths, params_from_json,
    run_limit_study, run_sweep, tannery_probe, LimitStudyDoc, ReportFormat, SweepConfig,
};
use qpsi_core::{Error, EvalContext, IdentityId};

const DEFAULT_DIGITS: u32 = 50;

#[derive(Parser)]
#[command(
    name = "qpsi",
    version,
    about = "Certified numerical checks of basic hypergeometric series identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered identities.
    List,
    /// Check an identity on seeded random parameter samples.
    Verify(VerifyArgs),
    /// Follow a semi-finite identity as n grows.
    Limit(LimitArgs),
    /// Evaluate a raw series described by a JSON file.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> ReportFormat {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Text => ReportFormat::Text,
        }
    }
}

#[derive(Args)]
struct Precision {
    /// Working precision in decimal digits.
    #[arg(long, env = "QPSI_PRECISION", default_value_t = DEFAULT_DIGITS)]
    digits: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    identity: String,
    /// Samples per depth.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    precision: Precision,
    #[arg(long, default_value_t = 0.05)]
    q_min: f64,
    #[arg(long, default_value_t = 0.5)]
    q_max: f64,
    /// Give sampled parameters a random phase.
    #[arg(long)]
    complex: bool,
    /// Depths of semi-finite sums, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_value = "0")]
    n_values: Vec<u32>,
    #[arg(long, default_value_t = 1e-30)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long)]
    identity: String,
    #[arg(long, default_value_t = 40)]
    n_max: u32,
    /// JSON object of decimal strings with `q` and the free parameters.
    #[arg(long)]
    params: Option<PathBuf>,
    #[command(flatten)]
    precision: Precision,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    series_spec: PathBuf,
    #[command(flatten)]
    precision: Precision,
}

enum Failure {
    /// Bad input, constraint violation or unreadable files.
    Config(String),
    /// A numeric failure that could not be skipped.
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e.root() {
            Error::Config(_) | Error::ConstraintViolation(_) | Error::Parse(_) => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Config(format!("stdout: {e}")))
        }
    }
}

fn identity(name: &str) -> Result<IdentityId, Failure> {
    Ok(name.parse::<IdentityId>()?)
}

fn list() -> Result<u8, Failure> {
    let mut out = String::new();
    for id in IdentityId::ALL {
        let free: Vec<&str> = id.free_params().iter().map(|p| p.name()).collect();
        let depth = if id.is_semi_finite() { ", n" } else { "" };
        out.push_str(&format!("{:<16} {}\n", id.name(), id.description()));
        out.push_str(&format!(
            "{:<16} free: q, {}{depth}; {}\n",
            "",
            free.join(", "),
            id.constraint()
        ));
    }
    write_out(None, out.as_bytes())?;
    Ok(0)
}

fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let config = SweepConfig {
        identity: identity(&args.identity)?,
        samples: args.samples,
        seed: args.seed,
        precision_digits: args.precision.digits,
        q_range: (args.q_min, args.q_max),
        complex_params: args.complex,
        n_values: args.n_values.clone(),
        tolerance: args.tolerance,
    };
    let report = run_sweep(&config)?;
    write_out(
        args.out.as_deref(),
        &emit_report(&report, args.format.into())?,
    )?;
    Ok(if report.summary.failed > 0 { 1 } else { 0 })
}

fn limit(args: &LimitArgs) -> Result<u8, Failure> {
    let id = identity(&args.identity)?;
    let ctx = EvalContext::new(args.precision.digits)?;
    let params = match &args.params {
        Some(path) => params_from_json(&read(path)?, &ctx)?,
        None => default_limit_params(id, &ctx)?,
    };
    let depths = limit_depths(args.n_max);
    let study = run_limit_study(id, &params, &depths, &ctx)?;
    let probe_depths: Vec<u32> = depths.iter().copied().filter(|&n| n > 0).collect();
    let fit = if probe_depths.is_empty() {
        None
    } else {
        let k_max = i64::from(args.n_max.clamp(2, 20));
        Some(tannery_probe(id, &params, &probe_depths, k_max, &ctx)?)
    };
    let doc = LimitStudyDoc::of(&study, fit.as_ref(), ctx.precision_digits() as usize);
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("limit documents always serialize");
    bytes.push(b'\n');
    write_out(args.out.as_deref(), &bytes)?;
    Ok(0)
}

fn eval(args: &EvalArgs) -> Result<u8, Failure> {
    let ctx = EvalContext::new(args.precision.digits)?;
    let doc = eval_series_file(&read(&args.series_spec)?, &ctx)?;
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("evaluation documents always serialize");
    bytes.push(b'\n');
    write_out(None, &bytes)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List => list(),
        Command::Verify(args) => verify(args),
        Command::Limit(args) => limit(args),
        Command::Eval(args) => eval(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("qpsi: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("qpsi: {msg}");
            ExitCode::from(3)
        }
    }
}
