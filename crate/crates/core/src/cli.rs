//! Command-line front end. Exit codes: 0 success, 2 residual gate failed,
//! 3 input error, 4 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::{parse_str, to_pretty, AnyDistribution, DistributionJson, QuadrupleJson};
use crate::mollify::{standard_battery, write_diagnostics_csv, BumpSpec, TestFunction};
use crate::pipeline::{self, ApproxConfig};
use crate::scalar::ScalarMode;
use crate::transform::{write_grid_csv, GridSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "dirac-bezout", version, about = "Unimodular approximation of point distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Distribution JSON: a file path or an inline document. Repeat for pairs.
    #[arg(long = "input", required = true)]
    pub input: Vec<String>,
    /// Required scalar mode of the inputs.
    #[arg(long)]
    pub mode: Option<ScalarMode>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; reports go to stdout only when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-stage unimodular approximation of a pair (T, S).
    Approx {
        #[command(flatten)]
        common: Common,
        /// Largest k; stage 2 runs for k = 1..=K.
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Stage-1 schedule `m:n,m:n,...`.
        #[arg(long)]
        schedule: Option<String>,
        /// JSON list of test functions replacing the standard battery.
        #[arg(long)]
        battery: Option<String>,
    },
    /// Mollify and sample one distribution into Dirac combs.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Support index: supp T must lie in (-k, k).
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        battery: Option<String>,
    },
    /// Fourier–Laplace transform on a grid with a growth certificate.
    Transform {
        #[command(flatten)]
        common: Common,
        /// `center,radius,resolution`; the center is `re` or `re:im`.
        #[arg(long, default_value = "0,1,201")]
        grid: String,
    },
    /// Convolution inverse, or a NotInvertible report.
    Invert {
        #[command(flatten)]
        common: Common,
    },
    /// Check `T∗U + S∗V = δ_0` for a quadruple JSON.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0,1,41")]
        grid: String,
    },
}

pub fn parse_schedule(text: &str) -> Result<Vec<(u64, u64)>> {
    let bad = || Error::Parse(format!("schedule must look like m:n,m:n,... (got {text:?})"));
    let out = text
        .split(',')
        .map(|pair| {
            let (m, n) = pair.trim().split_once(':').ok_or_else(bad)?;
            let m: u64 = m.trim().parse().map_err(|_| bad())?;
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            if m == 0 || n == 0 {
                return Err(bad());
            }
            Ok((m, n))
        })
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub fn parse_grid(text: &str) -> Result<GridSpec> {
    let bad = || Error::Parse(format!("grid must look like c,r,res (got {text:?})"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [c, r, res] = parts.as_slice() else {
        return Err(bad());
    };
    let center = match c.split_once(':') {
        Some((re, im)) => Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?),
        None => Complex64::new(c.parse().map_err(|_| bad())?, 0.0),
    };
    GridSpec::new(center, r.parse().map_err(|_| bad())?, res.parse().map_err(|_| bad())?)
}

fn read_source(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') || arg.trim_start().starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Error::InvalidArgument(format!("cannot read {arg}: {e}")))
    }
}

fn load_distribution(arg: &str, mode: Option<ScalarMode>) -> Result<AnyDistribution> {
    let d = AnyDistribution::from_json(&parse_str::<DistributionJson>(&read_source(arg)?)?)?;
    if let Some(m) = mode {
        if m != d.mode() {
            return Err(Error::ModeMismatch {
                left: m,
                right: d.mode(),
            });
        }
    }
    Ok(d)
}

fn load_battery(arg: Option<&str>) -> Result<Vec<TestFunction>> {
    match arg {
        None => Ok(standard_battery()),
        Some(a) => {
            let b: Vec<TestFunction> = parse_str(&read_source(a)?)?;
            if b.is_empty() {
                return Err(Error::EmptyBattery);
            }
            Ok(b)
        }
    }
}

fn inputs(common: &Common, count: usize) -> Result<Vec<AnyDistribution>> {
    if common.input.len() != count {
        return Err(Error::InvalidArgument(format!(
            "expected {count} --input value(s), got {}",
            common.input.len()
        )));
    }
    common.input.iter().map(|a| load_distribution(a, common.mode)).collect()
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, dir.join(name))?;
    Ok(())
}

struct Output {
    stdout: String,
    code: i32,
}

fn report<T: Serialize>(value: &T, code: i32) -> Result<Output> {
    Ok(Output {
        stdout: to_pretty(value)?,
        code,
    })
}

fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Approx {
            common,
            k,
            schedule,
            battery,
        } => {
            let ins = inputs(common, 2)?;
            let cfg = ApproxConfig {
                max_k: *k,
                schedule: schedule.as_deref().map(parse_schedule).transpose()?,
                battery: load_battery(battery.as_deref())?,
                seed: common.seed,
                spec: BumpSpec::default(),
            };
            let out = pipeline::approx(&ins[0], &ins[1], &cfg)?;
            let text = to_pretty(&out.report)?;
            if let Some(dir) = &common.out {
                write_atomic(dir, "approx_report.json", text.as_bytes())?;
                for (k, q) in &out.quadruples {
                    write_atomic(dir, &format!("quadruple_k{k}.json"), to_pretty(q)?.as_bytes())?;
                }
            }
            let code = if out.report.passed { EXIT_OK } else { EXIT_GATE };
            Ok(Output { stdout: text, code })
        }
        Command::Sample {
            common,
            k,
            schedule,
            battery,
        } => {
            let ins = inputs(common, 1)?;
            let schedule = schedule.as_deref().map(parse_schedule).transpose()?;
            let (rep, steps) = pipeline::sample(
                &ins[0],
                *k,
                schedule.as_deref(),
                &load_battery(battery.as_deref())?,
                &BumpSpec::default(),
            )?;
            let text = to_pretty(&rep)?;
            if let Some(dir) = &common.out {
                write_atomic(dir, "sample_report.json", text.as_bytes())?;
                let mut csv = Vec::new();
                write_diagnostics_csv(&mut csv, &steps)?;
                write_atomic(dir, "sample_diagnostics.csv", &csv)?;
            }
            Ok(Output { stdout: text, code: EXIT_OK })
        }
        Command::Transform { common, grid } => {
            let ins = inputs(common, 1)?;
            let grid = parse_grid(grid)?;
            let rep = pipeline::transform(&ins[0], &grid)?;
            let text = to_pretty(&rep)?;
            if let Some(dir) = &common.out {
                write_atomic(dir, "certificate.json", text.as_bytes())?;
                let mut csv = Vec::new();
                match &ins[0] {
                    AnyDistribution::Exact(d) => write_grid_csv(&mut csv, d, &grid)?,
                    AnyDistribution::Float(d) => write_grid_csv(&mut csv, d, &grid)?,
                }
                write_atomic(dir, "grid.csv", &csv)?;
            }
            let code = if rep.certificate.is_valid() { EXIT_OK } else { EXIT_NUMERICAL };
            Ok(Output { stdout: text, code })
        }
        Command::Invert { common } => {
            let ins = inputs(common, 1)?;
            let rep = pipeline::invert(&ins[0]);
            let out = report(&rep, EXIT_OK)?;
            if let Some(dir) = &common.out {
                write_atomic(dir, "inverse.json", out.stdout.as_bytes())?;
            }
            Ok(out)
        }
        Command::Verify { common, grid } => {
            if common.input.len() != 1 {
                return Err(Error::InvalidArgument("verify takes one --input quadruple".into()));
            }
            let quad: QuadrupleJson = parse_str(&read_source(&common.input[0])?)?;
            if let Some(m) = common.mode {
                if m != quad.t.mode {
                    return Err(Error::ModeMismatch {
                        left: m,
                        right: quad.t.mode,
                    });
                }
            }
            let rep = pipeline::verify(&quad, &parse_grid(grid)?)?;
            let out = report(&rep, if rep.passed { EXIT_OK } else { EXIT_GATE })?;
            if let Some(dir) = &common.out {
                write_atomic(dir, "verify_report.json", out.stdout.as_bytes())?;
            }
            Ok(out)
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ModeMismatch { .. } => "ModeMismatch",
        Error::DerivativeOrder { .. } => "DerivativeOrder",
        Error::EmptyBattery => "EmptyBattery",
        Error::OffGrid { .. } => "OffGrid",
        Error::SupportExceeded { .. } => "SupportExceeded",
        Error::SupportNotInside { .. } => "SupportNotInside",
        Error::NoConvergence { .. } => "NoConvergence",
        Error::BudgetExhausted { .. } => "BudgetExhausted",
        Error::NotCoprime { .. } => "NotCoprime",
        Error::ZeroDistribution => "ZeroDistribution",
        Error::InvalidArgument(_) => "InvalidArgument",
        Error::Parse(_) | Error::Json(_) => "Parse",
        Error::Io(_) => "Io",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::BudgetExhausted { .. } | Error::NotCoprime { .. } => {
            EXIT_NUMERICAL
        }
        _ => EXIT_INPUT,
    }
}

/// Structured error document written to stderr.
#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

/// Parse arguments, run, print, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            let code = exit_code(&e);
            let doc = ErrorJson {
                error: error_kind(&e),
                message: e.to_string(),
                exit_code: code,
            };
            eprintln!("{}", serde_json::to_string(&doc).unwrap_or_else(|_| e.to_string()));
            code
        }
    }
}
