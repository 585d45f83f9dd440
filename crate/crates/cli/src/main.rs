//! `bipoisson` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use bipoisson::{Error, ProcessParams, Rational, Scalar};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bipoisson",
    version,
    about = "Free bi-Poisson processes: measures, paths, checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Law of X_t as JSON: density samples, support and atoms.
    Describe(DescribeArgs),
    /// Support band and atom curves of X_t over a time grid.
    SupportPlot(SupportPlotArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Sample paths at given times as CSV.
    Sample(SampleArgs),
    /// c-convolve the theta = 1 measure pairs at times s and t.
    Convolve(ConvolveArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Rational ("p/q") or decimal.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
}

#[derive(Args)]
struct OutArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DescribeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    t: String,
    /// Number of density samples.
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SupportPlotArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest time on the grid.
    #[arg(long, default_value = "2")]
    t: String,
    /// Number of grid points after t = 0.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Chapman,
    Martingale,
    Harness,
    Reversal,
    Semigroup,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Run only this parameter point instead of the built-in grid.
    #[command(flatten)]
    params: ParamArgs,
    /// Series order for the algebraic suites.
    #[arg(long)]
    order: Option<usize>,
    /// Polynomial degree for the kernel suites.
    #[arg(long)]
    deg: Option<usize>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated increasing positive times.
    #[arg(long, value_delimiter = ',')]
    times: Vec<String>,
    /// Number of paths.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ConvolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    s: String,
    #[arg(long)]
    t: String,
    #[arg(long, default_value_t = 10)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[command(flatten)]
    out: OutArgs,
}

/// Why a command did not succeed.
enum Failure {
    Input(String),
    /// Verification ran but failed; the payload is still written out.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::TimeOrder(_)
            | Error::OutsideSupport { .. }
            | Error::Parse(_) => Failure::Input(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse<S: Scalar>(text: &str) -> CliResult<S> {
    Ok(S::parse(text)?)
}

impl ParamArgs {
    fn given<S: Scalar>(&self) -> CliResult<Option<ProcessParams<S>>> {
        match (&self.eta, &self.theta) {
            (None, None) => Ok(None),
            _ => self.or_default("0", "0").map(Some),
        }
    }

    fn or_default<S: Scalar>(&self, eta: &str, theta: &str) -> CliResult<ProcessParams<S>> {
        let eta = parse(self.eta.as_deref().unwrap_or(eta))?;
        let theta = parse(self.theta.as_deref().unwrap_or(theta))?;
        Ok(ProcessParams::new(eta, theta)?)
    }
}

fn emit(out: &OutArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &OutArgs, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    emit(out, &text)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Describe(a) => {
            let params = a.params.or_default::<f64>("0", "0")?;
            let t: f64 = parse(&a.t)?;
            emit_json(&a.out, &commands::describe(&params, t, a.n)?)
        }
        Command::SupportPlot(a) => {
            let params = a.params.or_default::<f64>("0", "0")?;
            let t: f64 = parse(&a.t)?;
            emit_json(&a.out, &commands::support_plot(&params, t, a.n)?)
        }
        Command::Sample(a) => {
            let params = a.params.or_default::<f64>("0", "0")?;
            let times = a
                .times
                .iter()
                .map(|t| parse(t))
                .collect::<CliResult<Vec<f64>>>()?;
            emit(&a.out, &commands::sample(&params, &times, a.n, a.seed)?)
        }
        Command::Convolve(a) => {
            let (report, pass) = match a.mode {
                Mode::Exact => commands::convolve::<Rational>(
                    &a.params.or_default("0", "1")?,
                    &parse(&a.s)?,
                    &parse(&a.t)?,
                    a.order,
                )?,
                Mode::Float => commands::convolve::<f64>(
                    &a.params.or_default("0", "1")?,
                    &parse(&a.s)?,
                    &parse(&a.t)?,
                    a.order,
                )?,
            };
            emit_json(&a.out, &report)?;
            if pass {
                Ok(())
            } else {
                Err(Failure::Verification(
                    "pair(s) ⊠ pair(t) differs from pair(s + t)".into(),
                ))
            }
        }
        Command::Verify(a) => {
            let config = verify::Config {
                exact: a.mode == Mode::Exact,
                params: a.params.given::<Rational>()?,
                order: a.order,
                deg: a.deg,
            };
            let suites = match a.suite {
                Suite::Identities => vec![verify::SuiteName::Identities],
                Suite::Chapman => vec![verify::SuiteName::Chapman],
                Suite::Martingale => vec![verify::SuiteName::Martingale],
                Suite::Harness => vec![verify::SuiteName::Harness],
                Suite::Reversal => vec![verify::SuiteName::Reversal],
                Suite::Semigroup => vec![verify::SuiteName::Semigroup],
                Suite::All => verify::SuiteName::ALL.to_vec(),
            };
            let report = verify::run(&suites, &config, a.parallel.max(1))?;
            emit_json(
                &a.out,
                &serde_json::to_value(&report).expect("report serializes"),
            )?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Verification("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("bipoisson: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("bipoisson: {msg}");
            ExitCode::from(2)
        }
    }
}
