mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdecomp::compiler::Policy;
use thiserror::Error;

use config::{OutputFormat, Partial};

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    TooLarge(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::TooLarge(_) => 4,
            CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qdecomp",
    version,
    about = "Multi-controlled gate decomposition with auxiliary-qubit allocation"
)]
struct Cli {
    /// TOML file with qpu_total, policy, tolerance, output_format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args, Default)]
struct Common {
    #[arg(long)]
    qpu: Option<usize>,
    #[arg(long, value_parser = parse_policy)]
    policy: Option<Policy>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_policy(s: &str) -> Result<Policy, String> {
    Policy::parse(s).ok_or_else(|| format!("expected auto or force-no-aux, got {s:?}"))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a circuit file; writes the compiled circuit and a report next to `--out`.
    Compile {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a circuit file against an ideal controlled gate; exit 0 iff equivalent.
    Verify {
        input: PathBuf,
        /// Inline JSON or a path, e.g. {"gate":"x","controls":[0,1],"target":2}.
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compile a benchmark family over an inclusive width range such as `2..9`.
    Bench {
        algorithm: String,
        range: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn config(&self, file: Option<&PathBuf>) -> Result<config::CliConfig, CliError> {
        let flags = Partial {
            qpu_total: self.qpu,
            policy: self.policy,
            tolerance: self.tol,
            output_format: self.format,
        };
        let env = Partial::from_env(|k| std::env::var(k).ok())?;
        let file = file
            .map(|p| Partial::from_file(p))
            .transpose()?
            .unwrap_or_default();
        flags.over(env.over(file)).resolve()
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let file = cli.config.as_ref();
    match cli.cmd {
        Command::Compile { input, common } => {
            commands::compile(&input, &common.config(file)?, common.out.as_deref())
        }
        Command::Verify {
            input,
            ideal,
            common,
        } => commands::verify(&input, &ideal, &common.config(file)?),
        Command::Bench {
            algorithm,
            range,
            seed,
            common,
        } => commands::bench(
            &algorithm,
            &range,
            seed,
            &common.config(file)?,
            common.out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
