use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

use hyperid::numerics::Precision;

mod commands;
mod params;

use params::ParamArgs;

/// Evaluate and verify hypergeometric identities with integral parameter differences.
#[derive(Parser, Debug)]
#[command(name = "hyperid", version)]
struct Cli {
    /// Working precision in decimal digits (at least 16).
    #[arg(long, global = true, env = "HYPERID_PRECISION", default_value_t = 50)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate both sides of one identity.
    Eval {
        identity: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run randomized verification suites.
    Verify {
        /// Comma-separated identity names, cross-check pairs (`gasper->karlsson`), `cross`, or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cases per suite, overriding the defaults.
        #[arg(long)]
        count: Option<usize>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Karlsson's formula at an isolated summability point.
    Counterexample {
        /// Same as `--output json`.
        #[arg(long)]
        json: bool,
    },
    /// Tabulate an identity over a range of one parameter.
    Table {
        identity: String,
        /// Parameter to vary: a, b, c, d, x, z or k.
        #[arg(long)]
        vary: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    let prec = Precision::new(cli.precision)?;
    match cli.command {
        Command::Eval { identity, params } => commands::eval(&identity, &params, prec, cli.output),
        Command::Verify { suite, seed, count, out } => {
            commands::verify(&suite, seed, count, out.as_deref(), prec, cli.output)
        }
        Command::Counterexample { json } => {
            let output = if json { Output::Json } else { cli.output };
            commands::counterexample(prec, output)
        }
        Command::Table { identity, vary, from, to, steps, format, params } => {
            commands::table(&identity, &vary, &from, &to, steps, format, params, prec)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
