//! `qprops`: analyze Boolean functions given as truth tables, sweep whole
//! function classes and drive the limited-precision quantum toolkit.
//!
//! Exit codes: 0 on success, 1 on malformed input, 2 when a request exceeds
//! a size guard or search budget, 3 when an `enumerate --check` suite finds
//! a violation.

mod analyze;
mod enumerate;
mod quantum;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use analyze::Prop;
use enumerate::Check;

#[derive(Parser)]
#[command(
    name = "qprops",
    version,
    about = "Boolean function complexity toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute properties of one function, or of every table in `@file`
    Analyze {
        /// Binary or `0x` hex truth table, or `@path` to a file with one per line
        table: String,
        /// Properties to compute
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "d,c,deg,s,bs,quasisym,tree"
        )]
        props: Vec<Prop>,
        /// Write JSONL records here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep all functions of `n` variables, or a random sample
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "d,c,deg,s,bs")]
        props: Vec<Prop>,
        /// Property suites to assert on every function
        #[arg(long, value_delimiter = ',')]
        check: Vec<Check>,
        /// Analyze this many random functions instead of all of them
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for `--sample`
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write JSONL records here; the summary then goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limited-precision unitary tools
    Quantum {
        #[command(subcommand)]
        command: quantum::QuantumCommand,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Guard(String),
    Violation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Guard(_) => 2,
            CliError::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guard(m) | CliError::Violation(m) => m,
        }
    }
}

impl From<qprops::Error> for CliError {
    fn from(e: qprops::Error) -> Self {
        use qprops::Error as E;
        match e {
            E::TooLarge { .. } | E::TooManyVariables(_) | E::BudgetExceeded { .. } => {
                CliError::Guard(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses a truth table, naming the token on failure.
pub fn parse_table(token: &str) -> CliResult<qprops::TruthTable> {
    qprops::parse_truth_table(token)
        .map_err(|e| CliError::Input(format!("cannot parse truth table {token:?}: {e}")))
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Stdout, or a freshly created file.
pub fn open_output(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Input(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// One JSON value on its own line.
pub fn write_json_line<T: Serialize>(w: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *w, value).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

pub fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = io::stdout().lock();
    write_json_line(&mut out, value)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze { table, props, out } => analyze::run(&table, &props, out.as_deref()),
        Command::Enumerate {
            n,
            props,
            check,
            sample,
            seed,
            out,
        } => enumerate::run(&enumerate::Request {
            n,
            props,
            checks: check,
            sample,
            seed,
            out,
        }),
        Command::Quantum { command } => quantum::run(command),
    }
}

fn parse_args() -> CliResult<Cli> {
    use clap::error::ErrorKind;
    Cli::try_parse().map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => e.exit(),
        _ => CliError::Input(e.render().to_string().trim().to_string()),
    })
}

fn main() -> ExitCode {
    match parse_args().and_then(run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({ "error": e.message(), "exit_code": e.code() });
            eprintln!("{report}");
            ExitCode::from(e.code())
        }
    }
}
