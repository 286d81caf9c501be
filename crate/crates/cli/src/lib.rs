//! Command-line front end for `fermatq`.
//!
//! Exit codes: 0 success, 2 not factored, 3 resource cap, 64 usage, 65 parse.

mod bench;
mod encode;
mod factor;
mod solve;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fermatq::BigUint;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FACTORED: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fermatq", version, about = "Fermat factoring and its QUBO reformulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor N with a Fermat search.
    Factor(factor::FactorArgs),
    /// Write N as a QUBO document.
    Encode(encode::EncodeArgs),
    /// Solve QUBO documents and recover factors.
    Solve(solve::SolveArgs),
    /// Compare iteration counts of all methods on random balanced semiprimes.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Exact,
    Sa,
}

/// Common output switches.
#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    /// Leave `wall_time_ms` out of the report so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

pub(crate) fn parse_n(s: &str) -> Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{s}` is not a non-negative decimal integer"));
    }
    s.parse().map_err(|e| format!("{e}"))
}

pub(crate) fn write_report(out: &mut dyn Write, report: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    writeln!(out, "{text}")?;
    Ok(())
}

pub(crate) fn elapsed_ms(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Factor(a) => factor::run(&a, stdout, stderr),
        Command::Encode(a) => encode::run(&a, stdout, stderr),
        Command::Solve(a) => solve::run(&a, stdout, stderr),
        Command::Bench(a) => bench::run(&a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}
