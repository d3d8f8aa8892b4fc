//! `airylab`: command-line driver for the Airy–Strichartz laboratory.

mod artifact;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use artifact::OutDir;
use commands::*;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(strichartz_core::Error),
    Io(String),
}

impl From<strichartz_core::Error> for CliError {
    fn from(e: strichartz_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(strichartz_core::Error::Io(_)) | CliError::Io(_) => 74,
            CliError::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "airylab", version, about = "Numerical experiments on Airy-Strichartz extension functionals", arg_required_else_help = true)]
struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for JSON/CSV artifacts.
    #[arg(long, global = true, default_value = "airylab-out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The constant a_p by the Gamma formula and by quadrature.
    Constants(ConstantsFlags),
    /// Extension quotient of one profile.
    Quotient(QuotientFlags),
    /// Two- and single-bubble quotients against their limits.
    BubbleSweep(BubbleSweepFlags),
    /// Exhaustive dyadic checks in exact arithmetic.
    DyadicScan(DyadicScanFlags),
    /// Local-smoothing identity on a growing window.
    SmoothingCheck(SmoothingCheckFlags),
    /// Projected gradient ascent; optionally the threshold report.
    Maximize(MaximizeFlags),
    /// Every experiment at moderate size.
    ReportAll(ReportAllFlags),
}

fn run(cli: Cli) -> Result<String, CliError> {
    let out = OutDir(cli.out_dir);
    let file = cli.config.as_deref();
    match cli.command {
        Command::Constants(f) => constants(&config::resolve(file, Some("constants"), &f)?, &out),
        Command::Quotient(f) => quotient(&config::resolve(file, Some("quotient"), &f)?, &out),
        Command::BubbleSweep(f) => bubble(&config::resolve(file, Some("bubble_sweep"), &f)?, &out),
        Command::DyadicScan(f) => dyadic(&config::resolve(file, Some("dyadic_scan"), &f)?, &out),
        Command::SmoothingCheck(f) => smoothing(&config::resolve(file, Some("smoothing_check"), &f)?, &out),
        Command::Maximize(f) => maximize(&config::resolve(file, Some("maximize"), &f)?, &out),
        Command::ReportAll(f) => report_all(&config::resolve(file, None, &f)?, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(json) => {
            print!("{json}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("airylab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
