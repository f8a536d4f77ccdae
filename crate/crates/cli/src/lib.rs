//! The `ffr` command-line tool.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 computation error,
//! 3 verification failure.

use std::sync::atomic::AtomicBool;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod config;
pub mod formats;
pub mod verify;

pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),
    #[error("cannot parse input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Compute(#[from] ffr_core::Error),
    #[error("interrupted; completed rows were written")]
    Interrupted,
    #[error("{0} verification suite(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse(_) => 1,
            CliError::Io(_) | CliError::Compute(_) | CliError::Interrupted => 2,
            CliError::VerifyFailed(_) => 3,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. `interrupt` is polled between work items.
pub fn run(argv: Vec<String>, interrupt: &AtomicBool) -> i32 {
    match run_inner(argv, interrupt) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_inner(argv: Vec<String>, interrupt: &AtomicBool) -> Result<(), CliError> {
    let argv = config::merge_config_file(argv)?;
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Config(vec![e.to_string().trim_end().to_string()])),
    };
    let cfg = RunConfig::from_cli(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| commands::execute(&cfg, interrupt))
}
