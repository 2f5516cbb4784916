mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

/// Failure of a subcommand, mapped onto the process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent flags (exit 2).
    Usage(String),
    /// Requested truncation box exceeds the resource cap (exit 3).
    TooLarge(String),
    /// Lemma check found violations; output was still written (exit 1).
    Violations(u64),
    /// I/O failure while reading input or writing output (exit 1).
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::TooLarge(_) => 3,
            CliError::Violations(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::TooLarge(m) | CliError::Io(m) => f.write_str(m),
            CliError::Violations(v) => write!(f, "{v} lemma violation(s)"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Halton(a) => commands::halton(a),
        Command::Diaphony(a) => commands::diaphony(a),
        Command::Bound(a) => commands::bound(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::VerifyLemma(a) => commands::verify_lemma(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
