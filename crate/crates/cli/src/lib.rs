//! Command-line front end: coefficient sources, molecule files, report
//! rendering and the subcommands.

pub mod args;
pub mod commands;
pub mod molecules;
pub mod output;

use std::io::Write;

use thiserror::Error;

use crate::args::{Cli, Command, OutputArgs};
use crate::molecules::MoleculeError;
use crate::output::render;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Usage {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Library(#[from] pseudoharmonic::Error),
    #[error("molecule file: {0}")]
    Molecule(#[from] MoleculeError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Run a parsed command and write its report. Returns whether every check
/// in the report passed.
pub fn execute(cli: &Cli) -> Result<bool, CliError> {
    let (outcome, output) = match &cli.command {
        Command::Spectrum(a) => (commands::spectrum(a)?, &a.output),
        Command::Wavefunction(a) => (commands::wavefunction(a)?, &a.output),
        Command::Ladder(a) => (commands::ladder(a)?, &a.output),
        Command::Verify(a) => (commands::verify(a)?, &a.output),
        Command::OracleCompare(a) => (commands::oracle_compare(a)?, &a.output),
    };
    write_report(&render(&outcome.report, output.format), output)?;
    Ok(outcome.passed)
}

fn write_report(text: &str, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}
