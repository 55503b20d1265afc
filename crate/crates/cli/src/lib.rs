//! Batch front end for the longevity valuation toolkit.
//!
//! Every subcommand writes either `key=value` lines or a CSV table to
//! standard output, never both. Exit codes:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 1    | usage error or flag outside its domain    |
//! | 2    | input data failed validation              |
//! | 3    | singular formula or numerical breakdown   |

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub use args::Cli;
pub use output::Output;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] longevity_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use longevity_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Core(E::Domain(_)) => 1,
            CliError::Core(E::Data(_)) | CliError::Io { .. } => 2,
            CliError::Core(E::Singular(_) | E::Convergence(_) | E::Numeric(_)) => 3,
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes its
/// output. Diagnostics go to `stderr`. Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result =
        commands::dispatch(&cli.command, cli.csv, stderr).and_then(|out| emit(&cli, &out, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = out.render();
    match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
