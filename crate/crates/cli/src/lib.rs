//! Command-line front end: argument parsing, JSON documents, a result cache
//! and the parameter sweep driver.

pub mod cache;
pub mod commands;
pub mod config;
pub mod input;
pub mod sweep;

pub use commands::{run, Cli, Outcome, Status};

use clap::Parser;
use std::ffi::OsString;

#[derive(Debug)]
pub enum CliError {
    Core(pgk_core::Error),
    Usage(String),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Json(e) => write!(f, "json: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pgk_core::Error> for CliError {
    fn from(e: pgk_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(pgk_core::Error::InsufficientPrecision(_)) => EXIT_PRECISION,
            _ => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(pgk_core::Error::InsufficientPrecision(_)) => "insufficient_precision",
            CliError::Core(_) => "invalid_input",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        }
    }
}

/// Parse, run and print; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_DECIDED };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli).and_then(|o| emit(&cli, &o).map(|_| o)) {
        Ok(o) => match o.status {
            Status::Decided => EXIT_DECIDED,
            Status::Undecided => EXIT_UNDECIDED,
        },
        Err(e) => {
            let doc = serde_json::json!({ "schema": "pgk.error/1", "error": e.kind(), "message": e.to_string() });
            eprintln!("{doc}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, o: &Outcome) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            std::io::Write::write_all(&mut tmp, o.body.as_bytes())?;
            tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        }
        None => print!("{}", o.body),
    }
    Ok(())
}
