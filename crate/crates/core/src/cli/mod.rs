//! Command-line front end.
//!
//! Every command builds a JSON report; the text output is rendered from that
//! JSON. Exit status: 0 when every check passes, 1 when a check fails or a
//! computation breaks down, 2 for usage and configuration errors.

pub mod commands;
pub mod config;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::Error;
use config::{ModelArgs, OutputArgs, RecoverArgs, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "jordan-wishart",
    version,
    about = "Jordan algebras, the Psi operator and Wishart regression checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions, Psi spectrum and Gyndikin set of one algebra.
    Info(ModelArgs),
    /// Randomized identity suite and case table.
    CheckIdentities(ModelArgs),
    /// Monte Carlo and differential regression identities.
    Verify(ModelArgs),
    /// Recover (d, r) and the algebra kind from regression constants.
    Recover(RecoverArgs),
    /// Numeric and closed-form eigenspace dimensions for the standard algebras.
    DimsTable(OutputArgs),
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::StructuralFailure(_)
        | Error::Classification(_)
        | Error::Domain(_)
        | Error::InconsistentConstants(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(pass) => {
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> crate::Result<bool> {
    match command {
        Command::Info(args) => {
            let cfg = RunConfig::from_model_args("info", args)?;
            let report = commands::info(&cfg.build_algebra()?)?;
            emit(&cfg, &report, report.pass, stdout)
        }
        Command::CheckIdentities(args) => {
            let cfg = RunConfig::from_model_args("check-identities", args)?;
            let report = commands::check_identities(&cfg.build_algebra()?, cfg.seed)?;
            emit(&cfg, &report, report.pass, stdout)
        }
        Command::Verify(args) => {
            let cfg = RunConfig::from_model_args("verify", args)?;
            let report = commands::verify(&cfg)?;
            emit(&cfg, &report, report.pass, stdout)
        }
        Command::Recover(args) => {
            let cfg = RunConfig::from_recover_args(args)?;
            let report = commands::recover(&cfg)?;
            emit(&cfg, &report, report.pass, stdout)
        }
        Command::DimsTable(output) => {
            let cfg = RunConfig::from_output_args("dims-table", output)?;
            let report = commands::dims_table()?;
            emit(&cfg, &report, report.pass, stdout)
        }
    }
}

fn emit<R: Serialize>(
    cfg: &RunConfig,
    report: &R,
    pass: bool,
    stdout: &mut dyn Write,
) -> crate::Result<bool> {
    let value = serde_json::to_value(report).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let json = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?
        + "\n";
    if let Some(path) = &cfg.out {
        std::fs::write(path, &json).map_err(|e| {
            Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    let text = if cfg.json {
        json
    } else {
        render::render(&value)
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::InvalidParameter(format!("cannot write output: {e}")))?;
    Ok(pass)
}
