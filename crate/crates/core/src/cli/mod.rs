//! Command-line driver.

mod args;
mod commands;
mod svg;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

pub use args::{Cli, Command, Format};

use crate::error::Error;

/// Version tag of every JSON document the driver emits.
pub const SCHEMA: &str = "einstein-lab/1";

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a library error: 2 for bad input or points outside the domain, 3 otherwise.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::OutsideDomain(_)
        | Error::DegenerateLocus(_)
        | Error::DegenerateNormalization(_)
        | Error::InvalidParams(_)
        | Error::UnsupportedFamily(_)
        | Error::PreconditionViolated(_)
        | Error::NotSimpleRoot(_)
        | Error::NotDoubleRoot(_)
        | Error::ZeroPolynomial => 2,
        _ => 3,
    }
}

fn error_line(kind: &str, message: &str) -> String {
    let mut s = json!({ "schema": SCHEMA, "error": kind, "message": message }).to_string();
    s.push('\n');
    s
}

fn failure(code: i32, kind: &str, message: &str) -> CliOutcome {
    CliOutcome { exit_code: code, stdout: String::new(), stderr: error_line(kind, message) }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return CliOutcome { exit_code: 0, stdout: e.to_string(), stderr: String::new() }
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            return failure(2, "Usage", first);
        }
    };
    let (reply, out) = match commands::dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => return failure(exit_code_for(&e), e.kind(), &e.to_string()),
    };
    match out {
        Some(path) => match std::fs::write(&path, &reply.text) {
            Ok(()) => CliOutcome { exit_code: reply.code, stdout: String::new(), stderr: String::new() },
            Err(e) => failure(3, "Io", &format!("cannot write {path}: {e}")),
        },
        None => CliOutcome { exit_code: reply.code, stdout: reply.text, stderr: String::new() },
    }
}
