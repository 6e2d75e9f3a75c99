//! Command-line front end for `ocijac-core`: configuration files, subspace
//! files, subcommand dispatch and the JSON envelope.
//!
//! Exit codes: 0 success, 1 a checked claim failed, 2 usage or parse error,
//! 3 the smoothness diagnostic failed.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod subspace;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use ocijac_core::{FieldSpec, PrimeField, Rationals};
use serde_json::{json, Value};

use crate::cli::{Cli, Command};
use crate::commands::{execute, execute_numeric, Outcome};
use crate::config::ConfigFile;
use crate::error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SMOOTHNESS: i32 = 3;

/// Outcome plus the envelope fields that depend on the configuration.
fn dispatch(cmd: &Command) -> Result<(Outcome, Value, Value), CliError> {
    let Some(arg) = cmd.config() else {
        return Ok((execute_numeric(cmd)?, Value::Null, Value::Null));
    };
    let file = ConfigFile::read(&arg.config)?;
    let (outcome, digest) = match file.field {
        FieldSpec::Rationals => execute(cmd, &file, Rationals)?,
        FieldSpec::PrimeField(p) => execute(cmd, &file, PrimeField::new(p)?)?,
    };
    Ok((outcome, json!(digest), json!(file.field.to_string())))
}

/// Exit code of a command that ran to completion.
pub fn exit_code(outcome: &Outcome) -> i32 {
    if outcome.singular {
        EXIT_SMOOTHNESS
    } else if outcome.failed {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

/// Byte-stable JSON document for one command.
pub fn envelope(command: &str, digest: Value, field: Value, result: Value) -> String {
    let doc = json!({"command": command, "config_digest": digest, "field": field, "result": result});
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    let cmd = &cli.command;
    match dispatch(cmd) {
        Ok((outcome, digest, field)) => {
            let code = exit_code(&outcome);
            let body = if cmd.json() { envelope(cmd.name(), digest, field, outcome.result) } else { outcome.text };
            let _ = out.write_all(body.as_bytes());
            if code == EXIT_SMOOTHNESS {
                let _ = writeln!(err, "error: smoothness diagnostic failed");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_outcome_flags() {
        let base = Outcome { result: Value::Null, text: String::new(), failed: false, singular: false };
        assert_eq!(exit_code(&base), EXIT_OK);
        assert_eq!(exit_code(&Outcome { failed: true, ..base.clone() }), EXIT_FAILED);
        assert_eq!(exit_code(&Outcome { failed: true, singular: true, ..base }), EXIT_SMOOTHNESS);
    }

    #[test]
    fn envelope_keys_are_sorted() {
        let s = envelope("sigma", Value::Null, Value::Null, json!({"b": 1, "a": 2}));
        let keys: Vec<usize> = ["command", "config_digest", "field", "result"].iter().map(|k| s.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
