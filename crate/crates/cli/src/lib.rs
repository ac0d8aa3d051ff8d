//! The `tame` command line. Every command builds one JSON report; text
//! output is rendered from that report.

pub mod args;
pub mod commands;
pub mod error;
pub mod text;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use args::{Cli, Format};
use error::{CliError, EXIT_OK, EXIT_VERIFICATION};

/// Version of the report layouts; schemas live in `schemas/v1/`.
pub const SCHEMA_VERSION: u32 = 1;

pub fn schema_id(command: &str) -> String {
    format!("tame/{command}/v{SCHEMA_VERSION}")
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).unwrap() + "\n",
        Format::Text => text::render(v),
    }
}

/// `--format` is looked up by hand so that usage errors honour it too.
fn requested_format<S: AsRef<str>>(argv: &[S]) -> Format {
    let mut it = argv.iter().map(|s| s.as_ref());
    while let Some(a) = it.next() {
        if a == "--format=text" || (a == "--format" && it.next() == Some("text")) {
            return Format::Text;
        }
    }
    Format::Json
}

pub fn run<S: AsRef<str>>(argv: &[S]) -> Output {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Output { code: EXIT_OK, stdout: e.to_string() };
        }
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::UnknownArgument => "unknown-argument",
                ErrorKind::MissingRequiredArgument => "missing-argument",
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => "unknown-command",
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => "invalid-value",
                _ => "usage-error",
            };
            let msg = e.render().to_string();
            let err = CliError::usage(code, msg.lines().next().unwrap_or("").trim_start_matches("error: "));
            return Output { code: err.exit, stdout: render(&err.to_json(), requested_format(argv)) };
        }
    };
    let name = cli.command.name();
    match commands::dispatch(&cli.command, &cli.run) {
        Ok(out) => {
            let mut report = out.report;
            report["schema"] = Value::String(schema_id(name));
            report["command"] = Value::String(name.into());
            let code = match &out.failure {
                Some(what) => {
                    report["failure"] = Value::String(what.clone());
                    EXIT_VERIFICATION
                }
                None => EXIT_OK,
            };
            Output { code, stdout: render(&report, cli.run.format) }
        }
        Err(e) => Output { code: e.exit, stdout: render(&e.to_json(), cli.run.format) },
    }
}
