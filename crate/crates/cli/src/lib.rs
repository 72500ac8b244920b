//! Batch front end: one JSON problem descriptor in, one deterministic JSON
//! report out.

pub mod commands;
pub mod descriptor;

use serde::Serialize;
use serde_json::Value;

pub use descriptor::{parse_descriptor, Command, Options, ProblemDescriptor, StructureDescriptor};

/// Input or usage error; exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<poisson_forge::Error> for CliError {
    fn from(e: poisson_forge::Error) -> Self {
        CliError::input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(status: Status, payload: Value) -> Self {
        Report {
            status,
            payload,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_diagnostic(mut self, d: impl Into<String>) -> Self {
        self.diagnostics.push(d.into());
        self
    }

    /// 1 for a negative answer, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            _ => 0,
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Result of one invocation: what to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `input`, applies `overrides` on top of its options and runs it.
pub fn run_str(input: &str, overrides: &Options) -> Outcome {
    let result = parse_descriptor(input).and_then(|mut d| {
        d.options = d.options.overridden_by(overrides);
        commands::run(&d)
    });
    match result {
        Ok(report) => Outcome {
            stdout: report.to_json(),
            stderr: String::new(),
            code: report.exit_code(),
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}
