//! The JSON report and the errors that end a run before one exists.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cext_core::{CheckRecord, Error};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{EXIT_CAPACITY, EXIT_CHECK_FAILED, EXIT_USAGE};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
    /// A core error attributed to an input file.
    Input(PathBuf, Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Input(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Capacity(_)) | CliError::Input(_, Error::Capacity(_)) => EXIT_CAPACITY,
            CliError::Core(Error::Numerical(_)) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Reads an input file and records its digest.
pub fn read_input(role: &str, path: &Path) -> Result<(String, InputDigest), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let digest = InputDigest {
        role: role.into(),
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    let text = String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{}: not UTF-8 text", path.display())))?;
    Ok((text, digest))
}

/// Everything a run produces except wall-clock time, which only the terminal
/// summary prints.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<CheckRecord>,
    pub result: Value,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: Value, inputs: Vec<InputDigest>, checks: Vec<CheckRecord>, result: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            tool: "cext".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            inputs,
            checks,
            result,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::Io(path.to_path_buf(), e))
    }

    pub fn summary(&self) -> String {
        let mut out = format!("cext {}\n", self.command);
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                if let Some(line) = headline(v) {
                    let _ = writeln!(out, "  {k}: {line}");
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {}: residual {:.3e}, tolerance {:.3e}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance
            );
        }
        let _ = writeln!(out, "verdict: {}", if self.pass { "pass" } else { "FAIL" });
        out
    }
}

/// Short values only; tables and long lists stay in the JSON.
fn headline(v: &Value) -> Option<String> {
    match v {
        Value::Number(_) | Value::Bool(_) => Some(v.to_string()),
        Value::String(s) if s.len() <= 80 => Some(s.clone()),
        Value::Object(m) if m.values().all(|x| x.is_number()) && m.len() <= 6 => Some(v.to_string()),
        _ => None,
    }
}
