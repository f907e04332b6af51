//! Exit codes, the stdout envelope and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use convex_rounder::io::SCHEMA_VERSION;
use convex_rounder::Error;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            kind: "input",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Budget { .. } => (EXIT_BUDGET, "budget"),
            Error::NonMonotone { .. } => (EXIT_RUNTIME, "non_monotone"),
            Error::Lp(_) => (EXIT_RUNTIME, "lp"),
            Error::Sampling(_) => (EXIT_RUNTIME, "sampling"),
            Error::Json(_) => (EXIT_INPUT, "json"),
            Error::DimensionMismatch { .. } => (EXIT_INPUT, "dimension"),
            Error::Unsupported(_) => (EXIT_INPUT, "unsupported"),
            _ => (EXIT_INPUT, "input"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// Result of a command that ran to completion.
pub struct Outcome {
    pub code: i32,
    pub fields: Map<String, Value>,
    pub artifacts: Vec<String>,
    pub summary: String,
}

impl Outcome {
    pub fn new(summary: impl Into<String>) -> Self {
        Self {
            code: EXIT_OK,
            fields: Map::new(),
            artifacts: Vec::new(),
            summary: summary.into(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }
}

pub fn envelope(command: &str, result: &Result<Outcome, Failure>) -> Value {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("command".into(), json!(command));
    match result {
        Ok(out) => {
            doc.insert("exit_code".into(), json!(out.code));
            doc.insert("artifacts".into(), json!(out.artifacts));
            for (k, v) in &out.fields {
                doc.insert(k.clone(), v.clone());
            }
        }
        Err(f) => {
            doc.insert("exit_code".into(), json!(f.code));
            doc.insert("artifacts".into(), json!([]));
            doc.insert("error".into(), json!({ "kind": f.kind, "message": f.message }));
        }
    }
    Value::Object(doc)
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| Failure {
        code: EXIT_RUNTIME,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}
