//! Report envelopes, provenance labels, CSV tables and the error channel.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use autosieve::constants::CalibratedConstant;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Validation(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Validation(_) => "validation",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Validation(m) => m,
        }
    }

    /// The single-line JSON written to stderr.
    pub fn to_json(&self) -> String {
        json!({
            "schema_version": SCHEMA_VERSION,
            "error": {"kind": self.kind(), "message": self.message()},
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

/// Bad or insufficient input is a usage error; a violated invariant or a
/// failed numerical check is a validation error.
impl From<autosieve::Error> for Failure {
    fn from(e: autosieve::Error) -> Self {
        use autosieve::Error as E;
        match e {
            E::Parse(_)
            | E::Unsupported(_)
            | E::MissingSatake(_)
            | E::MissingSplitting(_)
            | E::InvalidPartition(_)
            | E::InvalidIdeal(_)
            | E::InvalidField(_)
            | E::Character(_)
            | E::Ramified(_)
            | E::NotSquarefree(_)
            | E::Pole => Failure::Usage(e.to_string()),
            E::InvalidRep(_)
            | E::NotPositiveSemidefinite(_)
            | E::ImaginaryResidue { .. }
            | E::PowerSum(_)
            | E::Hypothesis(_)
            | E::Scan(_) => Failure::Validation(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Failure::Io(e.to_string())
        } else {
            Failure::Usage(format!("CSV: {e}"))
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Clone, Copy, Debug)]
pub enum Label {
    Measured,
    Envelope,
}

impl Label {
    fn as_str(self) -> &'static str {
        match self {
            Label::Measured => "measured",
            Label::Envelope => "envelope",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut buf = format!("# schema_version: {SCHEMA_VERSION}\n").into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.header)?;
            for r in &self.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        fs::write(path, buf)?;
        Ok(())
    }
}

/// A float as `serde_json` prints it, for CSV cells.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| "null".into())
}

fn has_number(v: &Value) -> bool {
    match v {
        Value::Number(_) => true,
        Value::Array(a) => a.iter().any(has_number),
        Value::Object(o) => o.values().any(has_number),
        _ => false,
    }
}

fn is_constant(v: &Value) -> bool {
    matches!(v, Value::Object(o) if o.len() == 3 && o.contains_key("name") && o.contains_key("role"))
}

pub struct Report {
    command: &'static str,
    config: Value,
    constants: Vec<CalibratedConstant>,
    results: Map<String, Value>,
    violations: Vec<String>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Report {
            command,
            config,
            constants: Vec::new(),
            results: Map::new(),
            violations: Vec::new(),
            table: None,
        }
    }

    fn put(&mut self, key: &str, value: Value, label: Label) {
        let v = if has_number(&value) {
            json!({"provenance": label.as_str(), "value": value})
        } else {
            value
        };
        self.results.insert(key.to_string(), v);
    }

    pub fn measured(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.put(key, to_value(value), Label::Measured);
        self
    }

    pub fn envelope(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.put(key, to_value(value), Label::Envelope);
        self
    }

    pub fn constant(&mut self, c: CalibratedConstant) -> &mut Self {
        if !self.constants.iter().any(|d| d.name == c.name) {
            self.constants.push(c);
        }
        self
    }

    /// Copies the fields of a library report, labelling each one and
    /// moving embedded calibrated constants to the constants list.
    pub fn absorb(&mut self, report: impl Serialize, envelope: &[&str], skip: &[&str]) -> &mut Self {
        let Value::Object(fields) = to_value(report) else {
            return self;
        };
        for (k, v) in fields {
            if skip.contains(&k.as_str()) {
                continue;
            }
            if is_constant(&v) {
                if let Some(c) = autosieve::constants::ALL.iter().find(|c| v["name"] == c.name) {
                    self.constant(*c);
                    self.results.insert(k, Value::String(c.name.into()));
                    continue;
                }
            }
            let label = if envelope.contains(&k.as_str()) { Label::Envelope } else { Label::Measured };
            self.put(&k, v, label);
        }
        self
    }

    pub fn violation(&mut self, message: impl Into<String>) -> &mut Self {
        self.violations.push(message.into());
        self
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn to_json(&self) -> String {
        let constants: Vec<Value> = self
            .constants
            .iter()
            .map(|c| json!({"name": c.name, "value": c.value, "role": c.role, "provenance": "calibrated-constant"}))
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "build": {
                "version": env!("CARGO_PKG_VERSION"),
                "git_describe": env!("AUTOSIEVE_GIT_DESCRIBE"),
            },
            "config": self.config,
            "constants": constants,
            "results": self.results,
            "violations": self.violations,
            "status": if self.violations.is_empty() { "ok" } else { "validation_failed" },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
