//! Machine-readable output records: CSV (default) and line-delimited
//! JSON. Field order is fixed at construction time, so identical inputs
//! serialize identically across runs.

use serde_json::{Map, Number, Value as Json};
use std::fmt;

/// A single output value. Floats render through Rust's shortest
/// round-trip formatting in both CSV and JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    UInt(u64),
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::UInt(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Str(v) => write!(f, "{v}"),
        }
    }
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::UInt(v) => Json::Number(Number::from(*v)),
            Value::Int(v) => Json::Number(Number::from(*v)),
            Value::Float(v) => Number::from_f64(*v)
                .map(Json::Number)
                .unwrap_or_else(|| Json::String(v.to_string())),
            Value::Bool(v) => Json::Bool(*v),
            Value::Str(v) => Json::String(v.clone()),
        }
    }
}

/// One row of command output: the command name, its resolved parameters,
/// its results, and the seed when the command is randomized.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Vec<(String, Value)>,
    pub results: Vec<(String, Value)>,
    pub seed: Option<u64>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        OutputRecord {
            command: command.to_string(),
            parameters: Vec::new(),
            results: Vec::new(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: Value) -> Self {
        self.parameters.push((key.to_string(), value));
        self
    }

    pub fn result(mut self, key: &str, value: Value) -> Self {
        self.results.push((key.to_string(), value));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// CSV header line for this record's shape.
    pub fn csv_header(&self) -> String {
        let mut cols = vec!["command".to_string()];
        cols.extend(self.parameters.iter().map(|(k, _)| k.clone()));
        cols.extend(self.results.iter().map(|(k, _)| k.clone()));
        if self.seed.is_some() {
            cols.push("seed".to_string());
        }
        cols.join(",")
    }

    /// CSV value line; '.' decimal separator, no locale dependence.
    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.command.clone()];
        cols.extend(self.parameters.iter().map(|(_, v)| v.to_string()));
        cols.extend(self.results.iter().map(|(_, v)| v.to_string()));
        if let Some(seed) = self.seed {
            cols.push(seed.to_string());
        }
        cols.join(",")
    }

    /// One JSON object per record, insertion-ordered keys.
    pub fn json_line(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), Json::String(self.command.clone()));
        let mut params = Map::new();
        for (k, v) in &self.parameters {
            params.insert(k.clone(), v.to_json());
        }
        obj.insert("parameters".into(), Json::Object(params));
        let mut results = Map::new();
        for (k, v) in &self.results {
            results.insert(k.clone(), v.to_json());
        }
        obj.insert("results".into(), Json::Object(results));
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), Json::Number(Number::from(seed)));
        }
        Json::Object(obj).to_string()
    }
}

/// Output encoding selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes a stream of records: one CSV header (taken from the first
/// record) followed by rows, or one JSON object per line.
pub fn write_records<W: std::io::Write>(
    out: &mut W,
    format: Format,
    records: &[OutputRecord],
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            if let Some(first) = records.first() {
                writeln!(out, "{}", first.csv_header())?;
            }
            for r in records {
                writeln!(out, "{}", r.csv_row())?;
            }
        }
        Format::Json => {
            for r in records {
                writeln!(out, "{}", r.json_line())?;
            }
        }
    }
    Ok(())
}
