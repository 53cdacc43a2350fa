use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A rectangular table of JSON scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect(),
        )
    }
}

/// Finite floats become JSON numbers; the rest become the strings `inf`,
/// `-inf` and `NaN`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(
        || {
            Value::String(if x.is_nan() {
                "NaN".into()
            } else if x > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            })
        },
        Value::Number,
    )
}

/// Exact values (big integers, rationals) travel as strings.
pub fn exact(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub version: String,
    pub seed: u64,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub notes: Map<String, Value>,
    pub timestamp: String,
}

impl Meta {
    pub fn new(command: &str, seed: u64, parameters: Map<String, Value>) -> Self {
        Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            command: command.to_string(),
            parameters,
            notes: Map::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub table: Table,
}

impl Report {
    pub fn to_json(&self) -> String {
        let m = &self.meta;
        let doc = json!({
            "meta": {
                "version": m.version,
                "seed": m.seed,
                "command": m.command,
                "parameters": m.parameters,
                "notes": m.notes,
                "timestamp": m.timestamp,
                "columns": self.table.columns,
            },
            "rows": self.table.rows_json(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let bad = |what: &str| CliError::Usage(format!("report JSON: {what}"));
        let doc: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let meta = doc.get("meta").and_then(Value::as_object).ok_or_else(|| bad("missing meta"))?;
        let columns: Vec<String> = meta
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing meta.columns"))?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| bad("column names must be strings")))
            .collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for row in doc.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing rows"))? {
            let obj = row.as_object().ok_or_else(|| bad("rows must be objects"))?;
            if obj.len() != columns.len() {
                return Err(bad("row width differs from the header"));
            }
            rows.push(
                columns
                    .iter()
                    .map(|c| obj.get(c).cloned().ok_or_else(|| bad("row is missing a column")))
                    .collect::<Result<_, _>>()?,
            );
        }
        let text_field = |k: &str| meta.get(k).and_then(Value::as_str).unwrap_or_default().to_string();
        let map_field = |k: &str| meta.get(k).and_then(Value::as_object).cloned().unwrap_or_default();
        Ok(Report {
            meta: Meta {
                version: text_field("version"),
                seed: meta.get("seed").and_then(Value::as_u64).ok_or_else(|| bad("missing seed"))?,
                command: text_field("command"),
                parameters: map_field("parameters"),
                notes: map_field("notes"),
                timestamp: text_field("timestamp"),
            },
            table: Table { columns, rows },
        })
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.table.columns).map_err(io_err)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(csv_field)).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("fields are UTF-8"))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

/// Writes the report; an empty table is an error unless `allow_empty`.
pub fn emit_report(report: &Report, format: Format, sink: &Sink, allow_empty: bool) -> Result<(), CliError> {
    if report.table.is_empty() && !allow_empty {
        return Err(CliError::EmptyReport);
    }
    let text = report.render(format)?;
    match sink {
        Sink::Stdout => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
        Sink::File(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
    }
}
