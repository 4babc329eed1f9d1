//! Tables, CSV/JSON writers and the run manifest.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use cardspline::format::sci;
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => sci(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    /// Floats become shortest round-trip decimal strings, which parse back
    /// to the identical double.
    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(format!("{v:e}")),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Everything a command produces: the table, a command-specific summary and
/// the tolerances it actually reached.
pub struct Artifact {
    pub command: &'static str,
    pub alpha: f64,
    pub k: Value,
    pub tol: f64,
    pub table: Table,
    pub summary: Map<String, Value>,
    pub achieved: Map<String, Value>,
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("manifest.json")
    } else {
        out.with_extension("json")
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl Artifact {
    fn document(&self, files: &[PathBuf], wall_ms: f64) -> Value {
        let mut data = self.summary.clone();
        if let Value::Object(t) = self.table.to_json() {
            data.extend(t);
        }
        let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
        json!({
            "params": { "alpha": self.alpha, "k": self.k },
            "tol": self.tol,
            "data": data,
            "manifest": {
                "version": env!("CARGO_PKG_VERSION"),
                "command": self.command,
                "wall_ms": wall_ms,
                "files": files,
                "achieved": self.achieved,
            },
        })
    }

    /// CSV goes to `out` with a JSON sidecar next to it, or to stdout when no
    /// path is given; `json` writes the single document instead.
    pub fn emit(&self, out: Option<&Path>, format: Format, wall_ms: f64) -> Result<(), CliError> {
        match (format, out) {
            (Format::Csv, Some(path)) => {
                write_file(path, &self.table.to_csv())?;
                let doc = self.document(&[path.to_path_buf()], wall_ms);
                write_file(&sidecar_path(path), &pretty(&doc))
            }
            (Format::Csv, None) => write_stdout(&self.table.to_csv()),
            (Format::Json, Some(path)) => write_file(path, &pretty(&self.document(&[path.to_path_buf()], wall_ms))),
            (Format::Json, None) => write_stdout(&pretty(&self.document(&[], wall_ms))),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write_stdout(s: &str) -> Result<(), CliError> {
    let mut lock = io::stdout().lock();
    lock.write_all(s.as_bytes())
        .and_then(|_| lock.flush())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}
