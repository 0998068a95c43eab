use klt::quad::QuadResult;
use num_complex::Complex64;
use serde_json::{Map, Value};
use std::io::Write;

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(v) => Value::String(v.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Result columns that follow the input columns of every row.
pub const RESULT_COLUMNS: [&str; 5] = ["value_re", "value_im", "err_abs", "evals", "converged"];

/// Output rows plus job metadata.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    meta: Map<String, Value>,
    all_converged: bool,
    failed: bool,
    checks: bool,
}

impl Table {
    pub fn new(command: &str, inputs: &[&str], tol: f64) -> Self {
        let mut columns: Vec<String> = inputs.iter().map(|s| s.to_string()).collect();
        columns.extend(RESULT_COLUMNS.iter().map(|s| s.to_string()));
        let mut meta = Map::new();
        meta.insert("command".into(), Value::from(command));
        meta.insert("tol".into(), Cell::Num(tol).json());
        meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        Table { columns, rows: Vec::new(), meta, all_converged: true, failed: false, checks: false }
    }

    pub fn meta(&mut self, key: &str, value: Value) {
        self.meta.insert(key.into(), value);
    }

    pub fn push(&mut self, inputs: Vec<Cell>, r: &QuadResult) {
        self.push_parts(inputs, r.value, r.err_abs, r.evals, r.converged);
    }

    pub fn push_parts(&mut self, mut inputs: Vec<Cell>, value: Complex64, err_abs: f64, evals: usize, converged: bool) {
        debug_assert_eq!(inputs.len() + RESULT_COLUMNS.len(), self.columns.len());
        inputs.extend([Cell::Num(value.re), Cell::Num(value.im), Cell::Num(err_abs), Cell::Int(evals), Cell::Bool(converged)]);
        self.all_converged &= converged;
        self.rows.push(inputs);
    }

    pub fn all_converged(&self) -> bool {
        self.all_converged
    }

    /// Record a failed check.
    pub fn mark_failed(&mut self) {
        self.failed = true;
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    /// Marks a table of identity checks, whose status follows the check
    /// limits rather than the per-row convergence flags.
    pub fn set_checks(&mut self) {
        self.checks = true;
    }

    pub fn is_checks(&self) -> bool {
        self.checks
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(|e| CliError::Io(e.to_string()))?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(|e| CliError::Io(e.to_string()))?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect()))
                    .collect();
                let mut doc = Map::new();
                doc.insert("rows".into(), Value::Array(rows));
                doc.insert("meta".into(), Value::Object(self.meta.clone()));
                let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    pub fn write(&self, path: &str, format: Format) -> Result<(), CliError> {
        let bytes = self.render(format)?;
        if path == "-" {
            std::io::stdout().write_all(&bytes).map_err(|e| CliError::Io(e.to_string()))
        } else {
            std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{path}: {e}")))
        }
    }
}
