//! Tabular artifact writer with CSV and JSON backends.
//!
//! CSV floats are printed with 17 significant digits so every finite f64
//! round-trips bit for bit through the file. JSON output mirrors the table
//! as an array of objects keyed by the column headers; non-finite floats
//! map to null because JSON has no representation for them.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::Result;

use super::config::OutputFormat;

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => {
                debug_assert!(
                    !s.contains(',') && !s.contains('\n'),
                    "text cells must not need CSV quoting: {s:?}"
                );
                s.clone()
            }
        }
    }

    fn to_json_value(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A rectangular table with named columns.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (h, c) in self.headers.iter().zip(row) {
                    obj.insert(h.clone(), c.to_json_value());
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    /// Writes the table as `<stem>.csv` or `<stem>.json` under `dir`.
    pub fn write(&self, dir: &Path, stem: &str, format: OutputFormat) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let (name, content) = match format {
            OutputFormat::Csv => (format!("{stem}.csv"), self.to_csv()),
            OutputFormat::Json => (format!("{stem}.json"), format!("{:#}\n", self.to_json())),
        };
        let path = dir.join(name);
        fs::write(&path, content)?;
        Ok(path)
    }
}
