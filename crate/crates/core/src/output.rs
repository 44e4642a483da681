//! Serialized command output: JSON records and CSV tables.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Provenance label for a fitted (least-squares) value.
pub const FIT: &str = "fit";

/// A named-result record. Every result has an error estimate and a
/// provenance label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, f64>,
    pub err_ests: BTreeMap<String, f64>,
    pub provenance: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            err_ests: BTreeMap::new(),
            provenance: BTreeMap::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: f64, err_est: f64, provenance: &str) -> &mut Self {
        self.results.insert(key.into(), value);
        self.err_ests.insert(key.into(), err_est);
        self.provenance.insert(key.into(), provenance.into());
        self
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.notes.insert(key.into(), value.into());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// One row per result: `name,value,err_est,provenance`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["name", "value", "err_est", "provenance"]).map_err(io)?;
        for (k, v) in &self.results {
            let row = [
                k.clone(),
                fmt_num(*v),
                fmt_num(self.err_ests[k]),
                self.provenance[k].clone(),
            ];
            w.write_record(&row).map_err(io)?;
        }
        finish(w)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
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
        Cell::Text(v.into())
    }
}

/// Rows of a tabular command, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Self { command: command.into(), inputs: BTreeMap::new(), columns, rows: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        finish(w)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let doc = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Shortest round-trip text for `v`; exponent form outside `[1e-4, 1e15)`.
pub fn fmt_num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_keys_align() {
        let mut r = OutputRecord::new("x");
        r.result("a", 1.5, 0.0, "closed_form").input("tol", 1e-10);
        let json: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(json["schema_version"], "1");
        assert_eq!(json["results"]["a"], 1.5);
        assert_eq!(json["err_ests"]["a"], 0.0);
        assert_eq!(json["provenance"]["a"], "closed_form");
        assert_eq!(r.to_csv().unwrap(), "name,value,err_est,provenance\na,1.5,0,closed_form\n");
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.5e-13), "1.5e-13");
        assert_eq!(fmt_num(-2.5e20), "-2.5e20");
        assert_eq!(fmt_num(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn table_formats() {
        let mut t = Table::new("scan", vec!["alpha", "F"]);
        t.push(vec![Cell::Num(0.5), Cell::Num(0.25)]);
        assert_eq!(t.to_csv().unwrap(), "alpha,F\n0.5,0.25\n");
        let json: Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(json["rows"][0]["F"], 0.25);
    }
}
