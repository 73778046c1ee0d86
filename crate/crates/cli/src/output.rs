//! Tables and their CSV, JSON and aligned-text renderings.

use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

/// Shortest decimal that round-trips the value rounded to 12 significant
/// digits; exponent form outside `[1e-5, 1e15)`.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs();
    if rounded == 0.0 {
        "0".to_owned()
    } else if (1e-5..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A rendered command result: metadata plus one table.
#[derive(Debug, Clone)]
pub struct Report {
    pub meta: Map<String, Value>,
    pub table: Table,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn meta_line(key: &str, value: &Value) -> String {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => format_float(f),
            _ => n.to_string(),
        },
        other => other.to_string(),
    };
    format!("# {key}: {text}")
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Csv => render_csv(&report.table),
        Format::Json => render_json(report),
        Format::Pretty => render_pretty(report),
    }
}

fn render_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|c| csv_field(&c.text())).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn render_json(report: &Report) -> String {
    let data: Vec<Value> = report
        .table
        .rows
        .iter()
        .map(|row| {
            let object: Map<String, Value> = report
                .table
                .columns
                .iter()
                .zip(row)
                .map(|(k, c)| ((*k).to_owned(), c.json()))
                .collect();
            Value::Object(object)
        })
        .collect();
    let mut top = Map::new();
    top.insert("meta".into(), Value::Object(report.meta.clone()));
    top.insert("data".into(), Value::Array(data));
    let mut text =
        serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
    text.push('\n');
    text
}

fn render_pretty(report: &Report) -> String {
    let mut out = String::new();
    for (k, v) in &report.meta {
        if let Value::Object(inner) = v {
            for (ik, iv) in inner {
                out.push_str(&meta_line(&format!("{k}.{ik}"), iv));
                out.push('\n');
            }
        } else {
            out.push_str(&meta_line(k, v));
            out.push('\n');
        }
    }
    let table = &report.table;
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(Cell::text).collect())
        .collect();
    let widths: Vec<usize> = table
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields
            .iter()
            .zip(&widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_owned() + "\n"
    };
    out.push_str(&line(table.columns.clone()));
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
