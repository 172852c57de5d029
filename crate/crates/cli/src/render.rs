use serde_json::{json, Map, Value};

use crate::Format;

pub enum Cell {
    Int(usize),
    /// Exact integer or rational, kept as a string in every format.
    Exact(String),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => float(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Exact(s) | Cell::Text(s) => json!(s),
            Cell::Float(x) => json!(x),
            Cell::Bool(b) => json!(b),
        }
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|c| csv_field(&c.plain())).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// Left-aligned columns separated by two spaces; the last column is not padded.
    pub fn text(&self) -> String {
        let cells: Vec<Vec<String>> = std::iter::once(self.columns.clone())
            .chain(self.rows.iter().map(|r| r.iter().map(Cell::plain).collect()))
            .collect();
        let last = self.columns.len().saturating_sub(1);
        let widths: Vec<usize> =
            (0..self.columns.len()).map(|k| cells.iter().map(|r| r[k].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(k, c)| if k == last { c.clone() } else { format!("{c:<w$}", w = widths[k]) })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    /// `meta` fields followed by `"rows"` in JSON; just the table otherwise.
    pub fn render(&self, format: Format, meta: Map<String, Value>) -> String {
        match format {
            Format::Json => {
                let mut obj = meta;
                obj.insert("rows".into(), self.json_rows());
                pretty(&Value::Object(obj))
            }
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }
}

pub fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Shortest round-trip form, switching to exponent notation for tiny or huge magnitudes.
pub fn float(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| float(x)).collect::<Vec<_>>().join(", ")
}
