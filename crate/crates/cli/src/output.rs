//! CSV and JSON-lines emission of result tables.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "json-lines", alias = "json")]
    JsonLines,
}

/// One cell of a table.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Empty, Value::Num)
    }
}

fn number_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Num(x) => number_text(*x),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Empty => String::new(),
        Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::Text(s) => s.clone(),
    }
}

fn json_cell(v: &Value) -> serde_json::Value {
    match v {
        Value::Num(x) if x.is_finite() => serde_json::json!(x),
        Value::Num(x) => serde_json::Value::String(number_text(*x)),
        Value::Int(i) => serde_json::json!(i),
        Value::Bool(b) => serde_json::json!(b),
        Value::Text(s) => serde_json::json!(s),
        Value::Empty => serde_json::Value::Null,
    }
}

/// Rows sharing a header.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format, out: &mut String) {
        match format {
            Format::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::JsonLines => {
                for row in &self.rows {
                    let mut line = String::from("{");
                    for (i, (k, v)) in self.columns.iter().zip(row).enumerate() {
                        if i > 0 {
                            line.push(',');
                        }
                        let _ = write!(line, "{}:{}", serde_json::json!(k), json_cell(v));
                    }
                    line.push('}');
                    out.push_str(&line);
                    out.push('\n');
                }
            }
        }
    }
}

/// Renders tables in order; CSV tables are separated by a blank line.
pub fn render(tables: &[Table], format: Format) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 && format == Format::Csv {
            out.push('\n');
        }
        t.render(format, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_rendering() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![1.5.into(), "x,y".into(), f64::INFINITY.into()]);
        assert_eq!(render(&[t.clone()], Format::Csv), "a,b,c\n1.5,\"x,y\",inf\n");
        assert_eq!(render(&[t], Format::JsonLines), "{\"a\":1.5,\"b\":\"x,y\",\"c\":\"inf\"}\n");
    }
}
