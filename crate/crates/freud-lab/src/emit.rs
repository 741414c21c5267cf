//! Table emission: one run produces one table, rendered as CSV or JSON.
//!
//! Every numeric cell is a decimal string produced at working precision;
//! nothing is squeezed through f64 on the way out. Unset cells are empty in
//! CSV and null in JSON. Output carries no timestamps or machine identifiers,
//! so re-running a config byte-reproduces the file.

use std::fs;
use std::io::{self, Write};

use serde_json::{Map, Value};

pub struct Table {
    /// Config echo and run facts, in insertion order (JSON only; CSV is
    /// a bare header-plus-rows payload).
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<String>>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for ch in s.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
        out
    } else {
        s.to_owned()
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            columns: columns.iter().map(|s| (*s).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_owned(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<Option<String>>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| c.as_deref().map(csv_cell).unwrap_or_default())
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Some(s) => Value::String(s.clone()),
                        None => Value::Null,
                    };
                    obj.insert(col.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".to_owned(), Value::Object(meta));
        top.insert("rows".to_owned(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top))
            .expect("json rendering cannot fail on string/null values");
        s.push('\n');
        s
    }
}

/// Write to the path, or to stdout when the path is "-".
pub fn write_out(path: &str, content: &str) -> io::Result<()> {
    if path == "-" {
        io::stdout().write_all(content.as_bytes())
    } else {
        fs::write(path, content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_only_when_needed() {
        let mut t = Table::new(&["a", "b"]);
        t.row(vec![Some("plain".into()), Some("with, comma".into())]);
        t.row(vec![None, Some("quote \" inside".into())]);
        let s = t.render(Format::Csv);
        assert_eq!(
            s,
            "a,b\nplain,\"with, comma\"\n,\"quote \"\" inside\"\n"
        );
    }

    #[test]
    fn json_nulls_and_meta() {
        let mut t = Table::new(&["v"]);
        t.meta("command", "demo");
        t.row(vec![None]);
        let s = t.render(Format::Json);
        assert!(s.contains("\"command\": \"demo\""));
        assert!(s.contains("\"v\": null"));
        assert!(s.ends_with('\n'));
    }
}
