//! Tabular results rendered as text, CSV or JSON.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Format;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Structured payload for JSON output.
    pub data: Value,
    pub passed: bool,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Report {
        Report {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            data: Value::Null,
            passed: true,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(|c| json!(c))).collect()))
                    .collect();
                let out = json!({ "title": self.title, "passed": self.passed, "rows": rows, "data": self.data });
                serde_json::to_string_pretty(&out).expect("json values serialize")
            }
            Format::Csv => {
                let mut out = String::new();
                for line in std::iter::once(&self.columns).chain(&self.rows) {
                    let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Text => {
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|j| self.rows.iter().map(|r| r[j].chars().count()).chain([self.columns[j].chars().count()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{:<w$}", c, w = *w)).collect();
                    padded.join("  ").trim_end().to_string()
                };
                let mut out = format!("{}\n{}\n", self.title, line(&self.columns));
                for r in &self.rows {
                    out.push_str(&line(r));
                    out.push('\n');
                }
                out.push_str(if self.passed { "status: pass\n" } else { "status: FAIL\n" });
                out
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let mut r = Report::new("t", &["a", "b"]);
        r.row(vec!["1,2".into(), "x".into()]);
        assert_eq!(r.render(Format::Csv), "a,b\n\"1,2\",x\n");
    }

    #[test]
    fn json_rows_are_keyed_by_column() {
        let mut r = Report::new("t", &["degree", "rank"]);
        r.row(vec!["0".into(), "2".into()]);
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["rank"], "2");
    }
}
