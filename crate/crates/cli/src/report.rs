//! Rendering of reports as JSON, CSV or markdown tables.

use serde::Serialize;

use crate::args::Format;

/// A titled table used for the CSV and markdown renderings.
#[derive(Debug, Clone)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Self { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&self.headers);
        for r in &self.rows {
            out.push_str(&csv_line(r));
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = format!("### {}\n\n| {} |\n|{}\n", self.title, self.headers.join(" | "), "---|".repeat(self.headers.len()));
        for r in &self.rows {
            out.push_str(&format!("| {} |\n", r.join(" | ").replace('\n', " ")));
        }
        out
    }
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    format!("{}\n", quoted.join(","))
}

/// A serializable report with a tabular view.
pub struct Rendered {
    pub json: serde_json::Value,
    pub tables: Vec<Table>,
}

impl Rendered {
    pub fn new<T: Serialize>(value: &T, tables: Vec<Table>) -> Self {
        Self { json: serde_json::to_value(value).expect("reports serialize to JSON"), tables }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.tables.iter().map(Table::csv).collect::<Vec<_>>().join("\n"),
            Format::Markdown => self.tables.iter().map(Table::markdown).collect::<Vec<_>>().join("\n"),
        }
    }
}

/// Shortest round-trip form of a float, in scientific notation for very
/// small or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
