//! JSON documents and CSV tables.
//!
//! JSON floats use the shortest representation that round-trips (at most
//! 17 significant digits); CSV cells use the same rule via `Display`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `{params, results, residuals, provenance}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub params: Value,
    pub results: Value,
    pub residuals: Value,
}

impl Document {
    pub fn new(params: impl Serialize, results: Value, residuals: Value) -> Self {
        Document {
            params: to_value(params),
            results,
            residuals,
        }
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "params": self.params,
            "results": self.results,
            "residuals": self.residuals,
            "provenance": { "version": VERSION },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
        s.push('\n');
        s
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Rows with `# key: value` metadata lines in front of the header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            ..Table::default()
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# version: {VERSION}\n"));
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .flexible(true)
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(bytes).expect("utf-8 cells"));
        out
    }
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e16)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn complex(z: Complex64) -> String {
    let im = num(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", num(z.re))
}

/// Both renderings of a command result.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub document: Document,
    pub table: Table,
}

impl Rendered {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.document.to_json(),
            Format::Csv => self.table.to_csv(),
        }
    }
}
