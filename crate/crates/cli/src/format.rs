//! Emitters for the three output formats.
//!
//! Every document carries the same core: the prime, an object descriptor,
//! the excess policy, ranks by degree, labels by degree, and the certified
//! and truncated flags. Subcommands may attach extra JSON sections and a
//! table; CSV prints the table when there is one and the rank rows
//! otherwise.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use slk_core::GradedDims;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Right-aligned numeric columns, left-aligned text, two spaces apart.
    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let numeric: Vec<bool> = (0..self.headers.len())
            .map(|i| self.rows.iter().all(|r| r[i].parse::<i64>().is_ok()) && !self.rows.is_empty())
            .collect();
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if numeric[i] {
                        format!("{c:>w$}", w = widths[i])
                    } else {
                        format!("{c:<w$}", w = widths[i])
                    }
                })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.headers);
        for row in &self.rows {
            line(row);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub prime: u32,
    pub object: String,
    pub policy: String,
    pub dims: GradedDims,
    pub extra: Map<String, Value>,
    pub table: Option<Table>,
}

impl Document {
    pub fn new(prime: u32, object: String, policy: String, dims: GradedDims) -> Self {
        Document { prime, object, policy, dims, extra: Map::new(), table: None }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("prime".into(), json!(self.prime));
        doc.insert("object".into(), json!(self.object));
        doc.insert("policy".into(), json!(self.policy));
        doc.insert("dims".into(), dims_json(&self.dims));
        let labels: Map<String, Value> =
            self.dims.labels.iter().map(|(d, l)| (d.to_string(), json!(l))).collect();
        doc.insert("labels".into(), Value::Object(labels));
        doc.insert("certified".into(), json!(self.dims.certified));
        doc.insert("truncated".into(), json!(self.dims.truncated));
        for (k, v) in &self.extra {
            doc.insert(k.clone(), v.clone());
        }
        Value::Object(doc)
    }

    fn rank_rows(&self) -> Vec<(i64, usize, String)> {
        let mut rows = Vec::new();
        for (&d, &r) in &self.dims.dims {
            match self.dims.labels.get(&d) {
                Some(ls) if !ls.is_empty() => rows.extend(ls.iter().map(|l| (d, r, l.clone()))),
                _ => rows.push((d, r, String::new())),
            }
        }
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let flags = [self.dims.certified.to_string(), self.dims.truncated.to_string()];
        let fixed = [self.prime.to_string(), self.object.clone(), self.policy.clone()];
        let record = |w: &mut csv::Writer<Vec<u8>>, cells: Vec<String>| {
            w.write_record(&cells).expect("writing to memory");
        };
        match &self.table {
            Some(t) => {
                let mut head: Vec<String> = ["prime", "object", "policy"].map(String::from).to_vec();
                head.extend(t.headers.iter().cloned());
                record(&mut w, head);
                for row in &t.rows {
                    let mut cells = fixed.to_vec();
                    cells.extend(row.iter().cloned());
                    record(&mut w, cells);
                }
            }
            None => {
                let head = ["prime", "object", "policy", "certified", "truncated", "degree", "rank", "label"];
                record(&mut w, head.map(String::from).to_vec());
                for (d, r, l) in self.rank_rows() {
                    let mut cells = fixed.to_vec();
                    cells.extend(flags.iter().cloned());
                    cells.extend([d.to_string(), r.to_string(), l]);
                    record(&mut w, cells);
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut head = Table::new(&["field", "value"]);
        for (k, v) in [
            ("object", self.object.clone()),
            ("prime", self.prime.to_string()),
            ("policy", self.policy.clone()),
            ("certified", self.dims.certified.to_string()),
            ("truncated", self.dims.truncated.to_string()),
            ("total", self.dims.total().to_string()),
        ] {
            head.push(vec![k.to_string(), v]);
        }
        for line in head.render().lines().skip(1) {
            let _ = writeln!(out, "{line}");
        }
        out.push('\n');
        let mut ranks = Table::new(&["degree", "rank", "label"]);
        for (d, r, l) in self.rank_rows() {
            ranks.push(vec![d.to_string(), r.to_string(), l]);
        }
        out.push_str(&ranks.render());
        if let Some(t) = &self.table {
            out.push('\n');
            out.push_str(&t.render());
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }
}

/// `{degree: rank}` with degrees as string keys in ascending numeric order.
pub fn dims_json(d: &GradedDims) -> Value {
    Value::Object(d.dims.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}
