// SPDX-License-Identifier: MIT OR Apache-2.0

//! Result and statistics emission.

use serde::Serialize;

/// One fitted solution, whichever engine produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub segments: usize,
    pub objective: f64,
    pub residual: f64,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

/// Envelope-length statistics. `dump` goes to stderr and never into the JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct Stats {
    pub max_len_by_index: Vec<usize>,
    #[serde(rename = "R")]
    pub r: usize,
    pub bound_held: bool,
    pub index_bound_violations: Vec<usize>,
    #[serde(skip)]
    pub dump: String,
}

#[derive(Serialize)]
struct Document<'a> {
    mode: &'a str,
    segments: usize,
    objective: f64,
    residual: f64,
    indices: &'a [usize],
    values: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    fits: Option<&'a [Row]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<&'a Stats>,
}

fn join<T>(items: &[T], fmt: impl Fn(&T) -> String) -> String {
    items.iter().map(fmt).collect::<Vec<_>>().join(";")
}

/// `m,objective,i0;i1;...,y0;y1;...` with shortest round-trip floats.
pub fn csv_row(row: &Row) -> String {
    format!(
        "{},{:?},{},{}",
        row.segments,
        row.objective,
        join(&row.indices, usize::to_string),
        join(&row.values, f64::to_string)
    )
}

pub fn csv(rows: &[Row], stats: Option<&Stats>) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    if let Some(stats) = stats {
        for (i, len) in stats.max_len_by_index.iter().enumerate() {
            out.push_str(&format!("{i},{len}\n"));
        }
        out.push_str(&format!("R,{},bound_held,{}\n", stats.r, stats.bound_held));
    }
    out
}

/// `main` is the reported solution; `all` is set with `--emit-all-m`.
pub fn json(mode: &str, main: &Row, all: Option<&[Row]>, stats: Option<&Stats>) -> String {
    let doc = Document {
        mode,
        segments: main.segments,
        objective: main.objective,
        residual: main.residual,
        indices: &main.indices,
        values: &main.values,
        fits: all,
        stats,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}
