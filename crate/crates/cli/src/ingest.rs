// SPDX-License-Identifier: MIT OR Apache-2.0

//! Reading signals from CSV files.

use std::io::Read;
use std::path::Path;

use segfit::{Signal, SignalKind};

use crate::CliError;

/// Reads `path` as a signal of the given kind.
///
/// Discrete files hold one value per line. Continuous files hold `t,g` rows,
/// optionally preceded by a header row.
pub fn ingest(path: &Path, kind: SignalKind) -> Result<Signal, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Ingest(format!("cannot open {}: {e}", path.display())))?;
    parse(file, kind)
}

pub fn parse<R: Read>(reader: R, kind: SignalKind) -> Result<Signal, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let width = match kind {
        SignalKind::Discrete => 1,
        SignalKind::Continuous => 2,
    };

    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::Ingest(e.to_string()))?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line());
        if record.len() != width {
            return Err(CliError::Ingest(format!(
                "line {line}: expected {width} field(s), found {}",
                record.len()
            )));
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let fields = match parsed {
            Ok(fields) => fields,
            // A non-numeric first row of a two-column file is a header.
            Err(_) if row == 0 && kind == SignalKind::Continuous => continue,
            Err(e) => return Err(CliError::Ingest(format!("line {line}: {e}"))),
        };
        if let Some(bad) = fields.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Ingest(format!("line {line}: non-finite value {bad}")));
        }
        if kind == SignalKind::Continuous {
            if let Some(&prev) = grid.last() {
                if fields[0] <= prev {
                    return Err(CliError::Ingest(format!(
                        "line {line}: non-increasing grid, t = {} after {prev}",
                        fields[0]
                    )));
                }
            }
            grid.push(fields[0]);
        }
        values.push(fields[width - 1]);
    }

    if values.len() < 2 {
        return Err(CliError::Ingest(format!("need at least 2 rows, found {}", values.len())));
    }
    let signal = match kind {
        SignalKind::Discrete => Signal::discrete(values),
        SignalKind::Continuous => Signal::continuous(grid, values),
    };
    signal.map_err(|e| CliError::Ingest(e.to_string()))
}
