//! Trace files: comma-separated, header
//! `t,true_x,true_y,est_x,est_y[,cand1_x,cand1_y,...]`, one fix per line.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::location::Location2D;
use crate::sim::{Trace, TraceEntry};

const BASE_COLUMNS: [&str; 5] = ["t", "true_x", "true_y", "est_x", "est_y"];

fn row_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::TraceRow {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Number of candidate points announced by the header.
fn candidate_columns(path: &Path, header: &csv::StringRecord) -> Result<usize> {
    let names: Vec<&str> = header.iter().collect();
    if names.len() < BASE_COLUMNS.len() || names[..BASE_COLUMNS.len()] != BASE_COLUMNS {
        return Err(row_error(
            path,
            1,
            format!("header must start with {}", BASE_COLUMNS.join(",")),
        ));
    }
    let extra = &names[BASE_COLUMNS.len()..];
    if !extra.len().is_multiple_of(2) {
        return Err(row_error(
            path,
            1,
            "candidate columns must come in x,y pairs",
        ));
    }
    for (i, pair) in extra.chunks(2).enumerate() {
        let want = [format!("cand{}_x", i + 1), format!("cand{}_y", i + 1)];
        if pair[0] != want[0] || pair[1] != want[1] {
            return Err(row_error(
                path,
                1,
                format!(
                    "expected {},{} but found {},{}",
                    want[0], want[1], pair[0], pair[1]
                ),
            ));
        }
    }
    Ok(extra.len() / 2)
}

pub fn ingest_trace(path: &Path) -> Result<Trace> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader.headers()?.clone();
    let cand_count = candidate_columns(path, &header)?;
    let width = header.len();

    let mut trace = Trace::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            row_error(path, line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != width {
            return Err(row_error(
                path,
                line,
                format!("expected {width} fields, found {}", row.len()),
            ));
        }
        let mut values = Vec::with_capacity(width);
        for (field, name) in row.iter().zip(header.iter()) {
            let v: f64 = field.parse().map_err(|_| {
                row_error(
                    path,
                    line,
                    format!("column {name}: {field:?} is not a number"),
                )
            })?;
            if !v.is_finite() {
                return Err(row_error(
                    path,
                    line,
                    format!("column {name}: {field:?} is not finite"),
                ));
            }
            values.push(v);
        }
        let candidates = (0..cand_count)
            .map(|i| Location2D::new(values[5 + 2 * i], values[6 + 2 * i]))
            .collect();
        trace.push(TraceEntry {
            timestamp: values[0],
            truth: Location2D::new(values[1], values[2]),
            estimate: Location2D::new(values[3], values[4]),
            candidates,
        });
    }
    Ok(trace)
}

pub fn write_trace(path: &Path, trace: &[TraceEntry]) -> Result<()> {
    let cand_count = trace.first().map_or(0, |e| e.candidates.len());
    if let Some(e) = trace.iter().find(|e| e.candidates.len() != cand_count) {
        return Err(Error::Config(format!(
            "trace mixes candidate counts ({cand_count} and {}) at t={}",
            e.candidates.len(),
            e.timestamp
        )));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    let mut header = BASE_COLUMNS.join(",");
    for i in 1..=cand_count {
        header.push_str(&format!(",cand{i}_x,cand{i}_y"));
    }
    writeln!(out, "{header}").map_err(io)?;
    for e in trace {
        write!(
            out,
            "{},{},{},{},{}",
            e.timestamp, e.truth.x, e.truth.y, e.estimate.x, e.estimate.y
        )
        .map_err(io)?;
        for c in &e.candidates {
            write!(out, ",{},{}", c.x, c.y).map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    out.flush().map_err(io)
}
