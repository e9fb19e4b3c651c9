//! CSV and JSON emission.
//!
//! CSV floats use the shortest representation that parses back exactly.
//! Non-finite values are never written; the row's status column says why a
//! field is empty.

use std::io::Write;

use serde::Serialize;

use crate::args::{Format, Output};
use crate::CliError;

/// `Some(x)` only for finite `x`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn render_csv<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn render_json<C: Serialize, R: Serialize, S: Serialize>(
    config: &C,
    rows: &[R],
    summary: &S,
) -> Result<Vec<u8>, CliError> {
    #[derive(Serialize)]
    struct Doc<'a, C, R, S> {
        config: &'a C,
        rows: &'a [R],
        summary: &'a S,
    }
    let mut out = serde_json::to_vec_pretty(&Doc {
        config,
        rows,
        summary,
    })
    .map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// Writes the table to `--output` or to `stdout`.
pub fn emit<C: Serialize, R: Serialize, S: Serialize>(
    out: &Output,
    config: &C,
    rows: &[R],
    summary: &S,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let bytes = match out.format {
        Format::Csv => render_csv(rows)?,
        Format::Json => render_json(config, rows, summary)?,
    };
    match &out.output {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(&bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}
