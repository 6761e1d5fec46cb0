//! CSV and JSON emitters. Floats are written in shortest round-trip form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scan::ScanGrid;
use crate::scenario::Format;

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `delta1,G` rows, or `delta1,delta2,G` in row-major order for 2-D grids.
pub fn scan_csv(grid: &ScanGrid) -> Result<String> {
    match &grid.axis2 {
        None => csv_text(
            &["delta1", "G"],
            grid.axis1
                .iter()
                .zip(&grid.values)
                .map(|(x, v)| vec![x.to_string(), v.to_string()]),
        ),
        Some(axis2) => {
            let rows = grid.axis1.iter().enumerate().flat_map(|(i, x)| {
                axis2
                    .iter()
                    .enumerate()
                    .map(move |(k, y)| vec![x.to_string(), y.to_string(), grid.at(i, k).to_string()])
            });
            csv_text(&["delta1", "delta2", "G"], rows)
        }
    }
}

pub fn render_scan(grid: &ScanGrid, format: Format) -> Result<String> {
    match format {
        Format::Csv => scan_csv(grid),
        Format::Json => json_text(grid),
    }
}

/// Generic table: CSV with the given header, or the serialized `json` value.
pub fn render_table<T: Serialize>(
    header: &[&str],
    rows: Vec<Vec<f64>>,
    json: &T,
    format: Format,
) -> Result<String> {
    match format {
        Format::Csv => csv_text(
            header,
            rows.into_iter()
                .map(|r| r.iter().map(f64::to_string).collect()),
        ),
        Format::Json => json_text(json),
    }
}

pub fn render_json<T: Serialize>(value: &T) -> Result<String> {
    json_text(value)
}
