use std::fs;
use std::path::Path;

use super::{Column, PipelineError};
use crate::points::DataPoint;

/// Shortest decimal text that round-trips the value after rounding to nine
/// significant digits. Very large or small magnitudes use exponent form.
pub fn format_number(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let rounded: f64 = format!("{value:.8e}").parse().unwrap_or(value);
    let magnitude = rounded.abs();
    if (1e-5..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn csv_bytes(points: &[DataPoint], columns: &[Column]) -> Vec<u8> {
    let mut out = String::new();
    let header: Vec<&str> = columns.iter().map(Column::name).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for p in points {
        let row: Vec<String> = columns
            .iter()
            .map(|c| {
                format_number(match c {
                    Column::X => p.x,
                    Column::Y => p.y,
                    Column::DeviceRadius => p.device_radius,
                })
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Writes `x,y,device_radius` rows, one per point, LF-terminated.
pub fn write_csv(points: &[DataPoint], destination: &Path) -> Result<(), PipelineError> {
    write_csv_columns(points, &Column::ALL, destination)
}

pub fn write_csv_columns(points: &[DataPoint], columns: &[Column], destination: &Path) -> Result<(), PipelineError> {
    fs::write(destination, csv_bytes(points, columns)).map_err(|e| PipelineError::io(destination, e))
}

/// Reads a numeric CSV with a header row into rows of the named columns.
pub(crate) fn read_numeric_csv(path: &Path, wanted: &[&str]) -> Result<Vec<Vec<f64>>, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    parse_numeric_csv(&text, wanted).map_err(|message| PipelineError::BadCsv {
        path: path.display().to_string(),
        message,
    })
}

pub(crate) fn parse_numeric_csv(text: &str, wanted: &[&str]) -> Result<Vec<Vec<f64>>, String> {
    let mut reader = ::csv::ReaderBuilder::new()
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    let idx: Vec<usize> = wanted
        .iter()
        .map(|w| header.iter().position(|h| h == *w).ok_or(format!("missing column `{w}`")))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        let row = idx
            .iter()
            .map(|&i| {
                record
                    .get(i)
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or(format!("line {line}: bad value"))
            })
            .collect::<Result<Vec<f64>, String>>()?;
        rows.push(row);
    }
    Ok(rows)
}
