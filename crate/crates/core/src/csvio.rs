//! Plain CSV files: numeric data matrices, ground truth and assignments.
//!
//! A data file holds one object per row and one feature per column. A first
//! row with any non-numeric cell is taken as a header and skipped.

use std::io::{Read, Write};
use std::path::Path;

use crate::data::DataMatrix;
use crate::error::{Result, SpcError};
use crate::evaluation::LabeledPartition;

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn parse_row(record: &csv::StringRecord) -> Option<Vec<f64>> {
    record.iter().map(|c| c.parse::<f64>().ok()).collect()
}

/// Reads a numeric matrix, skipping an optional header row.
pub fn read_data<R: Read>(input: R) -> Result<DataMatrix> {
    let mut values = Vec::new();
    let mut width = None;
    let mut n = 0;
    for (line, record) in reader(input).records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let Some(row) = parse_row(&record) else {
            if line == 0 {
                continue;
            }
            let (col, cell) = record
                .iter()
                .enumerate()
                .find(|(_, c)| c.parse::<f64>().is_err())
                .expect("some cell failed to parse");
            return Err(SpcError::InvalidData(format!(
                "line {}, column {}: '{cell}' is not a number",
                line + 1,
                col + 1
            )));
        };
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(SpcError::InvalidData(format!(
                    "line {} has {} fields, expected {w}",
                    line + 1,
                    row.len()
                )))
            }
            Some(_) => {}
        }
        values.extend(row);
        n += 1;
    }
    let p = width.unwrap_or(0);
    DataMatrix::new(values, n, p)
}

pub fn read_data_file(path: &Path) -> Result<DataMatrix> {
    read_data(std::fs::File::open(path)?)
}

/// Writes a matrix with shortest round-trip decimal formatting, optionally
/// preceded by an `x1,…,xp` header.
pub fn write_data<W: Write>(output: W, data: &DataMatrix, header: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    if header {
        w.write_record((1..=data.p()).map(|m| format!("x{m}")))?;
    }
    for row in data.rows() {
        w.write_record(row.iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `index,label,is_noise` rows (a header is expected).
pub fn read_labels<R: Read>(input: R) -> Result<LabeledPartition> {
    let mut rows: Vec<(usize, Option<usize>)> = Vec::new();
    for (line, record) in reader(input).records().enumerate() {
        let record = record?;
        if line == 0 && record.get(0).is_some_and(|c| c.parse::<usize>().is_err()) {
            continue;
        }
        let bad = || SpcError::InvalidData(format!("line {}: expected index,label,is_noise", line + 1));
        if record.len() != 3 {
            return Err(bad());
        }
        let index: usize = record[0].parse().map_err(|_| bad())?;
        let noise = match &record[2] {
            "1" | "true" => true,
            "0" | "false" => false,
            _ => return Err(bad()),
        };
        let label = if noise {
            None
        } else {
            Some(record[1].parse::<usize>().map_err(|_| bad())?)
        };
        rows.push((index, label));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(SpcError::InvalidData(
            "object indices must run from 0 to n-1 without gaps".into(),
        ));
    }
    Ok(LabeledPartition::new(rows.into_iter().map(|r| r.1).collect()))
}

pub fn read_labels_file(path: &Path) -> Result<LabeledPartition> {
    read_labels(std::fs::File::open(path)?)
}

/// Writes `index,<label_name>,is_noise`. Noise rows get an empty label.
pub fn write_labels<W: Write>(output: W, labels: &LabeledPartition, label_name: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(["index", label_name, "is_noise"])?;
    for (i, l) in labels.labels().iter().enumerate() {
        let label = l.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([i.to_string(), label, u8::from(l.is_none()).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `index,cluster,is_noise` where `cluster` is the solution's own
/// cluster id and `is_noise` flags clusters at or below the cutoff.
pub fn write_assignment<W: Write>(output: W, assignment: &[usize], noise: &LabeledPartition) -> Result<()> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(["index", "cluster", "is_noise"])?;
    for (i, (c, l)) in assignment.iter().zip(noise.labels()).enumerate() {
        w.write_record([i.to_string(), c.to_string(), u8::from(l.is_none()).to_string()])?;
    }
    w.flush()?;
    Ok(())
}
