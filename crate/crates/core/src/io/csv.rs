//! Plain CSV: one matrix row per line, comma separated, no header.

use std::io::Write;

use super::format_f64;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

pub fn parse_csv(input: &str) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record
            .position()
            .map_or(rows.len() + 1, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|field| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::parse(line, format!("bad value {field:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows)
}

pub fn write_csv<W: Write>(m: &DenseMatrix, mut out: W) -> Result<()> {
    for i in 0..m.rows() {
        let line: Vec<String> = (0..m.cols()).map(|j| format_f64(m.get(i, j))).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
