//! File formats: Matrix Market, CSV, and JSON spectrum files.

mod csv;
pub mod matrix_market;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dense::{DenseMatrix, SingularSpectrum};
use crate::error::Result;
use crate::SCHEMA_VERSION;

pub use self::csv::{parse_csv, write_csv};
pub use matrix_market::{
    parse_matrix_market, parse_matrix_market_with_limit, write_matrix_market,
    write_matrix_market_coordinate,
};

/// Shortest round-tripping decimal; exponent form outside `[1e-4, 1e15)`.
pub(crate) fn format_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Csv,
}

impl MatrixFormat {
    /// `.csv` selects CSV; anything else is Matrix Market.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => MatrixFormat::Csv,
            _ => MatrixFormat::MatrixMarket,
        }
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    match MatrixFormat::from_path(path) {
        MatrixFormat::Csv => parse_csv(&text),
        MatrixFormat::MatrixMarket => parse_matrix_market(&text),
    }
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    match MatrixFormat::from_path(path) {
        MatrixFormat::Csv => write_csv(m, &mut buf)?,
        MatrixFormat::MatrixMarket => write_matrix_market(m, &mut buf)?,
    }
    fs::write(path, buf)?;
    Ok(())
}

/// On-disk JSON form of a [`SingularSpectrum`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub schema_version: u32,
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

impl From<&SingularSpectrum> for SpectrumFile {
    fn from(s: &SingularSpectrum) -> Self {
        let (rows, cols) = s.source_dims();
        SpectrumFile {
            schema_version: SCHEMA_VERSION,
            rows,
            cols,
            values: s.values().to_vec(),
        }
    }
}

pub fn spectrum_to_json(s: &SingularSpectrum) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SpectrumFile::from(s))?)
}

/// Parses and validates a spectrum file.
pub fn parse_spectrum_json(text: &str) -> Result<SingularSpectrum> {
    let file: SpectrumFile = serde_json::from_str(text)?;
    SingularSpectrum::new(file.values, (file.rows, file.cols))
}
