//! Matrix Market reader and writer for dense real matrices.
//!
//! Both `array` and `coordinate` formats are read, with `real`, `double` or
//! `integer` fields and `general`, `symmetric` or `skew-symmetric` symmetry.
//! Coordinate duplicates are summed. Output uses the shortest decimal form
//! that parses back to the same `f64`.

use std::io::Write;

use super::format_f64;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Largest `rows * cols` accepted by [`parse_matrix_market`].
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

pub fn parse_matrix_market(input: &str) -> Result<DenseMatrix> {
    parse_matrix_market_with_limit(input, DEFAULT_MAX_ENTRIES)
}

/// Like [`parse_matrix_market`] but rejects matrices with more than
/// `max_entries` dense entries before allocating.
pub fn parse_matrix_market_with_limit(input: &str, max_entries: usize) -> Result<DenseMatrix> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let (layout, symmetry) = parse_header(header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line_no, size_line) = body
        .next()
        .ok_or_else(|| Error::parse(1, "missing size line"))?;
    let sizes: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(size_line_no, format!("bad size token {t:?}")))
        })
        .collect::<Result<_>>()?;
    let expected_fields = match layout {
        Layout::Array => 2,
        Layout::Coordinate => 3,
    };
    if sizes.len() != expected_fields {
        return Err(Error::parse(
            size_line_no,
            format!(
                "expected {expected_fields} size fields, found {}",
                sizes.len()
            ),
        ));
    }
    let (rows, cols) = (sizes[0], sizes[1]);
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidDimensions { rows, cols });
    }
    let total = rows
        .checked_mul(cols)
        .filter(|&n| n <= max_entries)
        .ok_or_else(|| Error::parse(size_line_no, format!("{rows}x{cols} exceeds entry limit")))?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(Error::parse(
            size_line_no,
            "symmetric storage requires a square matrix",
        ));
    }

    let mut data = vec![0.0; total];
    let mut tokens = body.flat_map(|(n, l)| l.split_whitespace().map(move |t| (n, t)));
    let mut last_line = size_line_no;

    match layout {
        Layout::Array => {
            let positions: Box<dyn Iterator<Item = (usize, usize)>> = match symmetry {
                Symmetry::General => {
                    Box::new((0..cols).flat_map(|j| (0..rows).map(move |i| (i, j))))
                }
                Symmetry::Symmetric => {
                    Box::new((0..cols).flat_map(|j| (j..rows).map(move |i| (i, j))))
                }
                Symmetry::SkewSymmetric => {
                    Box::new((0..cols).flat_map(|j| (j + 1..rows).map(move |i| (i, j))))
                }
            };
            for (i, j) in positions {
                let (n, tok) = tokens
                    .next()
                    .ok_or_else(|| Error::parse(last_line, "too few array entries"))?;
                last_line = n;
                let v = parse_value(n, tok)?;
                store(&mut data, rows, symmetry, i, j, v, false);
            }
        }
        Layout::Coordinate => {
            let nnz = sizes[2];
            for _ in 0..nnz {
                let (n, ti) = tokens
                    .next()
                    .ok_or_else(|| Error::parse(last_line, "too few coordinate entries"))?;
                last_line = n;
                let i = parse_index(n, ti, rows)?;
                let j = match tokens.next() {
                    Some((n2, tj)) if n2 == n => parse_index(n, tj, cols)?,
                    _ => {
                        return Err(Error::parse(
                            n,
                            "coordinate entry needs row, column and value",
                        ))
                    }
                };
                let v = match tokens.next() {
                    Some((n3, tv)) if n3 == n => parse_value(n, tv)?,
                    _ => {
                        return Err(Error::parse(
                            n,
                            "coordinate entry needs row, column and value",
                        ))
                    }
                };
                if symmetry == Symmetry::SkewSymmetric && i == j {
                    return Err(Error::parse(n, "skew-symmetric matrix with diagonal entry"));
                }
                store(&mut data, rows, symmetry, i, j, v, true);
            }
        }
    }
    if let Some((n, _)) = tokens.next() {
        return Err(Error::parse(n, "trailing data after last entry"));
    }
    DenseMatrix::from_col_major(rows, cols, data)
}

fn parse_header(line: &str) -> Result<(Layout, Symmetry)> {
    let fields: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::parse(
            1,
            "expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
        ));
    }
    let layout = match fields[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(Error::parse(1, format!("unsupported format {other:?}"))),
    };
    match fields[3].as_str() {
        "real" | "double" | "integer" => {}
        other => return Err(Error::parse(1, format!("unsupported field {other:?}"))),
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(Error::parse(1, format!("unsupported symmetry {other:?}"))),
    };
    Ok((layout, symmetry))
}

fn parse_value(line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("bad value {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

fn parse_index(line: usize, tok: &str, bound: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(k) if (1..=bound).contains(&k) => Ok(k - 1),
        _ => Err(Error::parse(
            line,
            format!("index {tok:?} outside 1..={bound}"),
        )),
    }
}

fn store(
    data: &mut [f64],
    rows: usize,
    symmetry: Symmetry,
    i: usize,
    j: usize,
    v: f64,
    accumulate: bool,
) {
    let mut put = |r: usize, c: usize, x: f64| {
        let slot = &mut data[r + c * rows];
        if accumulate {
            *slot += x;
        } else {
            *slot = x;
        }
    };
    put(i, j, v);
    if i != j {
        match symmetry {
            Symmetry::General => {}
            Symmetry::Symmetric => put(j, i, v),
            Symmetry::SkewSymmetric => put(j, i, -v),
        }
    }
}

/// Writes `m` in `array real general` format.
pub fn write_matrix_market<W: Write>(m: &DenseMatrix, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix array real general")?;
    writeln!(out, "{} {}", m.rows(), m.cols())?;
    for &v in m.as_slice() {
        writeln!(out, "{}", format_f64(v))?;
    }
    Ok(())
}

/// Writes the nonzero entries of `m` in `coordinate real general` format.
pub fn write_matrix_market_coordinate<W: Write>(m: &DenseMatrix, mut out: W) -> Result<()> {
    let nnz = m.as_slice().iter().filter(|&&v| v != 0.0).count();
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", m.rows(), m.cols(), nnz)?;
    for j in 0..m.cols() {
        for (i, &v) in m.col(j).iter().enumerate() {
            if v != 0.0 {
                writeln!(out, "{} {} {}", i + 1, j + 1, format_f64(v))?;
            }
        }
    }
    Ok(())
}
