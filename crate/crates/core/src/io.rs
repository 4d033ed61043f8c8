//! CSV import and export.
//!
//! Weight tables: two columns `n,phi`, header required, indices contiguous
//! from zero. Matrices: header `dim=k` followed by `k` rows of `k` entries,
//! row-major. Orbit exports: `n,ratio,norm` rows for plotting.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::matrix::DenseOperator;
use crate::scalar::{RealScalar, Scalar};
use crate::weights::Weight;

/// Reads a weight table from `n,phi` CSV.
pub fn read_weight_csv<S: RealScalar, R: BufRead>(reader: R) -> Result<Weight<S>> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header row".into()))??;
    if header.split(',').count() != 2 {
        return Err(Error::Parse(format!("expected two header columns, got `{header}`")));
    }
    let mut values = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let n_text = fields.next().unwrap_or_default().trim();
        let phi_text = fields
            .next()
            .ok_or_else(|| Error::Parse(format!("row {row}: missing phi column")))?
            .trim();
        if fields.next().is_some() {
            return Err(Error::Parse(format!("row {row}: too many columns")));
        }
        let n: usize = n_text
            .parse()
            .map_err(|_| Error::Parse(format!("row {row}: bad index `{n_text}`")))?;
        if n != values.len() {
            return Err(Error::Parse(format!(
                "row {row}: index {n} out of order, expected {}",
                values.len()
            )));
        }
        let phi = S::parse(phi_text)
            .ok_or_else(|| Error::Parse(format!("row {row}: bad value `{phi_text}`")))?;
        values.push(phi);
    }
    Weight::tabulated(values)
}

pub fn write_weight_csv<S: RealScalar, W: Write>(mut writer: W, weight: &Weight<S>) -> Result<()> {
    writeln!(writer, "n,phi")?;
    for (n, v) in weight.values().iter().enumerate() {
        writeln!(writer, "{n},{v}")?;
    }
    Ok(())
}

/// Reads a square matrix: header `dim=k`, then `k` rows of `k` entries.
pub fn read_matrix_csv<S: Scalar, R: BufRead>(reader: R) -> Result<DenseOperator<S>> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing dim=k header".into()))??;
    let dim: usize = header
        .trim()
        .strip_prefix("dim=")
        .ok_or_else(|| Error::Parse(format!("expected `dim=k` header, got `{header}`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension in `{header}`")))?;
    if dim == 0 {
        return Err(Error::DimensionMismatch("dim=0".into()));
    }
    let mut rows = Vec::with_capacity(dim);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<S> = line
            .split(',')
            .map(|t| {
                S::parse(t.trim()).ok_or_else(|| Error::Parse(format!("bad entry `{t}`")))
            })
            .collect::<Result<_>>()?;
        if row.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "row has {} entries, expected {dim}",
                row.len()
            )));
        }
        rows.push(row);
        if rows.len() == dim {
            break;
        }
    }
    if rows.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "found {} rows, expected {dim}",
            rows.len()
        )));
    }
    DenseOperator::from_rows(rows)
}

pub fn write_matrix_csv<S: Scalar, W: Write>(
    mut writer: W,
    matrix: &DenseOperator<S>,
) -> Result<()> {
    writeln!(writer, "dim={}", matrix.dim())?;
    for row in matrix.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(writer, "{}", line.join(","))?;
    }
    Ok(())
}

/// Writes orbit diagnostics as `n,ratio,norm` rows.
pub fn write_orbit_csv<W: Write>(mut writer: W, rows: &[(usize, f64, f64)]) -> Result<()> {
    writeln!(writer, "n,ratio,norm")?;
    for (n, ratio, norm) in rows {
        writeln!(writer, "{n},{ratio},{norm}")?;
    }
    Ok(())
}
