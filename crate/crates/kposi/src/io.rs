//! Matrix and vector file formats shared by every subcommand.
//!
//! Matrices travel as CSV (one row per line, decimal fields) or as JSON
//! `{"rows": n, "cols": m, "data": [[...], ...]}`. Vectors are a single CSV
//! line or newline-separated decimals. Parsers reject ragged rows and
//! report 1-based line/column positions.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::Scalar;

#[derive(Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<f64>>,
}

fn parse_field(field: &str, line: usize, col: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        col,
        msg: format!("expected a decimal number, got {:?}", field.trim()),
    })
}

fn rows_from_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1usize;
        for field in raw.split(',') {
            row.push(parse_field(field, lineno + 1, col)?);
            col += field.len() + 1;
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::Parse {
                    line: lineno + 1,
                    col: 1,
                    msg: format!("ragged row: expected {w} fields, found {}", row.len()),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "no data rows found".into(),
        });
    }
    Ok(rows)
}

fn convert<T: Scalar>(rows: &[Vec<f64>]) -> Result<Matrix<T>> {
    let converted: Vec<Vec<T>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    T::from_f64(x).ok_or_else(|| {
                        Error::InvalidValue(format!("{x} is not representable in the scalar type"))
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Matrix::from_rows(&converted)
}

/// Parses a matrix from text, auto-detecting the JSON form by its leading
/// brace.
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    if text.trim_start().starts_with('{') {
        let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        if parsed.data.len() != parsed.rows {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: format!(
                    "JSON matrix declares {} rows but data has {}",
                    parsed.rows,
                    parsed.data.len()
                ),
            });
        }
        if parsed.data.iter().any(|r| r.len() != parsed.cols) {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: format!(
                    "JSON matrix declares {} cols but data is ragged",
                    parsed.cols
                ),
            });
        }
        convert(&parsed.data)
    } else {
        convert(&rows_from_csv(text)?)
    }
}

/// Parses a vector: one CSV line, or one decimal per line, or a mix.
pub fn parse_vector<T: Scalar>(text: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut col = 1usize;
        for field in raw.split(',') {
            if !field.trim().is_empty() {
                let x = parse_field(field, lineno + 1, col)?;
                out.push(T::from_f64(x).ok_or_else(|| {
                    Error::InvalidValue(format!("{x} is not representable in the scalar type"))
                })?);
            }
            col += field.len() + 1;
        }
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "no vector entries found".into(),
        });
    }
    Ok(out)
}

pub fn read_matrix<T: Scalar>(path: &Path) -> Result<Matrix<T>> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_vector<T: Scalar>(path: &Path) -> Result<Vec<T>> {
    parse_vector(&std::fs::read_to_string(path)?)
}

pub fn matrix_to_csv<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let fields: Vec<String> = m.row(i).iter().map(|x| format!("{x}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> serde_json::Value {
    let data: Vec<Vec<f64>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    serde_json::json!({ "rows": m.rows(), "cols": m.cols(), "data": data })
}

pub fn vector_to_json<T: Scalar>(v: &[T]) -> serde_json::Value {
    let data: Vec<f64> = v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    serde_json::json!(data)
}
