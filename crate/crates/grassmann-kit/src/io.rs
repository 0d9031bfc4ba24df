//! Plain-text matrix files: first line `rows cols`, then one
//! whitespace-delimited row per line, printed with 17 significant digits so
//! values round-trip bit-exactly. Language-neutral and diffable.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matcore::Matrix;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Serializes a matrix in the text format.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let mut first = true;
        for j in 0..m.ncols() {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{:.16e}", m[(i, j)]);
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    fs::write(path, format_matrix(m)).map_err(|e| io_err(path, e))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_matrix(&text).map_err(|reason| parse_err(path, reason))
}

/// Parses the text format; returns a human-readable reason on failure.
pub fn parse_matrix(text: &str) -> std::result::Result<Matrix, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty file")?;
    let mut dims = header.split_whitespace();
    let rows: usize = dims
        .next()
        .ok_or("missing row count")?
        .parse()
        .map_err(|e| format!("bad row count: {e}"))?;
    let cols: usize = dims
        .next()
        .ok_or("missing column count")?
        .parse()
        .map_err(|e| format!("bad column count: {e}"))?;
    if dims.next().is_some() {
        return Err("header has more than two fields".into());
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        if i >= rows {
            return Err(format!("more than {rows} data rows"));
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|e| format!("row {i}: {e}"))?;
            entries.push(v);
        }
    }
    if entries.len() != rows * cols {
        return Err(format!(
            "expected {} entries, found {}",
            rows * cols,
            entries.len()
        ));
    }
    Ok(Matrix::from_row_slice(rows, cols, &entries))
}
