//! Dense MatrixMarket (`array`) reader and writer.
//!
//! Real matrices are written as `real general`; complex Hermitian matrices
//! as `complex hermitian` (lower triangle, column-major); vectors as `n×1`
//! arrays. Values carry 17 significant digits, so a round trip is exact.
//! Metadata goes into `% key: value` comment lines after the banner.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use shufflesor::{c64, Complex64, DenseMatrix, HermitianMatrix};

#[derive(Debug, thiserror::Error)]
pub enum MtxError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported MatrixMarket header: {0}")]
    Unsupported(String),
    #[error("expected {expected} values, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] shufflesor::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
}

/// A parsed file: the dense matrix plus its `% key: value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MtxFile {
    pub matrix: DenseMatrix,
    pub meta: Vec<(String, String)>,
}

impl MtxFile {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> MtxError {
    MtxError::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str) -> Result<(Field, Symmetry), MtxError> {
    let words: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(MtxError::Unsupported(line.to_string()));
    }
    if words[2] != "array" {
        return Err(MtxError::Unsupported(format!("{} format (only dense array is read)", words[2])));
    }
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "complex" => Field::Complex,
        "integer" => Field::Integer,
        other => return Err(MtxError::Unsupported(format!("field {other}"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(MtxError::Unsupported(format!("symmetry {other}"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(MtxError::Unsupported("hermitian requires complex field".into()));
    }
    Ok((field, symmetry))
}

pub fn parse(text: &str) -> Result<MtxFile, MtxError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (field, symmetry) = parse_header(header)?;

    let mut meta = Vec::new();
    let mut size = None;
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('%') {
            if let Some((k, v)) = comment.split_once(':') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        if size.is_none() {
            let dims: Vec<&str> = trimmed.split_whitespace().collect();
            if dims.len() != 2 {
                return Err(parse_err(line_no, "expected `rows cols`"));
            }
            let parse_dim = |s: &str| s.parse::<usize>().map_err(|e| parse_err(line_no, format!("bad dimension {s:?}: {e}")));
            size = Some((parse_dim(dims[0])?, parse_dim(dims[1])?));
            continue;
        }
        tokens.extend(trimmed.split_whitespace().map(|t| (line_no, t)));
    }
    let (rows, cols) = size.ok_or_else(|| parse_err(text.lines().count(), "missing size line"))?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(MtxError::Unsupported(format!("{rows}x{cols} matrix declared {symmetry:?}")));
    }

    let per_value = if field == Field::Complex { 2 } else { 1 };
    let stored = match symmetry {
        Symmetry::General => rows * cols,
        _ => rows * (rows + 1) / 2,
    };
    if tokens.len() != stored * per_value {
        return Err(MtxError::Count {
            expected: stored * per_value,
            found: tokens.len(),
        });
    }
    let numbers = tokens
        .iter()
        .map(|&(line, t)| t.parse::<f64>().map_err(|e| parse_err(line, format!("bad number {t:?}: {e}"))))
        .collect::<Result<Vec<f64>, _>>()?;
    let mut values = numbers.chunks(per_value).map(|c| c64(c[0], c.get(1).copied().unwrap_or(0.0)));

    let mut m = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        let first = if symmetry == Symmetry::General { 0 } else { j };
        for i in first..rows {
            let v = values.next().expect("count checked");
            m[(i, j)] = v;
            if i != j {
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => m[(j, i)] = v,
                    Symmetry::Hermitian => m[(j, i)] = v.conj(),
                }
            }
        }
    }
    let matrix = DenseMatrix::from_row_major(rows, cols, m.as_slice().to_vec())?;
    Ok(MtxFile { matrix, meta })
}

fn is_real(m: &DenseMatrix) -> bool {
    m.as_slice().iter().all(|v| v.im == 0.0)
}

fn push_value(out: &mut String, v: Complex64, complex: bool) {
    if complex {
        let _ = writeln!(out, "{:.16e} {:.16e}", v.re, v.im);
    } else {
        let _ = writeln!(out, "{:.16e}", v.re);
    }
}

fn banner(out: &mut String, field: &str, symmetry: &str, meta: &[(&str, String)]) {
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} {symmetry}");
    for (k, v) in meta {
        let _ = writeln!(out, "% {k}: {v}");
    }
}

/// General dense matrix; `real general` when every entry is real.
pub fn format_dense(m: &DenseMatrix, meta: &[(&str, String)]) -> String {
    let complex = !is_real(m);
    let mut out = String::new();
    banner(&mut out, if complex { "complex" } else { "real" }, "general", meta);
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            push_value(&mut out, m[(i, j)], complex);
        }
    }
    out
}

/// Hermitian matrix: `complex hermitian` (lower triangle) when any entry is
/// complex, otherwise `real general`.
pub fn format_hermitian(b: &HermitianMatrix, meta: &[(&str, String)]) -> String {
    let m = b.as_dense();
    if is_real(m) {
        return format_dense(m, meta);
    }
    let mut out = String::new();
    banner(&mut out, "complex", "hermitian", meta);
    let n = b.n();
    let _ = writeln!(out, "{n} {n}");
    for j in 0..n {
        for i in j..n {
            push_value(&mut out, m[(i, j)], true);
        }
    }
    out
}

pub fn format_vector(v: &[Complex64], meta: &[(&str, String)]) -> String {
    let column = DenseMatrix::from_row_major(v.len(), 1, v.to_vec()).expect("finite vector");
    format_dense(&column, meta)
}

fn read_text(path: &Path) -> Result<String, MtxError> {
    fs::read_to_string(path).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), MtxError> {
    fs::write(path, text).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_file(path: &Path) -> Result<MtxFile, MtxError> {
    parse(&read_text(path)?)
}

pub fn read_hermitian(path: &Path) -> Result<HermitianMatrix, MtxError> {
    Ok(HermitianMatrix::new(read_file(path)?.matrix)?)
}

pub fn read_vector(path: &Path) -> Result<Vec<Complex64>, MtxError> {
    let m = read_file(path)?.matrix;
    if m.cols() != 1 {
        return Err(MtxError::Unsupported(format!("vector file has {} columns", m.cols())));
    }
    Ok(m.as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_round_trip_is_exact() {
        let m = DenseMatrix::from_real(2, 3, &[1.0, -0.1, 1.0 / 3.0, 1e-300, 5e300, std::f64::consts::PI]).unwrap();
        let text = format_dense(&m, &[("kind", "test".into())]);
        assert!(text.starts_with("%%MatrixMarket matrix array real general\n% kind: test\n2 3\n"));
        let back = parse(&text).unwrap();
        assert_eq!(back.matrix, m);
        assert_eq!(back.meta_value("kind"), Some("test"));
    }

    #[test]
    fn hermitian_stores_lower_triangle() {
        let b = HermitianMatrix::new(
            DenseMatrix::from_row_major(2, 2, vec![c64(1.0, 0.0), c64(0.2, 0.7), c64(0.2, -0.7), c64(1.0, 0.0)])
                .unwrap(),
        )
        .unwrap();
        let text = format_hermitian(&b, &[]);
        assert_eq!(text.lines().count(), 2 + 3);
        assert!(text.contains("2.0000000000000001e-1 -6.9999999999999996e-1"));
        assert_eq!(parse(&text).unwrap().matrix, *b.as_dense());
    }

    #[test]
    fn symmetric_and_integer_inputs() {
        let text = "%%MatrixMarket matrix array integer symmetric\n% a comment\n2 2\n1\n3\n4\n";
        let m = parse(text).unwrap().matrix;
        assert_eq!(m, DenseMatrix::from_real(2, 2, &[1.0, 3.0, 3.0, 4.0]).unwrap());
    }

    #[test]
    fn vector_round_trip() {
        let v = vec![c64(1.5, -2.0), c64(0.0, 1e-17)];
        let text = format_vector(&v, &[]);
        assert!(text.starts_with("%%MatrixMarket matrix array complex general\n2 1\n"));
        assert_eq!(parse(&text).unwrap().matrix.as_slice(), v.as_slice());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse(""), Err(MtxError::Parse { .. })));
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n"),
            Err(MtxError::Unsupported(_))
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n"),
            Err(MtxError::Count { expected: 4, found: 3 })
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix array real general\n1 1\nabc\n"),
            Err(MtxError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix array real general\n1 1\nNaN\n"),
            Err(MtxError::Matrix(_))
        ));
    }
}
