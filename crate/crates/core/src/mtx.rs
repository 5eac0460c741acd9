//! Matrix Market coordinate files.
//!
//! Accepts `matrix coordinate {real|integer|pattern} {general|symmetric|skew-symmetric}`.
//! Symmetric and skew-symmetric storage is expanded to a full general matrix
//! on read; the writer always emits `real general`.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum MtxError {
    #[error("line {line}: bad header: {msg}")]
    Header { line: usize, msg: String },

    #[error("line {line}: entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    Bounds {
        line: usize,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },

    #[error("line {line}: bad value {token:?}: {msg}")]
    Value {
        line: usize,
        token: String,
        msg: String,
    },

    #[error("matrix is {rows}x{cols}; only square matrices are supported")]
    Rectangular { rows: usize, cols: usize },

    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// The accepted subset of Matrix Market banners. The object is always
/// `matrix` and the format always `coordinate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixMarketHeader {
    pub field: Field,
    pub symmetry: Symmetry,
}

impl MatrixMarketHeader {
    fn parse(line: &str, line_no: usize) -> Result<Self, MtxError> {
        let err = |msg: String| MtxError::Header { line: line_no, msg };
        let tokens: Vec<String> = line
            .split_whitespace()
            .map(str::to_ascii_lowercase)
            .collect();
        match tokens.first().map(String::as_str) {
            Some("%%matrixmarket") => {}
            _ => return Err(err("first line must start with %%MatrixMarket".into())),
        }
        if tokens.len() != 5 {
            return Err(err(format!(
                "expected 4 qualifiers, found {}",
                tokens.len() - 1
            )));
        }
        if tokens[1] != "matrix" {
            return Err(err(format!("unsupported object {:?}", tokens[1])));
        }
        match tokens[2].as_str() {
            "coordinate" => {}
            "array" => return Err(err("dense array format is not supported".into())),
            other => return Err(err(format!("unknown format {other:?}"))),
        }
        let field = match tokens[3].as_str() {
            "real" => Field::Real,
            "integer" => Field::Integer,
            "pattern" => Field::Pattern,
            other => return Err(err(format!("unsupported field {other:?}"))),
        };
        let symmetry = match tokens[4].as_str() {
            "general" => Symmetry::General,
            "symmetric" => Symmetry::Symmetric,
            "skew-symmetric" => Symmetry::SkewSymmetric,
            other => return Err(err(format!("unsupported symmetry {other:?}"))),
        };
        if field == Field::Pattern && symmetry == Symmetry::SkewSymmetric {
            return Err(err("pattern matrices cannot be skew-symmetric".into()));
        }
        Ok(Self { field, symmetry })
    }
}

/// Parses a Matrix Market coordinate stream into a square CSR matrix.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<CsrMatrix, MtxError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let header = match lines.next() {
        Some((no, line)) => {
            MatrixMarketHeader::parse(&line.map_err(|e| MtxError::Io(e.to_string()))?, no)?
        }
        None => {
            return Err(MtxError::Header {
                line: 1,
                msg: "empty input".into(),
            })
        }
    };

    // Comments and blank lines may appear anywhere after the banner.
    let mut content = lines.filter_map(|(no, line)| match line {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok((no, t.to_owned())))
            }
        }
        Err(e) => Some(Err(MtxError::Io(e.to_string()))),
    });

    let (size_line, size) = content.next().transpose()?.ok_or(MtxError::Header {
        line: 2,
        msg: "missing size line".into(),
    })?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| MtxError::Header {
            line: size_line,
            msg: format!("size line {size:?} must hold three non-negative integers"),
        })?;
    let [rows, cols, declared] = dims[..] else {
        return Err(MtxError::Header {
            line: size_line,
            msg: format!("size line {size:?} must hold three non-negative integers"),
        });
    };
    if rows != cols {
        return Err(MtxError::Rectangular { rows, cols });
    }

    let values_per_line = if header.field == Field::Pattern { 2 } else { 3 };
    let mut triplets = Vec::with_capacity(match header.symmetry {
        Symmetry::General => declared,
        _ => 2 * declared,
    });
    let mut found = 0usize;
    for item in content {
        let (line_no, text) = item?;
        found += 1;
        if found > declared {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != values_per_line {
            return Err(MtxError::Value {
                line: line_no,
                token: text.clone(),
                msg: format!("expected {values_per_line} tokens"),
            });
        }
        let index = |tok: &str| -> Result<usize, MtxError> {
            tok.parse::<usize>().map_err(|_| MtxError::Value {
                line: line_no,
                token: tok.to_owned(),
                msg: "not a positive integer index".into(),
            })
        };
        let (i, j) = (index(tokens[0])?, index(tokens[1])?);
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(MtxError::Bounds {
                line: line_no,
                row: i,
                col: j,
                rows,
                cols,
            });
        }
        let value = match header.field {
            Field::Pattern => 1.0,
            Field::Real => parse_real(tokens[2], line_no)?,
            Field::Integer => tokens[2].parse::<i64>().map_err(|_| MtxError::Value {
                line: line_no,
                token: tokens[2].to_owned(),
                msg: "not an integer".into(),
            })? as f64,
        };
        let (i, j) = (i - 1, j - 1);
        triplets.push((i, j, value));
        match header.symmetry {
            Symmetry::General => {}
            Symmetry::Symmetric => {
                if i != j {
                    triplets.push((j, i, value));
                }
            }
            Symmetry::SkewSymmetric => {
                if i == j {
                    return Err(MtxError::Value {
                        line: line_no,
                        token: text.clone(),
                        msg: "skew-symmetric matrices have no diagonal entries".into(),
                    });
                }
                triplets.push((j, i, -value));
            }
        }
    }
    if found != declared {
        return Err(MtxError::Count {
            expected: declared,
            found,
        });
    }

    Ok(CsrMatrix::from_triplets(rows, cols, triplets)
        .expect("indices were bounds-checked against the size line"))
}

fn parse_real(token: &str, line: usize) -> Result<f64, MtxError> {
    let v = token.parse::<f64>().map_err(|_| MtxError::Value {
        line,
        token: token.to_owned(),
        msg: "not a number".into(),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(MtxError::Value {
            line,
            token: token.to_owned(),
            msg: "value is not finite".into(),
        })
    }
}

/// Reads a Matrix Market file from disk; errors carry the path.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let path = path.as_ref();
    let wrap = |source| Error::Matrix {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(|e| wrap(MtxError::Io(e.to_string())))?;
    parse_matrix_market(BufReader::new(file)).map_err(wrap)
}

/// Writes `a` as `matrix coordinate real general`, entries in row-major
/// order. Values use the shortest representation that reads back exactly.
pub fn write_matrix_market<W: Write>(a: &CsrMatrix, mut out: W) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<CsrMatrix, MtxError> {
        parse_matrix_market(text.as_bytes())
    }

    #[test]
    fn minimal_general_file() {
        let a = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 2.0\n2 2 3.0\n")
            .unwrap();
        assert_eq!(a.to_dense(), vec![vec![2.0, 0.0], vec![0.0, 3.0]]);
    }

    #[test]
    fn symmetric_expansion() {
        let a = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n2 1 5.0\n")
            .unwrap();
        assert_eq!(a.to_dense(), vec![vec![1.0, 5.0], vec![5.0, 0.0]]);
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn skew_symmetric_expansion() {
        let a = parse(
            "%%MatrixMarket matrix coordinate real skew-symmetric\n3 3 2\n2 1 4.0\n3 2 -1.5\n",
        )
        .unwrap();
        assert_eq!(
            a.to_dense(),
            vec![
                vec![0.0, -4.0, 0.0],
                vec![4.0, 0.0, 1.5],
                vec![0.0, -1.5, 0.0]
            ]
        );
    }

    #[test]
    fn pattern_and_integer_fields() {
        let p =
            parse("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n").unwrap();
        assert_eq!(p.to_dense(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let i = parse("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 -7\n").unwrap();
        assert_eq!(i.values(), &[-7.0]);
        let bad = parse("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 2.5\n");
        assert!(matches!(bad, Err(MtxError::Value { line: 3, .. })));
    }

    #[test]
    fn comments_blank_lines_and_case() {
        let a = parse(
            "%%MatrixMarket Matrix Coordinate REAL General\n% a comment\n\n%another\n2 2 1\n\n% mid\n2 1 1e-3\n",
        )
        .unwrap();
        assert_eq!(a.get(1, 0), 1e-3);
    }

    #[test]
    fn explicit_zero_is_stored() {
        let a = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 0.0\n2 2 1\n")
            .unwrap();
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn header_errors() {
        for text in [
            "",
            "MatrixMarket matrix coordinate real general\n1 1 0\n",
            "%%MatrixMarket matrix array real general\n1 1\n1.0\n",
            "%%MatrixMarket matrix coordinate complex general\n1 1 0\n",
            "%%MatrixMarket matrix coordinate real hermitian\n1 1 0\n",
            "%%MatrixMarket vector coordinate real general\n1 1 0\n",
            "%%MatrixMarket matrix coordinate pattern skew-symmetric\n1 1 0\n",
            "%%MatrixMarket matrix coordinate real\n1 1 0\n",
            "%%MatrixMarket matrix coordinate real general\n1 1\n",
            "%%MatrixMarket matrix coordinate real general\n",
        ] {
            assert!(
                matches!(parse(text), Err(MtxError::Header { .. })),
                "{text:?} -> {:?}",
                parse(text)
            );
        }
    }

    #[test]
    fn bounds_error() {
        let e =
            parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").unwrap_err();
        assert_eq!(
            e,
            MtxError::Bounds {
                line: 3,
                row: 3,
                col: 1,
                rows: 2,
                cols: 2
            }
        );
        let zero = parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n");
        assert!(matches!(zero, Err(MtxError::Bounds { .. })));
    }

    #[test]
    fn count_errors() {
        let short = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
        assert_eq!(
            short,
            Err(MtxError::Count {
                expected: 2,
                found: 1
            })
        );
        let long =
            parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 1.0\n");
        assert_eq!(
            long,
            Err(MtxError::Count {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn value_errors() {
        for tok in ["abc", "nan", "NaN", "inf", "-Infinity", "1e400"] {
            let text = format!("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 {tok}\n");
            assert!(
                matches!(parse(&text), Err(MtxError::Value { line: 3, .. })),
                "{tok}"
            );
        }
        let missing = parse("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1\n");
        assert!(matches!(missing, Err(MtxError::Value { .. })));
    }

    #[test]
    fn rectangular_rejected() {
        let e = parse("%%MatrixMarket matrix coordinate real general\n2 3 0\n").unwrap_err();
        assert_eq!(e, MtxError::Rectangular { rows: 2, cols: 3 });
    }

    #[test]
    fn skew_diagonal_rejected() {
        let e = parse("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n1 1 1.0\n");
        assert!(matches!(e, Err(MtxError::Value { .. })));
    }

    #[test]
    fn writer_output_is_exact() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 0.1), (1, 0, -2.0)]).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1e-1\n2 1 -2e0\n"
        );
    }
}
