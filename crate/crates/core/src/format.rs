//! Text encodings of integer matrices: an aligned ASCII grid and a small
//! JSON object `{"rows": .., "cols": .., "delta": [[..]]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigraded::{DeltaError, DeltaMatrix};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: cannot parse {token:?} as an integer")]
    BadInteger { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("no matrix rows found")]
    Empty,
    #[error("declared shape {rows}x{cols} does not match the data")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

/// Right-aligns every entry to the widest one, single-space separated, one
/// row per line.
pub fn to_ascii(rows: &[Vec<i64>]) -> String {
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses whitespace-separated integer rows. Blank lines are skipped.
pub fn parse_ascii_rows(text: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_int_row(line, n + 1)?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(FormatError::Ragged {
                    line: n + 1,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(rows)
}

pub(crate) fn parse_int_row(line: &str, line_no: usize) -> Result<Vec<i64>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>().map_err(|_| FormatError::BadInteger {
                line: line_no,
                token: tok.to_string(),
            })
        })
        .collect()
}

pub fn parse_ascii(text: &str) -> Result<DeltaMatrix, FormatError> {
    Ok(DeltaMatrix::from_rows(&parse_ascii_rows(text)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub delta: Vec<Vec<i64>>,
}

impl From<&DeltaMatrix> for MatrixJson {
    fn from(d: &DeltaMatrix) -> Self {
        Self {
            rows: d.rows(),
            cols: d.cols(),
            delta: d.to_rows(),
        }
    }
}

impl TryFrom<MatrixJson> for DeltaMatrix {
    type Error = FormatError;

    fn try_from(m: MatrixJson) -> Result<Self, FormatError> {
        if m.delta.len() != m.rows || m.delta.iter().any(|r| r.len() != m.cols) {
            return Err(FormatError::ShapeMismatch {
                rows: m.rows,
                cols: m.cols,
            });
        }
        let d = DeltaMatrix::from_rows(&m.delta)?;
        if (d.rows(), d.cols()) != (m.rows, m.cols) {
            // not in trimmed form
            return Err(FormatError::ShapeMismatch {
                rows: m.rows,
                cols: m.cols,
            });
        }
        Ok(d)
    }
}

/// `serialize_with` helper writing a matrix in the JSON schema.
pub fn serialize_delta<S: serde::Serializer>(d: &DeltaMatrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&MatrixJson::from(d), s)
}

pub fn to_json(d: &DeltaMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(d)).expect("integer matrices always serialize")
}

pub fn parse_json(text: &str) -> Result<DeltaMatrix, FormatError> {
    let m: MatrixJson = serde_json::from_str(text)?;
    DeltaMatrix::try_from(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ascii_layout() {
        let d = DeltaMatrix::from_rows(&[[1, 1, 1], [1, 0, -1], [1, -1, 0]]).unwrap();
        assert_eq!(to_ascii(&d.to_rows()), " 1  1  1\n 1  0 -1\n 1 -1  0\n");
        assert_eq!(DeltaMatrix::single_point().to_string(), "1\n");
        let d = DeltaMatrix::from_rows(&[[1, 1], [1, -3]]).unwrap();
        assert_eq!(d.to_string(), " 1  1\n 1 -3\n");
    }

    #[test]
    fn json_layout() {
        let d = DeltaMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap();
        assert_eq!(to_json(&d), r#"{"rows":2,"cols":2,"delta":[[1,1],[1,-1]]}"#);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_ascii("1 1\n1\n"),
            Err(FormatError::Ragged { line: 2, .. })
        ));
        assert!(matches!(
            parse_ascii("1 x\n"),
            Err(FormatError::BadInteger { line: 1, .. })
        ));
        assert!(matches!(parse_ascii("\n\n"), Err(FormatError::Empty)));
        assert!(matches!(
            parse_json(r#"{"rows":1,"cols":2,"delta":[[1]]}"#),
            Err(FormatError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            parse_json(r#"{"rows":1,"cols":2,"delta":[[1,0]]}"#),
            Err(FormatError::ShapeMismatch { .. })
        ));
    }

    fn delta_matrix() -> impl Strategy<Value = DeltaMatrix> {
        (1usize..7, 1usize..7)
            .prop_flat_map(|(r, c)| {
                proptest::collection::vec(-4i64..=1, r * c).prop_map(move |v| (r, c, v))
            })
            .prop_filter_map("all zero", |(r, c, v)| {
                DeltaMatrix::from_fn(r, c, |i, j| v[i * c + j]).ok()
            })
    }

    proptest! {
        #[test]
        fn ascii_and_json_round_trip(d in delta_matrix()) {
            prop_assert_eq!(parse_ascii(&d.to_string()).unwrap(), d.clone());
            prop_assert_eq!(parse_json(&to_json(&d)).unwrap(), d);
        }
    }
}
