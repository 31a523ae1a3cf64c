//! Hilbert matrices of 0-dimensional schemes on P1 x P1, their first
//! differences and the directional differences between them.
//!
//! The first difference `c(i,j) = m(i,j) - m(i-1,j) - m(i,j-1) + m(i-1,j-1)`
//! has finite support, so [`DeltaMatrix`] is the canonical storage and
//! [`HilbertMatrix`] is a query view over its partial sums.

mod check;
mod profile;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{check_structure, CheckReport, StructureCondition, Violation};
pub use profile::{line_profiles, ProfileReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("matrix has no rows or no columns")]
    Empty,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("entry ({i}, {j}) = {value} is greater than 1")]
    EntryAboveOne { i: usize, j: usize, value: i64 },
    #[error("matrix has no nonzero entry")]
    AllZero,
    #[error("Hilbert values not stabilized along the {axis} guard at index {index}")]
    StabilizationNotReached { axis: Direction, index: usize },
    #[error("negative count {count} of {direction} lines with {points} points")]
    NegativeCount {
        direction: Direction,
        points: usize,
        count: i64,
    },
}

/// The two rulings of the quadric. `Row` is a (1,0)-line (first bidegree
/// component, drawn horizontally), `Col` a (0,1)-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Row,
    Col,
}

impl Direction {
    pub fn other(self) -> Self {
        match self {
            Direction::Row => Direction::Col,
            Direction::Col => Direction::Row,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Row => f.write_str("row"),
            Direction::Col => f.write_str("column"),
        }
    }
}

/// First difference of a Hilbert function, trimmed to its support
/// rectangle `[0, a] x [0, b]`.
///
/// The last row and the last column always hold a nonzero entry and no
/// entry exceeds 1. Queries outside the stored rectangle return 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl DeltaMatrix {
    /// Builds a matrix from row-major data, trimming trailing zero rows and
    /// columns.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, DeltaError> {
        let expected = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if expected == 0 {
            return Err(DeltaError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            let found = r.as_ref().len();
            if found != expected {
                return Err(DeltaError::Ragged {
                    row,
                    found,
                    expected,
                });
            }
        }
        Self::from_fn(rows.len(), expected, |i, j| rows[i].as_ref()[j])
    }

    /// Builds the trimmed matrix whose entry `(i, j)` is `f(i, j)` on the
    /// given rectangle and 0 elsewhere.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> i64,
    ) -> Result<Self, DeltaError> {
        if rows == 0 || cols == 0 {
            return Err(DeltaError::Empty);
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let value = f(i, j);
                if value > 1 {
                    return Err(DeltaError::EntryAboveOne { i, j, value });
                }
                entries.push(value);
            }
        }
        let at = |i: usize, j: usize| entries[i * cols + j];
        let Some(last_row) = (0..rows).rev().find(|&i| (0..cols).any(|j| at(i, j) != 0)) else {
            return Err(DeltaError::AllZero);
        };
        let last_col = (0..cols)
            .rev()
            .find(|&j| (0..rows).any(|i| at(i, j) != 0))
            .expect("a nonzero row implies a nonzero column");
        let (new_rows, new_cols) = (last_row + 1, last_col + 1);
        let trimmed = (0..new_rows)
            .flat_map(|i| (0..new_cols).map(move |j| (i, j)))
            .map(|(i, j)| at(i, j))
            .collect();
        Ok(Self {
            rows: new_rows,
            cols: new_cols,
            entries: trimmed,
        })
    }

    /// First difference of a single reduced point.
    pub fn single_point() -> Self {
        Self {
            rows: 1,
            cols: 1,
            entries: vec![1],
        }
    }

    /// Largest row index with a nonzero entry.
    pub fn a(&self) -> usize {
        self.rows - 1
    }

    /// Largest column index with a nonzero entry.
    pub fn b(&self) -> usize {
        self.cols - 1
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        if i < self.rows && j < self.cols {
            self.entries[i * self.cols + j]
        } else {
            0
        }
    }

    /// Signed-index query; negative indices read as 0.
    pub fn get_signed(&self, i: i64, j: i64) -> i64 {
        if i < 0 || j < 0 {
            0
        } else {
            self.get(i as usize, j as usize)
        }
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Sum of all entries, i.e. the degree of the scheme.
    pub fn degree(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// Swaps the two factors of P1 x P1.
    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Iterates over `(i, j, value)` on the stored rectangle, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / self.cols, k % self.cols, v))
    }

    /// Sum of column `j` over all rows.
    pub fn col_sum(&self, j: usize) -> i64 {
        (0..self.rows).map(|i| self.get(i, j)).sum()
    }

    /// Sum of row `i` over all columns.
    pub fn row_sum(&self, i: usize) -> i64 {
        (0..self.cols).map(|j| self.get(i, j)).sum()
    }

    /// Positions where `self` and `other` disagree, over the union of both
    /// supports, row-major.
    pub fn diff_positions(&self, other: &DeltaMatrix) -> Vec<(usize, usize)> {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) != other.get(i, j))
            .collect()
    }
}

impl fmt::Display for DeltaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::to_ascii(&self.to_rows()))
    }
}

/// Hilbert matrix `m(i,j)` as a clamped partial-sum view of a
/// [`DeltaMatrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertMatrix {
    delta: DeltaMatrix,
    sums: Vec<i64>,
}

impl HilbertMatrix {
    pub fn new(delta: DeltaMatrix) -> Self {
        let (rows, cols) = (delta.rows, delta.cols);
        let mut sums = vec![0i64; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                let up = if i > 0 { sums[(i - 1) * cols + j] } else { 0 };
                let left = if j > 0 { sums[i * cols + j - 1] } else { 0 };
                let diag = if i > 0 && j > 0 {
                    sums[(i - 1) * cols + j - 1]
                } else {
                    0
                };
                sums[i * cols + j] = delta.get(i, j) + up + left - diag;
            }
        }
        Self { delta, sums }
    }

    pub fn delta(&self) -> &DeltaMatrix {
        &self.delta
    }

    pub fn into_delta(self) -> DeltaMatrix {
        self.delta
    }

    /// `m(i, j)`, constant once `i >= a` and `j >= b`.
    pub fn value(&self, i: usize, j: usize) -> i64 {
        let i = i.min(self.delta.rows - 1);
        let j = j.min(self.delta.cols - 1);
        self.sums[i * self.delta.cols + j]
    }

    /// `m(i, j)` with `m = 0` whenever either index is negative.
    pub fn value_signed(&self, i: i64, j: i64) -> i64 {
        if i < 0 || j < 0 {
            0
        } else {
            self.value(i as usize, j as usize)
        }
    }

    pub fn degree(&self) -> i64 {
        self.value(self.delta.a(), self.delta.b())
    }

    /// Values on `[0, rows) x [0, cols)`.
    pub fn window(&self, rows: usize, cols: usize) -> Vec<Vec<i64>> {
        (0..rows)
            .map(|i| (0..cols).map(|j| self.value(i, j)).collect())
            .collect()
    }
}

impl From<DeltaMatrix> for HilbertMatrix {
    fn from(delta: DeltaMatrix) -> Self {
        Self::new(delta)
    }
}

/// `m(i, j) = sum of c(h, k) over h <= i, k <= j`.
pub fn hilbert_from_delta(d: &DeltaMatrix, i: usize, j: usize) -> i64 {
    let rows = (i + 1).min(d.rows);
    let cols = (j + 1).min(d.cols);
    (0..rows)
        .map(|h| d.row(h)[..cols].iter().sum::<i64>())
        .sum()
}

/// First difference of raw Hilbert values given on `[0, A] x [0, B]`.
///
/// The last row must repeat the one before it, and likewise the last
/// column, so that nothing outside the window can contribute.
pub fn delta_from_hilbert<R: AsRef<[i64]>>(m: &[R]) -> Result<DeltaMatrix, DeltaError> {
    let rows = m.len();
    let cols = m.first().map(|r| r.as_ref().len()).unwrap_or(0);
    if rows == 0 || cols == 0 {
        return Err(DeltaError::Empty);
    }
    for (row, r) in m.iter().enumerate() {
        if r.as_ref().len() != cols {
            return Err(DeltaError::Ragged {
                row,
                found: r.as_ref().len(),
                expected: cols,
            });
        }
    }
    let at = |i: i64, j: i64| -> i64 {
        if i < 0 || j < 0 {
            0
        } else {
            m[i as usize].as_ref()[j as usize]
        }
    };
    if rows < 2 {
        return Err(DeltaError::StabilizationNotReached {
            axis: Direction::Row,
            index: 0,
        });
    }
    if cols < 2 {
        return Err(DeltaError::StabilizationNotReached {
            axis: Direction::Col,
            index: 0,
        });
    }
    let (last_i, last_j) = ((rows - 1) as i64, (cols - 1) as i64);
    if let Some(j) = (0..=last_j).find(|&j| at(last_i, j) != at(last_i - 1, j)) {
        return Err(DeltaError::StabilizationNotReached {
            axis: Direction::Row,
            index: j as usize,
        });
    }
    if let Some(i) = (0..=last_i).find(|&i| at(i, last_j) != at(i, last_j - 1)) {
        return Err(DeltaError::StabilizationNotReached {
            axis: Direction::Col,
            index: i as usize,
        });
    }
    DeltaMatrix::from_fn(rows, cols, |i, j| {
        let (i, j) = (i as i64, j as i64);
        at(i, j) - at(i - 1, j) - at(i, j - 1) + at(i - 1, j - 1)
    })
}

/// `a(i,j) = m(i,j) - m(i,j-1)` (`Row`) or `b(i,j) = m(i,j) - m(i-1,j)`
/// (`Col`), tabulated on the support rectangle plus one guard row and
/// column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionalDifference {
    pub direction: Direction,
    pub values: Vec<Vec<i64>>,
}

impl DirectionalDifference {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.values
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or_else(|| {
                // beyond the guard both differences are constant along the
                // clamped direction
                let i = i.min(self.values.len() - 1);
                let row = &self.values[i];
                row[j.min(row.len() - 1)]
            })
    }
}

pub fn directional_difference(d: &DeltaMatrix, direction: Direction) -> DirectionalDifference {
    let m = HilbertMatrix::new(d.clone());
    let values = (0..=d.rows() as i64)
        .map(|i| {
            (0..=d.cols() as i64)
                .map(|j| match direction {
                    Direction::Row => m.value_signed(i, j) - m.value_signed(i, j - 1),
                    Direction::Col => m.value_signed(i, j) - m.value_signed(i - 1, j),
                })
                .collect()
        })
        .collect();
    DirectionalDifference { direction, values }
}

/// Which index is held fixed when looking for the stabilization point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixed {
    /// Column `j` fixed: returns `i(j) = min { t : m(t,j) = m(t+1,j) }`.
    Col(usize),
    /// Row `i` fixed: returns `j(i) = min { t : m(i,t) = m(i,t+1) }`.
    Row(usize),
}

pub fn stabilization_index(m: &HilbertMatrix, fixed: Fixed) -> usize {
    match fixed {
        Fixed::Col(j) => (0..)
            .find(|&t| m.value(t, j) == m.value(t + 1, j))
            .expect("Hilbert values stabilize past the support"),
        Fixed::Row(i) => (0..)
            .find(|&t| m.value(i, t) == m.value(i, t + 1))
            .expect("Hilbert values stabilize past the support"),
    }
}
