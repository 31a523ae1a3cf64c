use std::collections::{BTreeMap, BTreeSet};

use super::ConfigError;
use crate::bigraded::Direction;

/// Occupied intersections `R_i ∩ C_j` of a `rows x cols` grid. Every line
/// holds at least one point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Incidence {
    rows: usize,
    cols: usize,
    cells: BTreeSet<(usize, usize)>,
}

impl Incidence {
    pub fn new(
        rows: usize,
        cols: usize,
        cells: BTreeSet<(usize, usize)>,
    ) -> Result<Self, ConfigError> {
        if rows == 0 || cols == 0 {
            return Err(ConfigError::EmptyGrid);
        }
        if let Some(&(row, col)) = cells.iter().find(|&&(r, c)| r >= rows || c >= cols) {
            return Err(ConfigError::OutOfRange {
                row,
                col,
                rows,
                cols,
            });
        }
        let inc = Self { rows, cols, cells };
        if let Some(index) = (0..rows).find(|&i| inc.row_count(i) == 0) {
            return Err(ConfigError::UnoccupiedLine {
                direction: Direction::Row,
                index,
            });
        }
        if let Some(index) = (0..cols).find(|&j| inc.col_count(j) == 0) {
            return Err(ConfigError::UnoccupiedLine {
                direction: Direction::Col,
                index,
            });
        }
        Ok(inc)
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        let cells = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .collect();
        Self { rows, cols, cells }
    }

    /// Left-justified staircase with `row_counts[i]` points on row `i`.
    /// Counts must be positive and non-increasing.
    pub fn staircase(row_counts: &[usize]) -> Result<Self, ConfigError> {
        let cols = row_counts.first().copied().unwrap_or(0);
        let cells = row_counts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
            .collect();
        Self::new(row_counts.len(), cols, cells)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lines(&self, direction: Direction) -> usize {
        match direction {
            Direction::Row => self.rows,
            Direction::Col => self.cols,
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.cells.contains(&(i, j))
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().copied()
    }

    pub fn degree(&self) -> usize {
        self.cells.len()
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.cells.range((i, 0)..(i + 1, 0)).count()
    }

    pub fn col_count(&self, j: usize) -> usize {
        self.cells.iter().filter(|&&(_, c)| c == j).count()
    }

    /// Points on line `index` of the given ruling.
    pub fn line_count(&self, direction: Direction, index: usize) -> usize {
        match direction {
            Direction::Row => self.row_count(index),
            Direction::Col => self.col_count(index),
        }
    }

    pub fn row_counts(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row_count(i)).collect()
    }

    pub fn col_counts(&self) -> Vec<usize> {
        (0..self.cols).map(|j| self.col_count(j)).collect()
    }

    /// `k -> number of lines of the ruling with exactly k points`.
    pub fn histogram(&self, direction: Direction) -> BTreeMap<usize, usize> {
        let counts = match direction {
            Direction::Row => self.row_counts(),
            Direction::Col => self.col_counts(),
        };
        let mut out = BTreeMap::new();
        for k in counts {
            *out.entry(k).or_insert(0) += 1;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            cells: self.cells.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Relabels rows and columns: cell `(i, j)` moves to
    /// `(row_perm[i], col_perm[j])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            cells: self
                .cells
                .iter()
                .map(|&(i, j)| (row_perm[i], col_perm[j]))
                .collect(),
        }
    }

    /// `.`/`X` picture, top row first.
    pub fn to_grid_string(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(if self.contains(i, j) { 'X' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_histograms() {
        let inc =
            Incidence::new(3, 3, [(0, 1), (0, 2), (1, 0), (2, 0)].into_iter().collect()).unwrap();
        assert_eq!(inc.row_counts(), vec![2, 1, 1]);
        assert_eq!(inc.col_counts(), vec![2, 1, 1]);
        assert_eq!(
            inc.histogram(Direction::Row),
            BTreeMap::from([(1, 2), (2, 1)])
        );
        assert_eq!(inc.to_grid_string(), ".XX\nX..\nX..\n");
        assert_eq!(inc.transpose().transpose(), inc);
    }

    #[test]
    fn every_line_must_be_occupied() {
        assert_eq!(
            Incidence::new(2, 2, [(0, 0), (0, 1)].into_iter().collect()),
            Err(ConfigError::UnoccupiedLine {
                direction: Direction::Row,
                index: 1
            })
        );
        assert!(matches!(
            Incidence::new(1, 1, [(0, 3)].into_iter().collect()),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert_eq!(
            Incidence::new(0, 1, BTreeSet::new()),
            Err(ConfigError::EmptyGrid)
        );
    }

    #[test]
    fn staircase_shape() {
        let inc = Incidence::staircase(&[3, 1]).unwrap();
        assert_eq!(inc.to_grid_string(), "XXX\nX..\n");
        assert_eq!(Incidence::full(2, 2).degree(), 4);
    }
}
