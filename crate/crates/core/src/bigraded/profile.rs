//! Line counts read off the first difference.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{DeltaError, DeltaMatrix, Direction};

/// `row_profile[k]` is the number of (1,0)-lines holding exactly `k` points,
/// `col_profile[k]` the same for (0,1)-lines. Zero counts are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub row_profile: BTreeMap<usize, usize>,
    pub col_profile: BTreeMap<usize, usize>,
}

impl ProfileReport {
    pub fn lines(&self, direction: Direction) -> usize {
        self.profile(direction).values().sum()
    }

    pub fn degree(&self) -> usize {
        self.row_profile.iter().map(|(k, n)| k * n).sum()
    }

    pub fn profile(&self, direction: Direction) -> &BTreeMap<usize, usize> {
        match direction {
            Direction::Row => &self.row_profile,
            Direction::Col => &self.col_profile,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            row_profile: self.col_profile.clone(),
            col_profile: self.row_profile.clone(),
        }
    }
}

/// Number of rows (resp. columns) with `j+1` points is the drop between
/// consecutive column (resp. row) sums of the first difference.
pub fn line_profiles(d: &DeltaMatrix) -> Result<ProfileReport, DeltaError> {
    Ok(ProfileReport {
        row_profile: differenced(Direction::Row, d.cols(), |j| d.col_sum(j))?,
        col_profile: differenced(Direction::Col, d.rows(), |i| d.row_sum(i))?,
    })
}

fn differenced(
    direction: Direction,
    len: usize,
    sum: impl Fn(usize) -> i64,
) -> Result<BTreeMap<usize, usize>, DeltaError> {
    let mut out = BTreeMap::new();
    for t in 0..len {
        let count = sum(t) - sum(t + 1);
        if count < 0 {
            return Err(DeltaError::NegativeCount {
                direction,
                points: t + 1,
                count,
            });
        }
        if count > 0 {
            out.insert(t + 1, count as usize);
        }
    }
    Ok(out)
}
