//! Staircase schemes: detection, closed-form `ΔM`, and line additions that
//! need no hypothesis check.
//!
//! A reduced scheme supported on a grid is ACM exactly when some reordering
//! of its rows and columns turns the incidence into a left-justified
//! staircase.

use serde::Serialize;

use crate::bigraded::{DeltaMatrix, Direction};
use crate::engine::{self, EngineError, LineAddition, LineAdditionSpec, Mode};
use crate::oracle::Incidence;

/// Conjugate partitions: `row_counts` (`p_0 >= ... >= p_a`) and
/// `col_counts` (`q_0 >= ... >= q_b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StaircaseProfile {
    row_counts: Vec<usize>,
    col_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("point counts must be positive and non-increasing, got {0:?}")]
pub struct ProfileError(pub Vec<usize>);

impl StaircaseProfile {
    pub fn from_row_counts(p: &[usize]) -> Result<Self, ProfileError> {
        if p.is_empty() || p.contains(&0) || p.windows(2).any(|w| w[0] < w[1]) {
            return Err(ProfileError(p.to_vec()));
        }
        Ok(Self {
            row_counts: p.to_vec(),
            col_counts: conjugate(p),
        })
    }

    pub fn from_col_counts(q: &[usize]) -> Result<Self, ProfileError> {
        Ok(Self::from_row_counts(q)?.transpose())
    }

    pub fn row_counts(&self) -> &[usize] {
        &self.row_counts
    }

    pub fn col_counts(&self) -> &[usize] {
        &self.col_counts
    }

    pub fn degree(&self) -> usize {
        self.row_counts.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        Self {
            row_counts: self.col_counts.clone(),
            col_counts: self.row_counts.clone(),
        }
    }

    pub fn incidence(&self) -> Incidence {
        Incidence::staircase(&self.row_counts).expect("profile counts are valid")
    }
}

fn conjugate(p: &[usize]) -> Vec<usize> {
    (0..p[0])
        .map(|j| p.iter().filter(|&&c| c > j).count())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AcmVerdict {
    /// Cell `(i, j)` moves to `(row_perm[i], col_perm[j])` in the
    /// staircase.
    Staircase {
        profile: StaircaseProfile,
        row_perm: Vec<usize>,
        col_perm: Vec<usize>,
    },
    /// After sorting, the original cell `cell` is occupied (or empty) where
    /// the staircase with the same row counts says otherwise.
    NotStaircase {
        cell: (usize, usize),
        occupied: bool,
    },
}

impl AcmVerdict {
    pub fn is_acm(&self) -> bool {
        matches!(self, AcmVerdict::Staircase { .. })
    }
}

/// Sorts rows and columns by point count (stable, descending) and compares
/// with the staircase of the sorted row counts.
pub fn is_acm(inc: &Incidence) -> AcmVerdict {
    let order = |counts: Vec<usize>| {
        let mut idx: Vec<usize> = (0..counts.len()).collect();
        idx.sort_by(|&x, &y| counts[y].cmp(&counts[x]));
        idx
    };
    let rows = order(inc.row_counts());
    let cols = order(inc.col_counts());
    let p: Vec<usize> = rows.iter().map(|&i| inc.row_count(i)).collect();
    for (si, &i) in rows.iter().enumerate() {
        for (sj, &j) in cols.iter().enumerate() {
            let occupied = inc.contains(i, j);
            if occupied != (sj < p[si]) {
                return AcmVerdict::NotStaircase {
                    cell: (i, j),
                    occupied,
                };
            }
        }
    }
    let invert = |sorted: &[usize]| {
        let mut perm = vec![0; sorted.len()];
        for (pos, &orig) in sorted.iter().enumerate() {
            perm[orig] = pos;
        }
        perm
    };
    let profile = StaircaseProfile::from_row_counts(&p).expect("sorted counts of occupied lines");
    let (row_perm, col_perm) = (invert(&rows), invert(&cols));
    debug_assert_eq!(inc.permute(&row_perm, &col_perm), profile.incidence());
    AcmVerdict::Staircase {
        profile,
        row_perm,
        col_perm,
    }
}

/// `ΔM(i, j) = 1` iff `j < p_i`.
pub fn delta_acm(profile: &StaircaseProfile) -> DeltaMatrix {
    let p = &profile.row_counts;
    DeltaMatrix::from_fn(p.len(), p[0], |i, j| i64::from(j < p[i])).expect("p_0 >= 1")
}

/// Row addition to a staircase scheme. The caller vouches that `d` belongs
/// to one; the update rule then holds without further conditions.
pub fn acm_add_partial_row(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
) -> Result<LineAddition, EngineError> {
    let mut out = engine::add_partial_row(d, spec, Mode::Predict)?;
    out.verified = true;
    Ok(out)
}

pub fn acm_add_partial_col(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
) -> Result<LineAddition, EngineError> {
    let mut out = engine::add_partial_col(d, spec, Mode::Predict)?;
    out.verified = true;
    Ok(out)
}

pub fn acm_add_partial_line(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
) -> Result<LineAddition, EngineError> {
    match spec.direction() {
        Direction::Row => acm_add_partial_row(d, spec),
        Direction::Col => acm_add_partial_col(d, spec),
    }
}

/// All partitions with at most `max_parts` parts, each at most `max_part`.
pub fn partitions(max_parts: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, cap: usize, parts_left: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if parts_left == 0 {
            return;
        }
        for next in 1..=cap {
            prefix.push(next);
            go(prefix, next, parts_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), max_part, max_parts, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::bigraded::check_structure;

    fn grid(rows: &[&str]) -> Incidence {
        let cells: BTreeSet<_> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.chars()
                    .enumerate()
                    .filter(|&(_, c)| c == 'X')
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        Incidence::new(rows.len(), rows[0].len(), cells).unwrap()
    }

    #[test]
    fn conjugate_profiles() {
        let p = StaircaseProfile::from_row_counts(&[5, 5, 4, 3]).unwrap();
        assert_eq!(p.col_counts(), &[4, 4, 4, 3, 2]);
        assert_eq!(
            StaircaseProfile::from_col_counts(&[4, 4, 4, 3, 2]).unwrap(),
            p
        );
        assert_eq!(p.degree(), 17);
        assert!(StaircaseProfile::from_row_counts(&[1, 2]).is_err());
        assert!(StaircaseProfile::from_row_counts(&[2, 0]).is_err());
    }

    #[test]
    fn closed_form() {
        assert_eq!(
            delta_acm(&StaircaseProfile::from_row_counts(&[1]).unwrap()),
            DeltaMatrix::single_point()
        );
        let p = StaircaseProfile::from_row_counts(&[5, 5, 4, 3]).unwrap();
        assert_eq!(
            delta_acm(&p),
            DeltaMatrix::from_rows(&[
                [1, 1, 1, 1, 1],
                [1, 1, 1, 1, 1],
                [1, 1, 1, 1, 0],
                [1, 1, 1, 0, 0]
            ])
            .unwrap()
        );
        for rows in partitions(5, 5) {
            let p = StaircaseProfile::from_row_counts(&rows).unwrap();
            let d = delta_acm(&p);
            assert_eq!(delta_acm(&p.transpose()), d.transpose());
            assert!(check_structure(&d).passed());
            assert!(d.cells().all(|(_, _, v)| v >= 0));
            assert_eq!(d.degree() as usize, p.degree());
        }
    }

    #[test]
    fn detection() {
        assert!(is_acm(&Incidence::full(1, 1)).is_acm());
        assert!(is_acm(&grid(&["XXX..", "XXXX.", "XXXXX", "XXXXX"])).is_acm());
        assert_eq!(
            is_acm(&grid(&["..X", ".X.", "X.."])),
            AcmVerdict::NotStaircase {
                cell: (0, 0),
                occupied: false
            }
        );
        assert!(!is_acm(&grid(&[".XX", "X..", "X.."])).is_acm());
    }

    #[test]
    fn witness_permutations_rebuild_the_staircase() {
        let inc = grid(&["X.X", "XXX", "..X"]);
        let AcmVerdict::Staircase {
            profile,
            row_perm,
            col_perm,
        } = is_acm(&inc)
        else {
            panic!("staircase expected");
        };
        assert_eq!(profile.row_counts(), &[3, 2, 1]);
        assert_eq!(inc.permute(&row_perm, &col_perm), profile.incidence());
    }

    /// Shuffled staircases are recognised whatever the tie order.
    #[test]
    fn tie_order_is_irrelevant() {
        let base = Incidence::staircase(&[3, 3, 2, 2, 1]).unwrap();
        let row_perms = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 2, 4],
            [4, 3, 2, 1, 0],
            [2, 4, 0, 1, 3],
        ];
        let col_perms = [[0, 1, 2], [2, 1, 0], [1, 2, 0]];
        for rp in &row_perms {
            for cp in &col_perms {
                assert!(is_acm(&base.permute(rp, cp)).is_acm());
            }
        }
    }

    #[test]
    fn partition_enumeration() {
        // partitions fitting in a 2 x 2 box
        assert_eq!(
            partitions(2, 2),
            vec![vec![1], vec![1, 1], vec![2], vec![2, 1], vec![2, 2]]
        );
    }
}
