//! Necessary conditions on the first difference of a Hilbert function.

use std::fmt;

use super::DeltaMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureCondition {
    /// `c(i,j) <= 1`, zero far out.
    Bounded,
    /// Once an entry is `<= 0`, every entry weakly south-east of it is too.
    NonPositiveCone,
    /// Row and column partial sums are non-negative and non-increasing.
    PartialSums,
}

impl fmt::Display for StructureCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureCondition::Bounded => f.write_str("condition 1 (entries at most 1)"),
            StructureCondition::NonPositiveCone => {
                f.write_str("condition 2 (non-positive entries dominate their south-east cone)")
            }
            StructureCondition::PartialSums => {
                f.write_str("condition 3 (partial sums non-negative and non-increasing)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: StructureCondition,
    /// Witness cells: for the cone condition the non-positive cell and the
    /// positive cell beyond it; otherwise the offending cell.
    pub cells: Vec<(usize, usize)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub violation: Option<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => f.write_str("pass"),
            Some(v) => write!(f, "fail: {}: {}", v.condition, v.detail),
        }
    }
}

/// Checks the three structural conditions every first difference of a
/// 0-dimensional scheme satisfies, reporting the first failure found.
///
/// Cells are scanned on the support rectangle plus one guard row and column;
/// past that every row and column partial sum is constant.
pub fn check_structure(d: &DeltaMatrix) -> CheckReport {
    let violation = bounded(d)
        .or_else(|| non_positive_cone(d))
        .or_else(|| partial_sums(d));
    CheckReport { violation }
}

fn bounded(d: &DeltaMatrix) -> Option<Violation> {
    d.cells()
        .find(|&(_, _, v)| v > 1)
        .map(|(i, j, v)| Violation {
            condition: StructureCondition::Bounded,
            cells: vec![(i, j)],
            detail: format!("entry ({i},{j}) = {v}"),
        })
}

fn non_positive_cone(d: &DeltaMatrix) -> Option<Violation> {
    for (i, j, v) in d.cells() {
        if v > 0 {
            continue;
        }
        for r in i..d.rows() {
            for s in j..d.cols() {
                let w = d.get(r, s);
                if w > 0 {
                    return Some(Violation {
                        condition: StructureCondition::NonPositiveCone,
                        cells: vec![(i, j), (r, s)],
                        detail: format!("entry ({i},{j}) = {v} but ({r},{s}) = {w}"),
                    });
                }
            }
        }
    }
    None
}

fn partial_sums(d: &DeltaMatrix) -> Option<Violation> {
    let (rows, cols) = (d.rows() + 1, d.cols() + 1);
    // along[i][j] = sum_{t<=j} c(i,t); down[i][j] = sum_{t<=i} c(t,j)
    let mut along = vec![vec![0i64; cols]; rows];
    let mut down = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            along[i][j] = d.get(i, j) + if j > 0 { along[i][j - 1] } else { 0 };
            down[i][j] = d.get(i, j) + if i > 0 { down[i - 1][j] } else { 0 };
        }
    }
    let fail = |i: usize, j: usize, detail: String| Violation {
        condition: StructureCondition::PartialSums,
        cells: vec![(i, j)],
        detail,
    };
    for i in 0..rows {
        for j in 0..cols {
            let s = along[i][j];
            if s < 0 {
                return Some(fail(i, j, format!("row sum of c({i},0..={j}) = {s} < 0")));
            }
            if i > 0 && s > along[i - 1][j] {
                let prev = along[i - 1][j];
                return Some(fail(
                    i,
                    j,
                    format!(
                        "row sum of c({i},0..={j}) = {s} exceeds row {} sum {prev}",
                        i - 1
                    ),
                ));
            }
            let t = down[i][j];
            if t < 0 {
                return Some(fail(
                    i,
                    j,
                    format!("column sum of c(0..={i},{j}) = {t} < 0"),
                ));
            }
            if j > 0 && t > down[i][j - 1] {
                let prev = down[i][j - 1];
                return Some(fail(
                    i,
                    j,
                    format!(
                        "column sum of c(0..={i},{j}) = {t} exceeds column {} sum {prev}",
                        j - 1
                    ),
                ));
            }
        }
    }
    None
}
