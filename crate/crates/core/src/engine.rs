//! Incremental update of `ΔM` when the points of one new line are added.
//!
//! Adding a (1,0)-line `R` that meets the (0,1)-lines `C_0..C_n` except the
//! `r` lines `C_{j_1}, ..., C_{j_r}` (carrying `q_1 <= ... <= q_r` points of
//! `X`) gives, under one of three vanishing conditions on `ΔM_X`,
//!
//! ```text
//! ΔM_Z(0, j) = 1                                for j <= n
//! ΔM_Z(i, j) = ΔM_X(i-1, j) - [(i, j) in T]     for i >= 1
//! T = {(q_1, n), (q_2, n-1), ..., (q_r, n-r+1)}
//! ```
//!
//! The engine only sees `ΔM_X` and the counts `q_k`; it cannot check that
//! they describe the same scheme. Column additions run on the transpose.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bigraded::{DeltaMatrix, Direction};
use crate::oracle::Incidence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("target index {n} is below the current support bound {bound}")]
    IndexTooSmall { n: usize, bound: usize },
    #[error("excluded line {index} lies outside 0..={bound}")]
    ExcludedOutOfRange { index: usize, bound: usize },
    #[error("excluded line {0} listed twice")]
    DuplicateExcluded(usize),
    #[error("excluded line {0} carries no points")]
    ZeroCount(usize),
    #[error("expected a {expected} addition, got a {found} addition")]
    WrongDirection {
        expected: Direction,
        found: Direction,
    },
    #[error("hit line {index} lies outside 0..={n}")]
    HitOutOfRange { index: usize, n: usize },
    #[error("new line {index} must be hit")]
    NewLineMissed { index: usize },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(Witness),
}

/// Lines of the other ruling that the new line misses, with the number of
/// points of `X` on each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineAdditionSpec {
    direction: Direction,
    n: usize,
    /// `(line index, point count)`, stably sorted by count.
    excluded: Vec<(usize, usize)>,
}

impl LineAdditionSpec {
    pub fn new(
        direction: Direction,
        n: usize,
        mut excluded: Vec<(usize, usize)>,
    ) -> Result<Self, EngineError> {
        let mut seen = BTreeSet::new();
        for &(index, count) in &excluded {
            if !seen.insert(index) {
                return Err(EngineError::DuplicateExcluded(index));
            }
            if count == 0 {
                return Err(EngineError::ZeroCount(index));
            }
            if index > n {
                return Err(EngineError::ExcludedOutOfRange { index, bound: n });
            }
        }
        excluded.sort_by_key(|&(_, count)| count);
        Ok(Self {
            direction,
            n,
            excluded,
        })
    }

    /// Spec for a new line of `direction` meeting the lines `hit` of the
    /// other ruling, numbered `0..=n`. Existing lines keep their indices;
    /// indices past the grid are new lines and must all be hit.
    pub fn from_incidence(
        inc: &Incidence,
        direction: Direction,
        n: usize,
        hit: &BTreeSet<usize>,
    ) -> Result<Self, EngineError> {
        let other = direction.other();
        let existing = inc.lines(other);
        if n + 1 < existing {
            return Err(EngineError::IndexTooSmall {
                n,
                bound: existing - 1,
            });
        }
        if let Some(&index) = hit.iter().find(|&&h| h > n) {
            return Err(EngineError::HitOutOfRange { index, n });
        }
        if let Some(index) = (existing..=n).find(|c| !hit.contains(c)) {
            return Err(EngineError::NewLineMissed { index });
        }
        let excluded = (0..existing)
            .filter(|c| !hit.contains(c))
            .map(|c| (c, inc.line_count(other, c)))
            .collect();
        Self::new(direction, n, excluded)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn excluded(&self) -> &[(usize, usize)] {
        &self.excluded
    }

    pub fn r(&self) -> usize {
        self.excluded.len()
    }

    /// `q_1 <= ... <= q_r`.
    pub fn counts(&self) -> Vec<usize> {
        self.excluded.iter().map(|&(_, q)| q).collect()
    }

    /// `q_k`, 1-based.
    fn q(&self, k: usize) -> usize {
        self.excluded[k - 1].1
    }

    fn as_row(&self) -> Self {
        Self {
            direction: Direction::Row,
            ..self.clone()
        }
    }
}

/// Positions where the shifted `ΔM_X` drops by one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionSet(pub Vec<(usize, usize)>);

impl ExceptionSet {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.0.contains(&(i, j))
    }

    fn transpose(&self) -> Self {
        Self(self.0.iter().map(|&(i, j)| (j, i)).collect())
    }
}

/// A nonzero `ΔM_X` entry that breaks the vanishing condition for `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: usize,
    pub cell: (usize, usize),
    pub value: i64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k = {}: ΔM_X({}, {}) = {} is nonzero",
            self.k, self.cell.0, self.cell.1, self.value
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HypothesisVerdict {
    /// `r = 0`: the new line meets every line of the other ruling.
    FullLine,
    Cond1,
    Cond2,
    Cond3,
    NotSatisfied(Witness),
}

impl HypothesisVerdict {
    pub fn is_satisfied(&self) -> bool {
        !matches!(self, HypothesisVerdict::NotSatisfied(_))
    }

    fn transpose(self) -> Self {
        match self {
            HypothesisVerdict::NotSatisfied(w) => HypothesisVerdict::NotSatisfied(Witness {
                cell: (w.cell.1, w.cell.0),
                ..w
            }),
            other => other,
        }
    }
}

impl fmt::Display for HypothesisVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisVerdict::FullLine => f.write_str("no excluded lines"),
            HypothesisVerdict::Cond1 => f.write_str("condition 1 (one excluded line)"),
            HypothesisVerdict::Cond2 => {
                f.write_str("condition 2 (q_{r-1} < q_r, vanishing for k < r)")
            }
            HypothesisVerdict::Cond3 => {
                f.write_str("condition 3 (q_{r-1} = q_r, vanishing for k <= r)")
            }
            HypothesisVerdict::NotSatisfied(w) => write!(f, "not satisfied, {w}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Refuse when the hypothesis fails.
    Strict,
    /// Always apply the formula; the result is flagged unverified when the
    /// hypothesis fails.
    Predict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineAddition {
    #[serde(serialize_with = "crate::format::serialize_delta")]
    pub delta: DeltaMatrix,
    pub exceptions: ExceptionSet,
    pub verdict: HypothesisVerdict,
    /// True when the result is backed by a theorem: the hypothesis holds,
    /// or the caller vouched for it (staircase schemes).
    pub verified: bool,
}

/// Adds a new (1,0)-line meeting `C_0..C_n`, all of them full of new points.
pub fn add_full_row(d: &DeltaMatrix, n: usize) -> Result<DeltaMatrix, EngineError> {
    if n < d.b() {
        return Err(EngineError::IndexTooSmall { n, bound: d.b() });
    }
    Ok(shifted(d, n, &ExceptionSet(Vec::new())))
}

pub fn add_full_col(d: &DeltaMatrix, m: usize) -> Result<DeltaMatrix, EngineError> {
    Ok(add_full_row(&d.transpose(), m)?.transpose())
}

fn shifted(d: &DeltaMatrix, n: usize, t: &ExceptionSet) -> DeltaMatrix {
    DeltaMatrix::from_fn(d.rows() + 1, n + 1, |i, j| {
        if i == 0 {
            1
        } else {
            d.get(i - 1, j) - i64::from(t.contains(i, j))
        }
    })
    .expect("row 0 is all ones and no entry grows")
}

fn check_bounds(d: &DeltaMatrix, spec: &LineAdditionSpec) -> Result<(), EngineError> {
    let bound = match spec.direction {
        Direction::Row => d.b(),
        Direction::Col => d.a(),
    };
    if spec.n < bound {
        return Err(EngineError::IndexTooSmall { n: spec.n, bound });
    }
    if let Some(&(index, _)) = spec.excluded.iter().find(|&&(index, _)| index > bound) {
        return Err(EngineError::ExcludedOutOfRange { index, bound });
    }
    Ok(())
}

/// `T = {(q_k, n-k+1)}` for a row addition, `{(m-k+1, p_k)}` for a column
/// addition.
pub fn exception_set(spec: &LineAdditionSpec) -> ExceptionSet {
    let t = ExceptionSet(
        (1..=spec.r())
            .map(|k| (spec.q(k), spec.n + 1 - k))
            .collect(),
    );
    let distinct: BTreeSet<_> = t.0.iter().collect();
    assert_eq!(
        distinct.len(),
        t.0.len(),
        "exception positions must be distinct"
    );
    match spec.direction {
        Direction::Row => t,
        Direction::Col => t.transpose(),
    }
}

/// Which of the three conditions of the update rule holds, if any.
pub fn hypothesis_holds(d: &DeltaMatrix, spec: &LineAdditionSpec) -> HypothesisVerdict {
    if spec.direction == Direction::Col {
        return hypothesis_holds(&d.transpose(), &spec.as_row()).transpose();
    }
    let r = spec.r();
    match r {
        0 => return HypothesisVerdict::FullLine,
        1 => return HypothesisVerdict::Cond1,
        _ => {}
    }
    let tied = spec.q(r - 1) == spec.q(r);
    let last_k = if tied { r } else { r - 1 };
    for k in 1..=last_k {
        let Some(j) = (spec.n + 1).checked_sub(k) else {
            break;
        };
        if let Some(i) = (spec.q(k)..d.rows()).find(|&i| d.get(i, j) != 0) {
            return HypothesisVerdict::NotSatisfied(Witness {
                k,
                cell: (i, j),
                value: d.get(i, j),
            });
        }
    }
    if tied {
        HypothesisVerdict::Cond3
    } else {
        HypothesisVerdict::Cond2
    }
}

/// Applies the update rule for a new (1,0)-line.
pub fn add_partial_row(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
    mode: Mode,
) -> Result<LineAddition, EngineError> {
    if spec.direction != Direction::Row {
        return Err(EngineError::WrongDirection {
            expected: Direction::Row,
            found: spec.direction,
        });
    }
    apply(d, spec, mode)
}

/// Applies the update rule for a new (0,1)-line.
pub fn add_partial_col(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
    mode: Mode,
) -> Result<LineAddition, EngineError> {
    if spec.direction != Direction::Col {
        return Err(EngineError::WrongDirection {
            expected: Direction::Col,
            found: spec.direction,
        });
    }
    apply(d, spec, mode)
}

/// Either direction.
pub fn add_partial_line(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
    mode: Mode,
) -> Result<LineAddition, EngineError> {
    apply(d, spec, mode)
}

fn apply(
    d: &DeltaMatrix,
    spec: &LineAdditionSpec,
    mode: Mode,
) -> Result<LineAddition, EngineError> {
    check_bounds(d, spec)?;
    let verdict = hypothesis_holds(d, spec);
    if let (Mode::Strict, HypothesisVerdict::NotSatisfied(w)) = (mode, verdict) {
        return Err(EngineError::HypothesisNotMet(w));
    }
    let exceptions = exception_set(spec);
    // the new line carries no points, so Z = X
    let delta = if spec.r() == spec.n + 1 {
        d.clone()
    } else {
        match spec.direction {
            Direction::Row => shifted(d, spec.n, &exceptions),
            Direction::Col => shifted(&d.transpose(), spec.n, &exceptions.transpose()).transpose(),
        }
    };
    Ok(LineAddition {
        delta,
        exceptions,
        verdict,
        verified: verdict.is_satisfied(),
    })
}

/// Slack condition on `n` that implies the vanishing conditions.
pub fn sufficient_condition(d: &DeltaMatrix, spec: &LineAdditionSpec) -> bool {
    let r = spec.r();
    if r <= 1 {
        return true;
    }
    let bound = match spec.direction {
        Direction::Row => d.b(),
        Direction::Col => d.a(),
    };
    if spec.q(r - 1) < spec.q(r) {
        spec.n + 1 >= bound + r
    } else {
        spec.n >= bound + r
    }
}

/// `add-row n=<int> hit=<comma-separated indices>` or the `add-col` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineStep {
    pub direction: Direction,
    pub n: usize,
    pub hit: BTreeSet<usize>,
}

impl LineStep {
    pub fn to_spec(&self, inc: &Incidence) -> Result<LineAdditionSpec, EngineError> {
        LineAdditionSpec::from_incidence(inc, self.direction, self.n, &self.hit)
    }

    /// Lines of the other ruling created by this step.
    pub fn extra_lines(&self, inc: &Incidence) -> usize {
        (self.n + 1).saturating_sub(inc.lines(self.direction.other()))
    }
}

impl fmt::Display for LineStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match self.direction {
            Direction::Row => "add-row",
            Direction::Col => "add-col",
        };
        let hit: Vec<String> = self.hit.iter().map(|h| h.to_string()).collect();
        write!(f, "{verb} n={} hit={}", self.n, hit.join(","))
    }
}

impl FromStr for LineStep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let direction = match words.next() {
            Some("add-row") => Direction::Row,
            Some("add-col") => Direction::Col,
            other => return Err(format!("expected `add-row` or `add-col`, found {other:?}")),
        };
        let (mut n, mut hit) = (None, None);
        for word in words {
            match word.split_once('=') {
                Some(("n", v)) => {
                    n = Some(v.parse::<usize>().map_err(|_| format!("bad index n={v}"))?)
                }
                Some(("hit", "")) => hit = Some(BTreeSet::new()),
                Some(("hit", v)) => {
                    hit = Some(
                        v.split(',')
                            .map(|x| {
                                x.trim()
                                    .parse::<usize>()
                                    .map_err(|_| format!("bad hit index {x:?}"))
                            })
                            .collect::<Result<_, _>>()?,
                    )
                }
                _ => return Err(format!("unexpected {word:?}")),
            }
        }
        Ok(Self {
            direction,
            n: n.ok_or("missing n=")?,
            hit: hit.ok_or("missing hit=")?,
        })
    }
}
