//! Ground truth for the Hilbert function of a reduced point set supported on
//! a grid of (1,0)- and (0,1)-lines.
//!
//! `M(i,j)` is the rank of the evaluation map sending the `(i+1)(j+1)`
//! affine monomials `x^s y^t` (`s <= i`, `t <= j`) to their values at the
//! points. Everything is exact: integers via Bareiss elimination, or a
//! prime field above `2^60`.

mod config_file;
mod incidence;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bigraded::{delta_from_hilbert, DeltaMatrix, Direction};
use crate::field::{self, Field, FieldError, PrimeField};

pub use config_file::{parse_config, parse_rational, ConfigFile};
pub use incidence::Incidence;

/// Random coordinates are drawn from `1..=COORD_RANGE`.
pub const COORD_RANGE: i64 = 1 << 16;

const MAX_COORD_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("grid has no rows or no columns")]
    EmptyGrid,
    #[error("{direction} {index} contains no point")]
    UnoccupiedLine { direction: Direction, index: usize },
    #[error("point ({row}, {col}) lies outside the {rows}x{cols} grid")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{expected} {direction} coordinates needed, {found} given")]
    CoordinateCount {
        direction: Direction,
        expected: usize,
        found: usize,
    },
    #[error("duplicate {direction} coordinate {value} at index {index}")]
    DuplicateCoordinate {
        direction: Direction,
        index: usize,
        value: String,
    },
    #[error("density {0} is outside (0, 1]")]
    InfeasibleDensity(f64),
    #[error("no fresh coordinate found after {0} draws")]
    CoordinateCollision(usize),
    #[error("hit set is empty")]
    EmptyHit,
    #[error("hit index {index} is outside 0..={n}")]
    HitOutOfRange { index: usize, n: usize },
    #[error("new {direction} {index} must receive a point of the added line")]
    NewLineMissed { direction: Direction, index: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Reduced points on a grid: distinct coordinates for each occupied line
/// of either ruling, and the set of occupied intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    row_coords: Vec<BigRational>,
    col_coords: Vec<BigRational>,
    incidence: Incidence,
}

impl GridConfig {
    pub fn new(
        row_coords: Vec<BigRational>,
        col_coords: Vec<BigRational>,
        incidence: Incidence,
    ) -> Result<Self, ConfigError> {
        check_coords(Direction::Row, &row_coords, incidence.rows())?;
        check_coords(Direction::Col, &col_coords, incidence.cols())?;
        Ok(Self {
            row_coords,
            col_coords,
            incidence,
        })
    }

    /// Attaches distinct random integer coordinates.
    pub fn with_random_coords<R: Rng + ?Sized>(incidence: Incidence, rng: &mut R) -> Self {
        let row_coords = fresh_coords(rng, &[], incidence.rows());
        let col_coords = fresh_coords(rng, &[], incidence.cols());
        Self {
            row_coords,
            col_coords,
            incidence,
        }
    }

    pub fn with_seed(incidence: Incidence, seed: u64) -> Self {
        Self::with_random_coords(incidence, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    pub fn row_coords(&self) -> &[BigRational] {
        &self.row_coords
    }

    pub fn col_coords(&self) -> &[BigRational] {
        &self.col_coords
    }

    pub fn degree(&self) -> usize {
        self.incidence.degree()
    }

    /// Affine coordinates `(x, y)` of every point, row-major.
    pub fn points(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> + '_ {
        self.incidence
            .cells()
            .map(|(i, j)| (&self.row_coords[i], &self.col_coords[j]))
    }

    /// Exchanges the two factors.
    pub fn swap(&self) -> Self {
        Self {
            row_coords: self.col_coords.clone(),
            col_coords: self.row_coords.clone(),
            incidence: self.incidence.transpose(),
        }
    }
}

fn check_coords(
    direction: Direction,
    coords: &[BigRational],
    expected: usize,
) -> Result<(), ConfigError> {
    if coords.len() != expected {
        return Err(ConfigError::CoordinateCount {
            direction,
            expected,
            found: coords.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for (index, c) in coords.iter().enumerate() {
        if !seen.insert(c) {
            return Err(ConfigError::DuplicateCoordinate {
                direction,
                index,
                value: c.to_string(),
            });
        }
    }
    Ok(())
}

fn draw_fresh<R: Rng + ?Sized>(
    rng: &mut R,
    taken: &BTreeSet<BigRational>,
) -> Result<BigRational, ConfigError> {
    for _ in 0..MAX_COORD_RETRIES {
        let c = BigRational::from_integer(BigInt::from(rng.gen_range(1..=COORD_RANGE)));
        if !taken.contains(&c) {
            return Ok(c);
        }
    }
    Err(ConfigError::CoordinateCollision(MAX_COORD_RETRIES))
}

fn fresh_coords<R: Rng + ?Sized>(
    rng: &mut R,
    existing: &[BigRational],
    count: usize,
) -> Vec<BigRational> {
    try_fresh_coords(rng, existing, count).expect("coordinate range exceeds any realistic grid")
}

fn try_fresh_coords<R: Rng + ?Sized>(
    rng: &mut R,
    existing: &[BigRational],
    count: usize,
) -> Result<Vec<BigRational>, ConfigError> {
    let mut taken: BTreeSet<BigRational> = existing.iter().cloned().collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let c = draw_fresh(rng, &taken)?;
        taken.insert(c.clone());
        out.push(c);
    }
    Ok(out)
}

/// `M(i, j)` for the given point set.
pub fn evaluation_rank(
    cfg: &GridConfig,
    field: Field,
    i: usize,
    j: usize,
) -> Result<usize, FieldError> {
    Ok(*hilbert_row(cfg, field, i, j + 1)?
        .last()
        .expect("at least one column"))
}

/// `M(i, 0..cols)`. Monomials are ordered by `y`-degree first, so every
/// `M(i, t)` is the rank of a column prefix of one matrix.
fn hilbert_row(
    cfg: &GridConfig,
    field: Field,
    i: usize,
    cols: usize,
) -> Result<Vec<usize>, FieldError> {
    let cuts: Vec<usize> = (1..=cols).map(|t| t * (i + 1)).collect();
    let ranks = match field {
        Field::Rational => {
            let rows: Vec<Vec<BigRational>> = cfg
                .points()
                .map(|(x, y)| monomial_row(x, y, i, cols, BigRational::one(), |a, b| a * b))
                .collect();
            field::prefix_ranks_bareiss(field::integer_rows(&rows), &cuts)
        }
        Field::Prime(f) => {
            let xs = images(&f, cfg.row_coords())?;
            let ys = images(&f, cfg.col_coords())?;
            let rows: Vec<Vec<u64>> = cfg
                .incidence()
                .cells()
                .map(|(r, c)| monomial_row(&xs[r], &ys[c], i, cols, 1u64, |a, b| f.mul(*a, *b)))
                .collect();
            field::prefix_ranks_mod_p(rows, &f, &cuts)
        }
    };
    Ok(ranks)
}

/// `[x^s y^t]` for `t < cols`, `s <= i`, `t`-major.
fn monomial_row<T: Clone>(
    x: &T,
    y: &T,
    i: usize,
    cols: usize,
    one: T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let mut x_pows = vec![one.clone()];
    for s in 1..=i {
        x_pows.push(mul(&x_pows[s - 1], x));
    }
    let mut row = Vec::with_capacity(cols * (i + 1));
    let mut y_pow = one;
    for _ in 0..cols {
        row.extend(x_pows.iter().map(|xp| mul(xp, &y_pow)));
        y_pow = mul(&y_pow, y);
    }
    row
}

fn images(f: &PrimeField, coords: &[BigRational]) -> Result<Vec<u64>, FieldError> {
    let imgs = coords
        .iter()
        .map(|c| f.from_rational(c))
        .collect::<Result<Vec<_>, _>>()?;
    let distinct: BTreeSet<_> = imgs.iter().collect();
    if distinct.len() != imgs.len() {
        return Err(FieldError::Collision(f.modulus()));
    }
    Ok(imgs)
}

/// Raw values `M(i, j)` on `[0, rows) x [0, cols)`.
pub fn hilbert_values(
    cfg: &GridConfig,
    field: Field,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<i64>>, FieldError> {
    (0..rows)
        .map(|i| {
            Ok(hilbert_row(cfg, field, i, cols)?
                .into_iter()
                .map(|r| r as i64)
                .collect())
        })
        .collect()
}

/// First difference of the Hilbert function of `cfg`, computed from ranks
/// on the window `[0, #rows] x [0, #cols]`. The extra row and column are
/// stabilized because the first difference vanishes past the occupied
/// lines.
pub fn hilbert_matrix(cfg: &GridConfig, field: Field) -> Result<DeltaMatrix, FieldError> {
    let inc = cfg.incidence();
    let values = hilbert_values(cfg, field, inc.rows() + 1, inc.cols() + 1)?;
    let delta =
        delta_from_hilbert(&values).expect("Hilbert values stabilize past the occupied lines");
    assert_eq!(
        delta.degree(),
        cfg.degree() as i64,
        "first difference must sum to the number of points"
    );
    Ok(delta)
}

/// Random incidence on a `rows x cols` grid: each cell is occupied with
/// probability `density`, then every empty line receives one random point.
pub fn random_config(
    rows: usize,
    cols: usize,
    density: f64,
    seed: u64,
) -> Result<GridConfig, ConfigError> {
    if rows == 0 || cols == 0 {
        return Err(ConfigError::EmptyGrid);
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(ConfigError::InfeasibleDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = BTreeSet::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                cells.insert((i, j));
            }
        }
    }
    for i in 0..rows {
        if !cells.iter().any(|&(r, _)| r == i) {
            cells.insert((i, rng.gen_range(0..cols)));
        }
    }
    for j in 0..cols {
        if !cells.iter().any(|&(_, c)| c == j) {
            cells.insert((rng.gen_range(0..rows), j));
        }
    }
    let incidence = Incidence::new(rows, cols, cells)?;
    Ok(GridConfig::with_random_coords(incidence, &mut rng))
}

/// Adds points on a new line disjoint from `cfg`.
///
/// For `Direction::Row` the new (1,0)-line meets the (0,1)-lines listed in
/// `hit`, which index `0..=n` with `n = b + extra_lines`; the new columns
/// `b+1..=n` are appended and must all be hit. `Direction::Col` is the
/// transposed construction. New lines get fresh random coordinates and are
/// appended after the existing ones.
pub fn extend_with_line<R: Rng + ?Sized>(
    cfg: &GridConfig,
    direction: Direction,
    hit: &BTreeSet<usize>,
    extra_lines: usize,
    rng: &mut R,
) -> Result<GridConfig, ConfigError> {
    if direction == Direction::Col {
        return Ok(extend_with_line(&cfg.swap(), Direction::Row, hit, extra_lines, rng)?.swap());
    }
    let old_cols = cfg.incidence.cols();
    let n = old_cols - 1 + extra_lines;
    if hit.is_empty() {
        return Err(ConfigError::EmptyHit);
    }
    if let Some(&index) = hit.iter().find(|&&h| h > n) {
        return Err(ConfigError::HitOutOfRange { index, n });
    }
    if let Some(index) = (old_cols..=n).find(|c| !hit.contains(c)) {
        return Err(ConfigError::NewLineMissed {
            direction: Direction::Col,
            index,
        });
    }
    let mut row_coords = cfg.row_coords.clone();
    row_coords.extend(try_fresh_coords(rng, &cfg.row_coords, 1)?);
    let mut col_coords = cfg.col_coords.clone();
    col_coords.extend(try_fresh_coords(rng, &cfg.col_coords, extra_lines)?);

    let new_row = cfg.incidence.rows();
    let mut cells: BTreeSet<_> = cfg.incidence.cells().collect();
    cells.extend(hit.iter().map(|&c| (new_row, c)));
    let incidence = Incidence::new(new_row + 1, n + 1, cells)?;
    GridConfig::new(row_coords, col_coords, incidence)
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GridConfig {
    /// Same incidence with coordinates `0, 1, 2, ...`; convenient for
    /// configurations whose Hilbert function does not depend on position.
    pub fn with_consecutive_coords(incidence: Incidence) -> Self {
        let row_coords = (0..incidence.rows() as i64).map(rational).collect();
        let col_coords = (0..incidence.cols() as i64).map(rational).collect();
        Self {
            row_coords,
            col_coords,
            incidence,
        }
    }
}
