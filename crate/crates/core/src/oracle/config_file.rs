//! Text format for point configurations.
//!
//! ```text
//! # three points on an antidiagonal
//! seed: 7
//! prime: 2305843009213693951
//! grid:
//! ..X
//! .X.
//! X..
//! rowcoords: 1 2 3
//! colcoords: 1/2 -4 0.75
//! ```
//!
//! The top grid row is `R_0` and the left column `C_0`. Coordinates are
//! optional; missing ones are drawn at random from the seed.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ConfigError, GridConfig, Incidence};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub grid: Option<Incidence>,
    /// Line of the `grid:` header.
    pub grid_line: usize,
    pub row_coords: Option<Vec<BigRational>>,
    pub col_coords: Option<Vec<BigRational>>,
    pub seed: Option<u64>,
    pub prime: Option<u64>,
}

impl ConfigFile {
    /// Builds the configuration, drawing any missing coordinates from
    /// `seed`.
    pub fn to_grid_config(&self, seed: u64) -> Result<GridConfig, ConfigError> {
        let incidence = self
            .grid
            .clone()
            .ok_or_else(|| parse_err(0, "missing `grid:` block"))?;
        let random =
            GridConfig::with_random_coords(incidence.clone(), &mut ChaCha8Rng::seed_from_u64(seed));
        let rows = self
            .row_coords
            .clone()
            .unwrap_or_else(|| random.row_coords().to_vec());
        let cols = self
            .col_coords
            .clone()
            .unwrap_or_else(|| random.col_coords().to_vec());
        GridConfig::new(rows, cols, incidence)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.into(),
    }
}

fn is_grid_line(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c == '.' || c == 'X')
}

/// Parses a configuration file. Line numbers in errors are 1-based.
pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = ConfigFile::default();
    let mut k = 0;
    while k < lines.len() {
        let line_no = k + 1;
        let line = strip_comment(lines[k]);
        k += 1;
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(parse_err(
                line_no,
                format!("expected `key: value`, found {line:?}"),
            ));
        };
        let value = value.trim();
        match key.trim() {
            "grid" => {
                if out.grid.is_some() {
                    return Err(parse_err(line_no, "duplicate `grid:` block"));
                }
                if !value.is_empty() {
                    return Err(parse_err(
                        line_no,
                        "grid rows start on the line after `grid:`",
                    ));
                }
                let mut cells = BTreeSet::new();
                let mut width = None;
                let mut rows = 0;
                while k < lines.len() {
                    let row = strip_comment(lines[k]);
                    if row.is_empty() || row.contains(':') {
                        break;
                    }
                    if !is_grid_line(row) {
                        return Err(parse_err(
                            k + 1,
                            format!("grid rows use only '.' and 'X', found {row:?}"),
                        ));
                    }
                    match width {
                        None => width = Some(row.len()),
                        Some(w) if w != row.len() => {
                            return Err(parse_err(
                                k + 1,
                                format!("ragged grid: expected {w} columns, found {}", row.len()),
                            ))
                        }
                        Some(_) => {}
                    }
                    cells.extend(
                        row.chars()
                            .enumerate()
                            .filter(|&(_, c)| c == 'X')
                            .map(|(j, _)| (rows, j)),
                    );
                    rows += 1;
                    k += 1;
                }
                let Some(cols) = width else {
                    return Err(parse_err(line_no, "empty grid"));
                };
                out.grid = Some(Incidence::new(rows, cols, cells)?);
                out.grid_line = line_no;
            }
            "rowcoords" => out.row_coords = Some(parse_coords(value, line_no)?),
            "colcoords" => out.col_coords = Some(parse_coords(value, line_no)?),
            "seed" => {
                out.seed = Some(
                    value
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad seed {value:?}")))?,
                )
            }
            "prime" => {
                out.prime = Some(
                    value
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad prime {value:?}")))?,
                )
            }
            other => return Err(parse_err(line_no, format!("unknown key {other:?}"))),
        }
    }
    if let Some(grid) = &out.grid {
        for (direction, coords, expected) in [
            (crate::Direction::Row, &out.row_coords, grid.rows()),
            (crate::Direction::Col, &out.col_coords, grid.cols()),
        ] {
            if let Some(c) = coords {
                if c.len() != expected {
                    return Err(ConfigError::CoordinateCount {
                        direction,
                        expected,
                        found: c.len(),
                    });
                }
                let mut seen = BTreeSet::new();
                if let Some(index) = c.iter().position(|x| !seen.insert(x)) {
                    return Err(ConfigError::DuplicateCoordinate {
                        direction,
                        index,
                        value: c[index].to_string(),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_coords(value: &str, line: usize) -> Result<Vec<BigRational>, ConfigError> {
    value
        .split_whitespace()
        .map(|tok| {
            parse_rational(tok).ok_or_else(|| parse_err(line, format!("bad rational {tok:?}")))
        })
        .collect()
}

/// Parses `7`, `-3/4` or `0.125`.
pub fn parse_rational(tok: &str) -> Option<BigRational> {
    if let Some((n, d)) = tok.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            s => s.parse().ok()?,
        };
        let scale: BigInt = BigInt::from(10).pow(frac.len() as u32);
        let magnitude = int_part * &scale + frac.parse::<BigInt>().ok()?;
        let numer = if negative { -magnitude } else { magnitude };
        return Some(BigRational::new(numer, scale));
    }
    tok.parse::<BigInt>().ok().map(BigRational::from_integer)
}
