#![allow(dead_code)]

use std::collections::BTreeSet;

use quadric_hilbert::engine::LineStep;
use quadric_hilbert::oracle::{self, GridConfig, Incidence};
use quadric_hilbert::{DeltaMatrix, Direction, Field, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn grid(picture: &str) -> Incidence {
    let rows: Vec<&str> = picture.split_whitespace().collect();
    let cells: BTreeSet<(usize, usize)> = rows
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

pub fn delta(rows: &[&[i64]]) -> DeltaMatrix {
    DeltaMatrix::from_rows(rows).unwrap()
}

pub fn prime() -> Field {
    Field::Prime(PrimeField::default())
}

pub fn oracle_delta(inc: &Incidence, seed: u64, field: Field) -> DeltaMatrix {
    oracle::hilbert_matrix(&GridConfig::with_seed(inc.clone(), seed), field).unwrap()
}

/// Three points in general position, one on each line.
pub const ANTIDIAGONAL: &str = "..X .X. X..";
/// Two points on `R_0`, two more on `C_0`.
pub const HOOK: &str = ".XX X.. X..";

pub fn antidiagonal_delta() -> DeltaMatrix {
    delta(&[&[1, 1, 1], &[1, 0, -1], &[1, -1, 0]])
}

pub fn antidiagonal_extended() -> DeltaMatrix {
    delta(&[&[1, 1, 1], &[1, 1, -1], &[1, -1, 0], &[1, -1, 0]])
}

pub fn hook_delta() -> DeltaMatrix {
    delta(&[&[1, 1, 1], &[1, 0, 0], &[1, 0, -1]])
}

pub fn hook_extended() -> DeltaMatrix {
    delta(&[&[1, 1, 1], &[1, 1, 0], &[1, 0, -1], &[1, -1, 0]])
}

/// The 31-point scheme built line by line, `R_0` on top.
pub const BUILD31_FULL: &str = "
    ..X...XXX
    XX.XXX...
    XX..XX...
    .....X...
    XXXXX....
    XXXXX....
    XXXX.....
    XXX......";

/// Staircase on `R_4..R_7` with 5, 5, 4, 3 points.
pub const BUILD31_BASE_ROWS: [usize; 4] = [5, 5, 4, 3];

/// Columns hit when adding `R_3`, `R_2`, `R_1`, `R_0`, with the resulting
/// `n`.
pub const BUILD31_STEPS: [(usize, &[usize]); 4] = [
    (5, &[5]),
    (5, &[0, 1, 4, 5]),
    (5, &[0, 1, 3, 4, 5]),
    (8, &[2, 6, 7, 8]),
];

pub fn build31_matrices() -> [DeltaMatrix; 5] {
    [
        delta(&[
            &[1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 0],
            &[1, 1, 1, 0, 0],
        ]),
        delta(&[
            &[1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 0],
            &[1, 1, 1, 1, 1, -1],
            &[1, 1, 1, 1, -1, 0],
            &[1, 0, 0, -1, 0, 0],
        ]),
        delta(&[
            &[1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 0],
            &[1, 1, 1, 1, 1, -2],
            &[1, 1, 1, 1, -2, 0],
            &[1, 0, 0, -1, 0, 0],
        ]),
        delta(&[
            &[1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 0],
            &[1, 1, 1, 1, 1, -3],
            &[1, 1, 1, 1, -2, 0],
            &[1, 0, 0, -1, 0, 0],
        ]),
        delta(&[
            &[1, 1, 1, 1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 1, 0, 0, 0],
            &[1, 1, 1, 1, 1, 1, 0, 0, 0],
            &[1, 1, 1, 1, 1, 1, 0, 0, -1],
            &[1, 1, 1, 1, 1, 0, -1, -1, 0],
            &[1, 1, 1, 1, 1, -3, 0, 0, 0],
            &[1, 1, 1, 1, -3, -1, 0, 0, 0],
            &[1, 0, 0, -1, 0, 0, 0, 0, 0],
        ]),
    ]
}

/// A random configuration on at most `max x max` lines and a random new
/// line for it: every new line of the other ruling is hit, existing ones
/// with a random probability.
pub fn random_step(seed: u64, max: usize) -> (GridConfig, LineStep) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = rng.gen_range(1..=max);
    let cols = rng.gen_range(1..=max);
    let density = rng.gen_range(0.15..0.85);
    let cfg = oracle::random_config(rows, cols, density, seed).unwrap();
    let direction = if rng.gen_bool(0.5) {
        Direction::Row
    } else {
        Direction::Col
    };
    let existing = cfg.incidence().lines(direction.other());
    let extra = rng.gen_range(0..=2);
    let n = existing - 1 + extra;
    let keep = [0.3, 0.6, 0.85][rng.gen_range(0..3)];
    let mut hit: BTreeSet<usize> = (0..existing).filter(|_| rng.gen_bool(keep)).collect();
    hit.extend(existing..=n);
    if hit.is_empty() {
        hit.insert(rng.gen_range(0..existing));
    }
    (cfg, LineStep { direction, n, hit })
}

/// The configuration after `step`, with fresh coordinates for new lines. A
/// line with no points leaves the configuration unchanged.
pub fn extend(cfg: &GridConfig, step: &LineStep, seed: u64) -> GridConfig {
    if step.hit.is_empty() {
        return cfg.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    oracle::extend_with_line(
        cfg,
        step.direction,
        &step.hit,
        step.extra_lines(cfg.incidence()),
        &mut rng,
    )
    .unwrap()
}
