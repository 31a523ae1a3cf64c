//! Exact scalar arithmetic and column-prefix ranks.
//!
//! Two routes compute the same ranks: fraction-free (Bareiss) elimination
//! over the integers, which is the reference, and Gaussian elimination in a
//! prime field `F_p` with `p > 2^60`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Primes must exceed this bound.
pub const MIN_PRIME: u64 = 1 << 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is not above 2^60")]
    PrimeTooSmall(u64),
    #[error("coordinate {value} has no image mod {prime}")]
    NotInvertible { value: String, prime: u64 },
    #[error("distinct coordinates coincide mod {0}")]
    Collision(u64),
}

/// Field over which ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(PrimeField),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Prime(p) => write!(f, "F_{}", p.modulus()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= MIN_PRIME {
            return Err(FieldError::PrimeTooSmall(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// A uniformly drawn prime in `(2^60, 2^62)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let candidate = rng.gen_range(MIN_PRIME + 1..1u64 << 62) | 1;
            if is_prime(candidate) {
                return Self { p: candidate };
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    fn reduce(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// Image of a rational number, if its denominator is invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        let den = self.reduce(q.denom());
        if den == 0 {
            return Err(FieldError::NotInvertible {
                value: q.to_string(),
                prime: self.p,
            });
        }
        Ok(self.mul(self.reduce(q.numer()), self.inv(den)))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ranks of the column prefixes `[0, cut)` for each `cut` in `cuts`
/// (non-decreasing), by elimination in `F_p`.
pub fn prefix_ranks_mod_p(
    mut rows: Vec<Vec<u64>>,
    field: &PrimeField,
    cuts: &[usize],
) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(cuts.len());
    let mut rank = 0;
    let mut col = 0;
    for &cut in cuts {
        while col < cut.min(ncols) && rank < rows.len() {
            if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) {
                rows.swap(rank, pivot);
                let inv = field.inv(rows[rank][col]);
                let (top, below) = rows.split_at_mut(rank + 1);
                let pivot_row = &top[rank];
                for row in below.iter_mut() {
                    let lead = row[col];
                    if lead == 0 {
                        continue;
                    }
                    let factor = field.mul(lead, inv);
                    for l in col..ncols {
                        row[l] = field.sub(row[l], field.mul(factor, pivot_row[l]));
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        out.push(rank);
    }
    out
}

/// Ranks of the column prefixes `[0, cut)` for each `cut` in `cuts`
/// (non-decreasing), by fraction-free elimination over the integers.
pub fn prefix_ranks_bareiss(mut rows: Vec<Vec<BigInt>>, cuts: &[usize]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(cuts.len());
    let mut rank = 0;
    let mut col = 0;
    let mut prev_pivot = BigInt::from(1);
    for &cut in cuts {
        while col < cut.min(ncols) && rank < rows.len() {
            if let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
                rows.swap(rank, pivot);
                let (top, below) = rows.split_at_mut(rank + 1);
                let pivot_row = &top[rank];
                let p = &pivot_row[col];
                for row in below.iter_mut() {
                    let lead = std::mem::take(&mut row[col]);
                    for l in col + 1..ncols {
                        let num = &row[l] * p - &lead * &pivot_row[l];
                        let (q, r) = num.div_rem(&prev_pivot);
                        debug_assert!(r.is_zero(), "Bareiss division must be exact");
                        row[l] = q;
                    }
                }
                prev_pivot = pivot_row[col].clone();
                rank += 1;
            }
            col += 1;
        }
        out.push(rank);
    }
    out
}

/// Clears denominators row by row; rank is unchanged.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}
