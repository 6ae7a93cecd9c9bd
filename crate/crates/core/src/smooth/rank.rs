//! Exponent vectors of nonzero rationals and their rank over ℚ.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::{domain, Error, Result};

/// `sign · Π prime^exponent`, zero exponents never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    pub sign: i8,
    pub entries: BTreeMap<u64, i32>,
}

impl ExponentVector {
    pub fn from_ratio(value: Ratio<i64>) -> Result<Self> {
        if value.is_zero() {
            return domain("zero has no exponent vector");
        }
        let sign = if value.is_negative() { -1 } else { 1 };
        let mut entries = BTreeMap::new();
        for (q, e) in arith::factor(value.numer().unsigned_abs())? {
            entries.insert(q, e as i32);
        }
        for (q, e) in arith::factor(value.denom().unsigned_abs())? {
            *entries.entry(q).or_insert(0) -= e as i32;
        }
        entries.retain(|_, e| *e != 0);
        Ok(Self { sign, entries })
    }

    pub fn from_integer(n: i64) -> Result<Self> {
        Self::from_ratio(Ratio::from_integer(n))
    }

    /// The rational this vector encodes, if it fits in `i64` parts.
    pub fn to_ratio(&self) -> Option<Ratio<i64>> {
        let mut num = 1i64;
        let mut den = 1i64;
        for (&q, &e) in &self.entries {
            let pw = (q as i64).checked_pow(e.unsigned_abs())?;
            if e > 0 {
                num = num.checked_mul(pw)?;
            } else {
                den = den.checked_mul(pw)?;
            }
        }
        Some(Ratio::new(self.sign as i64 * num, den))
    }

    pub fn is_unit(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Rank of a set of exponent vectors, with a greedy maximal independent subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub basis: Vec<usize>,
}

/// Echelon basis over ℚ kept in integer rows, each divided by its content.
///
/// Every row is zero at the pivots of the rows before it, so one forward
/// pass reduces a new vector.
#[derive(Debug, Clone, Default)]
pub struct IncrementalRank {
    columns: HashMap<u64, usize>,
    rows: Vec<(usize, Vec<i128>)>,
}

impl IncrementalRank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a vector; returns whether it raised the rank.
    pub fn insert(&mut self, v: &ExponentVector) -> Result<bool> {
        for &q in v.entries.keys() {
            let next = self.columns.len();
            self.columns.entry(q).or_insert(next);
        }
        let width = self.columns.len();
        let mut row = vec![0i128; width];
        for (q, &e) in &v.entries {
            row[self.columns[q]] = e as i128;
        }
        for (pivot, basis) in &self.rows {
            let c = row[*pivot];
            if c == 0 {
                continue;
            }
            let b = basis[*pivot];
            for (i, x) in row.iter_mut().enumerate() {
                let bi = basis.get(i).copied().unwrap_or(0);
                *x = x
                    .checked_mul(b)
                    .and_then(|lhs| bi.checked_mul(c).and_then(|rhs| lhs.checked_sub(rhs)))
                    .ok_or(Error::Overflow("rank elimination"))?;
            }
            let content = row.iter().fold(0i128, |g, &x| g.gcd(&x));
            if content > 1 {
                row.iter_mut().for_each(|x| *x /= content);
            }
        }
        match row.iter().position(|&x| x != 0) {
            Some(pivot) => {
                self.rows.push((pivot, row));
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

/// Rank over ℚ of the exponent vectors of `values`, signs ignored.
pub fn multiplicative_rank(values: &[Ratio<i64>]) -> Result<RankResult> {
    let mut acc = IncrementalRank::new();
    let mut basis = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if acc.insert(&ExponentVector::from_ratio(v)?)? {
            basis.push(i);
        }
    }
    Ok(RankResult { rank: basis.len(), basis })
}

/// Determinant of the Gram matrix `A·Aᵀ` of integer rows (squared volume
/// of the parallelepiped they span), by fraction-free elimination.
pub fn gram_determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let dot: i128 = rows[i].iter().zip(&rows[j]).map(|(&a, &b)| a as i128 * b as i128).sum();
                    BigInt::from(dot)
                })
                .collect()
        })
        .collect();
    bareiss_determinant(&mut m)
}

fn bareiss_determinant(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}
