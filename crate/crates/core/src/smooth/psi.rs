//! Exact counting of smooth numbers and the three asymptotic regimes.

use std::collections::HashMap;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::dickman::dickman_rho;
use super::primes::{nth_prime, primes_up_to, small_primes};
use crate::error::{domain, Result};

/// Entries kept in the Buchstab memo before new results stop being stored.
pub const MEMO_CAP: usize = 10_000_000;

/// Exact `Ψ(x, y)` by the Buchstab recursion, with a memo keyed on `(x, π-level)`.
///
/// The memo is a pure cache; one counter per worker thread.
#[derive(Debug, Default)]
pub struct SmoothCounter {
    extra_primes: Vec<u64>,
    memo: HashMap<(u64, u32), u64>,
}

impl SmoothCounter {
    pub fn new() -> Self {
        Self::default()
    }

    fn primes_through(&mut self, bound: u64) -> &[u64] {
        let table = small_primes();
        if table.last().is_some_and(|&q| q >= bound) {
            return table;
        }
        if self.extra_primes.last().is_none_or(|&q| q < bound) {
            self.extra_primes = primes_up_to(bound.max(2 * table.last().copied().unwrap_or(2)));
        }
        &self.extra_primes
    }

    /// `p_{j+1}`; valid for any index reached through `primes_through`.
    #[inline]
    fn prime(&self, j: usize) -> u64 {
        let table = small_primes();
        if j < table.len() {
            table[j]
        } else {
            self.extra_primes[j]
        }
    }

    /// Number of primes `≤ y`, restricted to what matters for inputs up to `x`.
    fn level(&mut self, x: u64, y: u64) -> u32 {
        let bound = y.min(x);
        let primes = self.primes_through(bound);
        primes.partition_point(|&q| q <= bound) as u32
    }

    /// `Ψ(x, y)`: the number of `n ≤ x` whose prime factors are all `≤ y`, counting `n = 1`.
    pub fn psi(&mut self, x: u64, y: u64) -> u64 {
        if x == 0 {
            return 0;
        }
        if y >= x {
            return x;
        }
        let k = self.level(x, y);
        self.psi_level(x, k)
    }

    /// `Ψ(x, p_k)` with the convention `Ψ(x, p_0) = Ψ(x, 1)`.
    pub fn psi_at_index(&mut self, x: u64, k: u64) -> u64 {
        if x == 0 {
            return 0;
        }
        if k == 0 {
            return 1;
        }
        let table = small_primes();
        let pk = match table.get(k as usize - 1) {
            Some(&q) => q,
            None if x <= *table.last().unwrap() => return x,
            None => nth_prime(k).expect("k >= 1"),
        };
        if pk >= x {
            return x;
        }
        self.primes_through(pk);
        self.psi_level(x, k as u32)
    }

    fn psi_level(&mut self, x: u64, k: u32) -> u64 {
        if x == 0 {
            return 0;
        }
        if k == 0 || x == 1 {
            return 1;
        }
        if k == 1 {
            return 64 - x.leading_zeros() as u64;
        }
        let pk = self.prime(k as usize - 1);
        if pk >= x {
            return x;
        }
        if let Some(&v) = self.memo.get(&(x, k)) {
            return v;
        }
        // Split n ≤ x by its largest prime factor p_j:
        // Ψ(x, p_k) = Ψ(x, 1) + Σ_{j ≤ k} Ψ(⌊x/p_j⌋, p_j).
        let mut total = 1u64;
        for j in 1..=k {
            let q = self.prime(j as usize - 1);
            let rest = x / q;
            if rest == 0 {
                break;
            }
            total += if q >= rest { rest } else { self.psi_level(rest, j) };
        }
        if self.memo.len() < MEMO_CAP {
            self.memo.insert((x, k), total);
        }
        total
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Merge memo entries from a file written by [`SmoothCounter::save_memo`].
    /// A missing file is not an error.
    pub fn load_memo(&mut self, path: &Path) -> io::Result<usize> {
        let file = match fs::File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e),
        };
        let mut n = 0;
        for line in io::BufReader::new(file).lines() {
            let line = line?;
            let mut it = line.split_whitespace().map(str::parse::<u64>);
            if let (Some(Ok(x)), Some(Ok(k)), Some(Ok(v))) = (it.next(), it.next(), it.next()) {
                if self.memo.len() < MEMO_CAP {
                    self.memo.insert((x, k as u32), v);
                    n += 1;
                }
            }
        }
        Ok(n)
    }

    pub fn save_memo(&self, path: &Path) -> io::Result<()> {
        let mut entries: Vec<_> = self.memo.iter().collect();
        entries.sort_unstable();
        let mut out = io::BufWriter::new(fs::File::create(path)?);
        for (&(x, k), v) in entries {
            writeln!(out, "{x} {k} {v}")?;
        }
        out.flush()
    }

    /// `Φ̃(k, s) = Σ_i C(s,i) Ψ(k, p_i) Ψ(k, p_{s-i})`, with `Φ̃(k, 0) = 1`.
    pub fn phi_tilde(&mut self, k: u64, s: u64) -> BigUint {
        if s == 0 {
            return BigUint::one();
        }
        let psis: Vec<BigUint> = (0..=s).map(|i| BigUint::from(self.psi_at_index(k, i))).collect();
        let mut binom = BigUint::one();
        let mut total = BigUint::zero();
        for i in 0..=s {
            total += &binom * &psis[i as usize] * &psis[(s - i) as usize];
            binom = binom * (s - i) / (i + 1);
        }
        total
    }
}

/// `Ψ(x, y)` with a fresh counter.
pub fn psi_exact(x: u64, y: u64) -> u64 {
    SmoothCounter::new().psi(x, y)
}

/// `Ψ(x, y)` for `x` beyond 64 bits, by the same recursion.
/// Practical only for small `y`.
pub fn psi_exact_big(x: &BigUint, y: u64) -> BigUint {
    fn go(x: &BigUint, k: usize, primes: &[u64], counter: &mut SmoothCounter) -> BigUint {
        if let Some(small) = x.to_u64() {
            return BigUint::from(counter.psi_at_index(small, k as u64));
        }
        if k == 0 {
            return BigUint::one();
        }
        if k == 1 {
            return BigUint::from(x.bits());
        }
        let mut total = BigUint::one();
        for (j, &q) in primes[..k].iter().enumerate() {
            total += go(&(x / q), j + 1, primes, counter);
        }
        total
    }
    let primes = primes_up_to(y);
    let mut counter = SmoothCounter::new();
    go(x, primes.len(), &primes, &mut counter)
}

/// `Φ̃(k, s)` with a fresh counter.
pub fn phi_tilde(k: u64, s: u64) -> BigUint {
    SmoothCounter::new().phi_tilde(k, s)
}

/// Uniform log-scale estimate: `log Ψ(x, y) ≈ Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HtEstimate {
    pub log_estimate: f64,
    pub z: f64,
}

pub fn psi_estimate_ht(x: f64, y: f64) -> Result<HtEstimate> {
    if !(y >= 2.0 && x >= y) {
        return domain(format!("need x >= y >= 2, got x={x}, y={y}"));
    }
    let (lx, ly) = (x.ln(), y.ln());
    let z = lx / ly * (1.0 + y / lx).ln() + y / ly * (1.0 + lx / y).ln();
    Ok(HtEstimate { log_estimate: z, z })
}

/// Main term for very small `y`: `(1/π(y)!) Π_{p ≤ y} log x / log p`.
pub fn psi_estimate_small_y(x: f64, y: u64) -> Result<f64> {
    let lx = x.ln();
    if !(y >= 2 && (y as f64) <= lx.sqrt()) {
        return domain(format!("need 2 <= y <= (log x)^(1/2), got x={x}, y={y}"));
    }
    let primes = primes_up_to(y);
    let mut v = 1.0;
    for (i, &q) in primes.iter().enumerate() {
        v *= lx / (q as f64).ln() / (i + 1) as f64;
    }
    Ok(v)
}

/// `x·ρ(u)` with `u = log x / log y`; `in_regime` records whether
/// `y ≥ exp((log log x)^(5/3 + 0.01))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoEstimate {
    pub value: f64,
    pub u: f64,
    pub in_regime: bool,
}

pub fn psi_estimate_rho(x: f64, y: f64) -> Result<RhoEstimate> {
    if !(y >= 2.0 && x >= y) {
        return domain(format!("need x >= y >= 2, got x={x}, y={y}"));
    }
    let u = x.ln() / y.ln();
    let lower = x.ln().ln().powf(5.0 / 3.0 + 0.01).exp();
    Ok(RhoEstimate { value: x * dickman_rho(u)?, u, in_regime: x.ln() > 1.0 && y >= lower })
}
