//! Brute-force oracles, written from the definitions and sharing no code
//! with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::Ratio;

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let (mut r, mut b) = (1u128, b as u128 % m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn nth_prime(k: u64) -> u64 {
    (2..).filter(|&n| is_prime(n)).nth(k as usize - 1).unwrap()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `#{(g, h) ∈ [1, p−1]² : g^h ≡ h}`.
pub fn f_double_loop(p: u64) -> u64 {
    let mut count = 0;
    for g in 1..p {
        let mut power = 1u64;
        for h in 1..p {
            power = power * g % p;
            if power == h {
                count += 1;
            }
        }
    }
    count
}

/// `X(k, p) = {x ∈ [1, k] : x^k ≡ (−k)^k}`.
pub fn x_set(k: u64, p: u64) -> Vec<u64> {
    let target = pow_mod(p - k % p, k, p);
    (1..=k).filter(|&x| pow_mod(x, k, p) == target).collect()
}

/// `T(d, p) = #X*((p−1)/d, p)`.
pub fn t_value(d: u64, p: u64) -> u64 {
    let k = (p - 1) / d;
    x_set(k, p).into_iter().filter(|&x| gcd(x, k) == 1).count() as u64
}

pub fn int_height(x: u64, p: u64) -> u64 {
    let x = x % p;
    x.min(p - x)
}

fn symmetric(x: u64, p: u64) -> i64 {
    let x = x % p;
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

/// `min max(|a|, b)` over `a ≡ b·x`, `1 ≤ b < p`: for each `b` the best `a`
/// is the symmetric residue of `b·x`.
pub fn rat_height(x: u64, p: u64) -> u64 {
    (1..p).map(|b| (symmetric(b * x % p, p).unsigned_abs()).max(b)).min().unwrap()
}

/// The minimizing fraction of [`rat_height`] with the least `b`, then the
/// least `|a|`, then positive `a`.
pub fn rat_height_fraction(x: u64, p: u64) -> (i64, u64) {
    let h = rat_height(x, p);
    (1..p)
        .map(|b| (symmetric(b * x % p, p), b))
        .filter(|&(a, b)| a.unsigned_abs().max(b) == h)
        .min_by_key(|&(a, b)| (b, a.unsigned_abs(), a < 0))
        .unwrap()
}

/// The order-`t` subgroup as `{x : x^t ≡ 1}`.
pub fn subgroup(p: u64, t: u64) -> Vec<u64> {
    (1..p).filter(|&x| pow_mod(x, t, p) == 1).collect()
}

pub fn coset(p: u64, t: u64, a: u64) -> BTreeSet<u64> {
    subgroup(p, t).into_iter().map(|g| g * a % p).collect()
}

/// Largest prime factor for `n ≤ limit` (1 for `n = 1`).
pub fn largest_prime_factors(limit: usize) -> Vec<u32> {
    let mut lpf = vec![1u32; limit + 1];
    for q in 2..=limit {
        if lpf[q] == 1 {
            let mut m = q;
            while m <= limit {
                lpf[m] = q as u32;
                m += q;
            }
        }
    }
    lpf
}

/// `Ψ(x, y)` by testing each `n ≤ x`.
pub fn psi_direct(x: u64, y: u64) -> u64 {
    (1..=x)
        .filter(|&n| {
            let mut m = n;
            let mut largest = 1;
            let mut q = 2;
            while q * q <= m {
                while m % q == 0 {
                    m /= q;
                    largest = q;
                }
                q += 1;
            }
            largest.max(m) <= y.max(1)
        })
        .count() as u64
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Φ̃(k, s) = Σ_i C(s,i) Ψ(k, p_i) Ψ(k, p_{s−i})`, `Ψ(k, p₀) = 1`.
pub fn phi_tilde(k: u64, s: u64) -> BigUint {
    if s == 0 {
        return BigUint::from(1u32);
    }
    let mut primes = (2..).filter(|&n| is_prime(n));
    let psi: Vec<BigUint> = (0..=s)
        .map(|i| BigUint::from(if i == 0 { 1 } else { psi_direct(k, primes.next().unwrap().min(k)) }))
        .collect();
    // Pascal row s
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..s {
        let mut next = vec![BigUint::from(1u32)];
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(BigUint::from(1u32));
        row = next;
    }
    (0..=s as usize).map(|i| &row[i] * &psi[i] * &psi[s as usize - i]).sum()
}

/// `max{r : c·k^r ≤ n}`.
pub fn log_floor(n: u64, k: u64, c: u64) -> u64 {
    (0..).take_while(|&r| c as u128 * (k as u128).pow(r as u32) <= n as u128).last().unwrap_or(0)
}

pub fn max_s(r: u64, t: u64) -> u64 {
    (0..).take_while(|&s| binomial(r + s, s) <= t as u128).last().unwrap()
}

fn factor(mut n: u64) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut q = 2;
    while q * q <= n {
        while n.is_multiple_of(q) {
            *out.entry(q).or_insert(0) += 1;
            n /= q;
        }
        q += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Rank over ℚ of the exponent vectors of `a/b`, by Gaussian elimination on rationals.
pub fn rank(values: &[(i64, u64)]) -> usize {
    let mut rows: Vec<BTreeMap<u64, Ratio<i128>>> = Vec::new();
    for &(a, b) in values {
        let mut v: BTreeMap<u64, Ratio<i128>> = BTreeMap::new();
        for (q, e) in factor(a.unsigned_abs()) {
            *v.entry(q).or_insert(Ratio::from_integer(0)) += e as i128;
        }
        for (q, e) in factor(b) {
            *v.entry(q).or_insert(Ratio::from_integer(0)) -= e as i128;
        }
        v.retain(|_, e| *e != Ratio::from_integer(0));
        rows.push(v);
    }
    let columns: BTreeSet<u64> = rows.iter().flat_map(|r| r.keys().copied()).collect();
    let mut rank = 0;
    for c in columns {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i].contains_key(&c)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let prow = rows[rank].clone();
        let pv = prow[&c];
        for row in rows.iter_mut().skip(rank + 1) {
            if let Some(&f) = row.get(&c) {
                let factor = f / pv;
                for (q, e) in &prow {
                    *row.entry(*q).or_insert(Ratio::from_integer(0)) -= factor * e;
                }
                row.retain(|_, e| *e != Ratio::from_integer(0));
            }
        }
        rank += 1;
    }
    rank
}

/// `D*` by scanning anchored boxes with corners on the `1/n` lattice, each
/// corner taken both as is and nudged up by `1e-12` (closed boxes).
/// Exact for points on that lattice.
pub fn star_discrepancy_grid(points: &[(f64, f64)], n: u32) -> f64 {
    let h = points.len() as f64;
    let mut coords: Vec<f64> = Vec::new();
    for i in 0..=n {
        let v = i as f64 / n as f64;
        coords.push(v);
        if v < 1.0 {
            coords.push(v + 1e-12);
        }
    }
    let mut best = 0.0f64;
    for &v1 in &coords {
        for &v2 in &coords {
            let inside = points.iter().filter(|&&(x, y)| x < v1 && y < v2).count() as f64;
            best = best.max((inside / h - v1 * v2).abs());
        }
    }
    best
}

/// Dickman `ρ` on `[0, u_max]` from `ρ(u) = ρ(u−h) − ∫_{u−h}^{u} ρ(v−1)/v dv`
/// with the trapezoid rule at step `1/steps`.
pub fn dickman_table(u_max: usize, steps: usize) -> Vec<f64> {
    let n = u_max * steps;
    let h = 1.0 / steps as f64;
    let mut rho = vec![1.0; n + 1];
    for i in steps + 1..=n {
        let (u0, u1) = ((i - 1) as f64 * h, i as f64 * h);
        let f0 = rho[i - 1 - steps] / u0;
        let f1 = rho[i - steps] / u1;
        rho[i] = rho[i - 1] - h * (f0 + f1) / 2.0;
    }
    rho
}
