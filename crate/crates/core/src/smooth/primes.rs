use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Upper end of the shared prime table.
const TABLE_LIMIT: u64 = 1 << 22;

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes below `2^22`, built on first use.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(TABLE_LIMIT))
}

/// The `k`-th prime, `nth_prime(1) = 2`.
pub fn nth_prime(k: u64) -> Result<u64> {
    if k == 0 {
        return domain("primes are indexed from 1");
    }
    let table = small_primes();
    if let Some(&q) = table.get(k as usize - 1) {
        return Ok(q);
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let kf = k as f64;
    let bound = (kf * (kf.ln() + kf.ln().ln())).ceil() as u64 + 10;
    Ok(primes_up_to(bound)[k as usize - 1])
}

/// `π(x)`.
pub fn prime_count(x: u64) -> u64 {
    let table = small_primes();
    if x < TABLE_LIMIT {
        table.partition_point(|&q| q <= x) as u64
    } else {
        primes_up_to(x).len() as u64
    }
}
