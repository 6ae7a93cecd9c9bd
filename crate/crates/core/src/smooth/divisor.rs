//! Products of a divisor by a smooth number, and the prime that bounds their count.

use super::primes::{primes_up_to, small_primes};
use super::psi::SmoothCounter;
use crate::arith;
use crate::error::{domain, Result};
use crate::report::{BoundReport, CheckId, Params, Relation};

/// `τ(m, y, z)`: the number of distinct integers `n ≤ z` of the form `d·l`
/// with `d | m` and `l` a `y`-smooth number.
pub fn tau_divisor_smooth(m: u64, y: u64, z: u64) -> Result<u64> {
    if m < 2 || z < 1 {
        return domain(format!("need m >= 2 and z >= 1, got m={m}, z={z}"));
    }
    if z > 1 << 32 {
        return domain("z too large for exhaustive marking");
    }
    let z_us = z as usize;
    let mut smooth = Vec::new();
    let primes = primes_up_to(y.min(z));
    collect_smooth(1, 0, &primes, z, &mut smooth);
    let mut hit = vec![false; z_us + 1];
    for d in arith::divisors(m)?.into_iter().take_while(|&d| d <= z) {
        for &l in &smooth {
            match d.checked_mul(l) {
                Some(n) if n <= z => hit[n as usize] = true,
                _ => {}
            }
        }
    }
    Ok(hit.iter().filter(|&&b| b).count() as u64)
}

fn collect_smooth(n: u64, from: usize, primes: &[u64], z: u64, out: &mut Vec<u64>) {
    out.push(n);
    for (i, &q) in primes.iter().enumerate().skip(from) {
        match n.checked_mul(q) {
            Some(next) if next <= z => collect_smooth(next, i, primes, z, out),
            _ => break,
        }
    }
}

/// The largest prime `q` with `Π_{y < ℓ ≤ q} ℓ ≤ m` (product over primes).
///
/// When no prime above `y` fits, the product is empty and `q` is the
/// largest prime `≤ y`.
pub fn smooth_bound_prime(m: u64, y: u64) -> Result<u64> {
    if m < 2 {
        return domain(format!("need m >= 2, got {m}"));
    }
    let table = small_primes();
    let start = table.partition_point(|&q| q <= y);
    let mut q_best = if start > 0 { Some(table[start - 1]) } else { None };
    let mut product = 1u64;
    for &q in &table[start..] {
        match product.checked_mul(q) {
            Some(next) if next <= m => {
                product = next;
                q_best = Some(q);
            }
            _ => break,
        }
    }
    match q_best {
        Some(q) => Ok(q),
        None => domain(format!("no admissible prime for m={m}, y={y}")),
    }
}

/// Checks `τ(m, y, z) ≤ Ψ(z, q)`; with `y = 1` this is the divisor-only form.
pub fn check_bounddivsm(m: u64, y: u64, z: u64, counter: &mut SmoothCounter) -> Result<BoundReport> {
    let tau = tau_divisor_smooth(m, y, z)?;
    let q = smooth_bound_prime(m, y)?;
    let rhs = counter.psi(z, q);
    let params = Params { m: Some(m), y: Some(y), z: Some(z), ..Params::default() };
    Ok(BoundReport::evaluate(CheckId::BoundDivSm, params, tau, Relation::Le, rhs)
        .with_diagnostic("q", q)
        .with_witness(|| format!("tau({m},{y},{z}) = {tau} > Psi({z},{q}) = {rhs}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_examples() {
        assert_eq!(tau_divisor_smooth(12, 1, 6).unwrap(), 5);
        assert_eq!(tau_divisor_smooth(2, 2, 4).unwrap(), 3);
        for (m, z) in [(7u64, 30u64), (30, 17), (2, 1)] {
            assert_eq!(tau_divisor_smooth(m, z, z).unwrap(), z);
            assert_eq!(tau_divisor_smooth(m, z + 5, z).unwrap(), z);
        }
        assert!(tau_divisor_smooth(1, 1, 5).is_err());
        assert!(tau_divisor_smooth(4, 1, 0).is_err());
    }

    #[test]
    fn bound_prime_examples() {
        assert_eq!(smooth_bound_prime(6, 1).unwrap(), 3);
        assert_eq!(smooth_bound_prime(5, 1).unwrap(), 2);
        assert_eq!(smooth_bound_prime(2, 2).unwrap(), 2);
        assert_eq!(smooth_bound_prime(30, 1).unwrap(), 5);
        assert_eq!(smooth_bound_prime(29, 1).unwrap(), 3);
        // primes above 3: 5·7 = 35 ≤ 40 < 35·11
        assert_eq!(smooth_bound_prime(40, 3).unwrap(), 7);
        assert_eq!(smooth_bound_prime(u64::MAX, 1).unwrap(), 47);
        assert!(smooth_bound_prime(1, 1).is_err());
    }

    #[test]
    fn bounddivsm_example() {
        let mut c = SmoothCounter::new();
        let r = check_bounddivsm(12, 1, 6, &mut c).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (5u32.into(), 5u32.into()));
        assert!(r.passed());
    }
}
