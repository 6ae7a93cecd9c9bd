//! Word-size modular arithmetic, primality and factorization.
//!
//! Every product is formed in 128-bit width, so moduli up to 2^63 are safe.

/// `a * b mod m`.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer to `[0, m)`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Symmetric representative of `x mod p` in `(-p/2, p/2]`.
#[inline]
pub fn symmetric(x: u64, p: u64) -> i64 {
    let x = x % p;
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn collect_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_factors(d, out);
    collect_factors(n / d, out);
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
///
/// Trial division strips factors below 1000; Pollard rho handles the rest.
pub fn factor(mut n: u64) -> crate::Result<Vec<(u64, u32)>> {
    if n == 0 {
        return crate::error::domain("cannot factor 0");
    }
    let mut primes = Vec::new();
    let mut q = 2u64;
    while q < 1000 && q * q <= n {
        while n.is_multiple_of(q) {
            primes.push(q);
            n /= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    collect_factors(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

/// All positive divisors of the number with the given factorization, ascending.
pub fn divisors_from_factors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(q, e) in factors {
        let len = divs.len();
        let mut pw = 1u64;
        for _ in 0..e {
            pw *= q;
            for i in 0..len {
                divs.push(divs[i] * pw);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn divisors(n: u64) -> crate::Result<Vec<u64>> {
    Ok(divisors_from_factors(&factor(n)?))
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> crate::Result<u64> {
    let mut phi = n;
    for (q, _) in factor(n)? {
        phi = phi / q * (q - 1);
    }
    Ok(phi)
}
