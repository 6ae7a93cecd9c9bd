//! Residue-field arithmetic modulo an odd prime: primitive roots, orders,
//! cosets of the order-`t` subgroup, and the integer and rational heights.

use serde::Serialize;

use crate::arith::{self, inv_mod, mul_mod, pow_mod, reduce_signed, symmetric};
use crate::error::{domain, Error, Result};

/// An odd prime together with the factorization of `p - 1` and its least primitive root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    factors: Vec<(u64, u32)>,
    g: u64,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= 1 << 62 || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let factors = arith::factor(p - 1)?;
        let g = (2..p)
            .find(|&g| factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1))
            .expect("every prime has a primitive root");
        Ok(Self { p, factors, g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Factorization of `p - 1`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The least primitive root.
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Divisors of `p - 1`, ascending.
    pub fn group_order_divisors(&self) -> Vec<u64> {
        arith::divisors_from_factors(&self.factors)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Inverse of a unit. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a % self.p, self.p).expect("zero has no inverse")
    }

    /// Residue of a signed integer.
    pub fn residue(&self, a: i64) -> u64 {
        reduce_signed(a, self.p)
    }

    pub fn multiplicative_order(&self, x: u64) -> Result<u64> {
        multiplicative_order(x, self)
    }

    pub fn integer_height(&self, x: u64) -> u64 {
        integer_height(x, self)
    }

    pub fn rational_height(&self, x: u64) -> Result<HeightWitness> {
        rational_height(x, self)
    }
}

/// Least primitive root of an odd prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    Ok(PrimeContext::new(p)?.generator())
}

/// Order of `x` in the unit group, found by stripping prime factors of `p - 1`.
pub fn multiplicative_order(x: u64, ctx: &PrimeContext) -> Result<u64> {
    let p = ctx.p;
    if x.is_multiple_of(p) {
        return domain("zero has no multiplicative order");
    }
    let mut order = p - 1;
    for &(q, e) in &ctx.factors {
        for _ in 0..e {
            if pow_mod(x, order / q, p) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// `|x|`: the least absolute value of an integer congruent to `x`. `|0| = 0`.
pub fn integer_height(x: u64, ctx: &PrimeContext) -> u64 {
    symmetric(x, ctx.p).unsigned_abs()
}

/// A unit with its integer height, rational height and a minimizing pair
/// `(a, b)` with `a ≡ b·x (mod p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeightWitness {
    pub x: u64,
    pub int_height: u64,
    pub rat_height: u64,
    pub witness_a: i64,
    pub witness_b: u64,
}

/// Smallest `b` with `b*b >= n`.
pub fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Largest `b` with `b*b <= n`.
pub fn floor_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `‖x‖ = min max(|a|, b)` over `a ≡ b·x`, `b ≥ 1`.
///
/// Scans `b = 1..=⌈√p⌉`, stopping once `b` exceeds the best value found.
/// Ties keep the smallest `b`.
pub fn rational_height(x: u64, ctx: &PrimeContext) -> Result<HeightWitness> {
    let p = ctx.p;
    let x = x % p;
    if x == 0 {
        return domain("rational height of 0 is undefined");
    }
    let mut best = (u64::MAX, 0i64, 0u64);
    let limit = ceil_sqrt(p);
    let mut bx = 0u64;
    for b in 1..=limit {
        if b > best.0 {
            break;
        }
        bx += x;
        if bx >= p {
            bx -= p;
        }
        let a = symmetric(bx, p);
        let h = a.unsigned_abs().max(b);
        if h < best.0 {
            best = (h, a, b);
        }
    }
    Ok(HeightWitness {
        x,
        int_height: integer_height(x, ctx),
        rat_height: best.0,
        witness_a: best.1,
        witness_b: best.2,
    })
}

/// Height of the rational `a/b`: `max(|a₀|, b₀)` for the reduced form.
pub fn rational_height_of_fraction(a: i64, b: i64) -> Result<u64> {
    if b == 0 {
        return domain("zero denominator");
    }
    let (ua, ub) = (a.unsigned_abs(), b.unsigned_abs());
    let g = arith::gcd(ua, ub);
    Ok((ua / g).max(ub / g))
}

/// The coset `aG` of the unique subgroup `G` of order `t` in the units mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpec {
    ctx: PrimeContext,
    t: u64,
    a: u64,
    h: u64,
}

impl CosetSpec {
    pub fn new(ctx: PrimeContext, t: u64, a: u64) -> Result<Self> {
        let p = ctx.p;
        if t == 0 || !(p - 1).is_multiple_of(t) {
            return domain(format!("t = {t} does not divide p - 1 = {}", p - 1));
        }
        let a = a % p;
        if a == 0 {
            return domain("coset representative must be a unit");
        }
        let h = pow_mod(ctx.g, (p - 1) / t, p);
        Ok(Self { ctx, t, a, h })
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    /// Generator of the subgroup, `g^((p-1)/t)`.
    pub fn subgroup_generator(&self) -> u64 {
        self.h
    }

    /// `G = {h^0, ..., h^(t-1)}` in generation order.
    pub fn subgroup(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.t as usize);
        let mut y = 1u64;
        for _ in 0..self.t {
            out.push(y);
            y = self.ctx.mul(y, self.h);
        }
        out
    }

    /// The coset `aG`, sorted.
    pub fn elements(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.subgroup().into_iter().map(|y| self.ctx.mul(self.a, y)).collect();
        out.sort_unstable();
        out
    }

    pub fn contains(&self, x: u64) -> bool {
        coset_contains(self, x)
    }
}

/// `x ∈ aG` iff `(x·a⁻¹)^t ≡ 1`.
pub fn coset_contains(spec: &CosetSpec, x: u64) -> bool {
    let ctx = &spec.ctx;
    let x = x % ctx.p;
    if x == 0 {
        return false;
    }
    ctx.pow(ctx.mul(x, ctx.inv(spec.a)), spec.t) == 1
}

/// Discrete logarithms to the base of the context's primitive root.
///
/// `index[x]` is the exponent `e` in `[0, p-1)` with `g^e = x`; slot 0 is unused.
#[derive(Debug, Clone)]
pub struct DlogTable {
    index: Vec<u32>,
}

impl DlogTable {
    pub fn new(ctx: &PrimeContext) -> Self {
        let p = ctx.p as usize;
        assert!(p < u32::MAX as usize, "discrete log table needs p < 2^32");
        let mut index = vec![0u32; p];
        let mut y = 1u64;
        for e in 0..(p - 1) {
            index[y as usize] = e as u32;
            y = ctx.mul(y, ctx.g);
        }
        Self { index }
    }

    #[inline]
    pub fn log(&self, x: u64) -> u64 {
        self.index[x as usize] as u64
    }

    /// Index of the coset of the order-`t` subgroup containing `x`: `log(x) mod (p-1)/t`.
    #[inline]
    pub fn coset_index(&self, x: u64, t: u64) -> u64 {
        let m = (self.index.len() as u64 - 1) / t;
        self.log(x) % m
    }
}

/// Rational heights of every residue at once, from the fractions `a/b`
/// with `|a|, b ≤ ⌈√p⌉`. Agrees with [`rational_height`], witness included.
#[derive(Debug, Clone)]
pub struct HeightTable {
    height: Vec<u32>,
    witness_a: Vec<i32>,
    witness_b: Vec<u32>,
}

impl HeightTable {
    pub fn new(ctx: &PrimeContext) -> Self {
        let p = ctx.p;
        assert!(p < 1 << 31, "height table needs p < 2^31");
        let n = p as usize;
        let mut height = vec![u32::MAX; n];
        let mut witness_a = vec![0i32; n];
        let mut witness_b = vec![0u32; n];
        let limit = ceil_sqrt(p);
        // b ascending and a in the symmetric residue: ties resolve as in the scan
        for b in 1..=limit {
            let b_inv = ctx.inv(b);
            for a in 1..=limit.min(p / 2) {
                let h = a.max(b) as u32;
                for signed in [a as i64, -(a as i64)] {
                    let x = mul_mod(reduce_signed(signed, p), b_inv, p) as usize;
                    if h < height[x] {
                        height[x] = h;
                        witness_a[x] = signed as i32;
                        witness_b[x] = b as u32;
                    }
                }
            }
        }
        Self { height, witness_a, witness_b }
    }

    /// `‖x‖` for `1 ≤ x < p`.
    #[inline]
    pub fn height(&self, x: u64) -> u64 {
        self.height[x as usize] as u64
    }

    /// The minimizing pair `(a, b)`.
    #[inline]
    pub fn witness(&self, x: u64) -> (i64, u64) {
        (self.witness_a[x as usize] as i64, self.witness_b[x as usize] as u64)
    }
}
