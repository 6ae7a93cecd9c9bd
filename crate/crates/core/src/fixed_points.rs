//! Fixed points of the discrete logarithm: pairs `(g, h)` with `g^h ≡ h (mod p)`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith;
use crate::error::{domain, Result};
use crate::modp::{DlogTable, PrimeContext};
use crate::report::{BoundReport, CheckId, Params, Relation};
use crate::smooth::nth_prime;

/// `F(p) = #{(g, h) ∈ [1, p−1]² : g^h ≡ h}`.
///
/// With `d = gcd(h, p−1)`, `g^h ≡ h` has `d` solutions `g` when `h` is a
/// `d`-th power and none otherwise.
pub fn count_f(p: u64) -> Result<u64> {
    let ctx = PrimeContext::new(p)?;
    Ok(count_f_with(&ctx, &DlogTable::new(&ctx)))
}

fn count_f_with(ctx: &PrimeContext, dlog: &DlogTable) -> u64 {
    let p = ctx.p();
    (1..p)
        .map(|h| {
            let d = arith::gcd(h, p - 1);
            if dlog.log(h).is_multiple_of(d) {
                d
            } else {
                0
            }
        })
        .sum()
}

fn check_divides(k: u64, p: u64) -> Result<()> {
    if k == 0 || !(p - 1).is_multiple_of(k) {
        return domain(format!("{k} does not divide p - 1 = {}", p - 1));
    }
    Ok(())
}

/// `X(k, p) = {x ∈ [1, k] : x^k ≡ (−k)^k}` for `k | p − 1`.
pub fn x_set(k: u64, p: u64) -> Result<Vec<u64>> {
    let ctx = PrimeContext::new(p)?;
    check_divides(k, p)?;
    let target = ctx.pow(p - k % p, k);
    Ok((1..=k).filter(|&x| ctx.pow(x, k) == target).collect())
}

/// `X*(k, p)`: the elements of `X(k, p)` coprime to `k`.
pub fn x_star_set(k: u64, p: u64) -> Result<Vec<u64>> {
    Ok(x_set(k, p)?.into_iter().filter(|&x| arith::gcd(x, k) == 1).collect())
}

/// `T(d, p) = #X*((p−1)/d, p)`.
pub fn t_value(d: u64, p: u64) -> Result<u64> {
    check_divides(d, p)?;
    Ok(x_star_set((p - 1) / d, p)?.len() as u64)
}

/// `#X(k,p)` and `T` for every divisor of `p − 1`, plus `F(p)`.
#[derive(Debug, Clone)]
pub struct FixedPointData {
    pub p: u64,
    pub divisors: Vec<u64>,
    /// `k ↦ #X(k, p)`
    pub x_count: BTreeMap<u64, u64>,
    /// `d ↦ T(d, p)`
    pub t_by_d: BTreeMap<u64, u64>,
    pub f: u64,
}

impl FixedPointData {
    pub fn new(p: u64) -> Result<Self> {
        let ctx = PrimeContext::new(p)?;
        let dlog = DlogTable::new(&ctx);
        let n = p - 1;
        let divisors = ctx.group_order_divisors();
        let mut x_count = BTreeMap::new();
        let mut t_by_d = BTreeMap::new();
        for &k in &divisors {
            // x^k ≡ c  ⇔  k·log x ≡ log c  (mod p−1)
            let target = (k as u128 * dlog.log(p - k % p) as u128 % n as u128) as u64;
            let (mut all, mut coprime) = (0u64, 0u64);
            for x in 1..=k {
                if (k as u128 * dlog.log(x) as u128 % n as u128) as u64 == target {
                    all += 1;
                    if arith::gcd(x, k) == 1 {
                        coprime += 1;
                    }
                }
            }
            x_count.insert(k, all);
            t_by_d.insert(n / k, coprime);
        }
        let f = count_f_with(&ctx, &dlog);
        Ok(Self { p, divisors, x_count, t_by_d, f })
    }

    pub fn t(&self, d: u64) -> Result<u64> {
        match self.t_by_d.get(&d) {
            Some(&t) => Ok(t),
            None => domain(format!("{d} does not divide p - 1")),
        }
    }

    /// `Σ_{d | p−1} d·T(d, p)`.
    pub fn expd_sum(&self) -> u64 {
        self.t_by_d.iter().map(|(&d, &t)| d * t).sum()
    }

    pub fn expd_report(&self) -> BoundReport {
        let sum = self.expd_sum();
        BoundReport::evaluate(CheckId::Expd, Params::prime(self.p), self.f, Relation::Eq, sum)
            .with_witness(|| format!("F = {}, sum d T(d,p) = {sum}", self.f))
    }

    pub fn new_x_report(&self, k: u64) -> Result<BoundReport> {
        let n = self.p - 1;
        let Some(&x) = self.x_count.get(&k) else {
            return domain(format!("{k} does not divide p - 1"));
        };
        let lhs: u64 = self.divisors.iter().filter(|&&h| k.is_multiple_of(h)).map(|&h| self.t_by_d[&(n / h)]).sum();
        Ok(BoundReport::evaluate(CheckId::NewX, Params { k: Some(k), ..Params::prime(self.p) }, lhs, Relation::Le, x)
            .with_witness(|| format!("sum over h | {k} of T = {lhs} > #X = {x}")))
    }

    /// `S_p(K, L) = Σ_{k | p−1, K ≥ k > L} T((p−1)/k, p)/k`.
    pub fn s_sum(&self, upper: f64, lower: f64) -> Result<Ratio<u64>> {
        if upper.is_nan() || lower.is_nan() || lower < 0.0 || upper <= lower {
            return domain(format!("need K > L >= 0, got K={upper}, L={lower}"));
        }
        let n = self.p - 1;
        Ok(self
            .divisors
            .iter()
            .filter(|&&k| (k as f64) <= upper && (k as f64) > lower)
            .map(|&k| Ratio::new(self.t_by_d[&(n / k)], k))
            .fold(Ratio::from_integer(0), |a, b| a + b))
    }

    /// `S_p(p−1, K₁) + S_p(K₁, K₂) + S_p(K₂, K₃) + S_p(K₃, 0) = F(p)/(p−1)`,
    /// with the thresholds clamped into a decreasing chain and empty
    /// segments skipped. Compared after multiplying by `p − 1`.
    pub fn partition_report(&self, th: &Thresholds) -> Result<BoundReport> {
        let n = self.p - 1;
        let chain = th.segment_chain(n);
        let mut total = Ratio::from_integer(0u64);
        for w in chain.windows(2) {
            if w[0] > w[1] {
                total += self.s_sum(w[0], w[1])?;
            }
        }
        let scaled = total * n;
        let lhs = scaled.to_integer();
        let mut r = BoundReport::evaluate(CheckId::Partition, Params::prime(self.p), lhs, Relation::Eq, self.f);
        if !scaled.is_integer() {
            r.verdict = crate::Verdict::Fail;
        }
        Ok(r.with_diagnostic("chain", format!("{chain:?}")).with_witness(|| format!("(p-1) * sum S = {scaled}")))
    }

    /// `F(p) ≤ (p−1)·τ(p−1)`.
    pub fn triv_bound_report(&self) -> BoundReport {
        let rhs = (self.p - 1) * self.divisors.len() as u64;
        BoundReport::evaluate(CheckId::TrivBound, Params::prime(self.p), self.f, Relation::Le, rhs)
            .with_witness(|| format!("F = {}", self.f))
    }

    /// `T(d,p) / (d^{−4/3}p + (p/d)^{1/3})`.
    pub fn bound39_ratio(&self, d: u64) -> Result<f64> {
        let t = self.t(d)?;
        let (p, d) = (self.p as f64, d as f64);
        Ok(t as f64 / (d.powf(-4.0 / 3.0) * p + (p / d).cbrt()))
    }

    pub fn max_bound39_ratio(&self) -> f64 {
        self.t_by_d.keys().map(|&d| self.bound39_ratio(d).expect("divisor")).fold(0.0, f64::max)
    }

    pub fn lower_bound_report(&self, d_cutoff: f64) -> Result<LowerBoundReport> {
        let n = self.p - 1;
        let mut sumphi = 0;
        let mut truncated = 0;
        let mut phi_approx = 0;
        let mut hm2_max = 0.0f64;
        for &d in &self.divisors {
            let phi = arith::euler_phi(n / d)?;
            sumphi += phi;
            if d as f64 <= d_cutoff {
                truncated += d * self.t_by_d[&d];
                phi_approx += phi;
            }
            hm2_max = hm2_max.max((self.t_by_d[&d] as f64 - phi as f64 / d as f64).abs());
        }
        Ok(LowerBoundReport {
            p: self.p,
            d_cutoff,
            f: self.f,
            sumphi_ok: sumphi == n,
            truncated_sum: truncated,
            phi_approx,
            residual_truncation: self.f as i64 - truncated as i64,
            residual_approx: truncated as i64 - phi_approx as i64,
            residual_low_bound: self.f as i64 - self.p as i64,
            hm2_max_residual: hm2_max,
        })
    }
}

/// `F(p) = Σ_{d | p−1} d·T(d, p)`.
pub fn verify_expd(p: u64) -> Result<BoundReport> {
    Ok(FixedPointData::new(p)?.expd_report())
}

/// `Σ_{h | k} T((p−1)/h, p) ≤ #X(k, p)` for `k | p − 1`.
pub fn verify_new_x(p: u64, k: u64) -> Result<BoundReport> {
    FixedPointData::new(p)?.new_x_report(k)
}

pub fn s_sum(p: u64, upper: f64, lower: f64) -> Result<Ratio<u64>> {
    FixedPointData::new(p)?.s_sum(upper, lower)
}

pub fn bound39_ratio(d: u64, p: u64) -> Result<f64> {
    FixedPointData::new(p)?.bound39_ratio(d)
}

/// The cut points `K₁, K₂, K₃, K₄` and `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// `(log p)^{g(p)/3}`; absent where `g(p)` is undefined.
    pub k4: Option<f64>,
    pub d: f64,
}

impl Thresholds {
    /// `[p−1, c₁, c₂, c₃, 0]` with `c_i = min(c_{i−1}, K_i)`.
    pub fn segment_chain(&self, n: u64) -> [f64; 5] {
        let c0 = n as f64;
        let c1 = c0.min(self.k1);
        let c2 = c1.min(self.k2);
        let c3 = c2.min(self.k3);
        [c0, c1, c2, c3, 0.0]
    }
}

/// The default `g(u) = log log log u`.
pub fn log_log_log(u: f64) -> f64 {
    u.ln().ln().ln()
}

/// Thresholds at `p`; `g` is the slowly growing function in `K₄`.
pub fn thresholds(p: u64, g: impl Fn(f64) -> f64) -> Thresholds {
    let lp = (p as f64).ln();
    let llp = lp.ln();
    let k4 = lp.powf(g(p as f64) / 3.0);
    Thresholds {
        k1: (4.0 * lp / llp).exp(),
        k2: lp.powf(0.4).exp(),
        k3: llp.powi(7).exp(),
        k4: k4.is_finite().then_some(k4),
        d: p as f64 * (-4.0 * lp / llp).exp(),
    }
}

/// The pieces of the lower-bound chain for `F(p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub p: u64,
    pub d_cutoff: f64,
    pub f: u64,
    /// `Σ_{d | p−1} φ((p−1)/d) = p − 1`
    pub sumphi_ok: bool,
    /// `Σ_{d ≤ D, d | p−1} d·T(d, p)`
    pub truncated_sum: u64,
    /// `Σ_{d ≤ D, d | p−1} φ((p−1)/d)`
    pub phi_approx: u64,
    pub residual_truncation: i64,
    pub residual_approx: i64,
    /// `F(p) − p`
    pub residual_low_bound: i64,
    /// `max_d |T(d,p) − φ((p−1)/d)/d|`
    pub hm2_max_residual: f64,
}

pub fn lower_bound_report(p: u64, d_cutoff: f64) -> Result<LowerBoundReport> {
    FixedPointData::new(p)?.lower_bound_report(d_cutoff)
}

/// `Σ_{d | n} φ(n/d) = n`.
pub fn check_sumphi(n: u64) -> Result<BoundReport> {
    let mut sum = 0;
    for d in arith::divisors(n)? {
        sum += arith::euler_phi(n / d)?;
    }
    Ok(BoundReport::evaluate(CheckId::SumPhi, Params { m: Some(n), ..Params::default() }, sum, Relation::Eq, n))
}

/// Whether `p_j / log p_j ∈ [j(1 − 3/log j), j(1 + 3/log j)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PntWindow {
    pub j: u64,
    pub p_j: u64,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub inside: bool,
}

pub fn pnt_window(j: u64) -> Result<PntWindow> {
    if j < 2 {
        return domain("the window needs j >= 2");
    }
    let p_j = nth_prime(j)?;
    let value = p_j as f64 / (p_j as f64).ln();
    let width = 3.0 / (j as f64).ln();
    let (lo, hi) = (j as f64 * (1.0 - width), j as f64 * (1.0 + width));
    Ok(PntWindow { j, p_j, value, lo, hi, inside: lo <= value && value <= hi })
}

/// Number of `j ∈ [lo, hi]` whose window check fails, against 0.
pub fn check_pnt_leg(lo: u64, hi: u64) -> Result<BoundReport> {
    let mut outside = 0u64;
    let mut first = None;
    for j in lo..=hi {
        let w = pnt_window(j)?;
        if !w.inside {
            outside += 1;
            first.get_or_insert(w);
        }
    }
    let params = Params { y: Some(lo), z: Some(hi), ..Params::default() };
    Ok(BoundReport::evaluate(CheckId::PntLeg, params, outside, Relation::Le, 0u32).with_witness(|| format!("{first:?}")))
}

/// One row of the `fixed-points` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct FixedPointRow {
    pub p: u64,
    pub F: u64,
    pub F_over_p: f64,
    pub triv_bound: u64,
    pub expd_ok: bool,
    pub newX_ok: bool,
    pub partition_ok: bool,
    pub max_bound39_ratio: f64,
}

impl FixedPointRow {
    pub const CSV_HEADER: [&'static str; 8] =
        ["p", "F", "F_over_p", "triv_bound", "expd_ok", "newX_ok", "partition_ok", "max_bound39_ratio"];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.F.to_string(),
            format!("{:.6}", self.F_over_p),
            self.triv_bound.to_string(),
            self.expd_ok.to_string(),
            self.newX_ok.to_string(),
            self.partition_ok.to_string(),
            format!("{:.6}", self.max_bound39_ratio),
        ]
    }
}

pub fn fixed_point_row(p: u64, g: impl Fn(f64) -> f64) -> Result<FixedPointRow> {
    let data = FixedPointData::new(p)?;
    let mut new_x_ok = true;
    for &k in &data.divisors {
        new_x_ok &= data.new_x_report(k)?.passed();
    }
    Ok(FixedPointRow {
        p,
        F: data.f,
        F_over_p: data.f as f64 / p as f64,
        triv_bound: (p - 1) * data.divisors.len() as u64,
        expd_ok: data.expd_report().passed(),
        newX_ok: new_x_ok,
        partition_ok: data.partition_report(&thresholds(p, g))?.passed(),
        max_bound39_ratio: data.max_bound39_ratio(),
    })
}
