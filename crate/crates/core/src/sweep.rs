//! Sweeps of the coset and fixed-point checks over ranges of primes.
//!
//! Each prime is handled by one worker. Within a prime, the sets `U` and `V`
//! of every coset grow with `k`, so they are built once in order of height
//! and the facts the checks need are updated as `k` increases.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, divisors};
use crate::coset::{coset_params, evaluate_check, lowheight_report, subgroup_only, CosetFacts, RhsCache, COSET_CHECKS};
use crate::error::{domain, Error, Result};
use crate::fixed_points::{log_log_log, thresholds, FixedPointData};
use crate::modp::{floor_sqrt, DlogTable, HeightTable, PrimeContext};
use crate::report::{BoundReport, CheckId, Params, Summary};
use crate::smooth::{primes_up_to, ExponentVector, IncrementalRank};

/// Cosets sampled per `(p, t)` above [`EXHAUSTIVE_P_MAX`] under [`APolicy::Auto`].
pub const AUTO_SAMPLE: usize = 32;

/// Largest prime swept over every coset under [`APolicy::Auto`].
pub const EXHAUSTIVE_P_MAX: u64 = 1000;

/// Checks about a single prime rather than a coset.
pub const FIXED_POINT_CHECKS: &[CheckId] = &[CheckId::Expd, CheckId::NewX, CheckId::Partition, CheckId::TrivBound];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TPolicy {
    AllDivisors,
    /// Only the listed `t` that divide `p − 1`.
    List(Vec<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KPolicy {
    /// `k ∈ [2, min(⌊√p⌋, ⌊p/2⌋ − 1)]`.
    Formula,
    /// `k ∈ [lo, hi]`, clipped to `[2, (p−1)/2]`.
    Range { lo: u64, hi: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum APolicy {
    AllCosets,
    /// The subgroup plus `n − 1` random cosets.
    Sample(usize),
    /// Every coset for `p ≤ 1000`, a sample of 32 above.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Emit {
    All,
    Failures,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub p_min: u64,
    pub p_max: u64,
    pub t_policy: TPolicy,
    pub k_policy: KPolicy,
    pub a_policy: APolicy,
    pub checks: Vec<CheckId>,
    pub workers: usize,
    pub seed: u64,
    pub emit: Emit,
    /// Multiplies every right side; a hook for exercising the failure path.
    pub rhs_scale: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            p_min: 3,
            p_max: 200,
            t_policy: TPolicy::AllDivisors,
            k_policy: KPolicy::Formula,
            a_policy: APolicy::Auto,
            checks: COSET_CHECKS.to_vec(),
            workers: 1,
            seed: 0,
            emit: Emit::Failures,
            rhs_scale: None,
        }
    }
}

/// Whether the sweep can run `id`.
pub fn sweepable(id: CheckId) -> bool {
    COSET_CHECKS.contains(&id) || id == CheckId::LowHeight || FIXED_POINT_CHECKS.contains(&id)
}

/// `coset` (the default set), `fixed`, `all`, or a comma-separated list of check ids.
pub fn parse_checks(s: &str) -> Result<Vec<CheckId>> {
    let mut out: Vec<CheckId> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let ids: Vec<CheckId> = match part {
            "coset" => COSET_CHECKS.to_vec(),
            "fixed" => FIXED_POINT_CHECKS.to_vec(),
            "all" => CheckId::ALL.iter().copied().filter(|&id| sweepable(id)).collect(),
            id => vec![id.parse().map_err(|_| Error::Domain(format!("unknown check '{id}'")))?],
        };
        for id in ids {
            if !sweepable(id) {
                return domain(format!("{id} cannot be swept over primes"));
            }
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    if out.is_empty() {
        return domain("no checks selected");
    }
    Ok(out)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Domain(format!("{key}: cannot parse '{value}'")))
}

impl FromStr for TPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(TPolicy::AllDivisors),
            list => {
                let ts = list.split(',').map(|t| parse_num::<u64>("t", t)).collect::<Result<Vec<_>>>()?;
                if ts.contains(&0) {
                    return domain("t must be positive");
                }
                Ok(TPolicy::List(ts))
            }
        }
    }
}

impl FromStr for KPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "formula" {
            return Ok(KPolicy::Formula);
        }
        let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
            Some((lo, hi)) => (parse_num("k", lo)?, parse_num("k", hi)?),
            None => {
                let k = parse_num("k", s)?;
                (k, k)
            }
        };
        if lo > hi {
            return domain(format!("empty k range {lo}..{hi}"));
        }
        Ok(KPolicy::Range { lo, hi })
    }
}

impl FromStr for APolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(APolicy::AllCosets),
            "auto" => Ok(APolicy::Auto),
            other => match other.strip_prefix("sample:") {
                Some(n) => match parse_num("a", n)? {
                    0 => domain("sample size must be positive"),
                    n => Ok(APolicy::Sample(n)),
                },
                None => domain(format!("a: expected all, auto or sample:N, got '{other}'")),
            },
        }
    }
}

impl FromStr for Emit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(Emit::All),
            "failures" => Ok(Emit::Failures),
            other => domain(format!("emit: expected all or failures, got '{other}'")),
        }
    }
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Emit::All => "all",
            Emit::Failures => "failures",
        })
    }
}

impl SweepConfig {
    /// Set one `key = value` field. Returns `false` for keys the sweep does not know.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<bool> {
        match key.trim() {
            "p_min" => self.p_min = parse_num(key, value)?,
            "p_max" => self.p_max = parse_num(key, value)?,
            "t" => self.t_policy = value.parse()?,
            "k" => self.k_policy = value.parse()?,
            "a" => self.a_policy = value.parse()?,
            "checks" => self.checks = parse_checks(value)?,
            "workers" => self.workers = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "emit" => self.emit = value.parse()?,
            "rhs_scale" => self.rhs_scale = Some(parse_num(key, value)?),
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// The primes in range, after checking every field.
    pub fn validate(&self) -> Result<Vec<u64>> {
        if self.p_min < 3 {
            return domain("p_min must be at least 3");
        }
        if self.workers == 0 {
            return domain("workers must be positive");
        }
        if self.checks.is_empty() {
            return domain("no checks selected");
        }
        if let Some(id) = self.checks.iter().find(|&&id| !sweepable(id)) {
            return domain(format!("{id} cannot be swept over primes"));
        }
        if let Some(s) = self.rhs_scale {
            if !(s.is_finite() && s >= 0.0) {
                return domain("rhs_scale must be a nonnegative number");
            }
        }
        if self.p_min > self.p_max {
            return domain(format!("empty prime range [{}, {}]", self.p_min, self.p_max));
        }
        let primes: Vec<u64> = primes_up_to(self.p_max).into_iter().filter(|&p| p >= self.p_min).collect();
        if primes.is_empty() {
            return domain(format!("no primes in [{}, {}]", self.p_min, self.p_max));
        }
        Ok(primes)
    }

    /// `k` values at which `id` is evaluated for `p`.
    pub fn k_bounds(&self, id: CheckId, p: u64) -> Option<(u64, u64)> {
        let (lo, hi) = match self.k_policy {
            KPolicy::Formula => (2, floor_sqrt(p).min((p / 2).saturating_sub(1))),
            KPolicy::Range { lo, hi } => (lo.max(2), hi.min((p - 1) / 2)),
        };
        let hi = match id {
            CheckId::T3RatHeight1 | CheckId::T4RatHeight2 | CheckId::LowHeight => hi.min(floor_sqrt(p / 2)),
            _ => hi,
        };
        (lo <= hi).then_some((lo, hi))
    }

    fn rhs_ratio(&self) -> Option<(u64, u64)> {
        self.rhs_scale.map(|s| ((s * 1e6).round() as u64, 1_000_000))
    }
}

/// Everything a sweep produced: totals and the kept reports, in order.
#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub summary: Summary,
    pub by_check: BTreeMap<CheckId, Summary>,
    pub reports: Vec<BoundReport>,
}

/// Totals over a sweep, overall and per check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepTotals {
    pub summary: Summary,
    pub by_check: BTreeMap<CheckId, Summary>,
}

impl SweepTotals {
    fn record(&mut self, r: &BoundReport) {
        self.summary.record(r);
        self.by_check.entry(r.check).or_default().record(r);
    }

    fn merge(&mut self, other: SweepTotals) {
        self.summary += other.summary;
        for (id, s) in other.by_check {
            *self.by_check.entry(id).or_default() += s;
        }
    }
}

/// Run the sweep and keep the emitted reports in memory.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let mut reports = Vec::new();
    let totals = run_sweep_with(cfg, |batch| reports.extend(batch))?;
    Ok(SweepOutcome { summary: totals.summary, by_check: totals.by_check, reports })
}

/// Run the sweep, passing each prime's emitted reports to `sink` in
/// increasing `p`. Within a prime, reports are sorted by parameters then check.
pub fn run_sweep_with(cfg: &SweepConfig, mut sink: impl FnMut(Vec<BoundReport>)) -> Result<SweepTotals> {
    let primes = cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let mut totals = SweepTotals::default();
    for chunk in primes.chunks(cfg.workers * 4) {
        let results: Vec<Result<(SweepTotals, Vec<BoundReport>)>> =
            pool.install(|| chunk.par_iter().map(|&p| sweep_prime(cfg, p)).collect());
        for r in results {
            let (s, mut reports) = r?;
            totals.merge(s);
            reports.sort_by(|a, b| (&a.params, a.check).cmp(&(&b.params, b.check)));
            sink(reports);
        }
    }
    Ok(totals)
}

/// `f` over `primes` on `workers` threads, results in input order.
pub fn map_primes<T: Send>(primes: &[u64], workers: usize, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    pool.install(|| primes.par_iter().map(|&p| f(p)).collect())
}

struct Collector {
    emit: Emit,
    scale: Option<(u64, u64)>,
    totals: SweepTotals,
    kept: Vec<BoundReport>,
}

impl Collector {
    fn push(&mut self, mut r: BoundReport) {
        if let Some((num, den)) = self.scale {
            r.rescale_rhs(num, den);
        }
        self.totals.record(&r);
        if self.emit == Emit::All || r.failed() {
            self.kept.push(r);
        }
    }
}

/// All selected checks at one prime.
pub fn sweep_prime(cfg: &SweepConfig, p: u64) -> Result<(SweepTotals, Vec<BoundReport>)> {
    let ctx = PrimeContext::new(p)?;
    let mut out = Collector { emit: cfg.emit, scale: cfg.rhs_ratio(), totals: SweepTotals::default(), kept: Vec::new() };
    if cfg.checks.iter().any(|id| FIXED_POINT_CHECKS.contains(id)) {
        fixed_point_checks(cfg, p, &mut out)?;
    }
    let coset_checks: Vec<(CheckId, u64, u64)> = cfg
        .checks
        .iter()
        .filter(|&&id| COSET_CHECKS.contains(&id) || id == CheckId::LowHeight)
        .filter_map(|&id| cfg.k_bounds(id, p).map(|(lo, hi)| (id, lo, hi)))
        .collect();
    if !coset_checks.is_empty() {
        coset_sweep(cfg, &ctx, &coset_checks, &mut out)?;
    }
    Ok((out.totals, out.kept))
}

fn fixed_point_checks(cfg: &SweepConfig, p: u64, out: &mut Collector) -> Result<()> {
    let data = FixedPointData::new(p)?;
    for &id in &cfg.checks {
        match id {
            CheckId::Expd => out.push(data.expd_report()),
            CheckId::NewX => {
                for k in divisors(p - 1)? {
                    out.push(data.new_x_report(k)?);
                }
            }
            CheckId::Partition => out.push(data.partition_report(&thresholds(p, log_log_log))?),
            CheckId::TrivBound => out.push(data.triv_bound_report()),
            _ => {}
        }
    }
    Ok(())
}

/// `U` and `V` of one coset, grown in order of height.
#[derive(Default)]
struct CosetState {
    u_len: u64,
    u_distinct: u64,
    u_small_positive: u64,
    last_m: u64,
    x0: Option<i64>,
    u_coprime: u64,
    u_rank: IncrementalRank,
    v_len: u64,
    v_heights: HashSet<u64>,
    v_rank: IncrementalRank,
    v_fractions: Vec<Ratio<i64>>,
}

impl CosetState {
    /// `x = m` or `x = p − m`, arriving with `m` nondecreasing and `m` before `p − m`.
    fn add_u(&mut self, m: u64, x: u64) -> Result<()> {
        self.u_len += 1;
        if x == m {
            self.u_small_positive += 1;
        }
        if m != self.last_m {
            self.last_m = m;
            let x0 = *self.x0.get_or_insert(if x == m { m as i64 } else { -(m as i64) });
            self.u_distinct += 1;
            if arith::gcd(m, x0.unsigned_abs()) == 1 {
                self.u_coprime += 1;
            }
            self.u_rank.insert(&ExponentVector::from_integer(m as i64)?)?;
        }
        Ok(())
    }

    fn add_v(&mut self, p: u64, x: u64, witness: (i64, u64), keep_fraction: bool) -> Result<()> {
        self.v_len += 1;
        self.v_heights.insert(arith::symmetric(x, p).unsigned_abs());
        let f = Ratio::new(witness.0, witness.1 as i64);
        self.v_rank.insert(&ExponentVector::from_ratio(f)?)?;
        if keep_fraction {
            self.v_fractions.push(f);
        }
        Ok(())
    }

    fn facts(&self, p: u64, t: u64, k: u64, a: u64, in_subgroup: bool) -> CosetFacts {
        CosetFacts {
            p,
            t,
            k,
            a,
            in_subgroup,
            u_len: self.u_len,
            u_distinct_heights: self.u_distinct,
            u_small_positive: self.u_small_positive,
            u_coprime: self.x0.map(|x0| (x0, self.u_coprime)),
            u_rank: self.u_rank.rank() as u64,
            v_len: self.v_len,
            v_distinct_heights: self.v_heights.len() as u64,
            v_rank: self.v_rank.rank() as u64,
        }
    }
}

fn t_values(cfg: &SweepConfig, p: u64) -> Result<Vec<u64>> {
    let all = divisors(p - 1)?;
    Ok(match &cfg.t_policy {
        TPolicy::AllDivisors => all,
        TPolicy::List(ts) => all.into_iter().filter(|t| ts.contains(t)).collect(),
    })
}

/// Coset indices `i` (the coset of `g^i`) to visit among `m`; always includes the subgroup.
fn select_cosets(cfg: &SweepConfig, p: u64, t: u64, m: u64) -> Vec<u64> {
    let n = match cfg.a_policy {
        APolicy::AllCosets => None,
        APolicy::Sample(n) => Some(n),
        APolicy::Auto => (p > EXHAUSTIVE_P_MAX).then_some(AUTO_SAMPLE),
    };
    match n {
        Some(n) if (n as u64) < m => {
            let seed = cfg.seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ t.rotate_left(32);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<u64> =
                sample(&mut rng, m as usize - 1, n - 1).into_iter().map(|i| i as u64 + 1).collect();
            picked.push(0);
            picked.sort_unstable();
            picked
        }
        _ => (0..m).collect(),
    }
}

fn coset_sweep(cfg: &SweepConfig, ctx: &PrimeContext, checks: &[(CheckId, u64, u64)], out: &mut Collector) -> Result<()> {
    let p = ctx.p();
    let k_lo = checks.iter().map(|c| c.1).min().expect("nonempty");
    let k_hi = checks.iter().map(|c| c.2).max().expect("nonempty");
    let lowheight = checks.iter().any(|c| c.0 == CheckId::LowHeight);
    let dlog = DlogTable::new(ctx);
    let heights = HeightTable::new(ctx);
    let mut v_order: Vec<u64> = (1..p).filter(|&x| heights.height(x) <= k_hi).collect();
    v_order.sort_by_key(|&x| (heights.height(x), x));
    let mut cache = RhsCache::new();
    let g = ctx.generator();

    for t in t_values(cfg, p)? {
        let m = (p - 1) / t;
        let cosets = select_cosets(cfg, p, t, m);
        let mut slot = vec![usize::MAX; m as usize];
        for (i, &c) in cosets.iter().enumerate() {
            slot[c as usize] = i;
        }
        let mut u_lists: Vec<Vec<(u64, u64)>> = vec![Vec::new(); cosets.len()];
        let mut v_lists: Vec<Vec<u64>> = vec![Vec::new(); cosets.len()];
        for mm in 1..=k_hi {
            for x in [mm, p - mm] {
                let s = slot[dlog.coset_index(x, t) as usize];
                if s != usize::MAX {
                    u_lists[s].push((mm, x));
                }
            }
        }
        for &x in &v_order {
            let s = slot[dlog.coset_index(x, t) as usize];
            if s != usize::MAX {
                v_lists[s].push(x);
            }
        }
        let params: Vec<_> = (k_lo..=k_hi).map(|k| coset_params(p, k, t)).collect::<Result<_>>()?;

        for (i, &c) in cosets.iter().enumerate() {
            let a = ctx.pow(g, c);
            let in_subgroup = c == 0;
            let mut state = CosetState::default();
            let (mut ui, mut vi) = (0, 0);
            let (us, vs) = (&u_lists[i], &v_lists[i]);
            for k in 1..=k_hi {
                while ui < us.len() && us[ui].0 <= k {
                    state.add_u(us[ui].0, us[ui].1)?;
                    ui += 1;
                }
                while vi < vs.len() && heights.height(vs[vi]) <= k {
                    state.add_v(p, vs[vi], heights.witness(vs[vi]), lowheight && in_subgroup)?;
                    vi += 1;
                }
                if k < k_lo {
                    continue;
                }
                let facts = state.facts(p, t, k, a, in_subgroup);
                let cp = &params[(k - k_lo) as usize];
                for &(id, lo, hi) in checks {
                    if k < lo || k > hi || (subgroup_only(id) && !in_subgroup) {
                        continue;
                    }
                    if id == CheckId::LowHeight {
                        if in_subgroup {
                            out.push(lowheight_report(&state.v_fractions, k, Params::coset(p, t, k, 1))?);
                        }
                        continue;
                    }
                    out.push(evaluate_check(id, &facts, cp, None, &mut cache)?);
                }
            }
        }
    }
    Ok(())
}
