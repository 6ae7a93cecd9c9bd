//! Small elements of a coset `aG`: the sets `U(k,t,a)` and `V(k,t,a)`, the
//! parameters `r₀, r̃₀, r₁, r₂, s₀, s₁`, and the bounds they satisfy.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::{self, symmetric};
use crate::error::{domain, Result};
use crate::modp::{ceil_sqrt, floor_sqrt, CosetSpec, HeightWitness, PrimeContext};
use crate::report::{BoundReport, CheckId, Params, Relation};
use crate::smooth::{gram_determinant, ExponentVector, IncrementalRank, SmoothCounter};

/// Largest `s` tried when minimizing the right side of the `r₂` bounds.
pub const S_SWEEP_MAX: u64 = 20;

/// Subset budget for the maximal-volume search behind [`check_lowheightest`].
pub const LOWHEIGHT_SUBSET_CAP: u64 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SetKind {
    U,
    V,
}

/// `U(k,t,a)` (integer height `≤ k`) or `V(k,t,a)` (rational height `≤ k`).
#[derive(Debug, Clone)]
pub struct CosetSmallSet {
    pub spec: CosetSpec,
    pub k: u64,
    pub kind: SetKind,
    /// Residues in `[1, p-1]`, ascending.
    pub elements: Vec<u64>,
    pub height_witnesses: BTreeMap<u64, HeightWitness>,
    pub distinct_int_heights: BTreeSet<u64>,
}

impl CosetSmallSet {
    fn build(spec: &CosetSpec, k: u64, kind: SetKind, elements: BTreeSet<u64>) -> Result<Self> {
        let ctx = spec.ctx();
        let mut height_witnesses = BTreeMap::new();
        let mut distinct_int_heights = BTreeSet::new();
        for &x in &elements {
            let w = ctx.rational_height(x)?;
            distinct_int_heights.insert(w.int_height);
            height_witnesses.insert(x, w);
        }
        Ok(Self { spec: spec.clone(), k, kind, elements: elements.into_iter().collect(), height_witnesses, distinct_int_heights })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Symmetric integer representatives, in `(-p/2, p/2]`.
    pub fn int_representatives(&self) -> Vec<i64> {
        let p = self.spec.p();
        self.elements.iter().map(|&x| symmetric(x, p)).collect()
    }

    /// The minimizing fractions `a/b` of the rational heights.
    pub fn fractions(&self) -> Vec<Ratio<i64>> {
        self.height_witnesses.values().map(|w| Ratio::new(w.witness_a, w.witness_b as i64)).collect()
    }
}

/// `U(k,t,a) = {x ∈ aG : |x| ≤ k}`.
pub fn enumerate_u(spec: &CosetSpec, k: u64) -> Result<CosetSmallSet> {
    let p = spec.p();
    if k == 0 || 2 * k >= p {
        return domain(format!("need 1 <= k < p/2, got k={k}, p={p}"));
    }
    let mut found = BTreeSet::new();
    for m in 1..=k {
        for x in [m, p - m] {
            if spec.contains(x) {
                found.insert(x);
            }
        }
    }
    CosetSmallSet::build(spec, k, SetKind::U, found)
}

/// `V(k,t,a) = {x ∈ aG : ‖x‖ ≤ k}`, from the fractions `a'/b` with `|a'|, b ≤ k`.
pub fn enumerate_v(spec: &CosetSpec, k: u64) -> Result<CosetSmallSet> {
    let p = spec.p();
    if k == 0 || k > ceil_sqrt(p) {
        return domain(format!("need 1 <= k <= ceil(sqrt p), got k={k}, p={p}"));
    }
    let ctx = spec.ctx();
    let mut found = BTreeSet::new();
    for b in 1..=k {
        let b_inv = ctx.inv(b);
        for a in 1..=k as i64 {
            for signed in [a, -a] {
                let x = ctx.mul(ctx.residue(signed), b_inv);
                if spec.contains(x) {
                    found.insert(x);
                }
            }
        }
    }
    CosetSmallSet::build(spec, k, SetKind::V, found)
}

/// The parameter functions of `(p, k, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosetParams {
    pub r0: u32,
    pub r0_tilde: u32,
    pub r1: u32,
    pub r2: i64,
    pub s0: u64,
    pub s0_tilde: u64,
    /// Absent when `r₁ = 0`.
    pub s1: Option<u64>,
}

impl CosetParams {
    /// `r₂`, when it is at least 1.
    pub fn r2_positive(&self) -> Option<u64> {
        (self.r2 >= 1).then_some(self.r2 as u64)
    }
}

/// Largest `r` with `c·k^r ≤ n`.
fn log_floor(n: u64, k: u64, c: u64) -> u32 {
    let (n, k) = (n as u128, k as u128);
    let mut r = 0;
    let mut v = c as u128 * k;
    while v <= n {
        r += 1;
        v *= k;
    }
    r
}

/// `C(n, k)` exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `max{s : C(r+s, s) ≤ t}` for `r ≥ 1`.
pub fn max_s_binomial(r: u64, t: u64) -> u64 {
    assert!(r >= 1, "the binomial scan needs r >= 1");
    let mut s = 0u64;
    // C(r+s+1, s+1) = C(r+s, s)·(r+s+1)/(s+1)
    let mut c: u128 = 1;
    loop {
        let next = c * (r + s + 1) as u128 / (s + 1) as u128;
        if next > t as u128 {
            return s;
        }
        c = next;
        s += 1;
    }
}

pub fn coset_params(p: u64, k: u64, t: u64) -> Result<CosetParams> {
    if k <= 1 || 2 * k >= p {
        return domain(format!("need 1 < k < p/2, got k={k}, p={p}"));
    }
    if t == 0 {
        return domain("t must be positive");
    }
    let r0 = log_floor(p, k, 2);
    let r0_tilde = log_floor(p, k, 1);
    let r1 = r0 / 2;
    let r2 = (r0 as i64 - 2).div_euclid(8);
    Ok(CosetParams {
        r0,
        r0_tilde,
        r1,
        r2,
        s0: max_s_binomial(r0 as u64, t),
        s0_tilde: max_s_binomial(r0_tilde as u64, t),
        s1: (r1 >= 1).then(|| max_s_binomial(r1 as u64, t)),
    })
}

/// Everything the coset checks read from one instance `(p, t, k, a)`.
///
/// Built either from explicit enumeration or incrementally by the sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CosetFacts {
    pub p: u64,
    pub t: u64,
    pub k: u64,
    pub a: u64,
    /// Whether `aG = G`.
    pub in_subgroup: bool,
    pub u_len: u64,
    pub u_distinct_heights: u64,
    /// `#{x ∈ U : 1 ≤ x ≤ k}` as residues.
    pub u_small_positive: u64,
    /// `(x₀, #{|x| : x ∈ U, gcd(|x|, |x₀|) = 1})`.
    pub u_coprime: Option<(i64, u64)>,
    pub u_rank: u64,
    pub v_len: u64,
    pub v_distinct_heights: u64,
    pub v_rank: u64,
}

impl CosetFacts {
    pub fn from_sets(u: &CosetSmallSet, v: &CosetSmallSet, x0: Option<i64>) -> Result<Self> {
        let spec = &u.spec;
        let p = spec.p();
        let reps = u.int_representatives();
        let x0 = match x0 {
            Some(x0) => {
                if !reps.contains(&x0) {
                    return domain(format!("x0 = {x0} is not in U"));
                }
                Some(x0)
            }
            None => least_height(&reps),
        };
        let u_coprime = x0.map(|x0| {
            let heights: BTreeSet<u64> = reps
                .iter()
                .map(|x| x.unsigned_abs())
                .filter(|&h| arith::gcd(h, x0.unsigned_abs()) == 1)
                .collect();
            (x0, heights.len() as u64)
        });
        let u_vals: Vec<Ratio<i64>> = reps.iter().map(|&x| Ratio::from_integer(x)).collect();
        Ok(Self {
            p,
            t: spec.t(),
            k: u.k,
            a: spec.a(),
            in_subgroup: spec.contains(1),
            u_len: u.len() as u64,
            u_distinct_heights: u.distinct_int_heights.len() as u64,
            u_small_positive: u.elements.iter().filter(|&&x| x <= u.k).count() as u64,
            u_coprime,
            u_rank: crate::smooth::multiplicative_rank(&u_vals)?.rank as u64,
            v_len: v.len() as u64,
            v_distinct_heights: v.distinct_int_heights.len() as u64,
            v_rank: crate::smooth::multiplicative_rank(&v.fractions())?.rank as u64,
        })
    }

    fn params(&self) -> Params {
        Params::coset(self.p, self.t, self.k, self.a)
    }
}

/// Element of least absolute value, the positive one on ties.
pub fn least_height(reps: &[i64]) -> Option<i64> {
    reps.iter().copied().min_by_key(|&x| (x.unsigned_abs(), x < 0))
}

/// Right sides that depend on `(p, t, k)` only, shared across cosets.
#[derive(Debug, Default)]
pub struct RhsCache {
    pub counter: SmoothCounter,
    r2_bounds: HashMap<(bool, u64, u64, u64, Option<u64>), R2Bound>,
}

/// The minimized right side of the `r₂` bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct R2Bound {
    pub rhs: BigUint,
    pub s: u64,
    pub phi_term: BigUint,
    pub ratio_ceil: BigUint,
    pub ratio: f64,
}

impl RhsCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `min_s max(2Φ̃(k', s−1), ⌈t / C(r₂+s, s)⌉)` with `k' = k²` (any coset)
    /// or `k' = k` (the subgroup). A fixed `s` skips the minimization.
    pub fn r2_bound(&mut self, subgroup: bool, p: u64, t: u64, k: u64, r2: u64, s: Option<u64>) -> R2Bound {
        let key = (subgroup, p, t, k, s);
        if let Some(b) = self.r2_bounds.get(&key) {
            return b.clone();
        }
        let k_phi = if subgroup { k } else { k * k };
        let range = match s {
            Some(s) => s..=s,
            None => 1..=S_SWEEP_MAX,
        };
        let mut best: Option<R2Bound> = None;
        for s in range {
            let c = binomial(r2 + s, s);
            let ratio_ceil = (BigUint::from(t) + &c - 1u32) / &c;
            let ratio = t as f64 / c.to_f64().unwrap_or(f64::INFINITY);
            let phi_term = self.counter.phi_tilde(k_phi, s - 1) * 2u32;
            let rhs = (&phi_term).max(&ratio_ceil).clone();
            if best.as_ref().is_none_or(|b| rhs < b.rhs) {
                best = Some(R2Bound { rhs, s, phi_term, ratio_ceil, ratio });
            }
        }
        let b = best.expect("nonempty s range");
        self.r2_bounds.insert(key, b.clone());
        b
    }
}

/// Checks handled by [`evaluate_checks`].
pub const COSET_CHECKS: &[CheckId] = &[
    CheckId::T1IntHeight1,
    CheckId::T2IntHeight2,
    CheckId::CSubgr1,
    CheckId::T3RatHeight1,
    CheckId::T4RatHeight2,
    CheckId::T5RatHeight3,
    CheckId::T6RatHeight4,
    CheckId::TrivialU,
    CheckId::TrivialV,
    CheckId::RankEsts,
    CheckId::RankEstsRat,
    CheckId::RemarkR0Tilde,
];

/// Whether a check is about the subgroup `G` itself.
pub fn subgroup_only(id: CheckId) -> bool {
    matches!(id, CheckId::CSubgr1 | CheckId::T4RatHeight2 | CheckId::T6RatHeight4)
}

/// One report for `id` at the instance described by `facts`.
///
/// `s` fixes the `s` of the `r₂` bounds instead of minimizing over it.
pub fn evaluate_check(
    id: CheckId,
    facts: &CosetFacts,
    cp: &CosetParams,
    s: Option<u64>,
    cache: &mut RhsCache,
) -> Result<BoundReport> {
    let f = facts;
    let params = f.params();
    if subgroup_only(id) && !f.in_subgroup {
        return domain(format!("{id} is a statement about the subgroup itself (a = 1)"));
    }
    let k = f.k;
    let psi = |cache: &mut RhsCache, j: u64| BigUint::from(cache.counter.psi_at_index(k, j));
    let report = match id {
        CheckId::T1IntHeight1 => {
            let rhs = psi(cache, cp.s0 + 1);
            BoundReport::evaluate(id, Params { s: Some(cp.s0), ..params }, f.u_distinct_heights, Relation::Le, rhs)
                .with_witness(|| format!("{} distinct |x| in U", f.u_distinct_heights))
        }
        CheckId::T2IntHeight2 => match f.u_coprime {
            None => BoundReport::not_applicable(id, params, "U is empty, no x0"),
            Some((x0, lhs)) => {
                let rhs = psi(cache, cp.s0);
                BoundReport::evaluate(id, Params { s: Some(cp.s0), x0: Some(x0), ..params }, lhs, Relation::Le, rhs)
                    .with_witness(|| format!("{lhs} distinct |x| coprime to {x0}"))
            }
        },
        CheckId::CSubgr1 => {
            let rhs = psi(cache, cp.s0);
            BoundReport::evaluate(id, Params { s: Some(cp.s0), ..params }, f.u_distinct_heights, Relation::Le, rhs)
                .with_witness(|| format!("{} distinct |x| in U(k,t,1)", f.u_distinct_heights))
        }
        CheckId::T3RatHeight1 | CheckId::T4RatHeight2 => match cp.s1 {
            None => BoundReport::not_applicable(id, params, "r1 = 0"),
            Some(s1) => {
                let s = if id == CheckId::T3RatHeight1 { s1 + 1 } else { s1 };
                let rhs = cache.counter.phi_tilde(k, s);
                let v_ok = BigUint::from(f.v_len) <= rhs;
                BoundReport::evaluate(id, Params { s: Some(s1), ..params }, f.v_distinct_heights, Relation::Le, rhs)
                    .with_diagnostic("card_V", f.v_len)
                    .with_diagnostic("card_V_within_bound", v_ok)
                    .with_witness(|| format!("{} distinct |x| over V (#V = {})", f.v_distinct_heights, f.v_len))
            }
        },
        CheckId::T5RatHeight3 | CheckId::T6RatHeight4 => match cp.r2_positive() {
            None => BoundReport::not_applicable(id, params, format!("r2 = {} < 1", cp.r2)),
            Some(r2) => {
                if s == Some(0) {
                    return domain("s must be at least 1");
                }
                let b = cache.r2_bound(id == CheckId::T6RatHeight4, f.p, f.t, k, r2, s);
                BoundReport::evaluate(id, Params { s: Some(b.s), ..params }, f.v_len, Relation::Le, b.rhs.clone())
                    .with_diagnostic("r2", r2)
                    .with_diagnostic("phi_term", b.phi_term.to_string())
                    .with_diagnostic("t_over_binom", b.ratio)
                    .with_witness(|| format!("#V = {} exceeds bound at s = {}", f.v_len, b.s))
            }
        },
        CheckId::TrivialU => {
            let rhs = (2 * k).min(f.t);
            BoundReport::evaluate(id, params, f.u_len, Relation::Le, rhs).with_witness(|| format!("#U = {}", f.u_len))
        }
        CheckId::TrivialV => {
            let rhs = (2 * k * k).min(f.t);
            BoundReport::evaluate(id, params, f.v_len, Relation::Le, rhs).with_witness(|| format!("#V = {}", f.v_len))
        }
        CheckId::RankEsts => BoundReport::evaluate(id, Params { s: Some(cp.s0), ..params }, f.u_rank, Relation::Le, cp.s0 + 1)
            .with_witness(|| format!("rank U = {}", f.u_rank)),
        CheckId::RankEstsRat => match cp.s1 {
            None => BoundReport::not_applicable(id, params, "r1 = 0"),
            Some(s1) => BoundReport::evaluate(id, Params { s: Some(s1), ..params }, f.v_rank, Relation::Le, s1 + 1)
                .with_witness(|| format!("rank V = {}", f.v_rank)),
        },
        CheckId::RemarkR0Tilde => {
            let rhs = psi(cache, cp.s0_tilde + 1);
            BoundReport::evaluate(id, Params { s: Some(cp.s0_tilde), ..params }, f.u_small_positive, Relation::Le, rhs)
                .with_witness(|| format!("{} elements of U in [1, k]", f.u_small_positive))
        }
        other => return domain(format!("{other} is not a coset check")),
    };
    Ok(report)
}

/// Check one theorem at `(spec, k)`.
///
/// Statements about the subgroup (`C_subgr1`, `T4`, `T6`) are evaluated on
/// `G` whatever `spec.a()` is. `s` only applies to `T5`/`T6` and `x0` only to `T2`.
pub fn check_height_theorem(
    id: CheckId,
    spec: &CosetSpec,
    k: u64,
    s: Option<u64>,
    x0: Option<i64>,
) -> Result<BoundReport> {
    if !COSET_CHECKS.contains(&id) {
        return domain(format!("{id} is not a coset check"));
    }
    if s.is_some() && !matches!(id, CheckId::T5RatHeight3 | CheckId::T6RatHeight4) {
        return domain("s is determined by (p, k, t) for this check");
    }
    if x0.is_some() && id != CheckId::T2IntHeight2 {
        return domain("x0 only applies to T2");
    }
    let spec = if subgroup_only(id) { CosetSpec::new(spec.ctx().clone(), spec.t(), 1)? } else { spec.clone() };
    let cp = coset_params(spec.p(), k, spec.t())?;
    let facts = instance_facts(&spec, k, x0)?;
    evaluate_check(id, &facts, &cp, s, &mut RhsCache::new())
}

/// All coset checks at `(spec, k)`; subgroup statements only when `1 ∈ aG`.
pub fn check_all(spec: &CosetSpec, k: u64, cache: &mut RhsCache) -> Result<Vec<BoundReport>> {
    let cp = coset_params(spec.p(), k, spec.t())?;
    let facts = instance_facts(spec, k, None)?;
    COSET_CHECKS
        .iter()
        .filter(|&&id| facts.in_subgroup || !subgroup_only(id))
        .map(|&id| evaluate_check(id, &facts, &cp, None, cache))
        .collect()
}

fn instance_facts(spec: &CosetSpec, k: u64, x0: Option<i64>) -> Result<CosetFacts> {
    let u = enumerate_u(spec, k)?;
    let v = enumerate_v(spec, k.min(ceil_sqrt(spec.p())))?;
    CosetFacts::from_sets(&u, &v, x0)
}

/// Rank check of `U` (`kind = U`, against `s₀ + 1`) or of `V` (against `s₁ + 1`).
pub fn check_rank_inequalities(spec: &CosetSpec, k: u64, kind: SetKind) -> Result<BoundReport> {
    let id = match kind {
        SetKind::U => CheckId::RankEsts,
        SetKind::V => CheckId::RankEstsRat,
    };
    check_height_theorem(id, spec, k, None, None)
}

/// The maximal-volume independent subset of `V(k,t,1)` and the smallest
/// power products over it: every `Π x_j^{u_j}` with `0 < max|u_j| ≤ 3`
/// must have `‖x‖² > k`. The left side counts violations.
///
/// Not applicable when `k > √(p/2)` (fractions of height `≤ k` are then not
/// determined by their residues) or when the subset search exceeds
/// [`LOWHEIGHT_SUBSET_CAP`].
pub fn check_lowheightest(ctx: &PrimeContext, t: u64, k: u64) -> Result<BoundReport> {
    let spec = CosetSpec::new(ctx.clone(), t, 1)?;
    let p = ctx.p();
    let params = Params::coset(p, t, k, 1);
    if k < 2 || k > floor_sqrt(p / 2) {
        return Ok(BoundReport::not_applicable(CheckId::LowHeight, params, "k outside [2, sqrt(p/2)]"));
    }
    let v = enumerate_v(&spec, k)?;
    lowheight_report(&v.fractions(), k, params)
}

pub(crate) fn lowheight_report(fractions: &[Ratio<i64>], k: u64, params: Params) -> Result<BoundReport> {
    let id = CheckId::LowHeight;
    let mut vectors: BTreeSet<ExponentVector> = BTreeSet::new();
    for &f in fractions {
        let mut v = ExponentVector::from_ratio(f)?;
        v.sign = 1;
        // x and 1/x span the same line
        if v.entries.values().next().is_some_and(|&e| e < 0) {
            v.entries.values_mut().for_each(|e| *e = -*e);
        }
        if !v.is_unit() {
            vectors.insert(v);
        }
    }
    let vectors: Vec<ExponentVector> = vectors.into_iter().collect();
    let mut rank = IncrementalRank::new();
    for v in &vectors {
        rank.insert(v)?;
    }
    let ell = rank.rank();
    if ell == 0 {
        return Ok(BoundReport::evaluate(id, params, 0u32, Relation::Le, 0u32).with_diagnostic("rank", 0));
    }
    let subsets = binomial(vectors.len() as u64, ell as u64);
    if subsets > BigUint::from(LOWHEIGHT_SUBSET_CAP) {
        return Ok(BoundReport::not_applicable(id, params, format!("{subsets} subsets exceed the search cap")));
    }
    let primes: Vec<u64> = vectors.iter().flat_map(|v| v.entries.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let dense: Vec<Vec<i64>> = vectors
        .iter()
        .map(|v| primes.iter().map(|q| v.entries.get(q).copied().unwrap_or(0) as i64).collect())
        .collect();
    let mut best: Option<(num_bigint::BigInt, Vec<usize>)> = None;
    for_each_combination(vectors.len(), ell, &mut |idx| {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| dense[i].clone()).collect();
        let det = gram_determinant(&rows);
        if best.as_ref().is_none_or(|(b, _)| det > *b) {
            best = Some((det, idx.to_vec()));
        }
    });
    let (_, chosen) = best.expect("at least one subset");
    let basis: Vec<&Vec<i64>> = chosen.iter().map(|&i| &dense[i]).collect();
    let mut violations = 0u64;
    let mut first: Option<String> = None;
    let mut u = vec![-3i64; ell];
    loop {
        if u.iter().any(|&x| x != 0) {
            let mut combo = vec![0i64; primes.len()];
            for (uj, row) in u.iter().zip(&basis) {
                for (c, &e) in combo.iter_mut().zip(row.iter()) {
                    *c += uj * e;
                }
            }
            if !height_squared_exceeds(&primes, &combo, k) {
                violations += 1;
                first.get_or_insert_with(|| format!("exponents {u:?}"));
            }
        }
        let mut i = 0;
        while i < ell && u[i] == 3 {
            u[i] = -3;
            i += 1;
        }
        if i == ell {
            break;
        }
        u[i] += 1;
    }
    let basis_desc: Vec<String> = chosen.iter().map(|&i| vectors[i].to_ratio().map_or("?".into(), |r| r.to_string())).collect();
    Ok(BoundReport::evaluate(id, params, violations, Relation::Le, 0u32)
        .with_diagnostic("rank", ell)
        .with_diagnostic("basis", basis_desc.join(" "))
        .with_witness(|| first.unwrap_or_default()))
}

/// Whether `max(num, den)² > k` for `Π primes^combo`.
fn height_squared_exceeds(primes: &[u64], combo: &[i64], k: u64) -> bool {
    let mut num = 1u128;
    let mut den = 1u128;
    for (&q, &e) in primes.iter().zip(combo) {
        let target = if e > 0 { &mut num } else { &mut den };
        for _ in 0..e.unsigned_abs() {
            *target = target.saturating_mul(q as u128);
        }
    }
    let h = num.max(den);
    h.saturating_mul(h) > k as u128
}

fn for_each_combination(n: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..r).collect();
    if r > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = r;
        while i > 0 && idx[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
