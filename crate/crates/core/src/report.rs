//! One checked instance of an identity or inequality, with its verdict.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::Error;

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Which statement a [`BoundReport`] checks.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum CheckId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s {
                    $($name => Ok(CheckId::$variant),)*
                    other => Err(Error::Domain(format!("unknown check id {other:?}"))),
                }
            }
        }
    };
}

check_ids! {
    T1IntHeight1 => "T1_intheight1",
    T2IntHeight2 => "T2_intheight2",
    CSubgr1 => "C_subgr1",
    T3RatHeight1 => "T3_ratheight1",
    T4RatHeight2 => "T4_ratheight2",
    T5RatHeight3 => "T5_ratheight3",
    T6RatHeight4 => "T6_ratheight4",
    TrivialU => "trivial_U",
    TrivialV => "trivial_V",
    RankEsts => "rank_ests",
    RankEstsRat => "rank_estsrat",
    RemarkR0Tilde => "remark_r0tilde",
    LowHeight => "lowheightest",
    BoundDivSm => "bounddivsm",
    Expd => "expd",
    NewX => "newX",
    Partition => "partition",
    TrivBound => "triv_bound",
    SumPhi => "sumphi",
    IdentI => "identI",
    EstZ => "estZ",
    ProductSetSize => "estAA",
    ProductSetBound => "uppestAAl",
    Discrepancy => "etk",
    PntLeg => "PNTLeg",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    #[serde(rename = "na")]
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "na",
        }
    }
}

/// How `lhs` and `rhs` must compare for the check to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &BigUint, rhs: &BigUint) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "==",
        }
    }
}

/// Instance parameters; unused slots stay empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<u64>,
}

impl Params {
    pub fn prime(p: u64) -> Self {
        Self { p: Some(p), ..Self::default() }
    }

    pub fn coset(p: u64, t: u64, k: u64, a: u64) -> Self {
        Self { p: Some(p), t: Some(t), k: Some(k), a: Some(a), ..Self::default() }
    }

    fn csv_fields(&self) -> [String; 11] {
        fn f<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(ToString::to_string).unwrap_or_default()
        }
        [
            f(&self.p),
            f(&self.t),
            f(&self.k),
            f(&self.a),
            f(&self.s),
            f(&self.x0),
            f(&self.delta),
            f(&self.l),
            f(&self.m),
            f(&self.y),
            f(&self.z),
        ]
    }
}

fn big_as_number<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(v.to_string()).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

/// A single checked instance.
///
/// `verdict` is `Pass` exactly when `lhs relation rhs` holds, unless the
/// instance was ruled not applicable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub check: CheckId,
    pub params: Params,
    #[serde(serialize_with = "big_as_number")]
    pub lhs: BigUint,
    #[serde(serialize_with = "big_as_number")]
    pub rhs: BigUint,
    pub relation: Relation,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

impl BoundReport {
    pub fn evaluate(
        check: CheckId,
        params: Params,
        lhs: impl Into<BigUint>,
        relation: Relation,
        rhs: impl Into<BigUint>,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let verdict = if relation.holds(&lhs, &rhs) { Verdict::Pass } else { Verdict::Fail };
        Self { check, params, lhs, rhs, relation, verdict, witness: None, diagnostics: BTreeMap::new() }
    }

    pub fn not_applicable(check: CheckId, params: Params, reason: impl Into<String>) -> Self {
        let mut r = Self::evaluate(check, params, 0u32, Relation::Le, 0u32);
        r.verdict = Verdict::NotApplicable;
        r.diagnostics.insert("na_reason".into(), reason.into().into());
        r
    }

    /// Attach a counterexample description; only kept on failure.
    pub fn with_witness(mut self, describe: impl FnOnce() -> String) -> Self {
        if self.verdict == Verdict::Fail {
            self.witness = Some(describe());
        }
        self
    }

    pub fn with_diagnostic(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Replace the right side by `⌊rhs · num / den⌋` and recompute the verdict.
    pub fn rescale_rhs(&mut self, num: u64, den: u64) {
        if self.verdict == Verdict::NotApplicable {
            return;
        }
        self.rhs = &self.rhs * num / den;
        self.verdict = if self.relation.holds(&self.lhs, &self.rhs) { Verdict::Pass } else { Verdict::Fail };
        if self.verdict == Verdict::Fail && self.witness.is_none() {
            self.witness = Some(format!("lhs {} against scaled rhs {}", self.lhs, self.rhs));
        }
    }

    pub fn sort_key(&self) -> (CheckId, &Params) {
        (self.check, &self.params)
    }

    pub const CSV_HEADER: [&'static str; 18] = [
        "check", "p", "t", "k", "a", "s", "x0", "delta", "l", "m", "y", "z", "lhs", "relation", "rhs", "verdict",
        "witness", "diagnostics",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        let mut row = vec![self.check.to_string()];
        row.extend(self.params.csv_fields());
        row.push(self.lhs.to_string());
        row.push(self.relation.as_str().to_string());
        row.push(self.rhs.to_string());
        row.push(self.verdict.as_str().to_string());
        row.push(self.witness.clone().unwrap_or_default());
        let diag: Vec<String> = self.diagnostics.iter().map(|(k, v)| format!("{k}={v}")).collect();
        row.push(diag.join(";"));
        row
    }
}

/// Totals over a batch of reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checked: usize,
    pub passed: usize,
    pub na: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of<'a>(reports: impl IntoIterator<Item = &'a BoundReport>) -> Self {
        let mut s = Summary::default();
        for r in reports {
            s.record(r);
        }
        s
    }

    pub fn record(&mut self, r: &BoundReport) {
        self.checked += 1;
        match r.verdict {
            Verdict::Pass => self.passed += 1,
            Verdict::Fail => self.failed += 1,
            Verdict::NotApplicable => self.na += 1,
        }
    }
}

impl std::ops::AddAssign for Summary {
    fn add_assign(&mut self, rhs: Self) {
        self.checked += rhs.checked;
        self.passed += rhs.passed;
        self.na += rhs.na;
        self.failed += rhs.failed;
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "checked={} passed={} na={} failed={}", self.checked, self.passed, self.na, self.failed)
    }
}
