//! Brute-force oracles and the case-by-case congruence check.
//!
//! Nothing in here goes through the quotient assembly: the sweep evaluates
//! `h(h−1)/112 ± (2h−1)/32` directly with both signs, so a bug in
//! [`crate::quotient`] cannot hide behind itself.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{reduce_mod_z, AmbiguousResidue, Rational, ResidueModZ};
use crate::json::BigIntNumber;
use crate::quotient::{rp7_mu, Verdict};

/// Largest modulus `enumerate_residues` will scan.
pub const MAX_SCAN_MODULUS: u64 = 1_000_000;

/// `h(h−1) ≡ 0 mod 56` exactly for these `h mod 56`.
pub const VALID_RESIDUES_MOD_56: [u64; 4] = [0, 1, 8, 49];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("modulus {0} exceeds the scan limit {MAX_SCAN_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("range is empty")]
    RangeEmpty,
    #[error("cannot parse range {0:?}; expected a..b (half-open) or a..=b (inclusive)")]
    BadRange(String),
}

/// A finite, nonempty, inclusive range of integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntRange {
    lo: BigInt,
    hi: BigInt,
}

impl IntRange {
    pub fn inclusive(lo: impl Into<BigInt>, hi: impl Into<BigInt>) -> Result<Self, VerifyError> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo > hi {
            return Err(VerifyError::RangeEmpty);
        }
        Ok(IntRange { lo, hi })
    }

    pub fn half_open(start: impl Into<BigInt>, end: impl Into<BigInt>) -> Result<Self, VerifyError> {
        Self::inclusive(start, end.into() - 1)
    }

    pub fn lo(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi(&self) -> &BigInt {
        &self.hi
    }

    pub fn len(&self) -> BigInt {
        &self.hi - &self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = BigInt> + '_ {
        let mut next = self.lo.clone();
        std::iter::from_fn(move || {
            if next > self.hi {
                return None;
            }
            let cur = next.clone();
            next += 1;
            Some(cur)
        })
    }

    /// Splits into at most `parts` consecutive nonempty subranges.
    pub fn split(&self, parts: usize) -> Vec<IntRange> {
        let len = self.len();
        let parts = BigInt::from(parts.max(1)).min(len.clone());
        let step = len.div_ceil(&parts);
        let mut out = Vec::new();
        let mut lo = self.lo.clone();
        while lo <= self.hi {
            let end: BigInt = &lo + &step - 1;
            let hi = end.min(self.hi.clone());
            out.push(IntRange { lo: lo.clone(), hi: hi.clone() });
            lo = hi + 1;
        }
        out
    }
}

impl FromStr for IntRange {
    type Err = VerifyError;

    /// `a..b` is half-open, `a..=b` inclusive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || VerifyError::BadRange(s.to_string());
        let (a, rest) = s.trim().split_once("..").ok_or_else(bad)?;
        let lo: BigInt = a.trim().parse().map_err(|_| bad())?;
        match rest.strip_prefix('=') {
            Some(b) => IntRange::inclusive(lo, b.trim().parse::<BigInt>().map_err(|_| bad())?),
            None => IntRange::half_open(lo, rest.trim().parse::<BigInt>().map_err(|_| bad())?),
        }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.lo, self.hi)
    }
}

impl Serialize for IntRange {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [BigIntNumber(self.lo.clone()), BigIntNumber(self.hi.clone())].serialize(serializer)
    }
}

/// Whether `56 | r(r − 1)`.
pub fn satisfies_congruence(r: &BigInt) -> bool {
    (r * (r - 1u32)).is_multiple_of(&BigInt::from(56))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ResidueSolution {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

/// All `r ∈ [0, modulus)` with `56 | r(r−1)`, by exhaustive scan.
pub fn enumerate_residues(modulus: u64) -> Result<ResidueSolution, VerifyError> {
    check_modulus(modulus)?;
    let residues = (0..modulus)
        .filter(|&r| (r * r.saturating_sub(1)) % 56 == 0)
        .collect();
    Ok(ResidueSolution { modulus, residues })
}

fn check_modulus(modulus: u64) -> Result<(), VerifyError> {
    match modulus {
        0 => Err(VerifyError::ZeroModulus),
        m if m > MAX_SCAN_MODULUS => Err(VerifyError::ModulusTooLarge(m)),
        _ => Ok(()),
    }
}

/// Solves `x ≡ a1 mod m1`, `x ≡ a2 mod m2` for coprime moduli; the result
/// lies in `[0, m1·m2)`.
pub fn crt_pair(a1: i64, m1: i64, a2: i64, m2: i64) -> Option<i64> {
    let e = m1.extended_gcd(&m2);
    if e.gcd != 1 {
        return None;
    }
    // e.x·m1 + e.y·m2 = 1
    let m = m1 * m2;
    let x = (a1 as i128 * e.y as i128 * m2 as i128 + a2 as i128 * e.x as i128 * m1 as i128)
        .rem_euclid(m as i128);
    Some(x as i64)
}

/// The same solution set built from `56 = 8 · 7`: `r(r−1) ≡ 0` holds mod 8
/// iff `r ≡ 0, 1 mod 8` (and likewise mod 7), so the base residues are the
/// four CRT lifts, repeated every 56.
pub fn crt_residues(modulus: u64) -> Result<ResidueSolution, VerifyError> {
    check_modulus(modulus)?;
    let mut base: Vec<u64> = Vec::new();
    for a in [0, 1] {
        for b in [0, 1] {
            base.push(crt_pair(a, 8, b, 7).expect("8 and 7 are coprime") as u64);
        }
    }
    let mut residues: Vec<u64> = (0..modulus.div_ceil(56))
        .flat_map(|period| base.iter().map(move |&r| period * 56 + r))
        .filter(|&r| r < modulus)
        .collect();
    residues.sort_unstable();
    Ok(ResidueSolution { modulus, residues })
}

/// The four residue classes of `h mod 56` on which `M_h ≅ S⁷`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 4] = [CaseLabel::I, CaseLabel::II, CaseLabel::III, CaseLabel::IV];

    /// `h = 56k + offset`.
    pub fn offset(self) -> i64 {
        match self {
            CaseLabel::I => 0,
            CaseLabel::II => 1,
            CaseLabel::III => 8,
            CaseLabel::IV => 49,
        }
    }

    /// Stated constants `(c, d)` with `h(h−1)/112 ≡ c + k/2` and
    /// `(2h−1)/32 ≡ d + k/2`.
    pub fn stated_constants(self) -> (Rational, Rational) {
        match self {
            CaseLabel::I => (Rational::zero(), Rational::frac(-1, 32)),
            CaseLabel::II => (Rational::zero(), Rational::frac(1, 32)),
            CaseLabel::III => (Rational::frac(1, 2), Rational::frac(-1, 32) + Rational::frac(1, 2)),
            CaseLabel::IV => (Rational::zero(), Rational::frac(1, 32)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
            CaseLabel::IV => "iv",
        }
    }
}

impl FromStr for CaseLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(CaseLabel::I),
            "ii" | "2" => Ok(CaseLabel::II),
            "iii" | "3" => Ok(CaseLabel::III),
            "iv" | "4" => Ok(CaseLabel::IV),
            other => Err(format!("unknown case {other:?}; expected i, ii, iii or iv")),
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CaseReport {
    pub case: CaseLabel,
    pub offset: i64,
    pub half_term_constant: ResidueModZ,
    pub sign_term_constant: ResidueModZ,
    pub k_range: IntRange,
    pub checked: BigIntNumber,
    pub first_failure: Option<BigIntNumber>,
    pub matches: bool,
}

/// Expected residues for one case, precomputed for even and odd `k`
/// (`k/2 mod Z` is `0` or `1/2`).
struct CaseCheck {
    offset: i64,
    half_term: [ResidueModZ; 2],
    sign_term: [ResidueModZ; 2],
    target: AmbiguousResidue,
}

impl CaseCheck {
    fn new(offset: i64, half_const: &Rational, sign_const: &Rational) -> Self {
        let shifted = |c: &Rational, parity: i64| reduce_mod_z(&(c + &Rational::frac(parity, 2)));
        CaseCheck {
            offset,
            half_term: [shifted(half_const, 0), shifted(half_const, 1)],
            sign_term: [shifted(sign_const, 0), shifted(sign_const, 1)],
            target: rp7_mu(),
        }
    }

    /// True when `h = 56k + offset` satisfies the three congruences.
    fn holds(&self, k: &BigInt) -> bool {
        let parity = usize::from(k.is_odd());
        let h: BigInt = k * 56 + self.offset;
        let half_term = reduce_mod_z(&Rational::new(&h * (&h - 1), 112).expect("nonzero"));
        if half_term != self.half_term[parity] {
            return false;
        }
        let sign_term = reduce_mod_z(&Rational::new(&h * 2 - 1, 32).expect("nonzero"));
        if sign_term != self.sign_term[parity] {
            return false;
        }
        let plus = &half_term + &sign_term;
        let minus = &half_term - &sign_term;
        AmbiguousResidue::pair(plus, minus) == self.target
    }
}

fn first_case_failure(label: CaseLabel, range: &IntRange) -> Option<BigInt> {
    let (c, d) = label.stated_constants();
    let check = CaseCheck::new(label.offset(), &c, &d);
    range.iter().find(|k| !check.holds(k))
}

/// Verifies a case over every `k` in the range using `workers` threads
/// (1 = sequential).
pub fn check_case(label: CaseLabel, k_range: &IntRange, workers: usize) -> CaseReport {
    let failure = if workers <= 1 {
        first_case_failure(label, k_range)
    } else {
        let chunks = k_range.split(workers * 8);
        let failures: Vec<Option<BigInt>> = in_pool(workers, || {
            chunks.par_iter().map(|r| first_case_failure(label, r)).collect()
        });
        failures.into_iter().flatten().next()
    };
    let (c, d) = label.stated_constants();
    CaseReport {
        case: label,
        offset: label.offset(),
        half_term_constant: reduce_mod_z(&c),
        sign_term_constant: reduce_mod_z(&d),
        k_range: k_range.clone(),
        checked: BigIntNumber(k_range.len()),
        matches: failure.is_none(),
        first_failure: failure.map(BigIntNumber),
    }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Direct evaluation of `h(h−1)/112 ± (2h−1)/32 mod Z` over both signs.
pub fn mu_quotient_oracle(h: &BigInt) -> AmbiguousResidue {
    let base = Rational::new(h * (h - 1), 112).expect("nonzero");
    let shift = Rational::new(h * 2 - 1, 32).expect("nonzero");
    let plus = reduce_mod_z(&(&base + &shift));
    let minus = reduce_mod_z(&(&base - &shift));
    AmbiguousResidue::pair(plus, minus)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerifyRow {
    pub h: BigIntNumber,
    /// `h mod 56`.
    pub residue_class: u64,
    pub mu_quotient: AmbiguousResidue,
    /// `None` when the value set matches neither target.
    pub verdict: Option<Verdict>,
    pub pass: bool,
}

impl VerifyRow {
    pub fn verdict_str(&self) -> &'static str {
        self.verdict.map_or("dichotomy_violation", Verdict::as_str)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BruteForceSummary {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<BigIntNumber>,
    pub rows: Vec<VerifyRow>,
}

impl BruteForceSummary {
    fn empty() -> Self {
        BruteForceSummary { checked: 0, passed: 0, failed: 0, failures: Vec::new(), rows: Vec::new() }
    }

    /// Merges two summaries; rows and failures stay ordered by `h`.
    pub fn merge(mut self, other: BruteForceSummary) -> Self {
        self.checked += other.checked;
        self.passed += other.passed;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self.failures.sort();
        self.rows.extend(other.rows);
        self.rows.sort_by(|a, b| a.h.cmp(&b.h));
        self
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn sweep(range: &IntRange) -> BruteForceSummary {
    let target = rp7_mu();
    let fifty_six = BigInt::from(56);
    let mut summary = BruteForceSummary::empty();
    for h in range.iter().filter(satisfies_congruence) {
        let mu = mu_quotient_oracle(&h);
        let pass = mu == target;
        let residue_class = h.mod_floor(&fifty_six).to_u64().expect("below 56");
        summary.checked += 1;
        if pass {
            summary.passed += 1;
        } else {
            summary.failed += 1;
            summary.failures.push(BigIntNumber(h.clone()));
        }
        summary.rows.push(VerifyRow {
            h: BigIntNumber(h),
            residue_class,
            verdict: Verdict::from_mu(&mu),
            mu_quotient: mu,
            pass,
        });
    }
    summary
}

/// Checks `μ(M_h/τ_h) = ±1/32` for every `h` in range with `M_h ≅ S⁷`.
pub fn brute_force_theorem(range: &IntRange, workers: usize) -> BruteForceSummary {
    if workers <= 1 {
        return sweep(range);
    }
    let chunks = range.split(workers * 8);
    let parts: Vec<BruteForceSummary> = in_pool(workers, || chunks.par_iter().map(sweep).collect());
    parts.into_iter().fold(BruteForceSummary::empty(), BruteForceSummary::merge)
}

/// Number of `h` in the range with `56 | h(h−1)`, counted per period
/// without iterating.
pub fn count_valid(range: &IntRange) -> BigInt {
    let below = |n: &BigInt| -> BigInt {
        // #{h in [0, n) valid} for n ≥ 0
        let (q, r) = n.div_mod_floor(&BigInt::from(56));
        let rem = VALID_RESIDUES_MOD_56.iter().filter(|&&v| BigInt::from(v) < r).count();
        q * 4 + rem
    };
    let shift = if range.lo().is_negative() {
        // move into non-negative territory by whole periods
        (-range.lo()).div_ceil(&BigInt::from(56)) * 56
    } else {
        BigInt::zero()
    };
    let lo = range.lo() + &shift;
    let hi = range.hi() + &shift + BigInt::one();
    below(&hi) - below(&lo)
}
