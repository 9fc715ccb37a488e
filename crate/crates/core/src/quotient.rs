//! `μ` of the quotient `M_h/τ_h` by the fiberwise antipodal involution.
//!
//! The involution extends to `N_h` with fixed set the zero section `S⁴`,
//! whose normal bundle `W_h` carries the characteristic classes of `ξ`. The
//! invariant is assembled from the halved `μ(M_h)` lift and the fixed-point
//! contributions, then matched against the two possible diffeomorphism types
//! `RP⁷` and `RP⁷ # 14M₂`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::MilnorBundle;
use crate::exact::{add_ambiguous, ambiguous, reduce_mod_z, AmbiguousResidue, PlusMinus, Rational};
use crate::json::BigIntNumber;

/// `2⁶ · 7`, denominator of the `A₂` and equivariant-signature terms.
pub const FIXED_POINT_DENOM: i64 = 448;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("M_h is not diffeomorphic to S^7 for h = {0}")]
    NotDiffeoS7(BigInt),
    #[error("mu(M_h/tau_h) = {mu} at h = {h} matches neither RP^7 nor RP^7 # 14M_2")]
    DichotomyViolation { h: BigInt, mu: AmbiguousResidue },
}

/// `μ(RP⁷) = ±1/32`.
pub fn rp7_mu() -> AmbiguousResidue {
    AmbiguousResidue::pair(
        reduce_mod_z(&Rational::frac(1, 32)),
        reduce_mod_z(&Rational::frac(31, 32)),
    )
}

/// `μ(RP⁷ # 14M₂) = ±1/32 + 1/2`.
pub fn rp7_sum_14m2_mu() -> AmbiguousResidue {
    AmbiguousResidue::pair(
        reduce_mod_z(&Rational::frac(15, 32)),
        reduce_mod_z(&Rational::frac(17, 32)),
    )
}

/// Localized contributions of the fixed `S⁴`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FixedPointContributions {
    /// Spin contribution `∫A₁ = ±(1/32)∫p₁(W_h)`.
    pub a1: PlusMinus,
    /// Signature contribution `∫A₂ = ∫e(W_h)`.
    pub a2: Rational,
    pub equivariant_signature: BigInt,
}

pub fn fixed_point_contributions(bundle: &MilnorBundle) -> FixedPointContributions {
    // W_h is ξ_{h,1−h} itself, restricted to the zero section.
    let normal = bundle.characteristic_data();
    FixedPointContributions {
        a1: normal.p1.scale(&Rational::frac(1, 32)),
        a2: Rational::integer(normal.euler_coeff),
        // τ_h fixes the generator of H⁴.
        equivariant_signature: BigInt::one(),
    }
}

/// Closed form `h(h−1)/112 ± (2h−1)/32 mod Z`.
fn mu_quotient_closed_form(bundle: &MilnorBundle) -> AmbiguousResidue {
    let h = bundle.h();
    let definite = reduce_mod_z(&Rational::new(bundle.h_times_h_minus_one(), 112).expect("nonzero"));
    let shift = ambiguous(&Rational::new(h * 2 - 1, 32).expect("nonzero"));
    add_ambiguous(definite, shift).expect("one ambiguous summand")
}

/// `μ(M_h/τ_h)` as a set of residues, defined when `M_h ≅ S⁷`.
///
/// Assembled term by term as half the `μ(M_h)` lift, plus half of `A₁`,
/// plus `A₂/(2⁶·7)`, minus `Sign(N_h, τ_h)/(2⁶·7)`; checked against the
/// closed form, and a mismatch panics.
pub fn mu_quotient(bundle: &MilnorBundle) -> Result<AmbiguousResidue, QuotientError> {
    if !bundle.is_diffeo_s7() {
        return Err(QuotientError::NotDiffeoS7(bundle.h().clone()));
    }
    let fp = fixed_point_contributions(bundle);
    let half = Rational::frac(1, 2);
    let lift = bundle.disk_bundle_invariants().mu_lift();

    let definite = &lift * &half
        + fp.a2.clone() / Rational::integer(FIXED_POINT_DENOM)
        - Rational::new(fp.equivariant_signature.clone(), FIXED_POINT_DENOM).expect("nonzero");
    let spin = fp.a1.scale(&half).reduce_mod_z();
    let assembled = add_ambiguous(reduce_mod_z(&definite), spin).expect("one ambiguous summand");

    let closed = mu_quotient_closed_form(bundle);
    assert_eq!(assembled, closed, "mu(M_h/tau_h) derivations disagree at h = {}", bundle.h());
    Ok(assembled)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "RP7")]
    RealProjective7,
    #[serde(rename = "RP7#14M2")]
    RealProjective7Sum14M2,
    #[serde(rename = "not_applicable")]
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::RealProjective7 => "RP7",
            Verdict::RealProjective7Sum14M2 => "RP7#14M2",
            Verdict::NotApplicable => "not_applicable",
        }
    }

    /// Matches a `μ` value set against the two targets.
    pub fn from_mu(mu: &AmbiguousResidue) -> Option<Verdict> {
        if *mu == rp7_mu() {
            Some(Verdict::RealProjective7)
        } else if *mu == rp7_sum_14m2_mu() {
            Some(Verdict::RealProjective7Sum14M2)
        } else {
            None
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientReport {
    pub h: BigInt,
    pub contributions: FixedPointContributions,
    /// `None` exactly when the verdict is `NotApplicable`.
    pub mu_quotient: Option<AmbiguousResidue>,
    pub verdict: Verdict,
}

impl QuotientReport {
    pub fn record(&self) -> QuotientRecord {
        QuotientRecord {
            h: BigIntNumber(self.h.clone()),
            a1: self.contributions.a1.values(),
            a2: self.contributions.a2.clone(),
            equivariant_signature: BigIntNumber(self.contributions.equivariant_signature.clone()),
            mu_quotient: self.mu_quotient.clone(),
            verdict: self.verdict,
        }
    }
}

/// Serialized form of a [`QuotientReport`].
#[derive(Clone, Debug, Serialize)]
pub struct QuotientRecord {
    pub h: BigIntNumber,
    pub a1: [Rational; 2],
    pub a2: Rational,
    pub equivariant_signature: BigIntNumber,
    pub mu_quotient: Option<AmbiguousResidue>,
    pub verdict: Verdict,
}

pub fn classify_quotient(bundle: &MilnorBundle) -> Result<QuotientReport, QuotientError> {
    let contributions = fixed_point_contributions(bundle);
    let h = bundle.h().clone();
    let mu = match mu_quotient(bundle) {
        Ok(mu) => mu,
        Err(QuotientError::NotDiffeoS7(_)) => {
            return Ok(QuotientReport {
                h,
                contributions,
                mu_quotient: None,
                verdict: Verdict::NotApplicable,
            })
        }
        Err(e) => return Err(e),
    };
    match Verdict::from_mu(&mu) {
        Some(verdict) => Ok(QuotientReport {
            h,
            contributions,
            mu_quotient: Some(mu),
            verdict,
        }),
        None => Err(QuotientError::DichotomyViolation { h, mu }),
    }
}
