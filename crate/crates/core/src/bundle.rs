//! Milnor's `S³`-bundles `ξ_{h,1−h}` over `S⁴`.
//!
//! The total space `M_h` is a homotopy 7-sphere bounding the disk bundle
//! `N_h`. Characteristic classes are recorded as coefficients of the
//! generator `x ∈ H⁴(S⁴; Z)`.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{reduce_mod_z, PlusMinus, Rational, ResidueModZ};
use crate::json::BigIntNumber;

/// `2⁷ · 7`, the Pontryagin-number denominator of the `μ` formula.
pub const P1_SQUARED_DENOM: i64 = 896;
/// `2⁵ · 7`, the signature denominator of the `μ` formula.
pub const SIGNATURE_DENOM: i64 = 224;
/// Order of the group of oriented homotopy 7-spheres.
pub const THETA7_ORDER: u8 = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("(h, j) = ({h}, {j}) is outside the family h + j = 1")]
    NotInFamily { h: BigInt, j: BigInt },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MilnorBundle {
    h: BigInt,
    j: BigInt,
}

impl MilnorBundle {
    pub fn new(h: impl Into<BigInt>, j: impl Into<BigInt>) -> Result<Self, BundleError> {
        let (h, j) = (h.into(), j.into());
        if &h + &j != BigInt::one() {
            return Err(BundleError::NotInFamily { h, j });
        }
        Ok(MilnorBundle { h, j })
    }

    /// The bundle `ξ_{h,1−h}`.
    pub fn from_h(h: impl Into<BigInt>) -> Self {
        let h = h.into();
        let j = BigInt::one() - &h;
        MilnorBundle { h, j }
    }

    pub fn h(&self) -> &BigInt {
        &self.h
    }

    pub fn j(&self) -> &BigInt {
        &self.j
    }

    /// `h − j = 2h − 1`.
    fn twist(&self) -> BigInt {
        &self.h - &self.j
    }

    /// `h(h − 1)`, always even.
    pub fn h_times_h_minus_one(&self) -> BigInt {
        &self.h * (&self.h - 1)
    }

    pub fn characteristic_data(&self) -> CharacteristicData {
        CharacteristicData {
            euler_coeff: BigInt::one(),
            p1: PlusMinus::new(&Rational::integer(self.twist() * 2)),
        }
    }

    pub fn disk_bundle_invariants(&self) -> DiskBundleInvariants {
        let p1 = self.characteristic_data().p1;
        DiskBundleInvariants {
            signature: BigInt::one(),
            p1_squared: p1.square().numer().clone(),
        }
    }

    /// Whether `M_h` is diffeomorphic to the standard `S⁷`: `56 | h(h−1)`.
    pub fn is_diffeo_s7(&self) -> bool {
        self.h_times_h_minus_one().is_multiple_of(&BigInt::from(56))
    }

    /// Closed form `h(h−1)/56` of the `μ` lift.
    pub fn mu_lift_closed_form(&self) -> Rational {
        Rational::new(self.h_times_h_minus_one(), 56).expect("nonzero")
    }

    /// Eells-Kuiper invariant `μ(M_h)`.
    ///
    /// Evaluated from the disk-bundle data and checked against the closed
    /// form; a mismatch is a bug and panics.
    pub fn mu(&self) -> ResidueModZ {
        let assembled = self.disk_bundle_invariants().mu_lift();
        let closed = self.mu_lift_closed_form();
        assert_eq!(assembled, closed, "mu(M_h) derivations disagree at h = {}", self.h);
        reduce_mod_z(&closed)
    }

    /// The class of `M_h` in `Θ(7) ≅ Z/28`, as a multiple of `[M₂]`.
    pub fn theta7_class(&self) -> Theta7 {
        let half: BigInt = self.h_times_h_minus_one() / 2;
        let k = half.mod_floor(&BigInt::from(THETA7_ORDER));
        Theta7(k.to_u8().expect("residue below 28"))
    }

    pub fn invariants_record(&self) -> InvariantsRecord {
        let ch = self.characteristic_data();
        let disk = self.disk_bundle_invariants();
        InvariantsRecord {
            h: BigIntNumber(self.h.clone()),
            euler: BigIntNumber(ch.euler_coeff.clone()),
            p1_magnitude: BigIntNumber(ch.p1_magnitude()),
            signature: BigIntNumber(disk.signature),
            p1_squared: BigIntNumber(disk.p1_squared),
            mu: self.mu(),
            diffeo_s7: self.is_diffeo_s7(),
            theta7: self.theta7_class().0,
        }
    }
}

/// Euler and first Pontryagin class of `ξ_{h,1−h}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacteristicData {
    pub euler_coeff: BigInt,
    /// `±2(2h − 1)`; the sign depends on an orientation convention.
    pub p1: PlusMinus,
}

impl CharacteristicData {
    pub fn p1_magnitude(&self) -> BigInt {
        self.p1.magnitude().numer().clone()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiskBundleInvariants {
    pub signature: BigInt,
    /// The Pontryagin number `p₁²(N_h)`.
    pub p1_squared: BigInt,
}

impl DiskBundleInvariants {
    /// `p₁²/(2⁷·7) − Sign/(2⁵·7)` as an exact rational, before reduction.
    pub fn mu_lift(&self) -> Rational {
        let p = Rational::new(self.p1_squared.clone(), P1_SQUARED_DENOM).expect("nonzero");
        let s = Rational::new(self.signature.clone(), SIGNATURE_DENOM).expect("nonzero");
        p - s
    }
}

/// An element of `Θ(7) ≅ Z/28`, counted in multiples of the generator `[M₂]`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Theta7(u8);

impl Theta7 {
    pub fn new(k: impl Into<BigInt>) -> Self {
        let k = k.into().mod_floor(&BigInt::from(THETA7_ORDER));
        Theta7(k.to_u8().expect("residue below 28"))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `n`-fold connected sum.
    pub fn times(self, n: impl Into<BigInt>) -> Self {
        Theta7::new(n.into() * self.0)
    }

    /// `μ` of the class: `k · μ(M₂) = k/28`.
    pub fn mu(self) -> ResidueModZ {
        reduce_mod_z(&Rational::frac(self.0.into(), THETA7_ORDER.into()))
    }
}

impl Add for Theta7 {
    type Output = Theta7;
    fn add(self, rhs: Theta7) -> Theta7 {
        Theta7((self.0 + rhs.0) % THETA7_ORDER)
    }
}

impl fmt::Display for Theta7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, THETA7_ORDER)
    }
}

/// Output record of the `invariants` command.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantsRecord {
    pub h: BigIntNumber,
    pub euler: BigIntNumber,
    pub p1_magnitude: BigIntNumber,
    pub signature: BigIntNumber,
    pub p1_squared: BigIntNumber,
    pub mu: ResidueModZ,
    pub diffeo_s7: bool,
    pub theta7: u8,
}
