//! Exact rational and `Q/Z` arithmetic.
//!
//! Everything downstream computes through the three types defined here:
//!
//! * [`Rational`], a reduced fraction of arbitrary-precision integers;
//! * [`ResidueModZ`], a class in `Q/Z` stored by its representative in `[0, 1)`;
//! * [`AmbiguousResidue`], a value known only up to an orientation sign, kept
//!   as the set of residues it may take.
//!
//! [`PlusMinus`] carries a signed quantity of undetermined sign *before*
//! reduction mod `Z`, so a single `±` can be threaded through scalings and
//! only collapsed into a residue set at the end.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("both summands carry an independent sign ambiguity")]
    DoubleAmbiguity,
}

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ArithError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Panicking constructor for literals with a known nonzero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("literal fraction with zero denominator")
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Greatest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        // `Ratio` arithmetic keeps values normalized; `new_raw` callers may not.
        Rational(BigRational::new(q.numer().clone(), q.denom().clone()))
    }
}

/// Prints `p/q`, or just `p` when the denominator is one.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parse_int = |x: &str| x.trim().parse::<BigInt>().map_err(|_| ArithError::Parse(s.to_string()));
        match t.split_once('/') {
            Some((p, q)) => Rational::new(parse_int(p)?, parse_int(q)?),
            None => Ok(Rational::integer(parse_int(t)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($Trait::$method(&self.0, &rhs.0))
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($Trait::$method(self.0, rhs.0))
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($Trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like integer division; see `checked_div`.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A class in `Q/Z`, stored by its unique representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ResidueModZ(Rational);

impl ResidueModZ {
    pub fn zero() -> Self {
        ResidueModZ(Rational::zero())
    }

    pub fn half() -> Self {
        ResidueModZ(Rational::frac(1, 2))
    }

    /// The representative in `[0, 1)`.
    pub fn rep(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `n · self` in `Q/Z`.
    pub fn times(&self, n: impl Into<BigInt>) -> Self {
        reduce_mod_z(&(&self.0 * &Rational::integer(n)))
    }

    /// True when `self ≡ −self`, i.e. `self ∈ {0, 1/2}`.
    pub fn is_self_negative(&self) -> bool {
        self.times(2).is_zero()
    }
}

/// The unique representative of `q` mod `Z` in `[0, 1)`.
pub fn reduce_mod_z(q: &Rational) -> ResidueModZ {
    let n = q.numer();
    let d = q.denom();
    let mut r = n % d;
    if r.is_negative() {
        r += d;
    }
    // gcd(n mod d, d) = gcd(n, d) = 1, so the result is already reduced.
    ResidueModZ(Rational(BigRational::new_raw(r, d.clone())))
}

impl From<&Rational> for ResidueModZ {
    fn from(q: &Rational) -> Self {
        reduce_mod_z(q)
    }
}

impl FromStr for ResidueModZ {
    type Err = ArithError;

    /// Accepts `p/q` with an optional trailing `mod 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_suffix("mod 1").unwrap_or(t);
        Ok(reduce_mod_z(&t.parse()?))
    }
}

impl fmt::Display for ResidueModZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 1", self.0)
    }
}

/// Serialized as the bare representative, e.g. `"1/28"`.
impl Serialize for ResidueModZ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ResidueModZ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let q = Rational::deserialize(deserializer)?;
        Ok(reduce_mod_z(&q))
    }
}

impl Add for &ResidueModZ {
    type Output = ResidueModZ;
    fn add(self, rhs: &ResidueModZ) -> ResidueModZ {
        reduce_mod_z(&(&self.0 + &rhs.0))
    }
}

impl Add for ResidueModZ {
    type Output = ResidueModZ;
    fn add(self, rhs: ResidueModZ) -> ResidueModZ {
        &self + &rhs
    }
}

impl Sub for &ResidueModZ {
    type Output = ResidueModZ;
    fn sub(self, rhs: &ResidueModZ) -> ResidueModZ {
        reduce_mod_z(&(&self.0 - &rhs.0))
    }
}

impl Neg for &ResidueModZ {
    type Output = ResidueModZ;
    fn neg(self) -> ResidueModZ {
        reduce_mod_z(&-&self.0)
    }
}

impl Neg for ResidueModZ {
    type Output = ResidueModZ;
    fn neg(self) -> ResidueModZ {
        -&self
    }
}

/// A rational known up to sign: `±magnitude`.
///
/// Scaling keeps the single ambiguity; reducing mod `Z` turns it into an
/// [`AmbiguousResidue`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlusMinus {
    magnitude: Rational,
}

impl PlusMinus {
    pub fn new(value: &Rational) -> Self {
        PlusMinus { magnitude: value.abs() }
    }

    pub fn magnitude(&self) -> &Rational {
        &self.magnitude
    }

    /// `[−m, m]`.
    pub fn values(&self) -> [Rational; 2] {
        [-&self.magnitude, self.magnitude.clone()]
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        PlusMinus::new(&(&self.magnitude * factor))
    }

    /// The square, where the sign cancels.
    pub fn square(&self) -> Rational {
        &self.magnitude * &self.magnitude
    }

    pub fn reduce_mod_z(&self) -> AmbiguousResidue {
        ambiguous(&self.magnitude)
    }
}

impl fmt::Display for PlusMinus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.magnitude)
    }
}

/// Serialized as the sorted pair `["-m", "m"]`.
impl Serialize for PlusMinus {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.values().serialize(serializer)
    }
}

/// The set of residues a sign-ambiguous quantity may take.
///
/// Holds one or two residues, kept sorted so derived equality is set
/// equality. Sets built by [`ambiguous`] are closed under negation; adding a
/// definite residue other than `0` or `1/2` yields a *shifted* pair that is
/// not.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AmbiguousResidue {
    values: Vec<ResidueModZ>,
}

impl AmbiguousResidue {
    /// A residue with no ambiguity.
    pub fn definite(r: ResidueModZ) -> Self {
        AmbiguousResidue { values: vec![r] }
    }

    /// The set `{a, b}` (collapses when `a = b`).
    pub fn pair(a: ResidueModZ, b: ResidueModZ) -> Self {
        let mut values = vec![a, b];
        values.sort();
        values.dedup();
        AmbiguousResidue { values }
    }

    pub fn values(&self) -> &[ResidueModZ] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_definite(&self) -> bool {
        self.values.len() == 1
    }

    pub fn contains(&self, r: &ResidueModZ) -> bool {
        self.values.contains(r)
    }

    pub fn is_negation_closed(&self) -> bool {
        self.values.iter().all(|v| self.contains(&-v))
    }

    pub fn is_shifted(&self) -> bool {
        !self.is_negation_closed()
    }

    /// Sum of two values, at most one of which may be a genuine two-element
    /// ambiguity.
    pub fn add(&self, other: &AmbiguousResidue) -> Result<AmbiguousResidue, ArithError> {
        let (definite, set) = match (self.is_definite(), other.is_definite()) {
            (true, _) => (&self.values[0], other),
            (false, true) => (&other.values[0], self),
            (false, false) => return Err(ArithError::DoubleAmbiguity),
        };
        let mut values: Vec<ResidueModZ> = set.values.iter().map(|v| v + definite).collect();
        values.sort();
        values.dedup();
        Ok(AmbiguousResidue { values })
    }
}

impl From<ResidueModZ> for AmbiguousResidue {
    fn from(r: ResidueModZ) -> Self {
        AmbiguousResidue::definite(r)
    }
}

impl fmt::Display for AmbiguousResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.rep().to_string()).collect();
        write!(f, "{{{}}} mod 1", parts.join(", "))
    }
}

/// Serialized as the sorted array of representatives, e.g. `["1/32","31/32"]`.
impl Serialize for AmbiguousResidue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AmbiguousResidue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<ResidueModZ>::deserialize(deserializer)?;
        match raw.as_slice() {
            [a] => Ok(AmbiguousResidue::definite(a.clone())),
            [a, b] => Ok(AmbiguousResidue::pair(a.clone(), b.clone())),
            _ => Err(serde::de::Error::custom("expected one or two residues")),
        }
    }
}

/// `{q mod Z, −q mod Z}`.
pub fn ambiguous(q: &Rational) -> AmbiguousResidue {
    AmbiguousResidue::pair(reduce_mod_z(q), reduce_mod_z(&-q))
}

pub fn add_ambiguous(
    a: impl Into<AmbiguousResidue>,
    b: impl Into<AmbiguousResidue>,
) -> Result<AmbiguousResidue, ArithError> {
    a.into().add(&b.into())
}
