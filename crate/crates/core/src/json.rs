//! JSON helpers for arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A big integer that serializes as a bare JSON number of any length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BigIntNumber(pub BigInt);

impl Serialize for BigIntNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = self.0.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BigIntNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        n.to_string().parse().map(BigIntNumber).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for BigIntNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<BigInt> for BigIntNumber {
    fn from(n: BigInt) -> Self {
        BigIntNumber(n)
    }
}
