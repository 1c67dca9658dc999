//! Serde helpers writing exact integers as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}
