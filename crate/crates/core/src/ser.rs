//! Serde helpers: integers that may exceed 2⁵³ are written as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn i128_str<S: Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ordering<S: Serializer>(v: &std::cmp::Ordering, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match v {
        std::cmp::Ordering::Less => "less",
        std::cmp::Ordering::Equal => "equal",
        std::cmp::Ordering::Greater => "greater",
    })
}
