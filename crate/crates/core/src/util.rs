//! Small helpers shared across modules.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Serialises a `BigUint` as a decimal string so JSON readers never lose digits.
pub mod big_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Derives an independent 64-bit seed for item `index` under label `tag`.
///
/// Uses two rounds of the SplitMix64 finaliser, so nearby inputs give
/// unrelated outputs.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(master ^ mix(tag)) ^ index)
}

/// Parses a non-negative integer written as `123`, `10^12`, `2^64` or `3e9`.
pub fn parse_biguint(s: &str) -> Result<BigUint> {
    let s = s.trim().replace('_', "");
    let bad = || Error::Format(format!("not a non-negative integer: {s:?}"));
    if let Some((b, e)) = s.split_once('^') {
        let b: BigUint = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return Ok(b.pow(e));
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: BigUint = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return Ok(m * BigUint::from(10u32).pow(e));
    }
    s.parse().map_err(|_| bad())
}
