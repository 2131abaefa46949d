//! Finite unions of integer intervals, possibly with an unbounded upper tail.
//!
//! Text form: `empty`, or comma-separated parts `k`, `lo..hi` (inclusive),
//! `lo..` and `..hi`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    /// Sorted, disjoint, non-adjacent inclusive parts; `None` is `+∞`.
    parts: Vec<(u64, Option<u64>)>,
}

fn end_lt(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(lo: u64, hi: u64) -> Self {
        Self::from_parts(vec![(lo, Some(hi))])
    }

    pub fn at_least(lo: u64) -> Self {
        Self::from_parts(vec![(lo, None)])
    }

    pub fn at_most(hi: u64) -> Self {
        Self::interval(0, hi)
    }

    pub fn from_parts(mut raw: Vec<(u64, Option<u64>)>) -> Self {
        raw.retain(|&(lo, hi)| hi.map_or(true, |h| h >= lo));
        raw.sort_by_key(|p| p.0);
        let mut parts: Vec<(u64, Option<u64>)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            if let Some(last) = parts.last_mut() {
                let touches = last.1.map_or(true, |e| lo <= e.saturating_add(1));
                if touches {
                    if end_lt(last.1, hi) {
                        last.1 = hi;
                    }
                    continue;
                }
            }
            parts.push((lo, hi));
        }
        IntervalSet { parts }
    }

    pub fn parts(&self) -> &[(u64, Option<u64>)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, k: u64) -> bool {
        self.parts.iter().any(|&(lo, hi)| k >= lo && hi.map_or(true, |h| k <= h))
    }

    pub fn union(&self, o: &Self) -> Self {
        Self::from_parts(self.parts.iter().chain(&o.parts).copied().collect())
    }

    /// Intersection with `[lo, hi]`.
    pub fn clip(&self, lo: u64, hi: u64) -> Self {
        let parts = self
            .parts
            .iter()
            .filter_map(|&(a, b)| {
                let s = a.max(lo);
                let e = b.map_or(hi, |b| b.min(hi));
                (s <= e).then_some((s, Some(e)))
            })
            .collect();
        Self::from_parts(parts)
    }

    /// Complement of `[lo, hi]` within this set.
    pub fn remove(&self, lo: u64, hi: u64) -> Self {
        let mut out = Vec::new();
        for &(a, b) in &self.parts {
            if a < lo {
                let e = b.map_or(lo - 1, |b| b.min(lo - 1));
                out.push((a, Some(e)));
            }
            let s = a.max(hi.saturating_add(1));
            if hi < u64::MAX && b.map_or(true, |b| b >= s) {
                out.push((s, b));
            }
        }
        Self::from_parts(out)
    }

    /// `{k - r : k ∈ self, k ≥ r}`.
    pub fn shift_down(&self, r: u64) -> Self {
        let parts = self
            .parts
            .iter()
            .filter(|&&(_, b)| b.map_or(true, |b| b >= r))
            .map(|&(a, b)| (a.saturating_sub(r), b.map(|b| b - r)))
            .collect();
        Self::from_parts(parts)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("empty");
        }
        for (i, &(lo, hi)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match hi {
                Some(h) if h == lo => write!(f, "{lo}")?,
                Some(h) => write!(f, "{lo}..{h}")?,
                None => write!(f, "{lo}..")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(Self::empty());
        }
        let num = |t: &str| -> Result<u64, Error> {
            t.trim().parse().map_err(|_| Error::Format(format!("bad set bound {t:?} in {s:?}")))
        };
        let mut raw = Vec::new();
        for item in s.split(',') {
            let part = match item.split_once("..") {
                None => {
                    let k = num(item)?;
                    (k, Some(k))
                }
                Some((a, b)) => {
                    let lo = if a.trim().is_empty() { 0 } else { num(a)? };
                    let hi = if b.trim().is_empty() { None } else { Some(num(b)?) };
                    if hi.is_some_and(|h| h < lo) {
                        return Err(Error::Format(format!("reversed interval {item:?}")));
                    }
                    (lo, hi)
                }
            };
            raw.push(part);
        }
        Ok(Self::from_parts(raw))
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
