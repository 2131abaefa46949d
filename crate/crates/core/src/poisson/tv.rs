//! Total-variation distances against Poisson laws.

use serde::Serialize;

use super::PoissonSpec;
use crate::error::{Error, Result};

/// A distance together with a bound on its numerical error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tv {
    pub value: f64,
    /// The true distance lies in `[value - error, value + error]`.
    pub error: f64,
}

impl Tv {
    pub fn upper(&self) -> f64 {
        (self.value + self.error).min(1.0)
    }

    pub fn lower(&self) -> f64 {
        (self.value - self.error).max(0.0)
    }
}

pub fn tv_poisson(l1: f64, l2: f64) -> Result<Tv> {
    let p = PoissonSpec::new(l1)?;
    let q = PoissonSpec::new(l2)?;
    if l1 == l2 {
        return Ok(Tv { value: 0.0, error: 0.0 });
    }
    let top = p.window().max(q.window());
    let mut s = 0.0;
    for k in 0..=top {
        s += (p.pmf(k) - q.pmf(k)).abs();
    }
    let tail = 0.5 * (p.upper_tail_bound(top + 1) + q.upper_tail_bound(top + 1));
    let rounding = 1e-14 * (1.0 + (top as f64).log2());
    Ok(Tv { value: 0.5 * s, error: tail + rounding })
}

/// Distance between the empirical law of `counts` (index = value) and `spec`.
pub fn tv_empirical(counts: &[u64], spec: &PoissonSpec) -> Result<Tv> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::domain("empirical histogram is empty"));
    }
    let n = total as f64;
    let top = spec.window().max(counts.len() as u64);
    let mut s = 0.0;
    for k in 0..top {
        let e = counts.get(k as usize).map_or(0.0, |&c| c as f64 / n);
        s += (e - spec.pmf(k)).abs();
    }
    let tail = spec.upper_tail_bound(top);
    Ok(Tv { value: 0.5 * s, error: 0.5 * tail + 1e-14 * (1.0 + (top as f64).log2()) })
}
