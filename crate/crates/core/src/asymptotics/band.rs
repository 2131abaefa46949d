//! Search for `n` whose exponent `x(n)` falls in a prescribed open band.
//!
//! Within a run of consecutive `n` sharing the same `a = ⌊α₀(n)⌋`, `x(n)` is
//! strictly increasing, and `α₀` itself is increasing for `n ≥ 4`. The search
//! therefore walks segment by segment and bisects inside each one, which gives
//! the same answer as a linear scan at a logarithmic fraction of the cost.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{alpha0_unchecked, prec, x_with_a};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::util::big_str;

/// Default cap on the number of `x`/`α₀` evaluations.
pub const DEFAULT_BAND_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct BandSearch {
    #[serde(with = "big_str")]
    pub n: BigUint,
    pub a: u64,
    pub x: Real,
    /// Number of `x` and `α₀` evaluations spent.
    pub evaluations: u64,
    /// Number of `a`-segments visited.
    pub segments: u64,
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn spend(&mut self, last: &BigUint) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::BudgetExhausted { what: "band search".into(), last: last.to_string() });
        }
        Ok(())
    }
}

/// Smallest `n ≥ start` with `c1 < x(n) < c2`.
pub fn find_n_in_band(c1: f64, c2: f64, start: impl Into<BigUint>) -> Result<BigUint> {
    find_n_in_band_with(c1, c2, start, DEFAULT_BAND_CAP).map(|s| s.n)
}

pub fn find_n_in_band_with(c1: f64, c2: f64, start: impl Into<BigUint>, cap: u64) -> Result<BandSearch> {
    let start = start.into();
    if !(0.0 <= c1 && c1 < c2 && c2 <= 1.0) {
        return Err(Error::domain(format!("band ({c1}, {c2}) must satisfy 0 <= c1 < c2 <= 1")));
    }
    if start < BigUint::from(4u32) {
        return Err(Error::domain(format!("band search requires N >= 4, got {start}")));
    }
    let lo = Real::from_f64(c1);
    let hi = Real::from_f64(c2);
    let mut budget = Budget { used: 0, cap };
    let mut n = start;
    let mut segments = 0;
    loop {
        segments += 1;
        let p = prec(&n);
        budget.spend(&n)?;
        let a = alpha0_unchecked(&n, p).floor().to_f64() as u64;
        let end = segment_end(&n, a, &mut budget)?;
        budget.spend(&n)?;
        let x = x_with_a(&n, a, p);
        if x >= hi {
            n = end + 1u32;
            continue;
        }
        if x > lo {
            return Ok(BandSearch { n, a, x, evaluations: budget.used, segments });
        }
        // First m in (n, end] with x(m) > c1, if any.
        budget.spend(&end)?;
        let x_end = x_with_a(&end, a, prec(&end));
        if x_end <= lo {
            n = end + 1u32;
            continue;
        }
        let (mut l, mut h) = (n.clone(), end.clone());
        let mut xh = x_end;
        while &h - &l > BigUint::one() {
            let m: BigUint = (&l + &h) >> 1;
            budget.spend(&m)?;
            let xm = x_with_a(&m, a, prec(&m));
            if xm > lo {
                h = m;
                xh = xm;
            } else {
                l = m;
            }
        }
        if xh < hi {
            return Ok(BandSearch { n: h, a, x: xh, evaluations: budget.used, segments });
        }
        n = end + 1u32;
    }
}

/// Largest `m ≥ n` with `⌊α₀(m)⌋ = a`, given `⌊α₀(n)⌋ = a`.
fn segment_end(n: &BigUint, a: u64, budget: &mut Budget) -> Result<BigUint> {
    let below = |m: &BigUint| alpha0_unchecked(m, prec(m)).floor().to_f64() as u64 <= a;
    last_satisfying(n, below, budget)
}

/// Largest `m ≥ n` for a predicate that is true at `n` and monotone true-then-false.
fn last_satisfying(n: &BigUint, pred: impl Fn(&BigUint) -> bool, budget: &mut Budget) -> Result<BigUint> {
    let mut l = n.clone();
    let mut step = BigUint::one();
    let mut h = loop {
        let cand = &l + &step;
        budget.spend(&cand)?;
        if !pred(&cand) {
            break cand;
        }
        l = cand;
        step <<= 1;
    };
    while &h - &l > BigUint::one() {
        let m: BigUint = (&l + &h) >> 1;
        budget.spend(&m)?;
        if pred(&m) {
            l = m;
        } else {
            h = m;
        }
    }
    h -= 1u32;
    Ok(h)
}

/// Largest `m ≥ n` with `α₀(m) < bound`, given that `α₀(n) < bound`.
pub(crate) fn last_alpha0_below(n: &BigUint, bound: &Real, cap: u64) -> Result<BigUint> {
    let mut budget = Budget { used: 0, cap };
    last_satisfying(n, |m| &alpha0_unchecked(m, prec(m)) < bound, &mut budget)
}
