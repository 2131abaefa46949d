//! The stepping sequence `n₁ < n₂ < ...` with `n_{i+1} = n_i + r_i a` inside
//! the window where `a(n)` stays fixed, and the bookkeeping of `Σ r_i / (3a)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::band::{find_n_in_band_with, last_alpha0_below, DEFAULT_BAND_CAP};
use super::{alpha0_unchecked, floor_alpha0, prec, profile};
use crate::asymptotics::binom::log2_biguint;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::util::big_str;

/// Largest `n` the crossover search will look at, in bits.
const CROSSOVER_MAX_BITS: u64 = 1 << 14;

#[derive(Debug, Clone, Serialize)]
pub struct LedgerStep {
    #[serde(with = "big_str")]
    pub n: BigUint,
    pub a: u64,
    pub x: Real,
    #[serde(with = "big_str")]
    pub r: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IMax {
    Exact { value: u64 },
    /// Enumeration stopped at the cap; `lo <= i_max <= hi`.
    Estimated { lo: String, hi: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SumBound {
    pub lo: Real,
    pub hi: Real,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossover {
    #[serde(with = "big_str")]
    pub n: BigUint,
    pub log10_n: f64,
    /// Exponent `x(n₁)/2` used for the lower bound `r(n) ≥ ⌊n^(x(n₁)/2)⌋`.
    pub half_x1: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerReport {
    pub c: f64,
    pub epsilon: Real,
    #[serde(with = "big_str")]
    pub n1: BigUint,
    pub x1: Real,
    pub a: u64,
    #[serde(rename = "M", with = "big_str")]
    pub m: BigUint,
    pub i_max: IMax,
    pub steps: Vec<LedgerStep>,
    /// `Σ_{i < i_max} r_i a = n_{i_max} - n₁`, checked in integers; `None` when not fully enumerated.
    pub telescoping_ok: Option<bool>,
    /// `Σ_{i < i_max} r_i / (3a)`.
    pub sum_r_over_3a: SumBound,
    pub crossover_n: Option<Crossover>,
    /// Steps whose `a(n_i)` differs from `a(n₁)`.
    pub a_violations: u64,
    /// Steps with `x_i` outside `(ε, 1/2 - ε)`.
    pub x_violations: u64,
}

impl LedgerReport {
    pub fn complete(&self) -> bool {
        matches!(self.i_max, IMax::Exact { .. })
    }
}

pub fn ledger(c: f64, n1_hint: impl Into<BigUint>, enumerate_cap: u64) -> Result<LedgerReport> {
    let hint = n1_hint.into();
    if !(c > 0.0 && c < 0.25) {
        return Err(Error::domain(format!("ledger requires 0 < c < 1/4, got {c}")));
    }
    if hint < BigUint::from(16u32) {
        return Err(Error::domain(format!("ledger requires n1_hint >= 16, got {hint}")));
    }
    let base = 192;
    let quarter = Real::from_f64(0.25);
    let half = Real::from_f64(0.5);
    let eps = quarter.sub(&Real::from_f64(c), base).mul(&quarter, base);
    let band_lo = half.sub(&Real::from_u64(4).mul(&eps, base), base).to_f64();
    let band_hi = half.sub(&Real::from_u64(3).mul(&eps, base), base).to_f64();
    let found = find_n_in_band_with(band_lo, band_hi, hint, DEFAULT_BAND_CAP)?;
    let n1 = found.n;
    let a = found.a;
    let x1 = found.x;

    let p = prec(&n1) + 64;
    let ceiling = Real::from_u64(a).add(&half, p).sub(&Real::from_u64(2).mul(&eps, p), p);
    let m = last_alpha0_below(&n1, &ceiling, DEFAULT_BAND_CAP)?;

    let x_lo = eps.clone();
    let x_hi = half.sub(&eps, base);
    let mut steps = Vec::new();
    let mut a_violations = 0;
    let mut x_violations = 0;
    let mut n = n1.clone();
    let mut rsum = BigUint::zero();
    let mut next_fits = true;
    while next_fits && (steps.len() as u64) < enumerate_cap {
        let pr = profile(n.clone())?;
        if pr.r.is_zero() {
            return Err(Error::domain(format!("ledger step at n = {n} has r = 0")));
        }
        if pr.a != a {
            a_violations += 1;
        }
        if !(pr.x > x_lo && pr.x < x_hi) {
            x_violations += 1;
        }
        let next = &n + &pr.r * a;
        next_fits = next <= m;
        if next_fits {
            rsum += &pr.r;
        }
        steps.push(LedgerStep { n: n.clone(), a: pr.a, x: pr.x, r: pr.r });
        n = next;
    }

    let sp = prec(&m) + 64;
    let three_a2 = Real::from_u64(3 * a * a);
    let last = steps.last().expect("at least n1").clone();
    let (i_max, telescoping_ok, sum) = if !next_fits {
        let n_imax = &last.n;
        let tele = &rsum * a == n_imax - &n1;
        let s = Real::from_biguint(&rsum, sp).div(&Real::from_u64(3 * a), sp);
        let i = IMax::Exact { value: steps.len() as u64 };
        (i, Some(tele), SumBound { lo: s.clone(), hi: s, exact: true })
    } else {
        // Steps only grow, so the remaining count is bracketed by the extreme step sizes.
        let r_m = profile(m.clone())?.r;
        let rest = &m - &n;
        let k = steps.len() as u64;
        let lo = BigUint::from(k) + 1u32 + &rest / (&r_m * a);
        let hi = BigUint::from(k) + 1u32 + &rest / (&last.r * a);
        let top = &m - &n1;
        let step_max = &r_m * a;
        let floor_last = &m + 1u32;
        let bottom = if floor_last > &n1 + &step_max { floor_last - step_max - &n1 } else { BigUint::zero() };
        let s_lo = Real::from_biguint(&bottom, sp).div(&three_a2, sp);
        let s_hi = Real::from_biguint(&top, sp).div(&three_a2, sp);
        let i = IMax::Estimated { lo: lo.to_string(), hi: hi.to_string() };
        (i, None, SumBound { lo: s_lo, hi: s_hi, exact: false })
    };

    let half_x1 = x1.mul(&half, base);
    let crossover_n = crossover(c, &half_x1, &n1);

    Ok(LedgerReport {
        c,
        epsilon: eps,
        n1,
        x1,
        a,
        m,
        i_max,
        steps,
        telescoping_ok,
        sum_r_over_3a: sum,
        crossover_n,
        a_violations,
        x_violations,
    })
}

/// `⌊n^h⌋ ≥ 3 a(n) n^c`.
fn crossover_holds(n: &BigUint, c: &Real, h: &Real) -> bool {
    let p = prec(n);
    let l = log2_biguint(n, p);
    let (a, _) = floor_alpha0(&alpha0_unchecked(n, p));
    let lhs = h.mul(&l, p).exp2(p).floor();
    let rhs = Real::from_u64(3 * a).mul(&c.mul(&l, p).exp2(p), p);
    lhs >= rhs
}

/// Smallest `n ≥ start` where the lower bound on `r/(3a)` reaches `n^c`.
fn crossover(c: f64, half_x1: &Real, start: &BigUint) -> Option<Crossover> {
    let cr = Real::from_f64(c);
    if !(half_x1 > &cr) {
        return None;
    }
    let holds = |n: &BigUint| crossover_holds(n, &cr, half_x1);
    if holds(start) {
        return Some(make_crossover(start.clone(), half_x1));
    }
    let mut lo = start.clone();
    let mut hi = start << 1u32;
    while !holds(&hi) {
        if hi.bits() > CROSSOVER_MAX_BITS {
            return None;
        }
        lo = hi.clone();
        hi <<= 1u32;
    }
    while &hi - &lo > BigUint::from(1u32) {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        if holds(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(make_crossover(hi, half_x1))
}

fn make_crossover(n: BigUint, half_x1: &Real) -> Crossover {
    let p = prec(&n);
    let log10 = log2_biguint(&n, p).to_f64() * std::f64::consts::LOG10_2;
    let log10_n = n.to_f64().map(f64::log10).filter(|v| v.is_finite()).unwrap_or(log10);
    Crossover { n, log10_n, half_x1: half_x1.clone() }
}
