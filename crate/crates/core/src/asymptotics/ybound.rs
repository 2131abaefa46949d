//! First-moment bound on the number `Y` of extra independent `a`-sets that a
//! conditioned pair acquires beyond the planted ones.
//!
//! `σ_t = (A+r) C(a,t) a! 2^C(t,2) / ((a-t)! (n-a)^t)` is evaluated exactly as
//! an integer numerator over an integer power, then taken to log domain once.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{prec, profile};
use crate::asymptotics::binom::log2_biguint;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::util::big_str;

#[derive(Debug, Clone, Serialize)]
pub struct YBoundReport {
    #[serde(with = "big_str")]
    pub n: BigUint,
    #[serde(rename = "A", with = "big_str")]
    pub big_a: BigUint,
    #[serde(with = "big_str")]
    pub r: BigUint,
    pub a: u64,
    pub log2_mu: Real,
    /// `log2 σ_t` for `t = 1..a-1`; entry `i` holds `t = i + 1`.
    pub log2_sigma: Vec<Real>,
    pub argmax: u64,
    pub log2_sigma_max: Real,
    /// `a σ_max`, the ratio of the geometric series.
    pub q: Real,
    /// Upper bound on the conditional expectation of `Y`; `inf` when divergent.
    pub bound: Real,
    pub divergent: bool,
}

impl YBoundReport {
    pub fn sigma(&self, t: u64) -> Option<Real> {
        let p = prec(&self.n);
        let i = usize::try_from(t.checked_sub(1)?).ok()?;
        self.log2_sigma.get(i).map(|l| l.exp2(p))
    }

    pub fn sigma_max(&self) -> Real {
        self.log2_sigma_max.exp2(prec(&self.n))
    }
}

pub fn y_bound(n: impl Into<BigUint>, big_a: impl Into<BigUint>) -> Result<YBoundReport> {
    let n = n.into();
    let big_a = big_a.into();
    if big_a.is_zero() {
        return Err(Error::domain("y_bound requires A >= 1"));
    }
    let pr = profile(n)?;
    let a = pr.a;
    if a < 2 || pr.n <= BigUint::from(a) {
        return Err(Error::domain(format!("y_bound needs a >= 2 and n > a, got a = {a}")));
    }
    let p = prec(&pr.n);
    let wp = p + 64;
    let n_minus_a = &pr.n - BigUint::from(a);
    let log2_nma = log2_biguint(&n_minus_a, wp);
    let a_plus_r = &big_a + &pr.r;

    // numerator_t = (A+r) C(a,t) a!/(a-t)!, built incrementally and exactly.
    let mut binom = BigUint::one();
    let mut falling = BigUint::one();
    let mut log2_sigma = Vec::with_capacity(a as usize - 1);
    for t in 1..a {
        binom = binom * BigUint::from(a - t + 1) / BigUint::from(t);
        falling *= BigUint::from(a - t + 1);
        let num = &a_plus_r * &binom * &falling;
        let pairs = Real::from_u64(t * (t - 1) / 2);
        let l = log2_biguint(&num, wp)
            .add(&pairs, wp)
            .sub(&Real::from_u64(t).mul(&log2_nma, wp), p);
        log2_sigma.push(l);
    }
    let (imax, lmax) = log2_sigma
        .iter()
        .enumerate()
        .fold((0usize, log2_sigma[0].clone()), |(bi, bv), (i, v)| if v > &bv { (i, v.clone()) } else { (bi, bv) });

    let log2_q = Real::from_u64(a).log2(wp).add(&lmax, wp);
    let q = log2_q.exp2(p);
    let one = Real::from_u64(1);
    let divergent = !(q < one);
    let bound = if divergent {
        Real::inf()
    } else if pr.r.is_zero() {
        Real::zero()
    } else {
        let log2_pref = log2_biguint(&pr.r, wp)
            .add(&pr.log2_mu, wp)
            .sub(&log2_biguint(&a_plus_r, wp), wp);
        log2_pref.exp2(wp).mul(&q, wp).div(&one.sub(&q, wp), p)
    };

    Ok(YBoundReport {
        n: pr.n,
        big_a,
        r: pr.r,
        a,
        log2_mu: pr.log2_mu,
        log2_sigma,
        argmax: imax as u64 + 1,
        log2_sigma_max: lmax,
        q,
        bound,
        divergent,
    })
}
