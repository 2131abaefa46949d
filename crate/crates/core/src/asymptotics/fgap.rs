//! The location function `f(n) = n / (2 log2 n - 2 log2 log2 n - 2)` and its
//! increment across one coupling step `n -> n' = n + r a`.

use num_bigint::BigUint;
use serde::Serialize;

use super::{alpha0_unchecked, prec, profile};
use crate::asymptotics::binom::log2_biguint;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::util::big_str;

fn check(n: &BigUint) -> Result<()> {
    if n < &BigUint::from(16u32) {
        return Err(Error::domain(format!("f requires n >= 16, got {n}")));
    }
    Ok(())
}

pub(crate) fn f_at(n: &BigUint, p: usize) -> Real {
    let wp = p + 64;
    let l = log2_biguint(n, wp);
    let two = Real::from_u64(2);
    let den = two
        .mul(&l, wp)
        .sub(&two.mul(&l.log2(wp), wp), wp)
        .sub(&two, wp);
    Real::from_biguint(n, wp).div(&den, p)
}

pub fn f(n: impl Into<BigUint>) -> Result<Real> {
    let n = n.into();
    check(&n)?;
    Ok(f_at(&n, prec(&n)))
}

/// `n / (α₀(n) - 1 - 2/ln 2)`, the same function written through `α₀`.
pub fn f_via_alpha0(n: impl Into<BigUint>) -> Result<Real> {
    let n = n.into();
    check(&n)?;
    let p = prec(&n);
    let wp = p + 64;
    let two_over_ln2 = Real::from_u64(2).div(&Real::ln2(wp), wp);
    let den = alpha0_unchecked(&n, wp).sub(&Real::from_u64(1), wp).sub(&two_over_ln2, wp);
    if !(den > Real::zero()) {
        return Err(Error::domain(format!("f denominator is not positive at n = {n}")));
    }
    Ok(Real::from_biguint(&n, wp).div(&den, p))
}

#[derive(Debug, Clone, Serialize)]
pub struct FGap {
    #[serde(with = "big_str")]
    pub n: BigUint,
    #[serde(with = "big_str")]
    pub n_prime: BigUint,
    pub a: u64,
    #[serde(with = "big_str")]
    pub r: BigUint,
    pub x: Real,
    /// `f(n') - f(n)`.
    pub gap: Real,
    /// `r + (1 - x) r / a`.
    pub predicted: Real,
    /// `|gap - predicted| a / r`.
    pub relative_error: Real,
}

impl FGap {
    /// `(gap - r) a / r`, the measured coefficient of `r / a`.
    pub fn coefficient(&self) -> Real {
        let p = prec(&self.n_prime);
        let r = Real::from_biguint(&self.r, p);
        self.gap.sub(&r, p).mul(&Real::from_u64(self.a), p).div(&r, p)
    }
}

pub fn f_gap(n: impl Into<BigUint>) -> Result<FGap> {
    let n = n.into();
    check(&n)?;
    let pr = profile(n)?;
    let xf = pr.x_f64();
    if !(pr.x > Real::zero() && pr.x < Real::from_u64(1)) {
        return Err(Error::domain(format!("f_gap requires 0 < x(n) < 1, got x = {xf}")));
    }
    if pr.r == BigUint::default() {
        return Err(Error::domain(format!("f_gap requires r >= 1 at n = {}", pr.n)));
    }
    let p = prec(&pr.n_prime);
    let gap = f_at(&pr.n_prime, p).sub(&f_at(&pr.n, p), p);
    let r = Real::from_biguint(&pr.r, p);
    let a = Real::from_u64(pr.a);
    let one_minus_x = Real::from_u64(1).sub(&pr.x, p);
    let predicted = r.add(&one_minus_x.mul(&r, p).div(&a, p), p);
    let relative_error = gap.sub(&predicted, p).abs().mul(&a, p).div(&r, p);
    Ok(FGap {
        n: pr.n,
        n_prime: pr.n_prime,
        a: pr.a,
        r: pr.r,
        x: pr.x,
        gap,
        predicted,
        relative_error,
    })
}
