//! Closed-form quantities attached to G(n, 1/2) for arbitrarily large `n`.
//!
//! Everything here is pure: the same input yields bit-identical output, on any
//! platform, because all real arithmetic is done in [`Real`] and every floor
//! that feeds an integer (`a`, `r`, `⌊μ⌋`) is either taken from exact integer
//! arithmetic or certified against an error margin.

pub mod binom;
mod band;
mod fgap;
mod ledger;
mod ybound;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{precision_for_bits, Real};
use crate::util::big_str;

pub use band::{find_n_in_band, find_n_in_band_with, BandSearch, DEFAULT_BAND_CAP};
pub use fgap::{f, f_gap, f_via_alpha0, FGap};
pub use ledger::{ledger, Crossover, IMax, LedgerReport, LedgerStep, SumBound};
pub use ybound::{y_bound, YBoundReport};

use binom::{binomial, isqrt, log2_binomial, log2_biguint, EXACT_BITS_LIMIT, FACTORIAL_EXACT_MAX};

/// Distance to an integer below which `⌊α₀⌋` is reported as ambiguous.
const TIE_EPS_LOG2: i32 = -60;

/// Working precision for an `n`.
pub(crate) fn prec(n: &BigUint) -> usize {
    precision_for_bits(n.bits())
}

fn check_n(n: &BigUint, min: u64, what: &str) -> Result<()> {
    if n < &BigUint::from(min) {
        return Err(Error::domain(format!("{what} requires n >= {min}, got {n}")));
    }
    Ok(())
}

/// `2 log2 n - 2 log2 log2 n + 2 log2(e/2) + 1`.
pub fn alpha0(n: impl Into<BigUint>) -> Result<Real> {
    let n = n.into();
    check_n(&n, 4, "alpha0")?;
    Ok(alpha0_unchecked(&n, prec(&n)))
}

pub(crate) fn alpha0_unchecked(n: &BigUint, p: usize) -> Real {
    let wp = p + 64;
    let l = log2_biguint(n, wp);
    let ll = l.log2(wp);
    // log2(e/2) = 1/ln 2 - 1
    let log2_e_half = Real::from_u64(1).div(&Real::ln2(wp), wp).sub(&Real::from_u64(1), wp);
    let two = Real::from_u64(2);
    two.mul(&l, wp)
        .sub(&two.mul(&ll, wp), wp)
        .add(&two.mul(&log2_e_half, wp), wp)
        .add(&Real::from_u64(1), p)
}

/// `⌊α₀(n)⌋` together with the ambiguity flag.
pub(crate) fn floor_alpha0(alpha: &Real) -> (u64, Option<u64>) {
    let a = alpha.floor().to_f64() as u64;
    let frac = alpha.fract().to_f64();
    let tie = 2f64.powi(TIE_EPS_LOG2);
    let alt = if frac < tie && a > 0 {
        Some(a - 1)
    } else if 1.0 - frac < tie {
        Some(a + 1)
    } else {
        None
    };
    (a, alt)
}

/// `log2 μ(n, k) = log2 C(n,k) - k(k-1)/2`.
pub fn log2_expected_ksets(n: impl Into<BigUint>, k: u64) -> Result<Real> {
    let n = n.into();
    let kb = BigUint::from(k);
    if kb > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    let p = prec(&n);
    Ok(log2_mu(&n, k, p))
}

pub(crate) fn log2_mu(n: &BigUint, k: u64, p: usize) -> Real {
    let pairs = Real::from_u128(k as u128 * (k as u128).saturating_sub(1) / 2);
    log2_binomial(n, &BigUint::from(k), p + 32).sub(&pairs, p)
}

/// Exact `⌊μ(n, k)⌋` when the binomial is small enough to materialise.
pub fn expected_ksets_floor(n: impl Into<BigUint>, k: u64) -> Option<BigUint> {
    let n = n.into();
    if k.saturating_mul(n.bits()) > EXACT_BITS_LIMIT {
        return None;
    }
    let pairs = k * k.saturating_sub(1) / 2;
    Some(binomial(&n, k) >> pairs)
}

/// All closed-form quantities attached to one `n`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticProfile {
    #[serde(with = "big_str")]
    pub n: BigUint,
    pub alpha0: Real,
    pub a: u64,
    /// Other candidate for `a` when `α₀` sits within `2^-60` of an integer.
    pub a_alternative: Option<u64>,
    pub log2_mu: Real,
    pub x: Real,
    #[serde(with = "big_str")]
    pub r: BigUint,
    #[serde(with = "big_str")]
    pub n_prime: BigUint,
    /// `|x - (α₀ - ⌊α₀⌋)|`.
    pub discrepancy: Real,
    /// `r` came from exact integer arithmetic or a margin-checked big-float floor.
    pub r_certified: bool,
    /// `x` fell outside the sanity envelope `(-1, 2)`.
    pub envelope_warning: bool,
}

impl AsymptoticProfile {
    pub fn x_f64(&self) -> f64 {
        self.x.to_f64()
    }

    pub fn r_u64(&self) -> Option<u64> {
        self.r.to_u64()
    }
}

pub fn profile(n: impl Into<BigUint>) -> Result<AsymptoticProfile> {
    let n = n.into();
    check_n(&n, 4, "profile")?;
    let p = prec(&n);
    let alpha = alpha0_unchecked(&n, p);
    let (a, a_alternative) = floor_alpha0(&alpha);
    Ok(profile_with_a(n, alpha, a, a_alternative, p))
}

fn profile_with_a(n: BigUint, alpha: Real, a: u64, a_alternative: Option<u64>, p: usize) -> AsymptoticProfile {
    let pairs = a * a.saturating_sub(1) / 2;
    let (log2_mu, r, r_certified) = if a.saturating_mul(n.bits()) <= EXACT_BITS_LIMIT {
        let c = binomial(&n, a);
        let l = log2_biguint(&c, p + 32).sub(&Real::from_u64(pairs), p);
        let r = isqrt(&(c >> pairs));
        (l, r, true)
    } else {
        let l = log2_mu(&n, a, p);
        let (r, ok) = certified_sqrt_floor(&l, p, a > FACTORIAL_EXACT_MAX);
        (l, r, ok)
    };
    let log2n = log2_biguint(&n, p);
    let x = log2_mu.div(&log2n, p);
    let n_prime = &n + &r * a;
    let frac = alpha.sub(&Real::from_u64(a), p);
    let discrepancy = x.sub(&frac, p).abs();
    let xf = x.to_f64();
    AsymptoticProfile {
        n,
        alpha0: alpha,
        a,
        a_alternative,
        log2_mu,
        x,
        r,
        n_prime,
        discrepancy,
        r_certified,
        envelope_warning: !(xf > -1.0 && xf < 2.0),
    }
}

/// `⌊2^(l/2)⌋`, certified when the floor is stable under the error bound on `l`.
///
/// The bound is 32 bits above the last place of `l`, widened to `2^-340` when
/// the small factorial came from the truncated Stirling series.
fn certified_sqrt_floor(l: &Real, p: usize, stirling_small: bool) -> (BigUint, bool) {
    let mut margin = l.abs().mul(&Real::from_i64(32 - p as i64).exp2(p), p);
    if stirling_small {
        margin = margin.max(Real::from_i64(-340).exp2(p));
    }
    if l.is_negative() {
        return (BigUint::zero(), l.add(&margin, p).is_negative());
    }
    let half = Real::from_f64(0.5);
    let mid = l.mul(&half, p).exp2(p).floor_biguint().unwrap_or_default();
    let lo = l.sub(&margin, p).mul(&half, p).exp2(p).floor_biguint().unwrap_or_default();
    let hi = l.add(&margin, p).mul(&half, p).exp2(p).floor_biguint().unwrap_or_default();
    let ok = lo == hi;
    (mid, ok)
}

/// `x(n)` for a fixed `a`; used by the segment searches.
pub(crate) fn x_with_a(n: &BigUint, a: u64, p: usize) -> Real {
    let l = if a.saturating_mul(n.bits()) <= EXACT_BITS_LIMIT {
        let pairs = a * a.saturating_sub(1) / 2;
        log2_biguint(&binomial(n, a), p + 32).sub(&Real::from_u64(pairs), p)
    } else {
        log2_mu(n, a, p)
    };
    l.div(&log2_biguint(n, p), p)
}
