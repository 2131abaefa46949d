//! Exact and log-domain binomial coefficients.
//!
//! Small instances go through exact `BigUint` arithmetic followed by a single
//! big-float logarithm. Instances whose exact value would exceed
//! [`EXACT_BITS_LIMIT`] bits combine exact factorials for arguments up to
//! [`FACTORIAL_EXACT_MAX`] with the Stirling series above it.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::real::Real;

/// Largest exact binomial (in bits) we are willing to materialise.
pub const EXACT_BITS_LIMIT: u64 = 1 << 18;

/// Arguments at or below this go through an exact factorial.
pub const FACTORIAL_EXACT_MAX: u64 = 1 << 17;

/// Bernoulli numbers B_2, B_4, ..., B_20 as (numerator, denominator).
const BERNOULLI: [(i64, i64); 10] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
];

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial(n: &BigUint, k: u64) -> BigUint {
    let kb = BigUint::from(k);
    if &kb > n {
        return BigUint::zero();
    }
    let other = n - &kb;
    let k = if other < kb { other.to_u64().expect("smaller side fits") } else { k };
    let mut c = BigUint::one();
    for i in 0..k {
        c *= n - BigUint::from(i);
        c /= BigUint::from(i + 1);
    }
    c
}

/// Exact falling factorial `m (m-1) ... (m-t+1)`.
pub fn falling(m: u64, t: u64) -> BigUint {
    (0..t).fold(BigUint::one(), |acc, i| acc * BigUint::from(m - i))
}

/// `log2 x` for a positive integer, correct to the working precision.
pub fn log2_biguint(x: &BigUint, p: usize) -> Real {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    let keep = (p + 64) as u64;
    if bits <= keep {
        Real::from_biguint(x, p + 64).log2(p)
    } else {
        let shift = bits - keep;
        let top = x >> shift;
        Real::from_biguint(&top, p + 64)
            .log2(p + 64)
            .add(&Real::from_u64(shift), p)
    }
}

/// `lo (lo+1) ... hi` by binary splitting.
fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, i| acc * i);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

/// Exact `m!`.
pub fn factorial(m: u64) -> BigUint {
    range_product(1, m)
}

/// `ln m!`.
fn ln_factorial(m: &BigUint, p: usize) -> Real {
    match m.to_u64() {
        Some(v) if v <= FACTORIAL_EXACT_MAX => {
            log2_biguint(&factorial(v), p + 32).mul(&Real::ln2(p + 32), p)
        }
        _ => {
            let z = Real::from_biguint(&(m + 1u32), p);
            ln_gamma_stirling(&z, p)
        }
    }
}

/// Stirling series for `ln Γ(z)`; truncation error below `z^-21`.
pub(crate) fn ln_gamma_stirling(z: &Real, p: usize) -> Real {
    let half = Real::from_f64(0.5);
    let lnz = z.ln(p);
    let mut acc = z.sub(&half, p).mul(&lnz, p).sub(z, p);
    let two_pi = Real::pi(p).mul(&Real::from_u64(2), p);
    acc = acc.add(&two_pi.ln(p).mul(&half, p), p);
    let z2 = z.mul(z, p);
    let mut zpow = z.clone();
    for (j, &(num, den)) in BERNOULLI.iter().enumerate() {
        let m = 2 * (j as i64 + 1);
        let coef = Real::from_i64(num).div(&Real::from_i64(den * m * (m - 1)), p);
        acc = acc.add(&coef.div(&zpow, p), p);
        zpow = zpow.mul(&z2, p);
    }
    acc
}

/// `log2 C(n, k)`. Caller guarantees `k <= n`.
pub fn log2_binomial(n: &BigUint, k: &BigUint, p: usize) -> Real {
    let other = n - k;
    let small = if &other < k { other } else { k.clone() };
    if small.is_zero() {
        return Real::zero();
    }
    let est_bits = small.to_u64().map_or(u64::MAX, |s| s.saturating_mul(n.bits()));
    if est_bits <= EXACT_BITS_LIMIT {
        let k = small.to_u64().expect("bounded by limit");
        return log2_biguint(&binomial(n, k), p);
    }
    // ln Γ terms are of size n ln n; widen so the cancellation is harmless.
    let wp = (p + 2 * n.bits() as usize + 64).div_ceil(64) * 64;
    let ln_c = ln_factorial(n, wp)
        .sub(&ln_factorial(&small, wp), wp)
        .sub(&ln_factorial(&(n - &small), wp), wp);
    ln_c.div(&Real::ln2(wp), p)
}

/// `⌊√x⌋`.
pub fn isqrt(x: &BigUint) -> BigUint {
    x.sqrt()
}
