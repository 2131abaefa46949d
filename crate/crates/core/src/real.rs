//! Software big-float used by every analytic computation.
//!
//! `Real` wraps an `astro_float::BigFloat`. All arithmetic is pure integer
//! arithmetic inside astro-float, so results are bit-identical across
//! platforms as long as the precision is a multiple of 64 bits (the mantissa
//! then has the same layout on 32- and 64-bit word targets).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::BigUint;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Default mantissa width in bits.
pub const BASE_PREC: usize = 192;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision for quantities attached to an integer with `bits` bits.
///
/// Differences such as `f(n') - f(n)` cancel about `bits` leading bits, so the
/// mantissa grows with `n`.
pub fn precision_for_bits(bits: u64) -> usize {
    let want = (bits as usize + 128).max(BASE_PREC);
    want.div_ceil(64) * 64
}

#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn zero() -> Self {
        Real(BigFloat::from_u64(0, BASE_PREC))
    }

    pub fn from_u64(v: u64) -> Self {
        Real(BigFloat::from_u64(v, BASE_PREC))
    }

    pub fn from_u128(v: u128) -> Self {
        Real(BigFloat::from_u128(v, BASE_PREC))
    }

    pub fn from_i64(v: i64) -> Self {
        Real(BigFloat::from_i64(v, BASE_PREC))
    }

    /// Exact conversion of an `f64`.
    pub fn from_f64(v: f64) -> Self {
        Real(BigFloat::from_f64(v, BASE_PREC))
    }

    /// Converts an arbitrary-size integer, rounding to `p` bits.
    pub fn from_biguint(n: &BigUint, p: usize) -> Self {
        let bits = n.bits();
        if bits == 0 {
            return Real(BigFloat::from_u64(0, p));
        }
        let width = (bits as usize).div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE;
        let norm = n << (width as u64 - bits);
        let words: Vec<Word> = if WORD_BIT_SIZE == 64 {
            norm.to_u64_digits().into_iter().map(|d| d as Word).collect()
        } else {
            norm.to_u32_digits().into_iter().map(|d| d as Word).collect()
        };
        let exp = i32::try_from(bits).expect("integer below 2^(2^31) bits");
        let mut v = BigFloat::from_raw_parts(&words, width, Sign::Pos, exp, false);
        if width > p {
            v.set_precision(p, RM).expect("precision change");
        }
        Real(v)
    }

    pub fn pi(p: usize) -> Self {
        Real(with_cc(|cc| cc.pi(p, RM)))
    }

    pub fn ln2(p: usize) -> Self {
        Real(with_cc(|cc| cc.ln_2(p, RM)))
    }

    pub fn e(p: usize) -> Self {
        Real(with_cc(|cc| cc.e(p, RM)))
    }

    pub fn add(&self, o: &Real, p: usize) -> Real {
        Real(self.0.add(&o.0, p, RM))
    }

    pub fn sub(&self, o: &Real, p: usize) -> Real {
        Real(self.0.sub(&o.0, p, RM))
    }

    pub fn mul(&self, o: &Real, p: usize) -> Real {
        Real(self.0.mul(&o.0, p, RM))
    }

    pub fn div(&self, o: &Real, p: usize) -> Real {
        Real(self.0.div(&o.0, p, RM))
    }

    pub fn neg(&self) -> Real {
        Real(-&self.0)
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn ln(&self, p: usize) -> Real {
        Real(with_cc(|cc| self.0.ln(p, RM, cc)))
    }

    pub fn log2(&self, p: usize) -> Real {
        Real(with_cc(|cc| self.0.log2(p, RM, cc)))
    }

    pub fn exp(&self, p: usize) -> Real {
        Real(with_cc(|cc| self.0.exp(p, RM, cc)))
    }

    /// `2^self`.
    pub fn exp2(&self, p: usize) -> Real {
        let two = BigFloat::from_u64(2, p);
        Real(with_cc(|cc| two.pow(&self.0, p, RM, cc)))
    }

    /// `self^e` for real `e`; `self` must be positive.
    pub fn powf(&self, e: &Real, p: usize) -> Real {
        Real(with_cc(|cc| self.0.pow(&e.0, p, RM, cc)))
    }

    pub fn powi(&self, e: usize, p: usize) -> Real {
        Real(self.0.powi(e, p, RM))
    }

    pub fn sqrt(&self, p: usize) -> Real {
        Real(self.0.sqrt(p, RM))
    }

    pub fn floor(&self) -> Real {
        Real(self.0.floor())
    }

    pub fn fract(&self) -> Real {
        Real(self.0.fract())
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn inf() -> Real {
        Real(astro_float::INF_POS)
    }

    pub fn max(self, o: Real) -> Real {
        if o > self {
            o
        } else {
            self
        }
    }

    pub fn min(self, o: Real) -> Real {
        if o < self {
            o
        } else {
            self
        }
    }

    /// Nearest `f64` (round-half-even on the leading word).
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf() {
            return if self.0.is_inf_pos() { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exp, _) = self.0.as_raw_parts().expect("finite value");
        let mut top: f64 = 0.0;
        // Two leading words are plenty for a correctly rounded 53-bit result
        // except in exact-tie cases.
        for (i, w) in words.iter().rev().take(128 / WORD_BIT_SIZE).enumerate() {
            let scale = 2f64.powi(-((WORD_BIT_SIZE * (i + 1)) as i32));
            top += (*w as f64) * scale;
        }
        let mut v = top;
        let mut e = exp as i64;
        while e > 0 {
            let step = e.min(512);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(512);
            v *= 2f64.powi(-(step as i32));
            e += step;
        }
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Floor of a non-negative value as an exact integer.
    pub fn floor_biguint(&self) -> Option<BigUint> {
        if !self.is_finite() || self.is_negative() {
            return None;
        }
        let fl = self.0.floor();
        if fl.is_zero() {
            return Some(BigUint::default());
        }
        let (words, _, _, exp, _) = fl.as_raw_parts()?;
        let mut m = BigUint::default();
        for w in words.iter().rev() {
            m = (m << WORD_BIT_SIZE) + BigUint::from(*w as u64);
        }
        let total = (words.len() * WORD_BIT_SIZE) as i64;
        let e = exp as i64;
        Some(if e >= total { m << (e - total) as u64 } else { m >> (total - e) as u64 })
    }

    /// Decimal rendering with the full mantissa (58 significant digits at 192 bits).
    pub fn to_decimal(&self) -> String {
        if self.0.is_nan() {
            return "NaN".into();
        }
        if self.0.is_inf() {
            return if self.0.is_inf_pos() { "inf".into() } else { "-inf".into() };
        }
        with_cc(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    /// Hex-float rendering `[-]0x0.<mantissa>p<exp>` of the exact stored value.
    pub fn to_hex(&self) -> String {
        if !self.is_finite() {
            return self.to_decimal();
        }
        if self.0.is_zero() {
            return "0x0p0".into();
        }
        let (words, _, sign, exp, _) = self.0.as_raw_parts().expect("finite value");
        let width = WORD_BIT_SIZE / 4;
        let mut digits = String::new();
        for w in words.iter().rev() {
            digits.push_str(&format!("{:0width$x}", *w as u64, width = width));
        }
        let digits = digits.trim_end_matches('0');
        let s = if sign == Sign::Neg { "-" } else { "" };
        format!("{s}0x0.{digits}p{exp}")
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&o.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::from_f64(v)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Real", 2)?;
        st.serialize_field("dec", &self.to_decimal())?;
        st.serialize_field("hex", &self.to_hex())?;
        st.end()
    }
}
