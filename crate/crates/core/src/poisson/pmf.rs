//! Poisson probabilities evaluated with the saddle-point decomposition
//! `ln p(k) = -½ ln(2πk) - stirlerr(k) - bd0(k, λ)`, which keeps full relative
//! accuracy far into both tails where `k ln λ - λ - ln k!` cancels badly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln n! - (n + ½) ln n + n - ln √(2π)` for `n = 0..=15`, from the known exact values.
const SFERR_HALVES: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_26,
    0.041_340_695_955_409_29,
    0.027_677_925_684_998_34,
    0.020_790_672_103_765_09,
    0.016_644_691_189_821_19,
    0.013_876_128_823_070_75,
    0.011_896_709_945_891_77,
    0.010_411_265_261_972_10,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 && n.fract() == 0.0 {
        return SFERR_HALVES[n as usize];
    }
    let nn = n * n;
    if n > 500.0 {
        return (S0 - S1 / nn) / n;
    }
    if n > 80.0 {
        return (S0 - (S1 - S2 / nn) / nn) / n;
    }
    if n > 35.0 {
        return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
    }
    (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
}

/// `x ln(x/np) + np - x`, computed without cancellation when `x ≈ np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let s0 = (x - np) * v;
        let mut s = s0;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        return s;
    }
    x * (x / np).ln() + np - x
}

/// A Poisson law with mean `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonSpec {
    lambda: f64,
}

impl PoissonSpec {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("Poisson mean must be positive and finite, got {lambda}")));
        }
        Ok(PoissonSpec { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn log_pmf(&self, k: u64) -> f64 {
        let l = self.lambda;
        if k == 0 {
            return -l;
        }
        let x = k as f64;
        -LN_SQRT_2PI - 0.5 * x.ln() - stirlerr(x) - bd0(x, l)
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.log_pmf(k).exp()
    }

    /// Right end of the summation window `λ + 40√λ`, never below 40.
    pub fn window(&self) -> u64 {
        (self.lambda + 40.0 * self.lambda.sqrt()).ceil().max(40.0) as u64
    }

    /// Chernoff bound on `P(X ≥ k)`, valid for `k > λ`; `1` otherwise.
    pub fn upper_tail_bound(&self, k: u64) -> f64 {
        let l = self.lambda;
        let x = k as f64;
        if x <= l {
            return 1.0;
        }
        (-l + x - x * (x / l).ln()).exp().min(1.0)
    }

    /// `P(lo ≤ X ≤ hi)` by direct summation, together with an error bound that
    /// covers truncation at the window and floating-point accumulation.
    pub fn mass(&self, lo: u64, hi: Option<u64>) -> (f64, f64) {
        let w = self.window();
        let top = hi.map_or(w, |h| h.min(w));
        if lo > top {
            let tail = if hi.map_or(true, |h| h > w) { self.upper_tail_bound(lo.max(w + 1)) } else { 0.0 };
            return (0.0, tail);
        }
        let mut s = 0.0;
        for k in lo..=top {
            s += self.pmf(k);
        }
        let terms = (top - lo + 1) as f64;
        let mut err = s * 1e-14 * (1.0 + terms.log2());
        if hi.map_or(true, |h| h > w) {
            err += self.upper_tail_bound(w + 1);
        }
        (s, err)
    }

    pub fn cdf(&self, k: u64) -> f64 {
        self.mass(0, Some(k)).0.min(1.0)
    }

    /// Smallest `k` with `P(X ≤ k) ≥ u`, by sequential search from zero.
    pub fn quantile(&self, u: f64) -> u64 {
        let mut acc = 0.0;
        let w = self.window();
        for k in 0..=w {
            acc += self.pmf(k);
            if acc >= u {
                return k;
            }
        }
        w
    }

    /// Draws one value by inversion.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.quantile(rng.gen::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial(k: u64) -> f64 {
        (1..=k).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn small_table_matches_definition() {
        for n in 1..=15u64 {
            let x = n as f64;
            let want = ln_factorial(n) - (x + 0.5) * x.ln() + x - LN_SQRT_2PI;
            assert!((SFERR_HALVES[n as usize] - want).abs() < 1e-13, "{n}");
        }
        // the series branch continues the table smoothly
        let want = ln_factorial(16) - 16.5 * 16f64.ln() + 16.0 - LN_SQRT_2PI;
        assert!((stirlerr(16.0) - want).abs() < 1e-13);
    }

    #[test]
    fn pmf_examples() {
        let p = PoissonSpec::new(1.0).unwrap();
        assert_eq!(p.log_pmf(0), -1.0);
        let p5 = PoissonSpec::new(5.0).unwrap();
        let want = (3125.0f64 / 120.0).ln() - 5.0;
        assert!((p5.log_pmf(5) - want).abs() < 1e-14);
    }

    #[test]
    fn matches_naive_formula_in_the_bulk() {
        let p = PoissonSpec::new(37.5).unwrap();
        for k in 0..120u64 {
            let naive = k as f64 * 37.5f64.ln() - 37.5 - ln_factorial(k);
            assert!((p.log_pmf(k) - naive).abs() < 1e-11, "{k}");
        }
    }

    #[test]
    fn normalised() {
        for l in [0.5, 1.0, 10.0, 1e4] {
            let p = PoissonSpec::new(l).unwrap();
            let top = (l + 20.0 * l.sqrt()).floor() as u64;
            let s: f64 = (0..=top).map(|k| p.pmf(k)).sum();
            assert!(s >= 1.0 - 1e-10 && s <= 1.0 + 1e-12, "{l}: {s}");
        }
    }

    #[test]
    fn rejects_bad_mean() {
        assert!(PoissonSpec::new(0.0).is_err());
        assert!(PoissonSpec::new(-1.0).is_err());
        assert!(PoissonSpec::new(f64::NAN).is_err());
        assert!(PoissonSpec::new(f64::INFINITY).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let p = PoissonSpec::new(2.0).unwrap();
        for k in 0..10 {
            let c = p.cdf(k);
            assert_eq!(p.quantile(c - 1e-12), k);
        }
    }
}
