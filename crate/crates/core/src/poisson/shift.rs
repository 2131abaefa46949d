//! Constructive check that shifting a Poisson-rare set down by `⌊√λ⌋` keeps
//! it rare.
//!
//! For a set `B` with `Poi_λ(B) < δ`, split `B` along `I_t = [λ - t r, λ + t r]`.
//! The part outside `I_t` moves at most `r` and stays outside `I_{t-1}`, whose
//! mass Chebyshev bounds by `λ / ((t-1)² r²)`. On the part inside, each point
//! gains at most a factor `e^t` when shifted.

use serde::Serialize;

use super::{IntervalSet, PoissonSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ShiftedMassCheck {
    pub lambda: f64,
    pub r: u64,
    pub epsilon: f64,
    /// `δ = 2^-delta_exp`.
    pub delta: f64,
    pub delta_exp: u32,
    pub t: f64,
    /// Open interval the valid `t` lie in.
    pub t_range: (f64, f64),
    pub set: IntervalSet,
    pub i_t: (u64, u64),
    pub mass_b: f64,
    pub mass_b2: f64,
    pub mass_b_shifted: f64,
    pub mass_b1_shifted: f64,
    pub mass_b2_shifted: f64,
    /// `λ / ((t-1)² r²)`.
    pub chebyshev_bound: f64,
    /// `Poi_λ` of the complement of `I_{t-1}`, summed directly.
    pub outside_i_t_minus_1: f64,
    /// Largest `ln(p(k - r) / p(k))` over `k ∈ B₂`, `k ≥ r`.
    pub max_log_ratio: Option<f64>,
    pub ratio_bound_ok: bool,
    pub b1_bound_ok: bool,
    pub b2_bound_ok: bool,
    /// `mass_b_shifted < ε`.
    pub conclusion_ok: bool,
    /// Bound on the numerical error of every reported mass.
    pub mass_error: f64,
    /// Smallest margin across the checked inequalities, after subtracting `mass_error`.
    pub min_slack: f64,
}

/// Exponent `j` of the largest `δ = 2^-j` with `ln(ε/(2δ)) > √(3/ε) + 1`.
pub fn delta_exponent(eps: f64) -> u32 {
    let need = (3.0 / eps).sqrt() + 1.0 - (eps / 2.0).ln();
    let j = (need / std::f64::consts::LN_2).floor() as u32 + 1;
    debug_assert!((eps / 2.0).ln() + j as f64 * std::f64::consts::LN_2 > (3.0 / eps).sqrt() + 1.0);
    j
}

fn set_mass(spec: &PoissonSpec, set: &IntervalSet) -> (f64, f64) {
    set.parts().iter().fold((0.0, 0.0), |(m, e), &(lo, hi)| {
        let (v, err) = spec.mass(lo, hi);
        (m + v, e + err)
    })
}

pub fn shifted_mass_check(lambda: f64, set: &IntervalSet, eps: f64) -> Result<ShiftedMassCheck> {
    if !(lambda >= 4.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("shifted-set check needs lambda >= 4, got {lambda}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let spec = PoissonSpec::new(lambda)?;
    let j = delta_exponent(eps);
    let delta = 2f64.powi(-(j as i32));
    let t_lo = (3.0 / eps).sqrt() + 1.0;
    let t_hi = (eps / (2.0 * delta)).ln();
    let t = 0.5 * (t_lo + t_hi);

    let (mass_b, mut err) = set_mass(&spec, set);
    if mass_b + err >= delta {
        return Err(Error::HypothesisViolated { mass: mass_b, delta });
    }

    let r = lambda.sqrt().floor() as u64;
    let rf = r as f64;
    let i_lo = (lambda - t * rf).ceil().max(0.0) as u64;
    let i_hi = (lambda + t * rf).floor() as u64;
    let b1 = set.remove(i_lo, i_hi);
    let b2 = set.clip(i_lo, i_hi);

    let (mass_b2, e) = set_mass(&spec, &b2);
    err += e;
    let (mass_b_shifted, e) = set_mass(&spec, &set.shift_down(r));
    err += e;
    let (mass_b1_shifted, e) = set_mass(&spec, &b1.shift_down(r));
    err += e;
    let (mass_b2_shifted, e) = set_mass(&spec, &b2.shift_down(r));
    err += e;

    let chebyshev_bound = lambda / ((t - 1.0).powi(2) * rf * rf);
    let o_lo = (lambda - (t - 1.0) * rf).ceil().max(0.0) as u64;
    let o_hi = (lambda + (t - 1.0) * rf).floor() as u64;
    let outside = IntervalSet::at_least(0).remove(o_lo, o_hi);
    let (outside_i_t_minus_1, e) = set_mass(&spec, &outside);
    err += e;

    let mut max_log_ratio: Option<f64> = None;
    for &(lo, hi) in b2.parts() {
        let hi = hi.expect("B2 is bounded");
        for k in lo.max(r)..=hi {
            let v = spec.log_pmf(k - r) - spec.log_pmf(k);
            max_log_ratio = Some(max_log_ratio.map_or(v, |m| m.max(v)));
        }
    }
    // Relative error of a log-pmf difference is far below this.
    let log_err = 1e-12;
    let ratio_slack = max_log_ratio.map_or(f64::INFINITY, |m| t - m - log_err);
    let b2_cap = (eps / (2.0 * delta)) * mass_b2;
    let slacks = [
        delta - mass_b - err,
        chebyshev_bound - mass_b1_shifted - err,
        if b2.is_empty() { f64::INFINITY } else { b2_cap - mass_b2_shifted - err },
        eps - mass_b_shifted - err,
        ratio_slack,
    ];
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(ShiftedMassCheck {
        lambda,
        r,
        epsilon: eps,
        delta,
        delta_exp: j,
        t,
        t_range: (t_lo, t_hi),
        set: set.clone(),
        i_t: (i_lo, i_hi),
        mass_b,
        mass_b2,
        mass_b_shifted,
        mass_b1_shifted,
        mass_b2_shifted,
        chebyshev_bound,
        outside_i_t_minus_1,
        max_log_ratio,
        ratio_bound_ok: ratio_slack > 0.0,
        b1_bound_ok: slacks[1] > 0.0,
        b2_bound_ok: slacks[2] > 0.0,
        conclusion_ok: slacks[3] > 0.0,
        mass_error: err,
        min_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_for_tenth() {
        assert_eq!(delta_exponent(0.1), 14);
        let c = shifted_mass_check(100.0, &IntervalSet::empty(), 0.1).unwrap();
        assert!(c.t > c.t_range.0 && c.t < c.t_range.1);
        assert!((c.t - 6.593).abs() < 1e-3);
    }

    #[test]
    fn empty_set_is_trivial() {
        let c = shifted_mass_check(50.0, &IntervalSet::empty(), 0.1).unwrap();
        assert_eq!(c.mass_b, 0.0);
        assert_eq!(c.mass_b_shifted, 0.0);
        assert!(c.ratio_bound_ok && c.b1_bound_ok && c.b2_bound_ok && c.conclusion_ok);
    }

    #[test]
    fn upper_tail_at_ten_thousand() {
        let lambda: f64 = 1e4;
        let set = IntervalSet::at_least((lambda + 6.0 * lambda.sqrt()).ceil() as u64);
        let c = shifted_mass_check(lambda, &set, 0.1).unwrap();
        assert!(c.mass_b < c.delta);
        assert!(c.mass_b_shifted < 0.1);
        assert!(c.mass_b_shifted <= c.mass_b1_shifted + c.mass_b2_shifted + c.mass_error);
        assert!(c.ratio_bound_ok);
        assert!(c.min_slack >= 1e-10, "{}", c.min_slack);
    }

    #[test]
    fn pointwise_ratio_near_three_sd() {
        let spec = PoissonSpec::new(1e4).unwrap();
        let k = 10_300u64;
        let v = spec.log_pmf(k - 100) - spec.log_pmf(k);
        assert!(v <= 100.0 * (k as f64 / 1e4).ln());
        assert!(v < 3.0 + 0.1);
    }

    #[test]
    fn heavy_set_violates_hypothesis() {
        let set: IntervalSet = "90..110".parse().unwrap();
        assert!(matches!(shifted_mass_check(100.0, &set, 0.1), Err(Error::HypothesisViolated { .. })));
        assert!(matches!(shifted_mass_check(3.0, &IntervalSet::empty(), 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn chebyshev_step_holds() {
        for lambda in [1e3, 1e4, 1e5] {
            let c = shifted_mass_check(lambda, &IntervalSet::empty(), 0.1).unwrap();
            assert!(c.outside_i_t_minus_1 <= c.chebyshev_bound);
        }
    }
}
