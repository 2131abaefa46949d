//! Empirical spread of `χ(G(n, 1/2))` for small `n`.

use rayon::prelude::*;
use serde::Serialize;

use super::table::Table;
use crate::asymptotics::f;
use crate::error::{Error, Result};
use crate::graphcore::{chromatic_number_with, independence_number, sample_gnp_half, SolveBudget};
use crate::real::Real;

pub const CHI_MAX_N: usize = 80;
pub const CHI_MIN_SAMPLES: usize = 50;
/// Share of exhausted solves above which a report is marked unreliable.
pub const UNRELIABLE_SHARE: f64 = 0.2;
/// Relative distance of the mean from `f(n)` reported as "close".
pub const F_TOLERANCE: f64 = 0.15;
/// Search nodes granted per millisecond of budget.
pub const NODES_PER_MS: u64 = 2_000;

/// Solve budget behind a `--budget-ms` value. The node limit binds first on
/// any reasonable machine, so exhaustion replays exactly; the wall clock is
/// only a backstop.
pub fn lab_budget(budget_ms: u64) -> SolveBudget {
    SolveBudget { wall_ms: Some(budget_ms.saturating_mul(10)), nodes: Some(budget_ms.saturating_mul(NODES_PER_MS)) }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSample {
    pub stream: u64,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub nodes: u64,
    pub alpha: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Quantile {
    pub p: f64,
    pub value: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiIntervalReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: SolveBudget,
    pub exact_solves: usize,
    pub exhausted: usize,
    pub unreliable: bool,
    /// Statistics below use exact solves only.
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub quantiles: Vec<Quantile>,
    /// Shortest `[lo, hi]` holding at least 90% of the exact values.
    pub shortest_90: Option<(usize, usize)>,
    pub shortest_90_mass: Option<f64>,
    pub f_n: Option<Real>,
    /// `(mean - f(n)) / f(n)`.
    pub relative_deviation: Option<f64>,
    pub f_tolerance: f64,
    pub within_f_tolerance: Option<bool>,
    pub f_note: &'static str,
    /// Every sample satisfies `n / α(G) <= χ(G) <= n`.
    pub envelope_ok: bool,
    #[serde(skip)]
    pub per_sample: Vec<ChiSample>,
}

impl ChiIntervalReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "stream[index]",
            "chi_lower[colors]",
            "chi_upper[colors]",
            "exact[bool]",
            "nodes[count]",
            "alpha[vertices]",
        ]);
        for s in &self.per_sample {
            t.push(vec![
                s.stream.to_string(),
                s.lower.to_string(),
                s.upper.to_string(),
                s.exact.to_string(),
                s.nodes.to_string(),
                s.alpha.to_string(),
            ]);
        }
        t
    }
}

/// Nearest-rank quantile of sorted data.
fn nearest_rank(sorted: &[usize], p: f64) -> usize {
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Shortest window of sorted data holding at least `share` of it; ties go to the lowest.
pub(crate) fn shortest_interval(sorted: &[usize], share: f64) -> Option<(usize, usize, usize)> {
    if sorted.is_empty() {
        return None;
    }
    let w = ((share * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let mut best: Option<(usize, usize)> = None;
    for i in 0..=sorted.len() - w {
        let (lo, hi) = (sorted[i], sorted[i + w - 1]);
        if best.map_or(true, |(bl, bh)| hi - lo < bh - bl) {
            best = Some((lo, hi));
        }
    }
    let (lo, hi) = best?;
    let mass = sorted.iter().filter(|&&v| v >= lo && v <= hi).count();
    Some((lo, hi, mass))
}

pub fn chi_interval_experiment(n: usize, samples: usize, seed: u64, budget: SolveBudget) -> Result<ChiIntervalReport> {
    if n == 0 || n > CHI_MAX_N {
        return Err(Error::domain(format!("exact chromatic numbers need 1 <= n <= {CHI_MAX_N}, got {n}")));
    }
    if samples < CHI_MIN_SAMPLES {
        return Err(Error::domain(format!("need at least {CHI_MIN_SAMPLES} samples, got {samples}")));
    }
    let per_sample: Vec<ChiSample> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let g = sample_gnp_half(n, seed, i)?;
            let res = chromatic_number_with(&g, budget);
            Ok(ChiSample {
                stream: i,
                lower: res.lower,
                upper: res.upper,
                exact: res.is_exact(),
                nodes: res.nodes,
                alpha: independence_number(&g),
            })
        })
        .collect::<Result<_>>()?;

    let mut exact: Vec<usize> = per_sample.iter().filter(|s| s.exact).map(|s| s.upper).collect();
    exact.sort_unstable();
    let exhausted = samples - exact.len();
    let m = exact.len() as f64;
    let mean = (!exact.is_empty()).then(|| exact.iter().sum::<usize>() as f64 / m);
    let sd = mean.filter(|_| exact.len() > 1).map(|mu| {
        (exact.iter().map(|&v| (v as f64 - mu).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    });
    let quantiles = if exact.is_empty() {
        Vec::new()
    } else {
        [0.05, 0.25, 0.5, 0.75, 0.95].iter().map(|&p| Quantile { p, value: nearest_rank(&exact, p) }).collect()
    };
    let short = shortest_interval(&exact, 0.9);
    let f_n = if n >= 16 { Some(f(n as u64)?) } else { None };
    let relative_deviation = match (&f_n, mean) {
        (Some(fv), Some(mu)) => Some((mu - fv.to_f64()) / fv.to_f64()),
        _ => None,
    };
    let envelope_ok = per_sample.iter().all(|s| s.upper <= n && s.upper * s.alpha >= n);

    Ok(ChiIntervalReport {
        n,
        samples,
        seed,
        budget,
        exact_solves: exact.len(),
        exhausted,
        unreliable: exhausted as f64 > UNRELIABLE_SHARE * samples as f64,
        min: exact.first().copied(),
        max: exact.last().copied(),
        mean,
        sd,
        quantiles,
        shortest_90: short.map(|(lo, hi, _)| (lo, hi)),
        shortest_90_mass: short.map(|(_, _, c)| c as f64 / m),
        f_n,
        relative_deviation,
        f_tolerance: F_TOLERANCE,
        within_f_tolerance: relative_deviation.map(|d| d.abs() <= F_TOLERANCE),
        f_note: "f(n) is an asymptotic location; the tolerance is a fixed reporting choice, not a prediction",
        envelope_ok,
        per_sample,
    })
}
