//! Compares a permutation-invariant statistic of `H` with the same statistic
//! under G(n, 1/2) conditioned on exactly `A` independent `a`-sets, all
//! disjoint, sampled by plain rejection.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gap::permute_labels;
use super::pair::build_conditioned_pair;
use crate::error::{Error, Result};
use crate::graphcore::{chromatic_number_with, count_with_limit, sample_gnp_half, Graph, SolveBudget};
use crate::util::derive_seed;

const TAG_PAIR: u64 = 0x7061_6972;
const TAG_REF: u64 = 0x7265_6600;
const TAG_CHECK: u64 = 0x6368_6b00;
const TAG_RESAMPLE: u64 = 0x7273_6d70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    EdgeCount,
    Chi,
    MaxDegree,
    TriangleCount,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [Statistic::EdgeCount, Statistic::Chi, Statistic::MaxDegree, Statistic::TriangleCount];

    pub fn name(&self) -> &'static str {
        match self {
            Statistic::EdgeCount => "edge_count",
            Statistic::Chi => "chi",
            Statistic::MaxDegree => "max_degree",
            Statistic::TriangleCount => "triangle_count",
        }
    }

    /// Value on `g`; `None` if an exact `χ` was not reached within `budget`.
    pub fn eval(&self, g: &Graph, budget: SolveBudget) -> Option<u64> {
        Some(match self {
            Statistic::EdgeCount => g.edge_count(),
            Statistic::Chi => chromatic_number_with(g, budget).value()? as u64,
            Statistic::MaxDegree => g.max_degree() as u64,
            Statistic::TriangleCount => g.triangle_count(),
        })
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown statistic {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Claim2Config {
    pub samples: usize,
    pub seed: u64,
    /// Allowed relative excess of `P_H(B)` over `P_ref(B)`.
    pub slack: f64,
    pub pair_max_attempts: u64,
    /// Reference draws below this acceptance rate abort the run.
    pub min_acceptance: f64,
    pub resamples: usize,
    pub chi_budget: SolveBudget,
}

impl Default for Claim2Config {
    fn default() -> Self {
        Claim2Config {
            samples: 2000,
            seed: 0,
            slack: 0.1,
            pair_max_attempts: 100_000,
            min_acceptance: 1e-4,
            resamples: 200,
            chi_budget: SolveBudget::nodes(10_000_000),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub mean: f64,
    pub sd: f64,
    pub min: u64,
    pub max: u64,
}

impl SampleSummary {
    fn of(v: &[u64]) -> Self {
        let n = v.len() as f64;
        let mean = v.iter().map(|&x| x as f64).sum::<f64>() / n;
        let var = v.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        SampleSummary { mean, sd: var.sqrt(), min: *v.iter().min().unwrap_or(&0), max: *v.iter().max().unwrap_or(&0) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdEvent {
    /// `ge` for `{X ≥ θ}`, `le` for `{X ≤ θ}`.
    pub kind: &'static str,
    pub threshold: u64,
    pub p_h: f64,
    pub p_ref: f64,
    /// `p_h - (1 + slack) p_ref`.
    pub excess: f64,
    pub se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim2Report {
    pub n: usize,
    pub a: usize,
    #[serde(rename = "A")]
    pub big_a: usize,
    pub statistic: Statistic,
    pub samples: usize,
    pub seed: u64,
    pub slack: f64,
    pub coupled: SampleSummary,
    pub reference: SampleSummary,
    pub mean_diff: f64,
    pub pooled_se: f64,
    /// `|mean_diff| / pooled_se`.
    pub z: f64,
    pub tv: f64,
    pub tv_ci: (f64, f64),
    pub ks: f64,
    pub ks_ci: (f64, f64),
    pub pair_attempts: u64,
    pub reference_attempts: u64,
    pub reference_acceptance: f64,
    pub events_checked: usize,
    /// Events with `p_h > (1 + slack) p_ref` as point estimates.
    pub events_exceeding: usize,
    /// Events whose excess is above two standard errors.
    pub events_significant: usize,
    pub worst_event: Option<ThresholdEvent>,
    pub invariance_graphs: usize,
    pub coupled_values: Vec<u64>,
    pub reference_values: Vec<u64>,
}

fn histogram(v: &[u64]) -> BTreeMap<u64, f64> {
    let mut h = BTreeMap::new();
    for &x in v {
        *h.entry(x).or_insert(0.0) += 1.0 / v.len() as f64;
    }
    h
}

fn tv_ks(x: &[u64], y: &[u64]) -> (f64, f64) {
    let hx = histogram(x);
    let hy = histogram(y);
    let keys: std::collections::BTreeSet<u64> = hx.keys().chain(hy.keys()).copied().collect();
    let (mut tv, mut ks, mut fx, mut fy) = (0.0, 0.0f64, 0.0, 0.0);
    for k in keys {
        let px = hx.get(&k).copied().unwrap_or(0.0);
        let py = hy.get(&k).copied().unwrap_or(0.0);
        tv += (px - py).abs();
        fx += px;
        fy += py;
        ks = ks.max((fx - fy).abs());
    }
    (0.5 * tv, ks)
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

fn threshold_events(h: &[u64], r: &[u64], slack: f64) -> Vec<ThresholdEvent> {
    let mut keys: Vec<u64> = h.iter().chain(r).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let (nh, nr) = (h.len() as f64, r.len() as f64);
    let mut out = Vec::with_capacity(2 * keys.len());
    for &t in &keys {
        for kind in ["ge", "le"] {
            let hit = |x: &u64| if kind == "ge" { *x >= t } else { *x <= t };
            let p_h = h.iter().filter(|x| hit(x)).count() as f64 / nh;
            let p_ref = r.iter().filter(|x| hit(x)).count() as f64 / nr;
            let s = 1.0 + slack;
            let se = (p_h * (1.0 - p_h) / nh + s * s * p_ref * (1.0 - p_ref) / nr).sqrt();
            out.push(ThresholdEvent { kind, threshold: t, p_h, p_ref, excess: p_h - s * p_ref, se });
        }
    }
    out
}

/// Draws one graph from the reference law; returns it and the attempts used.
fn reference_draw(n: usize, a: usize, big_a: usize, seed: u64, cap: u64) -> Result<Option<(Graph, u64)>> {
    for attempt in 0..cap {
        let g = sample_gnp_half(n, seed, attempt)?;
        let rep = count_with_limit(&g, a, false, 0, big_a as u64 + 1)?;
        if rep.count == big_a as u64 && rep.all_disjoint {
            return Ok(Some((g, attempt + 1)));
        }
    }
    Ok(None)
}

pub fn claim2_experiment(n: usize, a: usize, big_a: usize, statistic: Statistic, cfg: &Claim2Config) -> Result<Claim2Report> {
    if big_a < 1 {
        return Err(Error::domain("claim 2 comparison needs A >= 1"));
    }
    if cfg.samples < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let budget = cfg.chi_budget;
    let eval = |g: &Graph| {
        statistic
            .eval(g, budget)
            .ok_or_else(|| Error::BudgetExhausted { what: "chromatic number".into(), last: format!("n = {}", g.n()) })
    };

    let invariance_graphs = 20;
    for i in 0..invariance_graphs {
        let g = sample_gnp_half(n, derive_seed(cfg.seed, TAG_CHECK, i as u64), 0)?;
        if eval(&g)? != eval(&permute_labels(&g, i as u64))? {
            return Err(Error::domain(format!("statistic {statistic} is not invariant under relabelling")));
        }
    }

    let coupled: Vec<(u64, u64)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let pair = build_conditioned_pair(n, a, big_a, 1, derive_seed(cfg.seed, TAG_PAIR, i as u64), cfg.pair_max_attempts)?;
            Ok((eval(&pair.h)?, pair.attempts))
        })
        .collect::<Result<_>>()?;

    let cap = (10.0 / cfg.min_acceptance).ceil() as u64;
    let reference: Vec<Option<(u64, u64)>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            Ok(match reference_draw(n, a, big_a, derive_seed(cfg.seed, TAG_REF, i as u64), cap)? {
                Some((g, att)) => Some((eval(&g)?, att)),
                None => None,
            })
        })
        .collect::<Result<_>>()?;
    let accepted = reference.iter().filter(|r| r.is_some()).count() as u64;
    let reference_attempts: u64 = reference.iter().map(|r| r.map_or(cap, |(_, t)| t)).sum();
    let acceptance = accepted as f64 / reference_attempts as f64;
    if accepted < cfg.samples as u64 || acceptance < cfg.min_acceptance {
        return Err(Error::ReferenceStalled { accepted, attempts: reference_attempts });
    }

    let hv: Vec<u64> = coupled.iter().map(|c| c.0).collect();
    let rv: Vec<u64> = reference.iter().map(|r| r.expect("all accepted").0).collect();
    let cs = SampleSummary::of(&hv);
    let rs = SampleSummary::of(&rv);
    let pooled_se = (cs.sd.powi(2) / hv.len() as f64 + rs.sd.powi(2) / rv.len() as f64).sqrt();
    let mean_diff = cs.mean - rs.mean;
    let z = if pooled_se > 0.0 { mean_diff.abs() / pooled_se } else if mean_diff == 0.0 { 0.0 } else { f64::INFINITY };
    let (tv, ks) = tv_ks(&hv, &rv);

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, TAG_RESAMPLE, 0));
    let mut tvs = Vec::with_capacity(cfg.resamples);
    let mut kss = Vec::with_capacity(cfg.resamples);
    for _ in 0..cfg.resamples {
        let bx: Vec<u64> = (0..hv.len()).map(|_| hv[rng.gen_range(0..hv.len())]).collect();
        let by: Vec<u64> = (0..rv.len()).map(|_| rv[rng.gen_range(0..rv.len())]).collect();
        let (t, k) = tv_ks(&bx, &by);
        tvs.push(t);
        kss.push(k);
    }
    tvs.sort_by(f64::total_cmp);
    kss.sort_by(f64::total_cmp);

    let events = threshold_events(&hv, &rv, cfg.slack);
    let events_exceeding = events.iter().filter(|e| e.excess > 0.0).count();
    let events_significant = events.iter().filter(|e| e.excess > 2.0 * e.se).count();
    let worst_event = events.iter().max_by(|x, y| x.excess.total_cmp(&y.excess)).cloned();

    Ok(Claim2Report {
        n,
        a,
        big_a,
        statistic,
        samples: cfg.samples,
        seed: cfg.seed,
        slack: cfg.slack,
        coupled: cs,
        reference: rs,
        mean_diff,
        pooled_se,
        z,
        tv,
        tv_ci: (percentile(&tvs, 0.025), percentile(&tvs, 0.975)),
        ks,
        ks_ci: (percentile(&kss, 0.025), percentile(&kss, 0.975)),
        pair_attempts: coupled.iter().map(|c| c.1).sum(),
        reference_attempts,
        reference_acceptance: acceptance,
        events_checked: events.len(),
        events_exceeding,
        events_significant,
        worst_event,
        invariance_graphs,
        coupled_values: hv,
        reference_values: rv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistic_names_round_trip() {
        for s in Statistic::ALL {
            assert_eq!(s.name().parse::<Statistic>().unwrap(), s);
        }
        assert!("girth".parse::<Statistic>().is_err());
    }

    #[test]
    fn zero_a_is_rejected() {
        let cfg = Claim2Config { samples: 10, ..Default::default() };
        assert!(matches!(claim2_experiment(30, 7, 0, Statistic::EdgeCount, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn tv_and_ks_basics() {
        assert_eq!(tv_ks(&[1, 2, 3], &[1, 2, 3]), (0.0, 0.0));
        let (tv, ks) = tv_ks(&[0, 0], &[1, 1]);
        assert_eq!(tv, 1.0);
        assert_eq!(ks, 1.0);
    }

    #[test]
    fn small_run_is_deterministic() {
        let cfg = Claim2Config { samples: 30, resamples: 20, seed: 3, ..Default::default() };
        let a = claim2_experiment(16, 5, 1, Statistic::MaxDegree, &cfg).unwrap();
        let b = claim2_experiment(16, 5, 1, Statistic::MaxDegree, &cfg).unwrap();
        assert_eq!(a.coupled_values, b.coupled_values);
        assert_eq!(a.reference_values, b.reference_values);
        assert_eq!(a.tv_ci, b.tv_ci);
        assert!(a.events_checked > 0);
    }

    #[test]
    fn stall_is_reported() {
        // A lone independent 6-set in G(14, 1/2) turns up in well under half the draws.
        let cfg = Claim2Config { samples: 2, resamples: 1, min_acceptance: 0.5, ..Default::default() };
        let r = claim2_experiment(14, 6, 1, Statistic::EdgeCount, &cfg);
        assert!(matches!(r, Err(Error::ReferenceStalled { .. })), "{r:?}");
    }
}
