//! Empirical law of `X_k`, the number of independent `k`-sets of G(n, 1/2).

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::table::Table;
use crate::asymptotics::log2_expected_ksets;
use crate::error::{Error, Result};
use crate::graphcore::{count_independent_ksets, sample_gnp_half};
use crate::poisson::{tv_empirical, PoissonSpec, Tv};
use crate::real::Real;

pub const XK_MIN_SAMPLES: usize = 100;
pub const XK_BLOCKS: usize = 5;

/// Graphs timed before committing to a run.
const PROBE_SAMPLES: u64 = 3;

#[derive(Debug, Clone)]
pub struct XkConfig {
    /// Abort when the probe predicts a longer single-threaded run than this.
    pub max_estimated_s: f64,
}

impl Default for XkConfig {
    fn default() -> Self {
        XkConfig { max_estimated_s: 4.0 * 3600.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct XkBlock {
    pub first_stream: u64,
    pub samples: u64,
    pub mean: f64,
    pub tv: Tv,
}

#[derive(Debug, Clone, Serialize)]
pub struct XkRow {
    pub value: u64,
    pub count: u64,
    pub frequency: f64,
    pub poisson_pmf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct XkReport {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub log2_mu: Real,
    pub mu: f64,
    pub mean: f64,
    pub variance: f64,
    /// Distance between the pooled empirical law and `Poi(μ)`.
    pub tv: Tv,
    /// The same distance on disjoint consecutive stream blocks.
    pub blocks: Vec<XkBlock>,
    pub pmf: Vec<XkRow>,
    /// `X_k` of sample `i`, drawn from stream `i`.
    #[serde(skip)]
    pub values: Vec<u64>,
    /// Wall time per sample measured by the feasibility probe.
    #[serde(skip)]
    pub probe_s_per_sample: f64,
}

impl XkReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x_k[count]", "samples[count]", "frequency[fraction]", "poisson_pmf[probability]"]);
        for r in &self.pmf {
            t.push(vec![r.value.to_string(), r.count.to_string(), format!("{:e}", r.frequency), format!("{:e}", r.poisson_pmf)]);
        }
        t
    }
}

/// Smallest `k` with `μ(n, k)` in `[lo, hi]`, if any.
pub fn k_for_mu(n: usize, lo: f64, hi: f64) -> Option<usize> {
    (1..=n).find(|&k| {
        let mu = log2_expected_ksets(n as u64, k as u64).map_or(f64::NAN, |l| l.to_f64().exp2());
        mu >= lo && mu <= hi
    })
}

fn x_k(n: usize, k: usize, seed: u64, stream: u64) -> Result<u64> {
    let g = sample_gnp_half(n, seed, stream)?;
    Ok(count_independent_ksets(&g, k, false, 0)?.count)
}

fn histogram(values: &[u64]) -> Vec<u64> {
    let top = values.iter().copied().max().unwrap_or(0) as usize;
    let mut h = vec![0u64; top + 1];
    for &v in values {
        h[v as usize] += 1;
    }
    h
}

pub fn xk_distribution_experiment(n: usize, k: usize, samples: usize, seed: u64) -> Result<XkReport> {
    xk_distribution_with(n, k, samples, seed, &XkConfig::default())
}

pub fn xk_distribution_with(n: usize, k: usize, samples: usize, seed: u64, cfg: &XkConfig) -> Result<XkReport> {
    if samples < XK_MIN_SAMPLES {
        return Err(Error::domain(format!("need at least {XK_MIN_SAMPLES} samples, got {samples}")));
    }
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let log2_mu = log2_expected_ksets(n as u64, k as u64)?;
    let mu = log2_mu.to_f64().exp2();
    let spec = PoissonSpec::new(mu)?;

    let probe = PROBE_SAMPLES.min(samples as u64);
    let t0 = Instant::now();
    let mut values = Vec::with_capacity(samples);
    for i in 0..probe {
        values.push(x_k(n, k, seed, i)?);
    }
    let per = t0.elapsed().as_secs_f64() / probe as f64;
    let estimate = per * samples as f64;
    if estimate > cfg.max_estimated_s {
        return Err(Error::BudgetExhausted {
            what: "x_k feasibility probe".into(),
            last: format!(
                "(n, k) = ({n}, {k}) needs about {estimate:.0} s on one thread; lower n, move k away from the peak of mu, or cut samples"
            ),
        });
    }
    let rest: Vec<u64> = (probe..samples as u64).into_par_iter().map(|i| x_k(n, k, seed, i)).collect::<Result<_>>()?;
    values.extend(rest);

    let m = samples as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / m;
    let variance = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let hist = histogram(&values);
    let tv = tv_empirical(&hist, &spec)?;

    let block = samples.div_ceil(XK_BLOCKS);
    let blocks = values
        .chunks(block)
        .enumerate()
        .map(|(b, chunk)| {
            Ok(XkBlock {
                first_stream: (b * block) as u64,
                samples: chunk.len() as u64,
                mean: chunk.iter().map(|&v| v as f64).sum::<f64>() / chunk.len() as f64,
                tv: tv_empirical(&histogram(chunk), &spec)?,
            })
        })
        .collect::<Result<_>>()?;

    let pmf = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(v, &c)| XkRow { value: v as u64, count: c, frequency: c as f64 / m, poisson_pmf: spec.pmf(v as u64) })
        .collect();

    Ok(XkReport {
        n,
        k,
        samples,
        seed,
        log2_mu,
        mu,
        mean,
        variance,
        tv,
        blocks,
        pmf,
        values,
        probe_s_per_sample: per,
    })
}
