//! The conditioned pair `(H, H')`.
//!
//! `H'` lives on `V' = {0, ..., n'-1}` with `n' = n + r a`. The planted sets
//! are consecutive blocks: `S_i = {(i-1) a, ..., i a - 1}`, so `S_1..S_r`
//! fill `V' \ V` and `V = {r a, ..., n'-1}`. Edges inside planted sets are
//! removed; every other edge is a fair coin from the stream keyed by
//! `(seed, attempt)`. An attempt is accepted when the planted sets are the
//! only independent `a`-sets of `H'`. `H` is `H'` induced on `V`, relabelled
//! by subtracting `r a`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::graphcore::{count_independent_ksets, count_with_limit, sample_gnp_half, Graph, MAX_VERTICES};

/// Extra sets enumerated per rejected attempt to classify the violation.
const CLASSIFY_EXTRA: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectionStats {
    pub u1: u64,
    pub u2: u64,
    pub both: u64,
}

#[derive(Debug, Clone)]
pub struct CoupledPair {
    pub n: usize,
    pub n_prime: usize,
    pub a: usize,
    pub big_a: usize,
    pub r: usize,
    pub seed: u64,
    pub planted: Vec<Vec<usize>>,
    pub h_prime: Graph,
    pub h: Graph,
    /// Attempts used, including the accepted one.
    pub attempts: u64,
    pub rejections: RejectionStats,
}

impl CoupledPair {
    /// Vertices of `V` inside `V'`.
    pub fn v_offset(&self) -> usize {
        self.r * self.a
    }
}

fn classify(sets: &[Vec<usize>], a: usize, planted_count: usize, r: usize) -> Option<Violation> {
    let boundary = r * a;
    let is_planted = |s: &Vec<usize>| {
        let b = s[0] / a;
        b < planted_count && s[0] % a == 0 && s.iter().enumerate().all(|(i, &v)| v == b * a + i)
    };
    let mut u1 = false;
    let mut u2 = false;
    for s in sets.iter().filter(|s| !is_planted(s)) {
        if s[0] < boundary {
            u1 = true;
        } else {
            u2 = true;
        }
    }
    match (u1, u2) {
        (true, true) => Some(Violation::Both),
        (true, false) => Some(Violation::U1),
        (false, true) => Some(Violation::U2),
        (false, false) => None,
    }
}

pub fn check_pair_parameters(n: usize, a: usize, big_a: usize, r: usize) -> Result<usize> {
    if big_a < 1 || r < 1 || a < 2 {
        return Err(Error::domain(format!("need A >= 1, r >= 1, a >= 2; got A = {big_a}, r = {r}, a = {a}")));
    }
    let n_prime = n + r * a;
    if (big_a + r) * a > n_prime {
        return Err(Error::domain(format!("{} planted {a}-sets do not fit in {n_prime} vertices", big_a + r)));
    }
    if n_prime > MAX_VERTICES || n == 0 {
        return Err(Error::domain(format!("n' = {n_prime} outside 1..={MAX_VERTICES}")));
    }
    Ok(n_prime)
}

pub fn build_conditioned_pair(
    n: usize,
    a: usize,
    big_a: usize,
    r: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<CoupledPair> {
    let n_prime = check_pair_parameters(n, a, big_a, r)?;
    let planted: Vec<Vec<usize>> = (0..big_a + r).map(|i| (i * a..(i + 1) * a).collect()).collect();
    let want = (big_a + r) as u64;
    let mut stats = RejectionStats { u1: 0, u2: 0, both: 0 };
    let mut last = None;
    for attempt in 0..max_attempts {
        let mut g = sample_gnp_half(n_prime, seed, attempt)?;
        for s in &planted {
            for (i, &u) in s.iter().enumerate() {
                for &v in &s[i + 1..] {
                    g.remove_edge(u, v);
                }
            }
        }
        let limit = want + CLASSIFY_EXTRA;
        let rep = count_with_limit(&g, a, true, u64::MAX, limit)?;
        if rep.count == want {
            let h = g.induced(&(r * a..n_prime).collect::<Vec<_>>())?;
            return Ok(CoupledPair {
                n,
                n_prime,
                a,
                big_a,
                r,
                seed,
                planted,
                h_prime: g,
                h,
                attempts: attempt + 1,
                rejections: stats,
            });
        }
        let v = rep
            .sets
            .as_deref()
            .and_then(|sets| classify(sets, a, big_a + r, r))
            .unwrap_or(Violation::Both);
        match v {
            Violation::U1 => stats.u1 += 1,
            Violation::U2 => stats.u2 += 1,
            Violation::Both => stats.both += 1,
        }
        last = Some(v);
    }
    Err(Error::RejectionExhausted { attempts: max_attempts, last: last.unwrap_or(Violation::Both) })
}

/// Independent re-check of every structural claim about a pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub planted_disjoint: bool,
    pub planted_independent: bool,
    pub count_h_prime: u64,
    pub count_h: u64,
    pub counts_ok: bool,
    pub induced_ok: bool,
}

impl PairCheck {
    pub fn ok(&self) -> bool {
        self.planted_disjoint && self.planted_independent && self.counts_ok && self.induced_ok
    }
}

pub fn verify_pair(pair: &CoupledPair) -> Result<PairCheck> {
    let mut seen = vec![false; pair.n_prime];
    let planted_disjoint = pair.planted.iter().flatten().all(|&v| !std::mem::replace(&mut seen[v], true));
    let planted_independent = pair.planted.iter().all(|s| s.len() == pair.a && pair.h_prime.is_independent(s));
    let count_h_prime = count_independent_ksets(&pair.h_prime, pair.a, false, 0)?.count;
    let count_h = count_independent_ksets(&pair.h, pair.a, false, 0)?.count;
    let off = pair.v_offset();
    let induced_ok = pair.h.n() == pair.n
        && (0..pair.n).all(|u| (u + 1..pair.n).all(|v| pair.h.has_edge(u, v) == pair.h_prime.has_edge(u + off, v + off)));
    Ok(PairCheck {
        planted_disjoint,
        planted_independent,
        count_h_prime,
        count_h,
        counts_ok: count_h_prime == (pair.big_a + pair.r) as u64 && count_h == pair.big_a as u64,
        induced_ok,
    })
}

/// JSON sidecar written next to the two binary graphs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairSidecar {
    pub n: usize,
    pub n_prime: usize,
    pub a: usize,
    #[serde(rename = "A")]
    pub big_a: usize,
    pub r: usize,
    pub seed: u64,
    pub attempts: u64,
    pub planted: Vec<Vec<usize>>,
    pub h_prime_file: String,
    pub h_file: String,
    pub h_prime_sha256: String,
    pub h_sha256: String,
}

/// Writes `<stem>.hprime.bin`, `<stem>.h.bin` and `<stem>.json` into `dir`.
pub fn write_pair(pair: &CoupledPair, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let hp = format!("{stem}.hprime.bin");
    let h = format!("{stem}.h.bin");
    std::fs::write(dir.join(&hp), pair.h_prime.to_bytes())?;
    std::fs::write(dir.join(&h), pair.h.to_bytes())?;
    let side = PairSidecar {
        n: pair.n,
        n_prime: pair.n_prime,
        a: pair.a,
        big_a: pair.big_a,
        r: pair.r,
        seed: pair.seed,
        attempts: pair.attempts,
        planted: pair.planted.clone(),
        h_prime_file: hp.clone(),
        h_file: h.clone(),
        h_prime_sha256: pair.h_prime.sha256(),
        h_sha256: pair.h.sha256(),
    };
    let json = dir.join(format!("{stem}.json"));
    std::fs::write(&json, serde_json::to_string_pretty(&side)? + "\n")?;
    Ok(vec![dir.join(hp), dir.join(h), json])
}

/// Reads a pair back from its sidecar.
pub fn read_pair(sidecar: &Path) -> Result<CoupledPair> {
    let side: PairSidecar = serde_json::from_slice(&std::fs::read(sidecar)?)?;
    let dir = sidecar.parent().unwrap_or(Path::new("."));
    let h_prime = Graph::from_bytes(&std::fs::read(dir.join(&side.h_prime_file))?)?;
    let h = Graph::from_bytes(&std::fs::read(dir.join(&side.h_file))?)?;
    if h_prime.sha256() != side.h_prime_sha256 || h.sha256() != side.h_sha256 {
        return Err(Error::Format("graph file does not match the sidecar hash".into()));
    }
    Ok(CoupledPair {
        n: side.n,
        n_prime: side.n_prime,
        a: side.a,
        big_a: side.big_a,
        r: side.r,
        seed: side.seed,
        planted: side.planted,
        h_prime,
        h,
        attempts: side.attempts,
        rejections: RejectionStats { u1: 0, u2: 0, both: 0 },
    })
}
