use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pair::CoupledPair;
use crate::graphcore::{chromatic_number_with, is_proper_coloring, Graph, SolveBudget};

/// Stream reserved for label permutations.
const PERMUTE_STREAM: u64 = u64::MAX;

/// Uniform random relabelling; `perm[v]` is the new label of vertex `v`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(PERMUTE_STREAM);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    perm
}

pub fn permute_labels(g: &Graph, seed: u64) -> Graph {
    let perm = random_permutation(g.n(), seed);
    Graph::from_edges(g.n(), g.edges().map(|(u, v)| (perm[u], perm[v]))).expect("same vertex set")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapVerdict {
    Holds,
    Violated,
    /// The solver brackets are too wide to decide.
    Undecided,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiGap {
    /// `[lower, upper]` for `χ(H)`.
    pub chi_h: (usize, usize),
    pub chi_h_prime: (usize, usize),
    pub r: usize,
    pub verdict: GapVerdict,
    /// Colouring `H` with its best colouring and each `S_1..S_r` with a fresh colour is proper.
    pub witness_ok: bool,
    /// `χ(H') ≥ χ(H)`, when both are exact.
    pub monotone_ok: Option<bool>,
    pub nodes: u64,
}

impl ChiGap {
    pub fn gap_ok(&self) -> Option<bool> {
        match self.verdict {
            GapVerdict::Holds => Some(true),
            GapVerdict::Violated => Some(false),
            GapVerdict::Undecided => None,
        }
    }
}

pub fn verify_chi_gap(pair: &CoupledPair, budget_ms: u64) -> ChiGap {
    verify_chi_gap_with(pair, SolveBudget::wall(budget_ms))
}

pub fn verify_chi_gap_with(pair: &CoupledPair, budget: SolveBudget) -> ChiGap {
    let h = chromatic_number_with(&pair.h, budget);
    let hp = chromatic_number_with(&pair.h_prime, budget);
    let off = pair.v_offset();
    let mut witness = vec![0usize; pair.n_prime];
    for (v, &c) in h.coloring.iter().enumerate() {
        witness[v + off] = c;
    }
    for (i, s) in pair.planted[..pair.r].iter().enumerate() {
        for &v in s {
            witness[v] = h.upper + i;
        }
    }
    let witness_ok = is_proper_coloring(&pair.h_prime, &witness);
    let verdict = if hp.upper <= h.lower + pair.r {
        GapVerdict::Holds
    } else if hp.lower > h.upper + pair.r {
        GapVerdict::Violated
    } else {
        GapVerdict::Undecided
    };
    let monotone_ok = (h.is_exact() && hp.is_exact()).then(|| hp.upper >= h.upper);
    ChiGap {
        chi_h: (h.lower, h.upper),
        chi_h_prime: (hp.lower, hp.upper),
        r: pair.r,
        verdict,
        witness_ok,
        monotone_ok,
        nodes: h.nodes + hp.nodes,
    }
}
