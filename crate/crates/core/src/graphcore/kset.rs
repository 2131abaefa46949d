//! Counting independent `k`-sets.
//!
//! The search extends a partial independent set with vertices in increasing
//! order, keeping the candidate set `P` of later vertices non-adjacent to all
//! chosen ones. A branch is cut as soon as `|P|` falls below the number of
//! vertices still needed; at the last level `|P|` itself is the count.
//! Every set is reached exactly once, so no pivoting is applied.

use serde::Serialize;

use super::graph::{ones, popcount, Graph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentSetReport {
    pub k: usize,
    pub count: u64,
    /// Present when enumeration was requested and `count <= cap`.
    pub sets: Option<Vec<Vec<usize>>>,
    /// No two independent `k`-sets share a vertex.
    pub all_disjoint: bool,
    /// Enumeration was requested but the cap was exceeded.
    pub cap_exceeded: bool,
    /// Search nodes visited.
    pub nodes: u64,
}

struct Search<'g> {
    g: &'g Graph,
    k: usize,
    count: u64,
    nodes: u64,
    enumerate: bool,
    cap: u64,
    sets: Vec<Vec<usize>>,
    cap_exceeded: bool,
    used: Vec<u64>,
    all_disjoint: bool,
    stop_after: u64,
    stack: Vec<usize>,
    /// Scratch bitsets, two per depth.
    pool: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn record(&mut self, last: &[u64]) {
        // `last` holds the candidates completing the current stack.
        for v in ones(last) {
            self.count += 1;
            self.stack.push(v);
            if self.all_disjoint {
                let clash = self.stack.iter().any(|&u| self.used[u / 64] >> (u % 64) & 1 == 1);
                if clash {
                    self.all_disjoint = false;
                }
                for &u in &self.stack {
                    self.used[u / 64] |= 1 << (u % 64);
                }
            }
            if self.enumerate && !self.cap_exceeded {
                if self.count > self.cap {
                    self.cap_exceeded = true;
                    self.sets.clear();
                } else {
                    self.sets.push(self.stack.clone());
                }
            }
            self.stack.pop();
        }
    }

    fn done(&self) -> bool {
        self.count >= self.stop_after
    }

    fn expand(&mut self, cand: &[u64], need: usize) {
        self.nodes += 1;
        if need == 1 {
            if self.enumerate || self.all_disjoint {
                self.record(cand);
            } else {
                self.count += popcount(cand) as u64;
            }
            return;
        }
        let words = cand.len();
        let depth = self.stack.len();
        let mut rest = std::mem::take(&mut self.pool[2 * depth]);
        let mut next = std::mem::take(&mut self.pool[2 * depth + 1]);
        rest.copy_from_slice(cand);
        let mut left = popcount(cand);
        for v in ones(cand) {
            if left < need || self.done() {
                break;
            }
            rest[v / 64] &= !(1 << (v % 64));
            left -= 1;
            let row = self.g.row(v);
            let mut size = 0;
            for i in 0..words {
                next[i] = rest[i] & !row[i];
                size += next[i].count_ones() as usize;
            }
            if size + 1 >= need {
                self.stack.push(v);
                self.expand(&next, need - 1);
                self.stack.pop();
            }
        }
        self.pool[2 * depth] = rest;
        self.pool[2 * depth + 1] = next;
    }
}

/// Exact number of independent `k`-sets in `g`.
///
/// With `enumerate`, the sets are listed (as sorted vertex lists) unless more
/// than `cap` exist, in which case only the count is kept and `cap_exceeded`
/// is set.
pub fn count_independent_ksets(g: &Graph, k: usize, enumerate: bool, cap: u64) -> Result<IndependentSetReport> {
    count_with_limit(g, k, enumerate, cap, u64::MAX)
}

/// Like [`count_independent_ksets`] but stops once `limit` sets are found;
/// the returned count is then `min(true count, limit)` or slightly above.
pub fn count_with_limit(g: &Graph, k: usize, enumerate: bool, cap: u64, limit: u64) -> Result<IndependentSetReport> {
    let n = g.n();
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    if k == 0 {
        return Ok(IndependentSetReport {
            k,
            count: 1,
            sets: enumerate.then(|| vec![vec![]]),
            all_disjoint: true,
            cap_exceeded: enumerate && cap == 0,
            nodes: 0,
        });
    }
    let mut s = Search {
        g,
        k,
        count: 0,
        nodes: 0,
        enumerate,
        cap,
        sets: Vec::new(),
        cap_exceeded: false,
        used: vec![0; g.words()],
        all_disjoint: true,
        stop_after: limit,
        stack: Vec::with_capacity(k),
        pool: vec![vec![0; g.words()]; 2 * k],
    };
    let full = g.full_set();
    s.expand(&full, k);
    let sets = (enumerate && !s.cap_exceeded).then_some(s.sets);
    debug_assert!(s.k == k);
    Ok(IndependentSetReport {
        k,
        count: s.count,
        sets,
        all_disjoint: s.all_disjoint,
        cap_exceeded: s.cap_exceeded,
        nodes: s.nodes,
    })
}

/// Whether the listed sets are pairwise vertex-disjoint.
pub fn all_disjoint(report: &IndependentSetReport) -> Result<bool> {
    let sets = report.sets.as_ref().ok_or_else(|| Error::domain("report carries no enumerated sets"))?;
    let mut seen = std::collections::HashSet::new();
    Ok(sets.iter().flatten().all(|&v| seen.insert(v)))
}
