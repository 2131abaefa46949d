//! Exact chromatic number by DSATUR branch and bound.
//!
//! The lower bound is a maximum clique (its vertices are precoloured, which
//! also breaks colour symmetry); the upper bound is greedy DSATUR. The search
//! branches on the uncoloured vertex of highest saturation, breaking ties by
//! degree into the uncoloured part and then by lowest index.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::clique::max_clique;
use super::graph::{ones, Graph};

/// Limits on a single solve. Node limits make exhaustion reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveBudget {
    pub wall_ms: Option<u64>,
    pub nodes: Option<u64>,
}

impl SolveBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn wall(ms: u64) -> Self {
        SolveBudget { wall_ms: Some(ms), nodes: None }
    }

    pub fn nodes(n: u64) -> Self {
        SolveBudget { wall_ms: None, nodes: Some(n) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    WallClock,
    NodeLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaticResult {
    pub lower: usize,
    pub upper: usize,
    /// A proper colouring with `upper` colours, colours numbered from 0.
    pub coloring: Vec<usize>,
    pub nodes: u64,
    pub elapsed_ms: u64,
    /// Why the search stopped early, if it did.
    pub stopped: Option<StopReason>,
}

impl ChromaticResult {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn value(&self) -> Option<usize> {
        self.is_exact().then_some(self.upper)
    }
}

pub fn is_proper_coloring(g: &Graph, colors: &[usize]) -> bool {
    colors.len() == g.n() && g.edges().all(|(u, v)| colors[u] != colors[v])
}

struct Dsatur<'g> {
    g: &'g Graph,
    n: usize,
    /// 1-based colour per vertex, 0 when uncoloured.
    color: Vec<usize>,
    /// `adj_count[v * stride + c]`: neighbours of `v` with colour `c`.
    adj_count: Vec<u32>,
    stride: usize,
    sat: Vec<usize>,
    deg_unc: Vec<usize>,
    best: usize,
    best_coloring: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: SolveBudget,
    start: Instant,
    stopped: Option<StopReason>,
}

impl Dsatur<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        for u in ones(self.g.row(v)) {
            let slot = &mut self.adj_count[u * self.stride + c];
            *slot += 1;
            if *slot == 1 {
                self.sat[u] += 1;
            }
            self.deg_unc[u] -= 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = 0;
        for u in ones(self.g.row(v)) {
            let slot = &mut self.adj_count[u * self.stride + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u] -= 1;
            }
            self.deg_unc[u] += 1;
        }
    }

    fn select(&self) -> usize {
        let mut best = usize::MAX;
        for v in 0..self.n {
            if self.color[v] != 0 {
                continue;
            }
            if best == usize::MAX
                || self.sat[v] > self.sat[best]
                || (self.sat[v] == self.sat[best] && self.deg_unc[v] > self.deg_unc[best])
            {
                best = v;
            }
        }
        best
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stopped.is_some() {
            return true;
        }
        if self.budget.nodes.is_some_and(|lim| self.nodes > lim) {
            self.stopped = Some(StopReason::NodeLimit);
        } else if self.nodes % 1024 == 0
            && self.budget.wall_ms.is_some_and(|ms| self.start.elapsed().as_millis() as u64 >= ms)
        {
            self.stopped = Some(StopReason::WallClock);
        }
        self.stopped.is_some()
    }

    fn search(&mut self, colored: usize, used: usize) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        if colored == self.n {
            self.best = used;
            self.best_coloring = self.color.iter().map(|c| c - 1).collect();
            return;
        }
        let v = self.select();
        let mut c = 0;
        loop {
            c += 1;
            // at most one fresh colour, and only colourings better than the best so far
            if c > used + 1 || c >= self.best {
                break;
            }
            if self.adj_count[v * self.stride + c] != 0 {
                continue;
            }
            self.assign(v, c);
            self.search(colored + 1, used.max(c));
            self.unassign(v, c);
            if self.stopped.is_some() || self.best <= self.lower {
                return;
            }
        }
    }
}

fn greedy_dsatur(s: &mut Dsatur<'_>, precolored: usize) -> Vec<usize> {
    let mut done = precolored;
    let mut used = precolored;
    let mut trail = Vec::new();
    while done < s.n {
        let v = s.select();
        let c = (1..=s.n).find(|&c| s.adj_count[v * s.stride + c] == 0).expect("a free colour");
        s.assign(v, c);
        trail.push((v, c));
        used = used.max(c);
        done += 1;
    }
    let coloring = s.color.iter().map(|c| c - 1).collect();
    for (v, c) in trail.into_iter().rev() {
        s.unassign(v, c);
    }
    s.best = used;
    coloring
}

/// Exact chromatic number within a wall-clock budget in milliseconds.
pub fn chromatic_number(g: &Graph, budget_ms: u64) -> ChromaticResult {
    chromatic_number_with(g, SolveBudget::wall(budget_ms))
}

pub fn chromatic_number_with(g: &Graph, budget: SolveBudget) -> ChromaticResult {
    let start = Instant::now();
    let n = g.n();
    let clique_limit = budget.nodes.unwrap_or(1 << 22).max(1 << 12);
    let clique = max_clique(g, clique_limit).clique;
    let stride = n + 2;
    let mut s = Dsatur {
        g,
        n,
        color: vec![0; n],
        adj_count: vec![0; n * stride],
        stride,
        sat: vec![0; n],
        deg_unc: (0..n).map(|v| g.degree(v)).collect(),
        best: n + 1,
        best_coloring: Vec::new(),
        lower: clique.len(),
        nodes: 0,
        budget,
        start,
        stopped: None,
    };
    for (i, &v) in clique.iter().enumerate() {
        s.assign(v, i + 1);
    }
    s.best_coloring = greedy_dsatur(&mut s, clique.len());
    if s.best > s.lower {
        s.search(clique.len(), clique.len());
    }
    let lower = if s.stopped.is_none() { s.best } else { s.lower };
    ChromaticResult {
        lower,
        upper: s.best,
        coloring: s.best_coloring,
        nodes: s.nodes,
        elapsed_ms: start.elapsed().as_millis() as u64,
        stopped: s.stopped,
    }
}
