//! Maximum clique by branch and bound with greedy-colouring bounds, and the
//! independence number as the clique number of the complement.

use super::graph::Graph;

fn first(set: &[u64]) -> Option<usize> {
    set.iter().position(|&w| w != 0).map(|i| i * 64 + set[i].trailing_zeros() as usize)
}

#[derive(Debug, Clone)]
pub struct CliqueResult {
    /// Largest clique found, sorted.
    pub clique: Vec<usize>,
    /// The search finished, so `clique` is maximum.
    pub complete: bool,
    pub nodes: u64,
}

struct Mcq<'g> {
    g: &'g Graph,
    best: Vec<usize>,
    r: Vec<usize>,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl Mcq<'_> {
    /// Vertices of `p` in colour order, with the colour index of each.
    fn colour_sort(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut bound = Vec::new();
        let mut uncol = p.to_vec();
        let mut colour = 0;
        while uncol.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = uncol.clone();
            loop {
                let Some(v) = first(&q) else { break };
                q[v / 64] &= !(1 << (v % 64));
                uncol[v / 64] &= !(1 << (v % 64));
                for (qw, rw) in q.iter_mut().zip(self.g.row(v)) {
                    *qw &= !rw;
                }
                order.push(v);
                bound.push(colour);
            }
        }
        (order, bound)
    }

    fn expand(&mut self, p: &mut [u64]) {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        let (order, bound) = self.colour_sort(p);
        let mut next = vec![0u64; p.len()];
        for i in (0..order.len()).rev() {
            if self.r.len() + bound[i] <= self.best.len() || self.aborted {
                return;
            }
            let v = order[i];
            self.r.push(v);
            let mut empty = true;
            for ((nw, pw), rw) in next.iter_mut().zip(p.iter()).zip(self.g.row(v)) {
                *nw = pw & rw;
                empty &= *nw == 0;
            }
            if empty {
                if self.r.len() > self.best.len() {
                    self.best = self.r.clone();
                }
            } else {
                self.expand(&mut next);
            }
            self.r.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Maximum clique, giving up after `node_limit` search nodes.
pub fn max_clique(g: &Graph, node_limit: u64) -> CliqueResult {
    let mut s = Mcq { g, best: vec![0], r: Vec::new(), nodes: 0, limit: node_limit, aborted: false };
    let mut p = g.full_set();
    s.expand(&mut p);
    let mut clique = s.best;
    clique.sort_unstable();
    CliqueResult { clique, complete: !s.aborted, nodes: s.nodes }
}

/// Exact independence number.
pub fn independence_number(g: &Graph) -> usize {
    max_independent_set(g).len()
}

/// A maximum independent set, sorted.
pub fn max_independent_set(g: &Graph) -> Vec<usize> {
    max_clique(&g.complement(), u64::MAX).clique
}
