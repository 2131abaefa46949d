use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 16_384;

/// Dense undirected simple graph stored as a symmetric bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: u64,
    pub max_degree: usize,
    pub sha256: String,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Iterates the set bits of a bitset.
pub(crate) fn ones(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

pub(crate) fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::domain(format!("vertex count must be in 1..={MAX_VERTICES}, got {n}")));
        }
        let words = words_for(n);
        Ok(Graph { n, words, adj: vec![0; n * words] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        let mut g = Self::empty(n)?;
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        Ok(g)
    }

    pub fn petersen() -> Self {
        let mut g = Self::empty(10).expect("ten vertices");
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Format(format!("invalid edge ({u}, {v}) for n = {n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub(crate) fn row_mut(&mut self, u: usize) -> &mut [u64] {
        &mut self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn degree(&self, u: usize) -> usize {
        popcount(self.row(u))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|w| w.count_ones() as u64).sum::<u64>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| ones(self.row(u)).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn triangle_count(&self) -> u64 {
        let mut t = 0u64;
        for (u, v) in self.edges() {
            let common: u64 = self
                .row(u)
                .iter()
                .zip(self.row(v))
                .enumerate()
                .map(|(i, (a, b))| {
                    let mut w = a & b;
                    // keep only vertices above v
                    let base = i * 64;
                    if base + 64 <= v + 1 {
                        w = 0;
                    } else if base <= v {
                        w &= !0u64 << (v + 1 - base);
                    }
                    w.count_ones() as u64
                })
                .sum();
            t += common;
        }
        t
    }

    /// Bitset with every vertex set.
    pub fn full_set(&self) -> Vec<u64> {
        let mut s = vec![!0u64; self.words];
        let rem = self.n % 64;
        if rem != 0 {
            s[self.words - 1] = (1u64 << rem) - 1;
        }
        s
    }

    pub fn complement(&self) -> Graph {
        let full = self.full_set();
        let mut g = self.clone();
        for u in 0..self.n {
            let row = g.row_mut(u);
            for (w, f) in row.iter_mut().zip(&full) {
                *w = !*w & f;
            }
            row[u / 64] &= !(1 << (u % 64));
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut g = Graph::empty(vertices.len())?;
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// `true` when no two vertices of `set` are adjacent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Checks symmetry, an empty diagonal and clear padding bits.
    pub fn check_invariants(&self) -> bool {
        let full = self.full_set();
        (0..self.n).all(|u| {
            !self.has_edge(u, u)
                && self.row(u).iter().zip(&full).all(|(w, f)| w & !f == 0)
                && ones(self.row(u)).all(|v| self.has_edge(v, u))
        })
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary { n: self.n, edges: self.edge_count(), max_degree: self.max_degree(), sha256: self.sha256() }
    }
}
