//! G(n, 1/2) from a counter-based stream.
//!
//! Edge `{u, v}` with `u < v` has row-major upper-triangular index
//! `e = u n - u(u+1)/2 + (v - u - 1)`; it is present iff bit `e % 64` of the
//! `e / 64`-th 64-bit output of ChaCha8 keyed by `(seed, stream)` is set.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::Graph;
use crate::error::Result;

pub fn edge_index(n: usize, u: usize, v: usize) -> u64 {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    let (n, u, v) = (n as u64, u as u64, v as u64);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

pub(crate) fn keyed_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Value of a single edge bit, without generating the rest of the graph.
pub fn edge_bit(seed: u64, stream: u64, e: u64) -> bool {
    let mut rng = keyed_rng(seed, stream);
    rng.set_word_pos(2 * (e / 64) as u128);
    rng.next_u64() >> (e % 64) & 1 == 1
}

/// Reads `len ≤ 64` bits of `src` starting at bit `pos`.
fn read_bits(src: &[u64], pos: u64, len: usize) -> u64 {
    let w = (pos / 64) as usize;
    let off = (pos % 64) as u32;
    let mut v = src[w] >> off;
    if off != 0 && w + 1 < src.len() {
        v |= src[w + 1] << (64 - off);
    }
    if len < 64 {
        v &= (1u64 << len) - 1;
    }
    v
}

pub fn sample_gnp_half(n: usize, seed: u64, stream: u64) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    let mut rng = keyed_rng(seed, stream);
    let stream_words: Vec<u64> = (0..pairs.div_ceil(64)).map(|_| rng.next_u64()).collect();
    for u in 0..n.saturating_sub(1) {
        let start = edge_index(n, u, u + 1);
        let mut v = u + 1;
        while v < n {
            // align the destination to a word boundary
            let take = (64 - v % 64).min(n - v);
            let bits = read_bits(&stream_words, start + (v - u - 1) as u64, take);
            g.row_mut(u)[v / 64] |= bits << (v % 64);
            v += take;
        }
    }
    // mirror the upper triangle
    for u in 0..n {
        let up: Vec<usize> = super::graph::ones(g.row(u)).filter(|&v| v > u).collect();
        for v in up {
            g.row_mut(v)[u / 64] |= 1 << (u % 64);
        }
    }
    Ok(g)
}
