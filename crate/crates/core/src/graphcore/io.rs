//! Binary and DIMACS graph formats.
//!
//! Binary layout: the 8-byte magic `CHLGRAF1`, `n` as little-endian `u64`, then
//! the upper triangle in row-major order, one bit per pair, least significant
//! bit first within each byte.

use std::io::{BufRead, Read, Write};

use sha2::{Digest, Sha256};

use super::graph::Graph;
use super::sample::edge_index;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"CHLGRAF1";

impl Graph {
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.n();
        let pairs = (n as u64) * (n as u64 - 1) / 2;
        let mut out = Vec::with_capacity(16 + pairs.div_ceil(8) as usize);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(n as u64).to_le_bytes());
        let mut bits = vec![0u8; pairs.div_ceil(8) as usize];
        for (u, v) in self.edges() {
            let e = edge_index(n, u, v);
            bits[(e / 8) as usize] |= 1 << (e % 8);
        }
        out.extend_from_slice(&bits);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Graph> {
        if bytes.len() < 16 || &bytes[..8] != MAGIC {
            return Err(Error::Format("missing graph magic header".into()));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().expect("eight bytes"));
        let n = usize::try_from(n).map_err(|_| Error::Format(format!("vertex count {n} too large")))?;
        let mut g = Graph::empty(n).map_err(|e| Error::Format(e.to_string()))?;
        let pairs = (n as u64) * (n as u64 - 1) / 2;
        let body = &bytes[16..];
        if body.len() as u64 != pairs.div_ceil(8) {
            return Err(Error::Format(format!("expected {} payload bytes, found {}", pairs.div_ceil(8), body.len())));
        }
        let mut e = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                if body[(e / 8) as usize] >> (e % 8) & 1 == 1 {
                    g.add_edge(u, v);
                }
                e += 1;
            }
        }
        if pairs % 8 != 0 && body[body.len() - 1] >> (pairs % 8) != 0 {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        Ok(g)
    }

    pub fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_binary(r: &mut impl Read) -> Result<Graph> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Graph::from_bytes(&buf)
    }

    /// Hex SHA-256 of the binary encoding.
    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.to_bytes()))
    }

    pub fn write_dimacs(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "p edge {} {}", self.n(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(w, "e {} {}", u + 1, v + 1)?;
        }
        Ok(())
    }

    pub fn read_dimacs(r: impl BufRead) -> Result<Graph> {
        let mut g: Option<Graph> = None;
        for line in r.lines() {
            let line = line?;
            let mut it = line.split_whitespace();
            match it.next() {
                None | Some("c") => {}
                Some("p") => {
                    let _fmt = it.next();
                    let n: usize = parse_field(it.next(), &line)?;
                    g = Some(Graph::empty(n).map_err(|e| Error::Format(e.to_string()))?);
                }
                Some("e") => {
                    let g = g.as_mut().ok_or_else(|| Error::Format("edge before problem line".into()))?;
                    let u: usize = parse_field(it.next(), &line)?;
                    let v: usize = parse_field(it.next(), &line)?;
                    if u == 0 || v == 0 || u > g.n() || v > g.n() {
                        return Err(Error::Format(format!("vertex out of range in {line:?}")));
                    }
                    if u != v {
                        g.add_edge(u - 1, v - 1);
                    }
                }
                Some(other) => return Err(Error::Format(format!("unknown DIMACS line type {other:?}"))),
            }
        }
        g.ok_or_else(|| Error::Format("no problem line".into()))
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Format(format!("malformed line {line:?}")))
}
