//! graph6 and JSON adjacency-list formats.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut byte = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            byte = (byte << 1) | u8::from(g.has_edge(i, j));
            k += 1;
            if k == 6 {
                out.push(byte + 63);
                byte = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((byte << (6 - k)) + 63);
    }
    String::from_utf8(out).unwrap()
}

pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let b = s.as_bytes();
    let bad = |m: &str| Error::Parse(format!("graph6 {s:?}: {m}"));
    if b.is_empty() || b.iter().any(|&c| !(63..=126).contains(&c)) {
        return Err(bad("invalid characters"));
    }
    let (n, mut pos) = if b[0] == 126 {
        if b.len() < 4 || b[1] == 126 {
            return Err(bad("unsupported size header"));
        }
        let n = ((b[1] - 63) as usize) << 12 | ((b[2] - 63) as usize) << 6 | (b[3] - 63) as usize;
        (n, 4)
    } else {
        ((b[0] - 63) as usize, 1)
    };
    let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if b.len() - pos != need {
        return Err(bad("wrong length"));
    }
    let mut g = Graph::empty(n);
    let mut bit = 0;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit == 0 {
                cur = b[pos] - 63;
                pos += 1;
                bit = 6;
            }
            bit -= 1;
            if (cur >> bit) & 1 == 1 {
                g.add_edge_unchecked(i, j);
            }
        }
    }
    Ok(g)
}

/// `{"n": int, "edges": [[u, v], ...]}`
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

pub fn to_json(g: &Graph) -> GraphJson {
    GraphJson { n: g.n(), edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() }
}

pub fn from_json(j: &GraphJson) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::new(j.n, &edges)
}
