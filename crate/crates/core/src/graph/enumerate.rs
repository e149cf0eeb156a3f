//! Enumeration of d-regular graphs (connected or not) up to isomorphism.
//!
//! Backtracking always completes the lowest vertex that still has free
//! degree, choosing the whole set of its remaining neighbours at once, so
//! every completion of a partial graph is reachable from it. Candidate
//! neighbours that are twins in the partial graph (same neighbourhood) are
//! interchangeable by an automorphism fixing the current vertex, so only
//! the lowest-indexed members of each twin class are tried. Complete graphs
//! are bucketed by canonical form.

use log::warn;
use rayon::prelude::*;
use std::collections::BTreeMap;

use super::{canonical_labeling, CanonicalForm, Graph};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub d: usize,
    pub n: usize,
    /// 3 means "no constraint" for simple graphs.
    pub min_girth: usize,
    /// Overrides the default vertex limit (a warning is logged above it).
    pub max_n: Option<usize>,
}

impl EnumerationConfig {
    pub fn new(d: usize, n: usize, min_girth: usize) -> Self {
        EnumerationConfig { d, n, min_girth, max_n: None }
    }

    pub fn with_max(mut self, max_n: usize) -> Self {
        self.max_n = Some(max_n);
        self
    }
}

/// Default vertex limit: 16 for cycles, 14 for cubic graphs.
pub fn enumeration_limit(d: usize) -> usize {
    match d {
        0..=2 => 16,
        3 => 14,
        4 => 11,
        _ => 10,
    }
}

/// One representative per isomorphism class, relabeled canonically and
/// sorted by certificate.
pub fn enumerate_regular(cfg: &EnumerationConfig) -> Result<Vec<Graph>> {
    let EnumerationConfig { d, n, min_girth, .. } = *cfg;
    if (d * n) % 2 != 0 || d >= n {
        if d == 0 && n > 0 {
            return Ok(vec![Graph::empty(n)]);
        }
        return Err(invalid(format!("no d-regular graphs need d*n even and d < n (d={d}, n={n})")));
    }
    if min_girth < 3 {
        return Err(invalid("min_girth must be at least 3"));
    }
    let default = enumeration_limit(d);
    let limit = cfg.max_n.unwrap_or(default);
    if n > limit {
        return Err(Error::Capacity(format!(
            "enumeration of {d}-regular graphs on {n} vertices exceeds the limit {limit}"
        )));
    }
    if n > default {
        warn!("enumerating {d}-regular graphs on {n} vertices, above the default limit {default}");
    }
    let start = Partial::new(n, d);
    // Split on the choices for vertex 0 so branches run in parallel.
    let firsts = start.children(min_girth);
    let found: Vec<BTreeMap<CanonicalForm, Graph>> = firsts
        .into_par_iter()
        .map(|p| {
            let mut out = BTreeMap::new();
            p.search(min_girth, &mut out);
            out
        })
        .collect();
    let mut all = BTreeMap::new();
    for m in found {
        all.extend(m);
    }
    Ok(all.into_values().collect())
}

#[derive(Clone)]
struct Partial {
    d: usize,
    adj: Vec<u64>,
    deg: Vec<usize>,
}

impl Partial {
    fn new(n: usize, d: usize) -> Self {
        assert!(n <= 64, "enumeration supports at most 64 vertices");
        Partial { d, adj: vec![0; n], deg: vec![0; n] }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    /// Distance between u and w, capped at `cap`.
    fn dist_at_least(&self, u: usize, w: usize, cap: usize) -> bool {
        let mut frontier = 1u64 << u;
        let mut seen = frontier;
        for _ in 0..cap {
            if frontier & (1 << w) != 0 {
                return false;
            }
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[x];
            }
            frontier = next & !seen;
            seen |= next;
            if frontier == 0 {
                return true;
            }
        }
        frontier & (1 << w) == 0 && seen & (1 << w) == 0
    }

    fn children(&self, min_girth: usize) -> Vec<Partial> {
        let n = self.n();
        let Some(v) = (0..n).find(|&v| self.deg[v] < self.d) else {
            return Vec::new();
        };
        let need = self.d - self.deg[v];
        // candidates grouped into twin classes, keyed by neighbourhood
        let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for w in (v + 1)..n {
            if self.deg[w] < self.d && self.adj[v] & (1 << w) == 0 {
                // adding vw closes a cycle of length dist(v,w)+1
                if min_girth > 3 && !self.dist_at_least(v, w, min_girth - 2) {
                    continue;
                }
                classes.entry(self.adj[w]).or_default().push(w);
            }
        }
        let classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        self.choose(v, need, &classes, 0, &mut pick, min_girth, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        v: usize,
        need: usize,
        classes: &[Vec<usize>],
        ci: usize,
        pick: &mut Vec<usize>,
        min_girth: usize,
        out: &mut Vec<Partial>,
    ) {
        if need == 0 {
            let mut p = self.clone();
            for &w in pick.iter() {
                p.adj[v] |= 1 << w;
                p.adj[w] |= 1 << v;
                p.deg[w] += 1;
            }
            p.deg[v] += pick.len();
            // Two new neighbours of v that are already within distance
            // girth-3 of each other would close a short cycle through v.
            if min_girth > 3 {
                for (i, &a) in pick.iter().enumerate() {
                    for &b in &pick[i + 1..] {
                        if !self.dist_at_least(a, b, min_girth - 3) {
                            return;
                        }
                    }
                }
            }
            out.push(p);
            return;
        }
        if ci == classes.len() {
            return;
        }
        let remaining: usize = classes[ci..].iter().map(Vec::len).sum();
        if remaining < need {
            return;
        }
        let cls = &classes[ci];
        for take in (0..=cls.len().min(need)).rev() {
            let base = pick.len();
            pick.extend_from_slice(&cls[..take]);
            self.choose(v, need - take, classes, ci + 1, pick, min_girth, out);
            pick.truncate(base);
        }
    }

    fn search(&self, min_girth: usize, out: &mut BTreeMap<CanonicalForm, Graph>) {
        if self.deg.iter().all(|&x| x == self.d) {
            let g = self.to_graph();
            let (perm, cert) = canonical_labeling(&g, &vec![0; g.n()]);
            out.entry(cert).or_insert_with(|| g.relabel(&perm));
            return;
        }
        // Feasibility: each unfinished vertex needs enough unfinished
        // non-neighbours to complete.
        let n = self.n();
        let open: u64 = (0..n).filter(|&v| self.deg[v] < self.d).fold(0, |m, v| m | 1 << v);
        for v in 0..n {
            if self.deg[v] < self.d {
                let avail = (open & !self.adj[v] & !(1 << v)).count_ones() as usize;
                if avail < self.d - self.deg[v] {
                    return;
                }
            }
        }
        for c in self.children(min_girth) {
            c.search(min_girth, out);
        }
    }

    fn to_graph(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for u in 0..n {
            for w in (u + 1)..n {
                if self.adj[u] & (1 << w) != 0 {
                    g.add_edge_unchecked(u, w);
                }
            }
        }
        g
    }
}
