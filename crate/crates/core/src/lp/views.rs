//! The candidate local views that index the LP columns, and realizability
//! certificates found by searching small regular hosts.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{enumerate_regular, to_graph6, CanonicalForm, EnumerationConfig, Graph};
use crate::localview::{independent_view_at, matching_view_at, LocalView};
use crate::polys::Kind;

/// Largest degree for which views are listed.
pub const MAX_VIEW_DEGREE: usize = 5;

/// A host graph, a configuration in it and a root producing some view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HostWitness {
    pub graph6: String,
    /// Matching edges, or independent-set vertices as (v, v).
    pub configuration: Vec<(usize, usize)>,
    /// Root edge, or root vertex as (v, v).
    pub root: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct CertifiedView {
    pub view: LocalView,
    pub host: HostWitness,
}

/// Every structurally possible view in a d-regular graph. Matching: (a, b, t)
/// with a ≤ b, a + t ≤ d − 1, b + t ≤ d − 1. Independent set: the cone over
/// each graph on at most d vertices.
pub fn candidate_views(d: usize, kind: Kind) -> Result<Vec<LocalView>> {
    if d == 0 || d > MAX_VIEW_DEGREE {
        return Err(invalid(format!("views are listed for 1 <= d <= {MAX_VIEW_DEGREE}")));
    }
    match kind {
        Kind::Match => {
            let mut out = Vec::new();
            for t in 0..d {
                for a in 0..d - t {
                    for b in a..d - t {
                        out.push(LocalView::matching_abt(a, b, t));
                    }
                }
            }
            Ok(out)
        }
        Kind::Ind => {
            let mut seen = BTreeMap::new();
            for k in 0..=d {
                let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
                for mask in 0u32..1 << pairs.len() {
                    let edges: Vec<_> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
                    let v = LocalView::independent(&Graph::new(k, &edges).unwrap());
                    seen.entry(v.cert.clone()).or_insert(v);
                }
            }
            Ok(seen.into_values().collect())
        }
        Kind::Potts(_) => Err(invalid("no LP view list for colorings")),
    }
}

/// Host orders searched for witnesses.
fn host_orders(d: usize) -> std::ops::RangeInclusive<usize> {
    let top = match d {
        1 | 2 => 8,
        3 => 10,
        4 => 9,
        _ => 10,
    };
    d + 1..=top
}

/// Realizable views with one witness each. Views of `candidate_views` not
/// returned here were not found in any host up to the searched order.
pub fn enumerate_local_views(d: usize, kind: Kind) -> Result<Vec<CertifiedView>> {
    let candidates = candidate_views(d, kind)?;
    let mut found: BTreeMap<CanonicalForm, HostWitness> = BTreeMap::new();
    'hosts: for n in host_orders(d) {
        if n * d % 2 == 1 {
            continue;
        }
        for g in enumerate_regular(&EnumerationConfig::new(d, n, 3))? {
            let g6 = to_graph6(&g);
            match kind {
                Kind::Match => scan_matchings(&g, &g6, &mut found),
                _ => scan_independent(&g, &g6, &mut found),
            }
            if found.len() == candidates.len() {
                break 'hosts;
            }
        }
    }
    Ok(candidates
        .into_iter()
        .filter_map(|view| found.get(&view.cert).map(|h| CertifiedView { host: h.clone(), view }))
        .collect())
}

fn scan_matchings(g: &Graph, g6: &str, found: &mut BTreeMap<CanonicalForm, HostWitness>) {
    let edges = g.edges();
    let mut current = Vec::new();
    fn rec(
        i: usize,
        g: &Graph,
        g6: &str,
        edges: &[(usize, usize)],
        used: u64,
        current: &mut Vec<(usize, usize)>,
        found: &mut BTreeMap<CanonicalForm, HostWitness>,
    ) {
        if i == edges.len() {
            for &(u, v) in edges {
                let view = matching_view_at(g, current, u, v).unwrap();
                found.entry(view.cert).or_insert_with(|| HostWitness {
                    graph6: g6.to_string(),
                    configuration: current.clone(),
                    root: (u, v),
                });
            }
            return;
        }
        rec(i + 1, g, g6, edges, used, current, found);
        let (u, v) = edges[i];
        if used >> u & 1 == 0 && used >> v & 1 == 0 {
            current.push((u, v));
            rec(i + 1, g, g6, edges, used | 1 << u | 1 << v, current, found);
            current.pop();
        }
    }
    rec(0, g, g6, &edges, 0, &mut current, found);
}

fn scan_independent(g: &Graph, g6: &str, found: &mut BTreeMap<CanonicalForm, HostWitness>) {
    let n = g.n();
    for mask in 0u64..1 << n {
        let set: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
        if set.iter().any(|&x| g.neighbors(x).iter().any(|&y| mask >> y & 1 == 1)) {
            continue;
        }
        for v in 0..n {
            let view = independent_view_at(g, &set, v).unwrap();
            found.entry(view.cert).or_insert_with(|| HostWitness {
                graph6: g6.to_string(),
                configuration: set.iter().map(|&x| (x, x)).collect(),
                root: (v, v),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_graph6;

    #[test]
    fn candidate_counts() {
        // graphs on at most k vertices: 1, 2, 4, 8, 19, 53
        let ind: Vec<usize> = (1..=5).map(|d| candidate_views(d, Kind::Ind).unwrap().len()).collect();
        assert_eq!(ind, vec![2, 4, 8, 19, 53]);
        assert_eq!(candidate_views(2, Kind::Match).unwrap().len(), 4);
        assert_eq!(candidate_views(3, Kind::Match).unwrap().len(), 10);
    }

    #[test]
    fn cycle_views() {
        let got: Vec<_> = enumerate_local_views(2, Kind::Match)
            .unwrap()
            .iter()
            .map(|c| c.view.abt().unwrap())
            .collect();
        assert_eq!(got.len(), 4);
        for abt in [(0, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)] {
            assert!(got.contains(&abt));
        }
    }

    #[test]
    fn witnesses_reproduce() {
        for kind in [Kind::Match, Kind::Ind] {
            for d in 2..=3 {
                let certified = enumerate_local_views(d, kind).unwrap();
                assert_eq!(certified.len(), candidate_views(d, kind).unwrap().len(), "{kind} d={d}");
                for c in certified {
                    let g = from_graph6(&c.host.graph6).unwrap();
                    assert!(g.is_regular(d));
                    let (u, v) = c.host.root;
                    let view = match kind {
                        Kind::Match => matching_view_at(&g, &c.host.configuration, u, v).unwrap(),
                        _ => {
                            let set: Vec<usize> = c.host.configuration.iter().map(|p| p.0).collect();
                            independent_view_at(&g, &set, u).unwrap()
                        }
                    };
                    assert_eq!(view.cert, c.view.cert);
                }
            }
        }
    }

    #[test]
    fn ind_includes_empty_and_anticlique() {
        for d in 2..=4 {
            let views = enumerate_local_views(d, Kind::Ind).unwrap();
            let has = |g: &Graph| views.iter().any(|c| c.view.cert == LocalView::independent(g).cert);
            assert!(has(&Graph::empty(0)));
            assert!(has(&Graph::empty(d)));
        }
    }
}
