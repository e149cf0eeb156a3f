//! Local views: the trace of a configuration around a random root edge
//! (matchings) or root vertex (independent sets, Potts colorings), recorded
//! up to isomorphism.
//!
//! * Matching, root edge e = uv: the view graph has the root edge plus every
//!   incident edge ux that is externally uncovered, i.e. x is unmatched or
//!   matched to u or v. Vertices 0 and 1 are u and v.
//! * Independent set, root v: the cone over G[U], U the neighbours of v with
//!   no neighbour in I \ N̄(v). Vertex 0 is v.
//! * Potts, root v: G[N̄₂(v)] with the colours of the distance-2 boundary,
//!   quotiented by colour permutations (one extra vertex per used colour,
//!   joined to the boundary vertices of that colour).
//!
//! Conditioned on everything outside the view, the configuration inside
//! is the same model on the view graph, so all conditional probabilities
//! are ratios of partition functions of view subgraphs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{check_budget, invalid, Result};
use crate::exact::{fmt_rat, BigRat};
use crate::graph::{canon_colored, rooted_ball, to_graph6, CanonicalForm, Graph};
use crate::polys::{coeffs, CoefVector, Kind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalView {
    pub kind: Kind,
    pub graph: Graph,
    /// Vertex classes respected by the canonical form.
    pub tags: Vec<u32>,
    pub cert: CanonicalForm,
}

const TAG_ROOT: u32 = 0;
const TAG_INNER: u32 = 1;
const TAG_BOUNDARY: u32 = 2;
const TAG_COLOUR: u32 = 3;

impl LocalView {
    fn with_tags(kind: Kind, graph: Graph, tags: Vec<u32>) -> Self {
        let cert = canon_colored(&graph, &tags);
        LocalView { kind, graph, tags, cert }
    }

    /// Matching view from a graph whose edge 0-1 is the root edge and whose
    /// other edges all touch 0 or 1.
    pub fn matching(graph: Graph) -> Result<Self> {
        if graph.n() < 2 || !graph.has_edge(0, 1) {
            return Err(invalid("matching view needs the root edge 0-1"));
        }
        if graph.edges().iter().any(|&(x, y)| x > 1 && y > 1) {
            return Err(invalid("matching view edges must touch the root edge"));
        }
        let tags = (0..graph.n()).map(|x| if x < 2 { TAG_ROOT } else { TAG_INNER }).collect();
        Ok(Self::with_tags(Kind::Match, graph, tags))
    }

    /// Matching view with `a` private uncovered edges at one root endpoint,
    /// `b` at the other and `t` uncovered triangles.
    pub fn matching_abt(a: usize, b: usize, t: usize) -> Self {
        let mut edges = vec![(0, 1)];
        let mut next = 2;
        for _ in 0..a {
            edges.push((0, next));
            next += 1;
        }
        for _ in 0..b {
            edges.push((1, next));
            next += 1;
        }
        for _ in 0..t {
            edges.push((0, next));
            edges.push((1, next));
            next += 1;
        }
        Self::matching(Graph::new(next, &edges).unwrap()).unwrap()
    }

    /// Independent-set view: the cone with apex 0 over `uncovered`.
    pub fn independent(uncovered: &Graph) -> Self {
        let k = uncovered.n();
        let mut edges: Vec<(usize, usize)> = (1..=k).map(|x| (0, x)).collect();
        edges.extend(uncovered.edges().into_iter().map(|(x, y)| (x + 1, y + 1)));
        let g = Graph::new(k + 1, &edges).unwrap();
        let mut tags = vec![TAG_INNER; k + 1];
        tags[0] = TAG_ROOT;
        Self::with_tags(Kind::Ind, g, tags)
    }

    /// The graph G[U] an independent-set view is the cone over.
    pub fn uncovered_graph(&self) -> Graph {
        let keep: Vec<usize> = (1..self.graph.n()).collect();
        self.graph.induced(&keep)
    }

    /// Potts view: `ball` has the root at 0 and `dist` from it; `boundary`
    /// lists (ball vertex, colour) for the distance-2 vertices.
    pub fn potts(q: u32, ball: &Graph, dist: &[usize], boundary: &[(usize, u32)]) -> Self {
        let mut used: Vec<u32> = boundary.iter().map(|&(_, c)| c).collect();
        used.sort_unstable();
        used.dedup();
        let n = ball.n();
        let mut g = ball.disjoint_union(&Graph::empty(used.len()));
        for &(x, c) in boundary {
            let ci = used.binary_search(&c).unwrap();
            g.add_edge_unchecked(x, n + ci);
        }
        let mut tags: Vec<u32> = dist
            .iter()
            .map(|&d| match d {
                0 => TAG_ROOT,
                1 => TAG_INNER,
                _ => TAG_BOUNDARY,
            })
            .collect();
        tags.extend(std::iter::repeat_n(TAG_COLOUR, used.len()));
        Self::with_tags(Kind::Potts(q), g, tags)
    }

    /// (a, b, t) with a ≤ b for matching views.
    pub fn abt(&self) -> Option<(usize, usize, usize)> {
        if self.kind != Kind::Match {
            return None;
        }
        let g = &self.graph;
        let t = (2..g.n()).filter(|&x| g.has_edge(0, x) && g.has_edge(1, x)).count();
        let a = g.degree(0) - 1 - t;
        let b = g.degree(1) - 1 - t;
        Some((a.min(b), a.max(b), t))
    }

    pub fn describe(&self) -> String {
        match self.kind {
            Kind::Match => {
                let (a, b, t) = self.abt().unwrap();
                format!("edge(a={a},b={b},t={t})")
            }
            Kind::Ind => format!("cone({})", to_graph6(&self.uncovered_graph())),
            Kind::Potts(_) => format!("ball({})", to_graph6(&self.graph)),
        }
    }

    /// Partition function of the view graph (or a subgraph) at λ.
    fn z(&self, g: &Graph, lambda: &BigRat) -> BigRat {
        let c = match self.kind {
            Kind::Match => coeffs(g, Kind::Match),
            _ => coeffs(g, Kind::Ind),
        }
        .expect("view graphs are tiny");
        eval_coeffs(&c, lambda)
    }

    /// P(root object occupied | view).
    pub fn root_occupancy(&self, lambda: &BigRat) -> BigRat {
        let g = &self.graph;
        let z = self.z(g, lambda);
        match self.kind {
            Kind::Match => lambda * self.z(&g.remove_vertices(&[0, 1]), lambda) / z,
            Kind::Ind => {
                let mut closed: Vec<usize> = g.neighbors(0).to_vec();
                closed.push(0);
                lambda * self.z(&g.remove_vertices(&closed), lambda) / z
            }
            Kind::Potts(_) => panic!("root occupancy is defined for matchings and independent sets"),
        }
    }

    /// Matching: Σ over non-root view edges f of P(f ∈ M | view).
    /// Independent set: Σ over non-root view vertices x of P(x ∈ I | view).
    pub fn neighbour_occupancy(&self, lambda: &BigRat) -> BigRat {
        let g = &self.graph;
        let z = self.z(g, lambda);
        let mut s = BigRat::zero();
        match self.kind {
            Kind::Match => {
                for (x, y) in g.edges() {
                    if (x, y) != (0, 1) {
                        s += lambda * self.z(&g.remove_vertices(&[x, y]), lambda);
                    }
                }
            }
            Kind::Ind => {
                for x in 1..g.n() {
                    let mut closed: Vec<usize> = g.neighbors(x).to_vec();
                    closed.push(x);
                    s += lambda * self.z(&g.remove_vertices(&closed), lambda);
                }
            }
            Kind::Potts(_) => panic!("neighbour occupancy is defined for matchings and independent sets"),
        }
        s / z
    }

    /// Matching only. Returns (far, root):
    /// far = Σ over non-root view edges f = wx (x the endpoint off the root
    /// edge) of P(no view edge at x other than f is in M | view);
    /// root = Σ over root endpoints y of P(no view edge at y other than the
    /// root edge is in M | view).
    pub fn endpoint_freedom(&self, lambda: &BigRat) -> (BigRat, BigRat) {
        assert_eq!(self.kind, Kind::Match);
        let g = &self.graph;
        let z = self.z(g, lambda);
        let both = lambda * self.z(&g.remove_vertices(&[0, 1]), lambda);
        let mut far = BigRat::zero();
        for (w, x) in g.edges() {
            if w > 1 {
                continue;
            }
            if x == 1 {
                continue;
            }
            // x unmatched, or matched through f itself
            far += self.z(&g.remove_vertices(&[x]), lambda)
                + lambda * self.z(&g.remove_vertices(&[w, x]), lambda);
        }
        let mut root = BigRat::zero();
        for y in [0, 1] {
            root += self.z(&g.remove_vertices(&[y]), lambda) + &both;
        }
        (far / &z, root / z)
    }
}

pub(crate) fn eval_coeffs(c: &CoefVector, x: &BigRat) -> BigRat {
    let mut acc = BigRat::zero();
    for k in c.coeffs.iter().rev() {
        acc = acc * x + BigRat::from_integer(k.clone().into());
    }
    acc
}

/// Per-view polynomials: for each view class, the number of (configuration,
/// root) pairs of each configuration size that produce it.
#[derive(Clone, Debug)]
pub struct LocalViewCounts {
    pub kind: Kind,
    /// Number of roots (edges for matchings, vertices otherwise).
    pub roots: usize,
    pub z: CoefVector,
    pub counts: BTreeMap<CanonicalForm, (LocalView, Vec<BigUint>)>,
}

#[derive(Clone, Debug)]
pub struct LocalViewDistribution {
    pub kind: Kind,
    pub lambda: BigRat,
    pub probs: BTreeMap<CanonicalForm, BigRat>,
    pub views: BTreeMap<CanonicalForm, LocalView>,
}

#[derive(Serialize)]
pub struct LocalViewDistributionJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    pub lambda: String,
    /// certificate (hex) → probability
    pub probs: BTreeMap<String, String>,
    /// certificate (hex) → readable description
    pub views: BTreeMap<String, String>,
}

impl LocalViewDistribution {
    pub fn total(&self) -> BigRat {
        self.probs.values().sum()
    }

    pub fn get(&self, cert: &CanonicalForm) -> BigRat {
        self.probs.get(cert).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn to_json(&self) -> LocalViewDistributionJson {
        LocalViewDistributionJson {
            kind: self.kind.name().into(),
            q: self.kind.q(),
            lambda: fmt_rat(&self.lambda),
            probs: self.probs.iter().map(|(c, p)| (c.to_hex(), fmt_rat(p))).collect(),
            views: self.views.iter().map(|(c, v)| (c.to_hex(), v.describe())).collect(),
        }
    }
}

impl LocalViewCounts {
    /// Exact distribution at fugacity λ.
    pub fn at(&self, lambda: &BigRat) -> Result<LocalViewDistribution> {
        if lambda < &BigRat::zero() {
            return Err(invalid("lambda must be nonnegative"));
        }
        let norm = eval_coeffs(&self.z, lambda) * BigRat::from_integer(self.roots.into());
        if norm.is_zero() {
            return Err(invalid("partition function vanishes at this lambda"));
        }
        let mut probs = BTreeMap::new();
        let mut views = BTreeMap::new();
        for (cert, (view, cnt)) in &self.counts {
            let c = CoefVector { kind: self.kind, coeffs: cnt.clone() };
            let p = eval_coeffs(&c, lambda) / &norm;
            if !p.is_zero() {
                probs.insert(cert.clone(), p);
                views.insert(cert.clone(), view.clone());
            }
        }
        Ok(LocalViewDistribution { kind: self.kind, lambda: lambda.clone(), probs, views })
    }
}

/// Exact local-view distribution of `g` at fugacity λ.
pub fn local_view_distribution(g: &Graph, kind: Kind, lambda: &BigRat) -> Result<LocalViewDistribution> {
    local_view_counts(g, kind)?.at(lambda)
}

/// Enumerates every configuration of `g` once and records the view at
/// every root, grouped by configuration size (so any λ can be read off).
pub fn local_view_counts(g: &Graph, kind: Kind) -> Result<LocalViewCounts> {
    if g.n() > 64 {
        return Err(invalid("local views support at most 64 vertices"));
    }
    match kind {
        Kind::Match => match_counts(g),
        Kind::Ind => ind_counts(g),
        Kind::Potts(q) => potts_counts(g, q),
    }
}

struct Acc {
    kind: Kind,
    counts: BTreeMap<CanonicalForm, (LocalView, Vec<BigUint>)>,
}

impl Acc {
    fn add(&mut self, view: &LocalView, size: usize) {
        let entry = self
            .counts
            .entry(view.cert.clone())
            .or_insert_with(|| (view.clone(), Vec::new()));
        if entry.1.len() <= size {
            entry.1.resize(size + 1, BigUint::zero());
        }
        entry.1[size] += 1u32;
    }

    fn finish(self, roots: usize, z: CoefVector) -> LocalViewCounts {
        LocalViewCounts { kind: self.kind, roots, z, counts: self.counts }
    }
}

fn match_counts(g: &Graph) -> Result<LocalViewCounts> {
    let z = coeffs(g, Kind::Match)?;
    let total: f64 = z.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).sum();
    check_budget("local views over matchings", total * g.num_edges() as f64)?;
    let edges = g.edges();
    let mut acc = Acc { kind: Kind::Match, counts: BTreeMap::new() };
    let mut cache: HashMap<(usize, usize, usize), LocalView> = HashMap::new();
    let mut mate: Vec<Option<usize>> = vec![None; g.n()];

    fn rec(
        i: usize,
        size: usize,
        edges: &[(usize, usize)],
        mate: &mut Vec<Option<usize>>,
        visit: &mut dyn FnMut(&[Option<usize>], usize),
    ) {
        if i == edges.len() {
            visit(mate, size);
            return;
        }
        rec(i + 1, size, edges, mate, visit);
        let (u, v) = edges[i];
        if mate[u].is_none() && mate[v].is_none() {
            mate[u] = Some(v);
            mate[v] = Some(u);
            rec(i + 1, size + 1, edges, mate, visit);
            mate[u] = None;
            mate[v] = None;
        }
    }

    let mut visit = |mate: &[Option<usize>], size: usize| {
        for &(u, v) in &edges {
            let key = matching_key(g, mate, u, v);
            let view = cache.entry(key).or_insert_with(|| LocalView::matching_abt(key.0, key.1, key.2));
            acc.add(view, size);
        }
    };
    rec(0, 0, &edges, &mut mate, &mut visit);
    Ok(acc.finish(edges.len(), z))
}

fn ind_counts(g: &Graph) -> Result<LocalViewCounts> {
    let z = coeffs(g, Kind::Ind)?;
    let total: f64 = z.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).sum();
    check_budget("local views over independent sets", total * g.n() as f64)?;
    let n = g.n();
    let nb: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let mut acc = Acc { kind: Kind::Ind, counts: BTreeMap::new() };
    let mut cache: HashMap<(usize, u64), LocalView> = HashMap::new();

    fn rec(v: usize, set: u64, blocked: u64, nb: &[u64], visit: &mut dyn FnMut(u64)) {
        if v == nb.len() {
            visit(set);
            return;
        }
        rec(v + 1, set, blocked, nb, visit);
        if blocked >> v & 1 == 0 {
            rec(v + 1, set | 1 << v, blocked | nb[v], nb, visit);
        }
    }

    let mut visit = |set: u64| {
        let size = set.count_ones() as usize;
        for v in 0..n {
            let u = uncovered_mask(g, &nb, set, v);
            let view = cache.entry((v, u)).or_insert_with(|| {
                let members: Vec<usize> = (0..n).filter(|&x| u >> x & 1 == 1).collect();
                LocalView::independent(&g.induced(&members))
            });
            acc.add(view, size);
        }
    };
    rec(0, 0, 0, &nb, &mut visit);
    Ok(acc.finish(n, z))
}

fn potts_counts(g: &Graph, q: u32) -> Result<LocalViewCounts> {
    let n = g.n();
    check_budget("local views over colorings", (q as f64).powi(n as i32) * n as f64)?;
    let z = coeffs(g, Kind::Potts(q))?;
    let edges = g.edges();
    let balls: Vec<_> = (0..n).map(|v| rooted_ball(g, v, 2)).collect();
    let mut acc = Acc { kind: Kind::Potts(q), counts: BTreeMap::new() };
    let mut cache: HashMap<(usize, Vec<u32>), LocalView> = HashMap::new();
    let mut col = vec![0u32; n];
    loop {
        let mono = edges.iter().filter(|&&(u, v)| col[u] == col[v]).count();
        for (v, ball) in balls.iter().enumerate() {
            // boundary colours relabeled by first appearance: patterns equal
            // up to a colour permutation share a view
            let mut relabel: Vec<Option<u32>> = vec![None; q as usize];
            let mut next = 0;
            let mut pattern = Vec::new();
            let mut boundary = Vec::new();
            for (i, &x) in ball.vertices.iter().enumerate() {
                if ball.dist[i] == 2 {
                    let c = *relabel[col[x] as usize].get_or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                    pattern.push(c);
                    boundary.push((i, c));
                }
            }
            let view = cache
                .entry((v, pattern))
                .or_insert_with(|| LocalView::potts(q, &ball.graph, &ball.dist, &boundary));
            acc.add(view, mono);
        }
        let mut i = 0;
        while i < n {
            col[i] += 1;
            if col[i] < q {
                break;
            }
            col[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(acc.finish(n, z))
}

/// (a, b, t) of the view at root edge uv, a ≤ b; `mate` is the matching.
fn matching_key(g: &Graph, mate: &[Option<usize>], u: usize, v: usize) -> (usize, usize, usize) {
    let free = |x: usize| match mate[x] {
        None => true,
        Some(y) => y == u || y == v,
    };
    let (mut a, mut b, mut t) = (0, 0, 0);
    for &x in g.neighbors(u) {
        if x != v && free(x) {
            if g.has_edge(v, x) {
                t += 1;
            } else {
                a += 1;
            }
        }
    }
    for &x in g.neighbors(v) {
        if x != u && free(x) && !g.has_edge(u, x) {
            b += 1;
        }
    }
    (a.min(b), a.max(b), t)
}

/// Neighbours of v with no neighbour in I \ N̄(v), as a bitmask.
fn uncovered_mask(g: &Graph, nb: &[u64], set: u64, v: usize) -> u64 {
    let outside = set & !(nb[v] | 1 << v);
    g.neighbors(v)
        .iter()
        .filter(|&&x| nb[x] & outside == 0)
        .fold(0, |m, &x| m | 1 << x)
}

/// View at root edge uv of the matching `matching` in `g`.
pub fn matching_view_at(g: &Graph, matching: &[(usize, usize)], u: usize, v: usize) -> Result<LocalView> {
    if !g.has_edge(u, v) {
        return Err(invalid("root must be an edge"));
    }
    let mut mate = vec![None; g.n()];
    for &(x, y) in matching {
        if !g.has_edge(x, y) || mate[x].is_some() || mate[y].is_some() {
            return Err(invalid("not a matching of the graph"));
        }
        mate[x] = Some(y);
        mate[y] = Some(x);
    }
    let (a, b, t) = matching_key(g, &mate, u, v);
    Ok(LocalView::matching_abt(a, b, t))
}

/// View at root v of the independent set `set` in `g`.
pub fn independent_view_at(g: &Graph, set: &[usize], v: usize) -> Result<LocalView> {
    if g.n() > 64 || v >= g.n() {
        return Err(invalid("root out of range or graph too large"));
    }
    let nb: Vec<u64> = (0..g.n()).map(|x| g.neighbors(x).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let mask = set.iter().fold(0u64, |m, &x| m | 1 << x);
    if set.iter().any(|&x| nb[x] & mask != 0) {
        return Err(invalid("not an independent set of the graph"));
    }
    let u = uncovered_mask(g, &nb, mask, v);
    let members: Vec<usize> = (0..g.n()).filter(|&x| u >> x & 1 == 1).collect();
    Ok(LocalView::independent(&g.induced(&members)))
}

impl LocalViewCounts {
    /// The per-view size polynomials sum to roots·Z coefficientwise.
    pub fn is_consistent(&self) -> bool {
        let mut sum = vec![BigUint::zero(); self.z.coeffs.len()];
        for (_, c) in self.counts.values() {
            for (k, x) in c.iter().enumerate() {
                if k >= sum.len() {
                    return false;
                }
                sum[k] += x;
            }
        }
        sum.iter().zip(&self.z.coeffs).all(|(s, z)| *s == z * self.roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::graph::*;

    #[test]
    fn kdd_ind_support() {
        for d in 2..=4 {
            let dist = local_view_distribution(&complete_bipartite(d, d), Kind::Ind, &rat(3, 2)).unwrap();
            let empty = LocalView::independent(&Graph::empty(0)).cert;
            let anti = LocalView::independent(&Graph::empty(d)).cert;
            assert!(dist.probs.keys().all(|c| *c == empty || *c == anti));
            assert_eq!(dist.total(), int(1));
        }
    }

    #[test]
    fn kdd_match_support_is_balanced_triangle_free() {
        for d in 2..=4 {
            let dist = local_view_distribution(&complete_bipartite(d, d), Kind::Match, &int(1)).unwrap();
            for v in dist.views.values() {
                let (a, b, t) = v.abt().unwrap();
                assert_eq!((a, t), (b, 0), "view {}", v.describe());
            }
            assert_eq!(dist.total(), int(1));
        }
    }

    #[test]
    fn prism_has_triangle_views() {
        let dist = local_view_distribution(&prism(), Kind::Match, &int(1)).unwrap();
        let tri = dist
            .views
            .iter()
            .filter(|(_, v)| v.abt().unwrap().2 > 0)
            .map(|(c, _)| dist.get(c))
            .sum::<BigRat>();
        assert!(tri > BigRat::zero());
    }

    #[test]
    fn view_probabilities_on_single_edge() {
        // K_2: the view is the bare edge, P(root) = λ/(1+λ)
        let v = LocalView::matching_abt(0, 0, 0);
        assert_eq!(v.root_occupancy(&rat(1, 3)), rat(1, 4));
        // triangle-free balanced view (1,1,0) is a path of 3 edges
        let p = LocalView::matching_abt(1, 1, 0);
        // Z = 1 + 3λ + λ²; at λ=1 root occupancy = 1/5
        assert_eq!(p.root_occupancy(&int(1)), rat(1, 5));
        assert_eq!(p.neighbour_occupancy(&int(1)), rat(4, 5));
    }

    #[test]
    fn occupancy_recovered_from_views() {
        // E[root occupancy] over the view distribution is the occupancy fraction
        for (g, kind) in [(prism(), Kind::Match), (cycle(7), Kind::Match), (prism(), Kind::Ind), (heawood(), Kind::Ind)] {
            let lam = rat(2, 3);
            let dist = local_view_distribution(&g, kind, &lam).unwrap();
            let via_views: BigRat = dist.views.iter().map(|(c, v)| dist.get(c) * v.root_occupancy(&lam)).sum();
            let c = coeffs(&g, kind).unwrap();
            let size = crate::observables::GraphSize::of(&g);
            assert_eq!(via_views, crate::observables::occupancy_fraction(&c, size, &lam).unwrap());
        }
    }

    #[test]
    fn potts_views_sum_to_one_and_quotient_colours() {
        let counts = local_view_counts(&complete_bipartite(3, 3), Kind::Potts(3)).unwrap();
        let dist = counts.at(&int(1)).unwrap();
        assert_eq!(dist.total(), int(1));
        // boundary of K33 from v is the two other vertices on v's side:
        // monochromatic or not, so exactly two views
        assert_eq!(dist.probs.len(), 2);
        assert!(counts.is_consistent());
    }
}
