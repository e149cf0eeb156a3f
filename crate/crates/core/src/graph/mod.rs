//! Simple undirected graphs, rooted balls, and the graph utilities the rest
//! of the crate is built on.

mod canon;
mod enumerate;
mod io;
mod named;

pub use canon::{canon, canon_colored, canonical_labeling, CanonicalForm};
pub use enumerate::{enumerate_regular, enumeration_limit, EnumerationConfig};
pub use io::{from_graph6, from_json, to_graph6, to_json, GraphJson};
pub use named::{
    complete, complete_bipartite, cycle, generalized_petersen, heawood, make_named, parse_named,
    prism, Named,
};

use std::collections::VecDeque;

use crate::error::{invalid, Result};

/// Finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(invalid(format!("loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(invalid(format!("repeated edge ({u},{v})")));
            }
            g.add_edge_unchecked(u, v);
        }
        Ok(g)
    }

    /// As [`Graph::new`], additionally requiring every degree to be at most `d_max`.
    pub fn with_max_degree(n: usize, edges: &[(usize, usize)], d_max: usize) -> Result<Self> {
        let g = Self::new(n, edges)?;
        if let Some(v) = (0..n).find(|&v| g.degree(v) > d_max) {
            return Err(invalid(format!("vertex {v} has degree {} > {d_max}", g.degree(v))));
        }
        Ok(g)
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        let pu = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pu, v);
        let pv = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pv, u);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Subgraph induced on `keep` (in the given order); vertex `i` of the
    /// result is `keep[i]`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.add_edge_unchecked(i, j);
                }
            }
        }
        g
    }

    /// Graph with the listed vertices removed (remaining vertices keep their order).
    pub fn remove_vertices(&self, gone: &[usize]) -> Graph {
        let mut drop = vec![false; self.n()];
        for &v in gone {
            drop[v] = true;
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&v| !drop[v]).collect();
        self.induced(&keep)
    }

    pub fn remove_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.adj[u].retain(|&x| x != v);
        g.adj[v].retain(|&x| x != u);
        g
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge_unchecked(perm[u], perm[v]);
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = self.clone();
        g.adj.extend(other.adj.iter().map(|a| a.iter().map(|&w| w + off).collect()));
        g
    }

    pub fn disjoint_copies(&self, k: usize) -> Graph {
        let mut g = Graph::empty(0);
        for _ in 0..k {
            g = g.disjoint_union(self);
        }
        g
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// BFS distances from `s` (`usize::MAX` when unreachable).
    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: usize) -> usize {
        self.distances_from(v)
            .into_iter()
            .filter(|&d| d != usize::MAX)
            .max()
            .unwrap_or(0)
    }

    /// Length of a shortest cycle, `None` for forests. BFS from every vertex.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best = usize::MAX;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                if 2 * dist[v] + 1 >= best {
                    break;
                }
                for &w in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        q.push_back(w);
                    } else if parent[v] != w {
                        best = best.min(dist[v] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n()];
        for s in 0..self.n() {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &self.adj[v] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[v];
                        q.push_back(w);
                    } else if side[w] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of triangles through the edge `uv`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        self.adj[u].iter().copied().filter(|&w| self.has_edge(v, w)).collect()
    }
}

/// Depth-`r` ball around a vertex. Vertex 0 of `graph` is the centre and
/// `vertices[i]` is the original label of ball vertex `i`.
#[derive(Clone, Debug)]
pub struct RootedBall {
    pub center: usize,
    pub radius: usize,
    pub graph: Graph,
    pub dist: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl RootedBall {
    pub fn canon(&self) -> CanonicalForm {
        canon(&self.graph, Some(0))
    }
}

/// Induced subgraph on the vertices within distance `r` of `v`, listed in
/// BFS order (so the centre is vertex 0).
pub fn rooted_ball(g: &Graph, v: usize, r: usize) -> RootedBall {
    let mut dist = vec![usize::MAX; g.n()];
    dist[v] = 0;
    let mut order = vec![v];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        if dist[x] == r {
            continue;
        }
        for &w in g.neighbors(x) {
            if dist[w] == usize::MAX {
                dist[w] = dist[x] + 1;
                order.push(w);
            }
        }
    }
    RootedBall {
        center: v,
        radius: r,
        graph: g.induced(&order),
        dist: order.iter().map(|&x| dist[x]).collect(),
        vertices: order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, &[(0, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 3)]).is_err());
        assert!(Graph::with_max_degree(4, &[(0, 1), (0, 2), (0, 3)], 2).is_err());
    }

    #[test]
    fn girth_and_bipartite() {
        assert_eq!(cycle(8).girth(), Some(8));
        assert_eq!(complete_bipartite(3, 3).girth(), Some(4));
        assert_eq!(prism().girth(), Some(3));
        assert_eq!(heawood().girth(), Some(6));
        assert_eq!(Graph::new(3, &[(0, 1), (1, 2)]).unwrap().girth(), None);
        assert!(complete_bipartite(3, 3).is_bipartite());
        assert!(!prism().is_bipartite());
    }

    #[test]
    fn ball_of_cycle_is_path() {
        let b = rooted_ball(&cycle(8), 3, 2);
        assert_eq!(b.graph.n(), 5);
        assert_eq!(b.graph.num_edges(), 4);
        assert_eq!(b.dist, vec![0, 1, 1, 2, 2]);
        let path = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(b.canon(), canon(&path, Some(2)));
    }

    #[test]
    fn ball_radius_zero_and_diameter() {
        let g = complete_bipartite(3, 3);
        let b0 = rooted_ball(&g, 4, 0);
        assert_eq!(b0.graph.n(), 1);
        let b2 = rooted_ball(&g, 4, 2);
        assert_eq!(b2.graph.n(), 6);
        assert_eq!(b2.graph.num_edges(), 9);
        assert_eq!(b2.canon(), canon(&g, Some(0)));
    }
}
