//! Canonical labeling by colour refinement plus individualization search.
//!
//! Every leaf of the search tree is a discrete ordered partition, i.e. a
//! relabeling; the certificate is the lexicographically largest encoding
//! over all leaves. Automorphisms found along the way (leaves with equal
//! encodings) prune children that lie in an orbit already explored.

use std::fmt;

use super::Graph;

/// Byte string identifying a vertex-coloured graph up to colour-preserving
/// isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Canon({})", self.to_hex())
    }
}

/// Certificate of `g`, optionally rooted: with a root, isomorphisms must
/// map root to root.
pub fn canon(g: &Graph, root: Option<usize>) -> CanonicalForm {
    let colors: Vec<u32> = (0..g.n()).map(|v| u32::from(Some(v) != root)).collect();
    canon_colored(g, &colors)
}

pub fn canon_colored(g: &Graph, colors: &[u32]) -> CanonicalForm {
    canonical_labeling(g, colors).1
}

/// Returns `(perm, certificate)` where `perm[v]` is the canonical position
/// of vertex `v`.
pub fn canonical_labeling(g: &Graph, colors: &[u32]) -> (Vec<usize>, CanonicalForm) {
    assert_eq!(colors.len(), g.n());
    let n = g.n();
    if n == 0 {
        return (Vec::new(), CanonicalForm(vec![0, 0, 0, 0]));
    }
    let mut search = Search {
        g,
        colors,
        best: None,
        autos: Vec::new(),
    };
    let init = rank_by(colors.to_vec());
    let cells = refine(g, init);
    search.descend(cells, &mut Vec::new());
    let (perm, cert) = search.best.unwrap();
    (perm, CanonicalForm(cert))
}

type Cells = Vec<u32>;

struct Search<'a> {
    g: &'a Graph,
    colors: &'a [u32],
    best: Option<(Vec<usize>, Vec<u8>)>,
    autos: Vec<Vec<usize>>,
}

const MAX_AUTOS: usize = 128;

impl Search<'_> {
    fn descend(&mut self, cells: Cells, path: &mut Vec<usize>) {
        let n = self.g.n();
        let k = cells.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        if k == n {
            self.leaf(&cells);
            return;
        }
        // target: first smallest non-singleton cell
        let mut sizes = vec![0usize; k];
        for &c in &cells {
            sizes[c as usize] += 1;
        }
        let target = (0..k)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .unwrap() as u32;
        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &members {
            if !explored.is_empty() && self.same_orbit(path, &explored, w) {
                continue;
            }
            explored.push(w);
            let ind = individualize(&cells, w);
            path.push(w);
            self.descend(refine(self.g, ind), path);
            path.pop();
        }
    }

    /// Is `w` in the orbit of an explored vertex under the automorphisms
    /// found so far that fix `path` pointwise?
    fn same_orbit(&self, path: &[usize], explored: &[usize], w: usize) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for a in &self.autos {
            if path.iter().all(|&v| a[v] == v) {
                any = true;
                for v in 0..n {
                    let (x, y) = (find(&mut parent, v), find(&mut parent, a[v]));
                    if x != y {
                        parent[x] = y;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rw = find(&mut parent, w);
        explored.iter().any(|&e| find(&mut parent, e) == rw)
    }

    fn leaf(&mut self, cells: &Cells) {
        let perm: Vec<usize> = cells.iter().map(|&c| c as usize).collect();
        let cert = encode(self.g, self.colors, &perm);
        match &self.best {
            None => self.best = Some((perm, cert)),
            Some((bp, bc)) => match cert.cmp(bc) {
                std::cmp::Ordering::Greater => self.best = Some((perm, cert)),
                std::cmp::Ordering::Equal => {
                    if self.autos.len() < MAX_AUTOS {
                        // v -> position perm[v] -> vertex at that position in best
                        let mut inv = vec![0; perm.len()];
                        for (v, &p) in bp.iter().enumerate() {
                            inv[p] = v;
                        }
                        self.autos.push(perm.iter().map(|&p| inv[p]).collect());
                    }
                }
                std::cmp::Ordering::Less => {}
            },
        }
    }
}

fn encode(g: &Graph, colors: &[u32], perm: &[usize]) -> Vec<u8> {
    let n = g.n();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut out = Vec::with_capacity(4 + 4 * n + n * n / 16 + 1);
    out.extend_from_slice(&(n as u32).to_be_bytes());
    for &v in &inv {
        out.extend_from_slice(&colors[v].to_be_bytes());
    }
    let mut byte = 0u8;
    let mut nbits = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            byte = (byte << 1) | u8::from(g.has_edge(inv[i], inv[j]));
            nbits += 1;
            if nbits == 8 {
                out.push(byte);
                byte = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(byte << (8 - nbits));
    }
    out
}

fn rank_by<K: Ord + Clone>(sigs: Vec<K>) -> Cells {
    let mut sorted = sigs.clone();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).unwrap() as u32)
        .collect()
}

fn individualize(cells: &Cells, w: usize) -> Cells {
    rank_by(
        cells
            .iter()
            .enumerate()
            .map(|(v, &c)| (c, u8::from(v != w)))
            .collect(),
    )
}

/// Equitable refinement: split cells by the multiset of neighbour cells
/// until stable.
fn refine(g: &Graph, mut cells: Cells) -> Cells {
    let mut k = cells.iter().map(|&c| c + 1).max().unwrap_or(0);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..g.n())
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).iter().map(|&w| cells[w]).collect();
                nb.sort_unstable();
                (cells[v], nb)
            })
            .collect();
        let next = rank_by(sigs);
        let nk = next.iter().map(|&c| c + 1).max().unwrap_or(0);
        cells = next;
        if nk == k {
            return cells;
        }
        k = nk;
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn shuffled(g: &Graph, seed: u64) -> Graph {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (s >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        g.relabel(&perm)
    }

    #[test]
    fn relabel_invariance() {
        for g in [prism(), complete_bipartite(3, 3), heawood(), cycle(9), generalized_petersen(7, 2)] {
            let c = canon(&g, None);
            for seed in 0..100 {
                assert_eq!(canon(&shuffled(&g, seed), None), c);
            }
        }
    }

    #[test]
    fn distinguishes_prism_and_k33() {
        assert_ne!(canon(&prism(), None), canon(&complete_bipartite(3, 3), None));
    }

    #[test]
    fn vertex_transitive_roots() {
        let c4 = cycle(4);
        let c = canon(&c4, Some(0));
        for v in 1..4 {
            assert_eq!(canon(&c4, Some(v)), c);
        }
        assert_ne!(c, canon(&c4, None));
    }

    #[test]
    fn rooted_path_distinguishes_root() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_ne!(canon(&p3, Some(0)), canon(&p3, Some(1)));
        assert_eq!(canon(&p3, Some(0)), canon(&p3, Some(2)));
    }

    #[test]
    fn labeling_maps_to_certificate() {
        let g = shuffled(&heawood(), 7);
        let (perm, c) = canonical_labeling(&g, &[0; 14]);
        let h = g.relabel(&perm);
        let (perm2, c2) = canonical_labeling(&h, &[0; 14]);
        assert_eq!(c, c2);
        assert_eq!(h.relabel(&perm2), h);
    }
}
