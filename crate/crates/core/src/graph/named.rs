//! Constructors for the named graphs used throughout: K_{d,d}, H_{d,n},
//! CL_{d,n}, the Heawood graph and HW_n, cycles and the triangular prism.

use super::Graph;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    /// Complete bipartite K_{d,d}.
    Kdd(usize),
    /// n/2d disjoint copies of K_{d,d}.
    Hdn(usize, usize),
    /// n/(d+1) disjoint cliques K_{d+1}.
    CLdn(usize, usize),
    Heawood,
    /// n/14 disjoint Heawood graphs.
    HWn(usize),
    Cycle(usize),
    Prism,
    Complete(usize),
    /// Generalized Petersen graph GP(n, k).
    GenPetersen(usize, usize),
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge_unchecked(u, v);
        }
    }
    g
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::empty(a + b);
    for u in 0..a {
        for v in 0..b {
            g.add_edge_unchecked(u, a + v);
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut g = Graph::empty(n);
    for i in 0..n {
        g.add_edge_unchecked(i, (i + 1) % n);
    }
    g
}

/// Triangular prism K_3 □ K_2.
pub fn prism() -> Graph {
    Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
}

/// Heawood graph: the 14-cycle with chords i ~ i+5 from even vertices
/// (LCF notation [5,-5]^7).
pub fn heawood() -> Graph {
    let mut g = cycle(14);
    for i in (0..14).step_by(2) {
        g.add_edge_unchecked(i, (i + 5) % 14);
    }
    g
}

pub fn generalized_petersen(n: usize, k: usize) -> Graph {
    let mut g = Graph::empty(2 * n);
    for i in 0..n {
        g.add_edge_unchecked(i, (i + 1) % n);
        g.add_edge_unchecked(i, n + i);
        let (a, b) = (n + i, n + (i + k) % n);
        if !g.has_edge(a, b) {
            g.add_edge_unchecked(a, b);
        }
    }
    g
}

pub fn make_named(name: &Named) -> Result<Graph> {
    Ok(match *name {
        Named::Kdd(d) => {
            if d == 0 {
                return Err(invalid("K_dd needs d >= 1"));
            }
            complete_bipartite(d, d)
        }
        Named::Hdn(d, n) => {
            if d == 0 || n % (2 * d) != 0 {
                return Err(invalid(format!("H_{{d,n}} needs 2d | n (d={d}, n={n})")));
            }
            complete_bipartite(d, d).disjoint_copies(n / (2 * d))
        }
        Named::CLdn(d, n) => {
            if n % (d + 1) != 0 {
                return Err(invalid(format!("CL_{{d,n}} needs (d+1) | n (d={d}, n={n})")));
            }
            complete(d + 1).disjoint_copies(n / (d + 1))
        }
        Named::Heawood => heawood(),
        Named::HWn(n) => {
            if n % 14 != 0 {
                return Err(invalid(format!("HW_n needs 14 | n (n={n})")));
            }
            heawood().disjoint_copies(n / 14)
        }
        Named::Cycle(n) => {
            if n < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            cycle(n)
        }
        Named::Prism => prism(),
        Named::Complete(n) => complete(n),
        Named::GenPetersen(n, k) => {
            if n < 3 || k == 0 || 2 * k >= n {
                return Err(invalid(format!("GP({n},{k}) needs n >= 3 and 0 < k < n/2")));
            }
            generalized_petersen(n, k)
        }
    })
}

fn nums(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad number in {s:?}"))))
        .collect()
}

/// Parses names such as `K33`, `Kdd3`, `K4`, `C8`, `Prism`, `Heawood`,
/// `H3,12`, `CL3,8`, `HW28`, `GP7,2`, and `+`-joined disjoint unions like
/// `C4+C4`.
pub fn parse_named(s: &str) -> Result<Graph> {
    let parts: Vec<&str> = s.split('+').map(str::trim).collect();
    if parts.len() > 1 {
        let mut g = Graph::empty(0);
        for p in parts {
            g = g.disjoint_union(&parse_named(p)?);
        }
        return Ok(g);
    }
    let lower = s.trim().to_ascii_lowercase();
    let bad = || Error::Parse(format!("unknown graph name {s:?}"));
    let name = if lower == "prism" {
        Named::Prism
    } else if lower == "heawood" || lower == "hw" {
        Named::Heawood
    } else if let Some(r) = lower.strip_prefix("kdd") {
        Named::Kdd(r.parse().map_err(|_| bad())?)
    } else if let Some(r) = lower.strip_prefix("hw") {
        Named::HWn(r.parse().map_err(|_| bad())?)
    } else if let Some(r) = lower.strip_prefix("cl") {
        let v = nums(r)?;
        if v.len() != 2 {
            return Err(bad());
        }
        Named::CLdn(v[0], v[1])
    } else if let Some(r) = lower.strip_prefix("gp") {
        let v = nums(r)?;
        if v.len() != 2 {
            return Err(bad());
        }
        Named::GenPetersen(v[0], v[1])
    } else if let Some(r) = lower.strip_prefix('h') {
        let v = nums(r)?;
        if v.len() != 2 {
            return Err(bad());
        }
        Named::Hdn(v[0], v[1])
    } else if let Some(r) = lower.strip_prefix('c') {
        Named::Cycle(r.parse().map_err(|_| bad())?)
    } else if let Some(r) = lower.strip_prefix('k') {
        // K33 / K44 is K_{d,d}; K4 is the complete graph.
        let b = r.as_bytes();
        if b.len() == 2 && b[0] == b[1] && b[0].is_ascii_digit() {
            Named::Kdd((b[0] - b'0') as usize)
        } else {
            Named::Complete(r.parse().map_err(|_| bad())?)
        }
    } else {
        return Err(bad());
    };
    make_named(&name)
}
