//! Exact coefficient vectors of the matching polynomial, the independence
//! polynomial and the Potts partition function.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, invalid, Error, Result};
use crate::exact::RatPoly;
use crate::graph::{canon, complete_bipartite, CanonicalForm, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Match,
    Ind,
    /// q-colorings weighted by λ per monochromatic edge.
    Potts(u32),
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Match => "match",
            Kind::Ind => "ind",
            Kind::Potts(_) => "potts",
        }
    }

    pub fn q(&self) -> Option<u32> {
        match *self {
            Kind::Potts(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Potts(q) => write!(f, "potts({q})"),
            k => f.write_str(k.name()),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    /// Accepts `match`, `ind`, `potts:Q`, `potts(Q)` and `pottsQ`.
    fn from_str(s: &str) -> Result<Kind> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "match" | "matching" => return Ok(Kind::Match),
            "ind" | "independent" => return Ok(Kind::Ind),
            _ => {}
        }
        let q = t
            .strip_prefix("potts")
            .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
            .ok_or_else(|| Error::Parse(format!("unknown kind {s:?}")))?;
        let q: u32 = q.parse().map_err(|_| Error::Parse(format!("potts kind needs q, got {s:?}")))?;
        if q < 2 {
            return Err(invalid("potts needs q >= 2"));
        }
        Ok(Kind::Potts(q))
    }
}

/// Coefficients c_0, c_1, ... of a partition function Σ c_k λ^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CoefJson", try_from = "CoefJson")]
pub struct CoefVector {
    pub kind: Kind,
    pub coeffs: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct CoefJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    coeffs: Vec<String>,
}

impl From<CoefVector> for CoefJson {
    fn from(c: CoefVector) -> Self {
        CoefJson {
            kind: c.kind.name().to_string(),
            q: c.kind.q(),
            coeffs: c.coeffs.iter().map(|x| x.to_string()).collect(),
        }
    }
}

impl TryFrom<CoefJson> for CoefVector {
    type Error = Error;

    fn try_from(j: CoefJson) -> Result<Self> {
        let kind = match (j.kind.as_str(), j.q) {
            ("potts", Some(q)) if q >= 2 => Kind::Potts(q),
            ("potts", _) => return Err(Error::Parse("potts vector needs q >= 2".into())),
            (k, _) => k.parse()?,
        };
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.trim().parse::<BigUint>().map_err(|_| Error::Parse(format!("bad coefficient {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoefVector::new(kind, coeffs))
    }
}

impl CoefVector {
    /// Trailing zeros are dropped (but at least one entry is kept).
    pub fn new(kind: Kind, mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigUint::zero());
        }
        CoefVector { kind, coeffs }
    }

    pub fn from_u64(kind: Kind, cs: &[u64]) -> Self {
        CoefVector::new(kind, cs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Coefficient of λ^k (zero beyond the stored range).
    pub fn get(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Index of the last nonzero coefficient.
    pub fn top(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn to_ratpoly(&self) -> RatPoly {
        RatPoly::from_biguints(&self.coeffs)
    }

    /// Unit of the convolution product.
    pub fn one(kind: Kind) -> Self {
        CoefVector { kind, coeffs: vec![BigUint::one()] }
    }
}

/// Coefficient convolution, the partition function of a disjoint union.
pub fn disjoint_union_coeffs(a: &CoefVector, b: &CoefVector) -> Result<CoefVector> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch(a.kind.to_string(), b.kind.to_string()));
    }
    Ok(CoefVector::new(a.kind, convolve(&a.coeffs, &b.coeffs)))
}

pub(crate) fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `base` convolved with itself `k` times, by repeated squaring.
pub fn coeff_power(base: &CoefVector, k: usize) -> CoefVector {
    let mut acc = CoefVector::one(base.kind);
    let mut sq = base.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = CoefVector::new(base.kind, convolve(&acc.coeffs, &sq.coeffs));
        }
        e >>= 1;
        if e > 0 {
            sq = CoefVector::new(base.kind, convolve(&sq.coeffs, &sq.coeffs));
        }
    }
    acc
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Matching coefficients of K_{d,d}: m_k = C(d,k)² k!.
pub fn kdd_match_coeffs(d: usize) -> CoefVector {
    let mut fact = BigUint::one();
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..=d as u64 {
        if k > 0 {
            fact *= k;
        }
        let c = binom(d as u64, k);
        out.push(&c * &c * &fact);
    }
    CoefVector::new(Kind::Match, out)
}

/// Independent-set coefficients of K_{d,d}: i_0 = 1, i_k = 2 C(d,k).
pub fn kdd_ind_coeffs(d: usize) -> CoefVector {
    let out = (0..=d as u64)
        .map(|k| if k == 0 { BigUint::one() } else { binom(d as u64, k) * 2u32 })
        .collect();
    CoefVector::new(Kind::Ind, out)
}

/// Coefficients of H_{d,n} = (n/2d)·K_{d,d}.
pub fn hdn_coeffs(kind: Kind, d: usize, n: usize) -> Result<CoefVector> {
    if d == 0 || !n.is_multiple_of(2 * d) {
        return Err(invalid(format!("H_{{d,n}} needs 2d | n (d={d}, n={n})")));
    }
    let base = match kind {
        Kind::Match => kdd_match_coeffs(d),
        Kind::Ind => kdd_ind_coeffs(d),
        Kind::Potts(_) => potts_coeffs(&complete_bipartite(d, d), kind.q().unwrap())?,
    };
    Ok(coeff_power(&base, n / (2 * d)))
}

type Memo = HashMap<CanonicalForm, Vec<BigUint>>;

struct Engine {
    memo: Memo,
    nodes: u64,
    budget: u64,
    what: &'static str,
}

impl Engine {
    fn new(what: &'static str) -> Self {
        Engine { memo: HashMap::new(), nodes: 0, budget: crate::error::work_budget(), what }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Capacity(format!(
                "{} recursion exceeded {} nodes (set PARTFN_CAPACITY)",
                self.what, self.budget
            )));
        }
        Ok(())
    }

    /// Splits into components, solves each (memoized by canonical form) and
    /// convolves.
    fn solve(&mut self, g: &Graph, connected: fn(&mut Engine, &Graph) -> Result<Vec<BigUint>>) -> Result<Vec<BigUint>> {
        let mut acc = vec![BigUint::one()];
        for comp in g.components() {
            let h = g.induced(&comp);
            let part = if h.num_edges() == 0 {
                // isolated vertex: 1 for matchings, 1 + λ for independent sets
                connected(self, &h)?
            } else {
                let key = canon(&h, None);
                if let Some(v) = self.memo.get(&key) {
                    v.clone()
                } else {
                    self.tick()?;
                    let v = connected(self, &h)?;
                    self.memo.insert(key, v.clone());
                    v
                }
            };
            acc = convolve(&acc, &part);
        }
        Ok(acc)
    }
}

/// Matching polynomial of a connected graph by expanding the deletion
/// recursion m(G) = m(G−e) + λ m(G−u−v) over all edges at a vertex of
/// minimum positive degree: m(G) = m(G−v) + λ Σ_{w~v} m(G−v−w).
fn match_connected(e: &mut Engine, g: &Graph) -> Result<Vec<BigUint>> {
    if g.num_edges() == 0 {
        return Ok(vec![BigUint::one()]);
    }
    let v = (0..g.n()).filter(|&v| g.degree(v) > 0).min_by_key(|&v| g.degree(v)).unwrap();
    let mut out = e.solve(&g.remove_vertices(&[v]), match_connected)?;
    for &w in g.neighbors(v) {
        let sub = e.solve(&g.remove_vertices(&[v, w]), match_connected)?;
        add_shifted(&mut out, &sub);
    }
    Ok(out)
}

/// i(G) = i(G−v) + λ i(G−N[v]) at a vertex of maximum degree.
fn ind_connected(e: &mut Engine, g: &Graph) -> Result<Vec<BigUint>> {
    if g.num_edges() == 0 {
        // n isolated vertices: (1+λ)^n
        let n = g.n() as u64;
        return Ok((0..=n).map(|k| binom(n, k)).collect());
    }
    let v = (0..g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
    let mut out = e.solve(&g.remove_vertices(&[v]), ind_connected)?;
    let mut closed = g.neighbors(v).to_vec();
    closed.push(v);
    let sub = e.solve(&g.remove_vertices(&closed), ind_connected)?;
    add_shifted(&mut out, &sub);
    Ok(out)
}

/// out += λ·sub
fn add_shifted(out: &mut Vec<BigUint>, sub: &[BigUint]) {
    if out.len() < sub.len() + 1 {
        out.resize(sub.len() + 1, BigUint::zero());
    }
    for (k, c) in sub.iter().enumerate() {
        out[k + 1] += c;
    }
}

pub fn match_coeffs(g: &Graph) -> Result<CoefVector> {
    let mut e = Engine::new("matching");
    Ok(CoefVector::new(Kind::Match, e.solve(g, match_connected)?))
}

pub fn ind_coeffs(g: &Graph) -> Result<CoefVector> {
    let mut e = Engine::new("independent-set");
    Ok(CoefVector::new(Kind::Ind, e.solve(g, ind_connected)?))
}

/// Number of perfect matchings, the top coefficient m_{n/2}. For odd n
/// the count is 0 and `n_even` is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatchings {
    pub count: BigUint,
    pub n_even: bool,
}

pub fn perfect_matching_count(g: &Graph) -> Result<PerfectMatchings> {
    if g.n() % 2 == 1 {
        return Ok(PerfectMatchings { count: BigUint::zero(), n_even: false });
    }
    let m = match_coeffs(g)?;
    Ok(PerfectMatchings { count: m.get(g.n() / 2), n_even: true })
}

/// Potts coefficients: c_k counts q-colorings with exactly k monochromatic
/// edges. Uses the random-cluster expansion Σ_{A⊆E} (λ−1)^{|A|} q^{c(A)}
/// per component; falls back to coloring enumeration when only that fits
/// the work budget.
pub fn potts_coeffs(g: &Graph, q: u32) -> Result<CoefVector> {
    if q < 2 {
        return Err(invalid("potts needs q >= 2"));
    }
    let kind = Kind::Potts(q);
    let mut acc = vec![BigUint::one()];
    for comp in g.components() {
        let h = g.induced(&comp);
        let m = h.num_edges();
        let by_subsets = 2f64.powi(m as i32);
        let by_colorings = (q as f64).powi(h.n() as i32) * (m.max(1) as f64);
        let part = if check_budget("random-cluster expansion", by_subsets).is_ok() {
            random_cluster(&h, q)
        } else {
            check_budget("coloring enumeration", by_colorings)
                .map_err(|_| Error::Capacity(format!(
                    "potts: component with {} vertices and {m} edges exceeds both the 2^|E| and q^n budgets (set PARTFN_CAPACITY)",
                    h.n()
                )))?;
            potts_coeffs_by_colorings(&h, q)?.coeffs
        };
        acc = convolve(&acc, &part);
    }
    Ok(CoefVector::new(kind, acc))
}

/// Counts N[a][c] = #{A ⊆ E : |A| = a, c(A) = c} by recursion over edges
/// with an undoable union-find, then expands Σ N q^c (λ−1)^a.
fn random_cluster(g: &Graph, q: u32) -> Vec<BigUint> {
    let n = g.n();
    let edges = g.edges();
    let m = edges.len();
    let mut table = vec![vec![0u64; n + 1]; m + 1];
    let mut uf = UndoUf::new(n);
    fn rec(i: usize, a: usize, edges: &[(usize, usize)], uf: &mut UndoUf, table: &mut [Vec<u64>]) {
        if i == edges.len() {
            table[a][uf.count] += 1;
            return;
        }
        rec(i + 1, a, edges, uf, table);
        let (u, v) = edges[i];
        let merged = uf.union(u, v);
        rec(i + 1, a + 1, edges, uf, table);
        if merged {
            uf.undo();
        }
    }
    rec(0, 0, &edges, &mut uf, &mut table);

    let qb = BigInt::from(q);
    let mut qpow = vec![BigInt::one()];
    for _ in 0..n {
        let last = qpow.last().unwrap().clone();
        qpow.push(last * &qb);
    }
    let mut out = vec![BigInt::zero(); m + 1];
    for (a, row) in table.iter().enumerate() {
        // Σ_c N[a][c] q^c
        let w: BigInt = row.iter().enumerate().map(|(c, &cnt)| BigInt::from(cnt) * &qpow[c]).sum();
        if w.is_zero() {
            continue;
        }
        // (λ−1)^a = Σ_j C(a,j) λ^j (−1)^{a−j}
        for (j, slot) in out.iter_mut().enumerate().take(a + 1) {
            let term = BigInt::from(binom(a as u64, j as u64)) * &w;
            if (a - j) % 2 == 0 {
                *slot += term;
            } else {
                *slot -= term;
            }
        }
    }
    out.into_iter()
        .map(|c| {
            assert!(!c.is_negative(), "random-cluster expansion produced a negative coefficient");
            c.to_biguint().unwrap()
        })
        .collect()
}

struct UndoUf {
    parent: Vec<usize>,
    size: Vec<usize>,
    count: usize,
    log: Vec<(usize, usize)>,
}

impl UndoUf {
    fn new(n: usize) -> Self {
        UndoUf { parent: (0..n).collect(), size: vec![1; n], count: n, log: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.count -= 1;
        self.log.push((a, b));
        true
    }

    fn undo(&mut self) {
        let (a, b) = self.log.pop().unwrap();
        self.parent[b] = b;
        self.size[a] -= self.size[b];
        self.count += 1;
    }
}

/// Direct enumeration of all q^n colorings. Kept as an independent check
/// on [`potts_coeffs`].
pub fn potts_coeffs_by_colorings(g: &Graph, q: u32) -> Result<CoefVector> {
    if q < 2 {
        return Err(invalid("potts needs q >= 2"));
    }
    let n = g.n();
    check_budget("coloring enumeration", (q as f64).powi(n as i32))?;
    let edges = g.edges();
    let mut counts = vec![0u64; edges.len() + 1];
    let mut col = vec![0u32; n];
    loop {
        let mono = edges.iter().filter(|&&(u, v)| col[u] == col[v]).count();
        counts[mono] += 1;
        // odometer increment
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
    Ok(CoefVector::new(Kind::Potts(q), counts.into_iter().map(BigUint::from).collect()))
}

/// Dispatch on `kind`.
pub fn coeffs(g: &Graph, kind: Kind) -> Result<CoefVector> {
    match kind {
        Kind::Match => match_coeffs(g),
        Kind::Ind => ind_coeffs(g),
        Kind::Potts(q) => potts_coeffs(g, q),
    }
}
