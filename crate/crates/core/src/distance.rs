//! Neighbourhood profiles and the sampling distance
//! δ◦(G, H) = Σ_{r≥1} 2^{−r} TV(ρ_r(G), ρ_r(H)).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exact::{fmt_rat, int, BigRat};
use crate::graph::{canon, complete_bipartite, rooted_ball, CanonicalForm, Graph};

/// Distribution of the rooted depth-r ball around a uniform vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodProfile {
    pub radius: usize,
    pub dist: BTreeMap<CanonicalForm, BigRat>,
}

impl NeighborhoodProfile {
    pub fn total(&self) -> BigRat {
        self.dist.values().sum()
    }
}

pub fn profile(g: &Graph, r: usize) -> NeighborhoodProfile {
    let n = g.n();
    let certs: Vec<CanonicalForm> = (0..n).into_par_iter().map(|v| rooted_ball(g, v, r).canon()).collect();
    let mut counts: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    for c in certs {
        *counts.entry(c).or_default() += 1;
    }
    let dist = counts
        .into_iter()
        .map(|(c, k)| (c, BigRat::new((k as i64).into(), (n as i64).into())))
        .collect();
    NeighborhoodProfile { radius: r, dist }
}

/// Total variation distance ½ Σ |p − q|.
pub fn total_variation(p: &NeighborhoodProfile, q: &NeighborhoodProfile) -> BigRat {
    let mut s = BigRat::zero();
    for (c, x) in &p.dist {
        s += (x - q.dist.get(c).cloned().unwrap_or_else(BigRat::zero)).abs();
    }
    for (c, y) in &q.dist {
        if !p.dist.contains_key(c) {
            s += y;
        }
    }
    s / int(2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingDistance {
    /// Σ_{r ≤ r_max} 2^{−r} TV_r.
    pub lower: BigRat,
    /// lower + 2^{−r_max}.
    pub upper: BigRat,
    /// TV_1, ..., TV_{r_max}.
    pub per_radius_tv: Vec<BigRat>,
}

#[derive(Serialize)]
pub struct SamplingDistanceJson {
    pub lower: String,
    pub upper: String,
    pub per_radius_tv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl SamplingDistance {
    pub fn to_json(&self, exact: Option<&BigRat>) -> SamplingDistanceJson {
        SamplingDistanceJson {
            lower: fmt_rat(&self.lower),
            upper: fmt_rat(&self.upper),
            per_radius_tv: self.per_radius_tv.iter().map(fmt_rat).collect(),
            exact: exact.map(fmt_rat),
        }
    }
}

pub const DEFAULT_R_MAX: usize = 6;

fn half_pow(r: usize) -> BigRat {
    BigRat::new(BigInt::one(), BigInt::one() << r)
}

/// Truncated sum with the certified interval [lower, lower + 2^{−r_max}].
pub fn sampling_distance(g: &Graph, h: &Graph, r_max: usize) -> Result<SamplingDistance> {
    if r_max == 0 {
        return Err(invalid("r_max must be at least 1"));
    }
    let tvs: Vec<BigRat> = (1..=r_max).map(|r| total_variation(&profile(g, r), &profile(h, r))).collect();
    let lower: BigRat = tvs.iter().enumerate().map(|(i, tv)| tv * half_pow(i + 1)).sum();
    let upper = &lower + half_pow(r_max);
    Ok(SamplingDistance { lower, upper, per_radius_tv: tvs })
}

fn max_eccentricity(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.eccentricity(v)).max().unwrap_or(0)
}

/// The infinite sum, exactly. Once r reaches every component's
/// eccentricity each ball is its whole component, so the profiles and TV_r
/// are constant from R = max eccentricity on and the tail is TV_R 2^{−R}.
pub fn exact_sampling_distance(g: &Graph, h: &Graph) -> BigRat {
    let r = max_eccentricity(g).max(max_eccentricity(h)).max(1);
    let s = sampling_distance(g, h, r).unwrap();
    s.lower + s.per_radius_tv.last().unwrap() * half_pow(r)
}

/// Fraction of vertices in no K_{d,d} component.
pub fn fraction_outside_kdd(g: &Graph, d: usize) -> Result<BigRat> {
    if g.max_degree() > d {
        return Err(invalid(format!("graph has degree above d = {d}")));
    }
    if g.n() == 0 {
        return Ok(BigRat::zero());
    }
    let kdd = canon(&complete_bipartite(d, d), None);
    let inside: usize = g
        .components()
        .iter()
        .filter(|c| c.len() == 2 * d && canon(&g.induced(c), None) == kdd)
        .map(Vec::len)
        .sum();
    Ok(BigRat::new(((g.n() - inside) as i64).into(), (g.n() as i64).into()))
}
