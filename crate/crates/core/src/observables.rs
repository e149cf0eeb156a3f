//! Grand-canonical observables computed exactly from coefficient vectors:
//! occupancy fraction (internal energy for Potts), size distributions,
//! fugacity tuning and free volume.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exact::{fmt_rat, int, BigRat};
use crate::graph::Graph;
use crate::localview::eval_coeffs;
use crate::polys::{coeffs, CoefVector, Kind};

pub use crate::localview::{
    local_view_counts, local_view_distribution, LocalView, LocalViewCounts, LocalViewDistribution,
};

/// Vertex and edge counts, the normalizers of the occupancy fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphSize {
    pub n: usize,
    pub m: usize,
}

impl GraphSize {
    pub fn of(g: &Graph) -> Self {
        GraphSize { n: g.n(), m: g.num_edges() }
    }
}

fn lambda_z_prime(c: &CoefVector, lambda: &BigRat) -> BigRat {
    // Σ k c_k λ^k
    let mut acc = BigRat::zero();
    for (k, ck) in c.coeffs.iter().enumerate().rev() {
        acc = acc * lambda + BigRat::from_integer(BigInt::from(ck.clone()) * k);
    }
    acc
}

/// λZ′/Z divided by |E| (matchings, Potts energy) or |V| (independent sets).
pub fn occupancy_fraction(c: &CoefVector, size: GraphSize, lambda: &BigRat) -> Result<BigRat> {
    if lambda.is_negative() {
        return Err(invalid("lambda must be nonnegative"));
    }
    let norm = match c.kind {
        Kind::Ind => size.n,
        Kind::Match | Kind::Potts(_) => size.m,
    };
    if norm == 0 {
        return Ok(BigRat::zero());
    }
    let z = eval_coeffs(c, lambda);
    if z.is_zero() {
        return Err(invalid("partition function vanishes at this lambda"));
    }
    Ok(lambda_z_prime(c, lambda) / (z * int(norm as i64)))
}

/// Convenience: coefficients and occupancy of a graph in one call.
pub fn graph_occupancy(g: &Graph, kind: Kind, lambda: &BigRat) -> Result<BigRat> {
    occupancy_fraction(&coeffs(g, kind)?, GraphSize::of(g), lambda)
}

/// prob[k] = c_k λ^k / Z(λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeDistribution {
    pub kind: Kind,
    pub lambda: BigRat,
    pub prob: Vec<BigRat>,
}

#[derive(Serialize)]
pub struct SizeDistributionJson {
    pub kind: String,
    pub lambda: String,
    pub prob: Vec<String>,
}

impl SizeDistribution {
    pub fn mean(&self) -> BigRat {
        self.prob.iter().enumerate().map(|(k, p)| p * int(k as i64)).sum()
    }

    pub fn variance(&self) -> BigRat {
        let m = self.mean();
        let second: BigRat = self.prob.iter().enumerate().map(|(k, p)| p * int((k * k) as i64)).sum();
        second - &m * &m
    }

    pub fn total(&self) -> BigRat {
        self.prob.iter().sum()
    }

    pub fn get(&self, k: usize) -> BigRat {
        self.prob.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn to_json(&self) -> SizeDistributionJson {
        SizeDistributionJson {
            kind: self.kind.to_string(),
            lambda: fmt_rat(&self.lambda),
            prob: self.prob.iter().map(fmt_rat).collect(),
        }
    }
}

pub fn size_distribution(c: &CoefVector, lambda: &BigRat) -> Result<SizeDistribution> {
    if lambda.is_negative() {
        return Err(invalid("lambda must be nonnegative"));
    }
    let mut terms = Vec::with_capacity(c.coeffs.len());
    let mut p = BigRat::one();
    for ck in &c.coeffs {
        terms.push(BigRat::from_integer(ck.clone().into()) * &p);
        p *= lambda;
    }
    let z: BigRat = terms.iter().sum();
    if z.is_zero() {
        return Err(invalid("partition function vanishes at this lambda"));
    }
    let mut prob: Vec<BigRat> = terms.into_iter().map(|t| t / &z).collect();
    while prob.len() > 1 && prob.last().is_some_and(Zero::is_zero) {
        prob.pop();
    }
    Ok(SizeDistribution { kind: c.kind, lambda: lambda.clone(), prob })
}

fn mean_size(c: &CoefVector, lambda: &BigRat) -> BigRat {
    lambda_z_prime(c, lambda) / eval_coeffs(c, lambda)
}

/// Result of [`tune_lambda`]: the mean size at `lambda` is within the
/// tolerance of the target, and the target mean lies between the means at
/// `lo` and `hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TunedLambda {
    pub lambda: BigRat,
    pub lo: BigRat,
    pub hi: BigRat,
    pub mean: BigRat,
}

/// 10⁻⁹, the default tolerance of [`tune_lambda`].
pub fn default_tune_tolerance() -> BigRat {
    crate::exact::rat(1, 1_000_000_000)
}

/// Finds λ with |E_λ[size] − target| ≤ tol by bisection. The mean is
/// strictly increasing in λ, so a bracket [lo, hi] with mean(lo) ≤ target
/// ≤ mean(hi) is found by doubling and then halved.
pub fn tune_lambda(c: &CoefVector, target: &BigRat, tol: &BigRat) -> Result<TunedLambda> {
    let kmax = c.top();
    if c.get(0).is_zero() {
        return Err(invalid("tune_lambda needs a positive constant coefficient"));
    }
    if !target.is_positive() || *target >= int(kmax as i64) {
        return Err(invalid(format!("target mean must lie in (0, {kmax})")));
    }
    if !tol.is_positive() {
        return Err(invalid("tolerance must be positive"));
    }
    let mut lo = BigRat::zero();
    let mut hi = BigRat::one();
    loop {
        let m = mean_size(c, &hi);
        if m >= *target {
            break;
        }
        lo = hi.clone();
        hi *= int(2);
    }
    let mut mid = hi.clone();
    let mut m = mean_size(c, &mid);
    while (&m - target).abs() > *tol {
        mid = (&lo + &hi) / int(2);
        m = mean_size(c, &mid);
        if m < *target {
            lo = mid.clone();
        } else {
            hi = mid.clone();
        }
    }
    Ok(TunedLambda { lambda: mid, lo, hi, mean: m })
}

/// (k+1) c_{k+1} / c_k: expected number of ways to extend a uniform
/// size-k configuration by one element.
pub fn free_volume(c: &CoefVector, k: usize) -> Result<BigRat> {
    let ck = c.get(k);
    if ck.is_zero() {
        return Err(invalid(format!("free volume undefined: c_{k} = 0")));
    }
    let next = BigInt::from(c.get(k + 1)) * (k + 1);
    Ok(BigRat::new(next, ck.into()))
}

/// Per-edge (matchings) or per-vertex (independent sets) occupation
/// probabilities against the bound λ/(1+λ).
#[derive(Clone, Debug)]
pub struct OccupationBound {
    pub bound: BigRat,
    pub max_prob: BigRat,
    /// Edge or vertex attaining `max_prob`.
    pub argmax: Vec<usize>,
    pub holds: bool,
}

/// P(e ∈ M) = λ m(G−u−v)/m(G) ≤ λ/(1+λ) for every edge e = uv.
pub fn edge_occupancy_bound_check(g: &Graph, lambda: &BigRat) -> Result<OccupationBound> {
    let z = eval_coeffs(&coeffs(g, Kind::Match)?, lambda);
    let mut best = (BigRat::zero(), Vec::new());
    for (u, v) in g.edges() {
        let p = lambda * eval_coeffs(&coeffs(&g.remove_vertices(&[u, v]), Kind::Match)?, lambda) / &z;
        if best.1.is_empty() || p > best.0 {
            best = (p, vec![u, v]);
        }
    }
    Ok(finish_bound(lambda, best))
}

/// P(v ∈ I) = λ i(G−N̄(v))/i(G) ≤ λ/(1+λ) for every vertex v.
pub fn vertex_occupancy_bound_check(g: &Graph, lambda: &BigRat) -> Result<OccupationBound> {
    let z = eval_coeffs(&coeffs(g, Kind::Ind)?, lambda);
    let mut best = (BigRat::zero(), Vec::new());
    for v in 0..g.n() {
        let mut closed = g.neighbors(v).to_vec();
        closed.push(v);
        let p = lambda * eval_coeffs(&coeffs(&g.remove_vertices(&closed), Kind::Ind)?, lambda) / &z;
        if best.1.is_empty() || p > best.0 {
            best = (p, vec![v]);
        }
    }
    Ok(finish_bound(lambda, best))
}

fn finish_bound(lambda: &BigRat, (max_prob, argmax): (BigRat, Vec<usize>)) -> OccupationBound {
    let bound = lambda / (BigRat::one() + lambda);
    let holds = max_prob <= bound;
    OccupationBound { bound, max_prob, argmax, holds }
}

/// Default λ grid for "for all λ" checks.
pub fn default_lambda_grid() -> Vec<BigRat> {
    use crate::exact::rat;
    vec![rat(1, 10), rat(1, 4), rat(1, 2), int(1), int(2), int(4), int(10)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::graph::*;
    use crate::polys::*;

    fn k33() -> CoefVector {
        match_coeffs(&complete_bipartite(3, 3)).unwrap()
    }

    #[test]
    fn occupancy_examples() {
        let size = GraphSize { n: 6, m: 9 };
        assert_eq!(occupancy_fraction(&k33(), size, &int(1)).unwrap(), rat(7, 34));
        assert_eq!(occupancy_fraction(&k33(), size, &int(0)).unwrap(), int(0));
        for g in [prism(), complete_bipartite(3, 3), heawood()] {
            for q in 2..=4 {
                let c = potts_coeffs(&g, q).unwrap();
                assert_eq!(occupancy_fraction(&c, GraphSize::of(&g), &int(1)).unwrap(), rat(1, q as i64));
            }
        }
        assert!(occupancy_fraction(&k33(), size, &rat(-1, 2)).is_err());
        // K4 has no proper 3-coloring: Z(0) = 0
        let k4 = potts_coeffs(&complete(4), 3).unwrap();
        assert!(occupancy_fraction(&k4, GraphSize::of(&complete(4)), &int(0)).is_err());
    }

    #[test]
    fn size_distribution_examples() {
        let s = size_distribution(&k33(), &int(1)).unwrap();
        assert_eq!(s.prob, vec![rat(1, 34), rat(9, 34), rat(18, 34), rat(6, 34)]);
        assert_eq!(s.total(), int(1));
        // mean / |E| is the occupancy fraction
        assert_eq!(s.mean() / int(9), rat(7, 34));
        let s0 = size_distribution(&k33(), &int(0)).unwrap();
        assert_eq!(s0.prob, vec![int(1)]);
        let big = size_distribution(&kdd_ind_coeffs(3), &int(1_000_000)).unwrap();
        assert!(big.get(3) > rat(999, 1000));
    }

    #[test]
    fn tuning_recovers_lambda() {
        let tol = rat(1, 1_000_000_000);
        let t = tune_lambda(&k33(), &rat(63, 34), &tol).unwrap();
        assert_eq!(t.lambda, int(1));
        let h = hdn_coeffs(Kind::Match, 3, 12).unwrap();
        let t = tune_lambda(&h, &rat(63, 17), &tol).unwrap();
        assert_eq!(t.lambda, int(1));
        let t = tune_lambda(&k33(), &rat(1, 1000), &tol).unwrap();
        assert!(t.lambda < rat(1, 1000));
        assert!((t.mean - rat(1, 1000)).abs() <= tol);
        assert!(t.lo <= t.lambda && t.lambda <= t.hi);
        assert!(tune_lambda(&k33(), &int(3), &tol).is_err());
        assert!(tune_lambda(&k33(), &int(0), &tol).is_err());
    }

    #[test]
    fn free_volume_examples() {
        assert_eq!(free_volume(&ind_coeffs(&complete_bipartite(3, 3)).unwrap(), 1).unwrap(), int(2));
        let cl = ind_coeffs(&make_named(&Named::CLdn(3, 8)).unwrap()).unwrap();
        assert_eq!(free_volume(&cl, 0).unwrap(), int(8));
        assert_eq!(free_volume(&cl, cl.top()).unwrap(), int(0));
        assert!(free_volume(&cl, cl.top() + 1).is_err());
    }

    #[test]
    fn occupation_bounds() {
        let c4 = edge_occupancy_bound_check(&cycle(4), &int(1)).unwrap();
        // {e} and {e, opposite edge} out of 7 matchings
        assert_eq!(c4.max_prob, rat(2, 7));
        assert!(c4.holds);
        let k2 = edge_occupancy_bound_check(&complete(2), &rat(2, 5)).unwrap();
        assert_eq!(k2.max_prob, k2.bound);
        let zero = edge_occupancy_bound_check(&prism(), &int(0)).unwrap();
        assert_eq!(zero.max_prob, int(0));
        for g in [prism(), heawood(), complete(5)] {
            for lam in default_lambda_grid() {
                assert!(edge_occupancy_bound_check(&g, &lam).unwrap().holds);
                assert!(vertex_occupancy_bound_check(&g, &lam).unwrap().holds);
            }
        }
    }

    #[test]
    fn occupancy_increasing_in_lambda() {
        let grid = default_lambda_grid();
        for g in [prism(), cycle(7), heawood()] {
            for kind in [Kind::Match, Kind::Ind, Kind::Potts(3)] {
                let c = coeffs(&g, kind).unwrap();
                let vals: Vec<_> = grid.iter().map(|l| occupancy_fraction(&c, GraphSize::of(&g), l).unwrap()).collect();
                assert!(vals.windows(2).all(|w| w[0] < w[1]), "{kind} not increasing");
            }
        }
    }
}
