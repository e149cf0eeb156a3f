//! The occupancy linear program over local-view distributions.
//!
//! Variables are probabilities p(L) of the candidate views. Constraints are
//! normalization plus identities that any d-regular graph satisfies because
//! the same occupancy can be counted from the root or from its neighbours.

mod simplex;
mod stability;
mod views;

use num_traits::{One, Zero};

pub use simplex::{solve_lp, DualCertificate, DualCertificateJson, ExactLP, LpSolution};
pub use stability::{
    f_closed_form, realizability_check, reference_views, stability_constant, stability_gap_check, GapCheck, RealizabilityCheck,
    StabilityResult,
};
pub use views::{candidate_views, enumerate_local_views, CertifiedView, HostWitness, MAX_VIEW_DEGREE};

use crate::error::{invalid, Result};
use crate::exact::{fmt_rat, BigRat};
use crate::localview::{LocalView, LocalViewDistribution};
use crate::observables::occupancy_fraction;
use crate::observables::GraphSize;
use crate::polys::{kdd_ind_coeffs, kdd_match_coeffs, Kind};

/// An LP together with the views its columns stand for.
#[derive(Clone, Debug)]
pub struct OccupancyLp {
    pub d: usize,
    pub kind: Kind,
    pub lambda: BigRat,
    pub lp: ExactLP,
    pub views: Vec<LocalView>,
}

/// Constraints violated by a distribution, by row name, plus views outside
/// the column set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Violations {
    pub rows: Vec<String>,
    pub unknown_views: Vec<String>,
}

impl Violations {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.unknown_views.is_empty()
    }
}

fn equality(
    a: &mut Vec<Vec<BigRat>>,
    b: &mut Vec<BigRat>,
    names: &mut Vec<String>,
    row: Vec<BigRat>,
    rhs: BigRat,
    name: &str,
) {
    a.push(row.iter().map(|x| -x).collect());
    b.push(-rhs.clone());
    names.push(format!("{name}_ge"));
    a.push(row);
    b.push(rhs);
    names.push(format!("{name}_le"));
}

pub fn build_lp(d: usize, kind: Kind, lambda: &BigRat) -> Result<OccupancyLp> {
    if lambda <= &BigRat::zero() {
        return Err(invalid("lambda must be positive"));
    }
    let views = candidate_views(d, kind)?;
    let dd = BigRat::from_integer(d.into());
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut names = Vec::new();
    let objective: Vec<BigRat> = views.iter().map(|v| v.root_occupancy(lambda)).collect();
    equality(&mut a, &mut b, &mut names, vec![BigRat::one(); views.len()], BigRat::one(), "norm");
    match kind {
        Kind::Match => {
            // each matched edge meets 2(d − 1) other edges
            let k = BigRat::from_integer((2 * (d - 1)).into());
            let row = views.iter().zip(&objective).map(|(v, r)| v.neighbour_occupancy(lambda) - &k * r).collect();
            equality(&mut a, &mut b, &mut names, row, BigRat::zero(), "adjacent");
            // an endpoint free of other matching edges, counted from the
            // root edge and from each of its d − 1 neighbours at that endpoint
            let k = BigRat::from_integer((d - 1).into());
            let row = views
                .iter()
                .map(|v| {
                    let (far, root) = v.endpoint_freedom(lambda);
                    far - &k * root
                })
                .collect();
            equality(&mut a, &mut b, &mut names, row, BigRat::zero(), "endpoint");
        }
        Kind::Ind => {
            let row = views
                .iter()
                .zip(&objective)
                .map(|(v, r)| r - v.neighbour_occupancy(lambda) / &dd)
                .collect();
            equality(&mut a, &mut b, &mut names, row, BigRat::zero(), "neighbour");
        }
        Kind::Potts(_) => unreachable!("candidate_views rejects colorings"),
    }
    let mut lp = ExactLP::new(a, b, objective)?;
    lp.row_names = names;
    lp.col_names = views.iter().map(LocalView::describe).collect();
    Ok(OccupancyLp { d, kind, lambda: lambda.clone(), lp, views })
}

/// α_{K_{d,d}}(λ) from the coefficient vector.
pub fn kdd_occupancy(d: usize, kind: Kind, lambda: &BigRat) -> Result<BigRat> {
    let (c, size) = match kind {
        Kind::Match => (kdd_match_coeffs(d), GraphSize { n: 2 * d, m: d * d }),
        Kind::Ind => (kdd_ind_coeffs(d), GraphSize { n: 2 * d, m: d * d }),
        Kind::Potts(_) => return Err(invalid("no occupancy LP for colorings")),
    };
    occupancy_fraction(&c, size, lambda)
}

/// Optimum compared with α_{K_{d,d}}: `gap` = optimum − α, with a witness
/// distribution when the gap is positive.
#[derive(Clone, Debug)]
pub struct Tightness {
    pub optimum: BigRat,
    pub kdd: BigRat,
    pub gap: BigRat,
    pub witness: Vec<(String, BigRat)>,
}

impl Tightness {
    pub fn is_tight(&self) -> bool {
        self.gap.is_zero()
    }
}

impl OccupancyLp {
    pub fn solve(&self) -> Result<LpSolution> {
        solve_lp(&self.lp)
    }

    pub fn tightness(&self, sol: &LpSolution) -> Result<Tightness> {
        let kdd = kdd_occupancy(self.d, self.kind, &self.lambda)?;
        let gap = &sol.optimum - &kdd;
        let witness = if gap > BigRat::zero() {
            self.views
                .iter()
                .zip(&sol.primal)
                .filter(|(_, p)| !p.is_zero())
                .map(|(v, p)| (v.describe(), p.clone()))
                .collect()
        } else {
            Vec::new()
        };
        if gap < BigRat::zero() {
            log::error!("LP optimum below the K_dd value: a constraint excludes K_dd ({})", fmt_rat(&gap));
        } else if !gap.is_zero() {
            log::warn!("LP for d={} {} is not tight: gap {}", self.d, self.kind, fmt_rat(&gap));
        }
        Ok(Tightness { optimum: sol.optimum.clone(), kdd, gap, witness })
    }

    /// Column vector of a graph distribution; views outside the columns are
    /// returned separately.
    pub fn embed(&self, dist: &LocalViewDistribution) -> (Vec<BigRat>, Vec<String>) {
        let mut p = vec![BigRat::zero(); self.views.len()];
        let mut unknown = Vec::new();
        for (cert, prob) in &dist.probs {
            match self.views.iter().position(|v| &v.cert == cert) {
                Some(j) => p[j] += prob,
                None => unknown.push(dist.views[cert].describe()),
            }
        }
        (p, unknown)
    }

    /// Exact check of Ap ≤ b for a graph's local-view distribution.
    pub fn check_distribution(&self, dist: &LocalViewDistribution) -> Result<Violations> {
        if dist.kind != self.kind || dist.lambda != self.lambda {
            return Err(invalid("distribution kind or lambda differs from the LP"));
        }
        let (p, unknown_views) = self.embed(dist);
        let rows = self.lp.violations(&p).into_iter().map(|i| self.lp.row_names[i].clone()).collect();
        Ok(Violations { rows, unknown_views })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::graph::{complete_bipartite, enumerate_regular, EnumerationConfig};
    use crate::localview::local_view_distribution;

    fn lambdas() -> Vec<BigRat> {
        vec![rat(1, 4), rat(1, 2), int(1), int(2)]
    }

    #[test]
    fn matching_tight_for_small_degree() {
        for d in 2..=3 {
            for l in lambdas() {
                let lp = build_lp(d, Kind::Match, &l).unwrap();
                let t = lp.tightness(&lp.solve().unwrap()).unwrap();
                assert!(t.is_tight(), "d={d} λ={l}: gap {}", t.gap);
            }
        }
        let lp = build_lp(3, Kind::Match, &int(1)).unwrap();
        assert_eq!(lp.solve().unwrap().optimum, rat(7, 34));
    }

    #[test]
    fn matching_d2_values() {
        let want = [rat(5, 34), rat(3, 14), rat(2, 7), rat(6, 17)];
        for (l, w) in lambdas().iter().zip(want) {
            assert_eq!(build_lp(2, Kind::Match, l).unwrap().solve().unwrap().optimum, w);
        }
    }

    #[test]
    fn independent_tight() {
        for d in 2..=4 {
            for l in lambdas() {
                let lp = build_lp(d, Kind::Ind, &l).unwrap();
                assert!(lp.tightness(&lp.solve().unwrap()).unwrap().is_tight(), "d={d} λ={l}");
            }
        }
    }

    #[test]
    fn matching_d4_gap_reported() {
        let lp = build_lp(4, Kind::Match, &int(1)).unwrap();
        let t = lp.tightness(&lp.solve().unwrap()).unwrap();
        assert!(t.gap >= BigRat::zero());
        assert_eq!(t.witness.is_empty(), t.is_tight());
    }

    #[test]
    fn kdd_distribution_is_feasible_and_attains() {
        for kind in [Kind::Match, Kind::Ind] {
            for d in 2..=3 {
                let l = rat(1, 2);
                let lp = build_lp(d, kind, &l).unwrap();
                let dist = local_view_distribution(&complete_bipartite(d, d), kind, &l).unwrap();
                assert!(lp.check_distribution(&dist).unwrap().is_empty());
                let (p, _) = lp.embed(&dist);
                assert_eq!(lp.lp.objective(&p), kdd_occupancy(d, kind, &l).unwrap());
            }
        }
    }

    #[test]
    fn cubic_graph_distributions_are_feasible() {
        let l = int(1);
        for kind in [Kind::Match, Kind::Ind] {
            let lp = build_lp(3, kind, &l).unwrap();
            for n in [4, 6, 8] {
                for g in enumerate_regular(&EnumerationConfig::new(3, n, 3)).unwrap() {
                    let dist = local_view_distribution(&g, kind, &l).unwrap();
                    assert!(lp.check_distribution(&dist).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(build_lp(3, Kind::Match, &int(0)).is_err());
        assert!(build_lp(3, Kind::Potts(3), &int(1)).is_err());
    }
}
