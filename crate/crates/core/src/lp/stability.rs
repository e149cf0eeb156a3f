//! Zero-slack views, the stability constant c = f·θ* and the exact checks
//! built on it.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{build_lp, kdd_occupancy, DualCertificate};
use crate::distance::{exact_sampling_distance, fraction_outside_kdd};
use crate::error::{invalid, Error, Result};
use crate::exact::{pow, BigRat};
use crate::graph::{complete_bipartite, CanonicalForm, Graph};
use crate::localview::{local_view_distribution, LocalView};
use crate::observables::graph_occupancy;
use crate::polys::Kind;

#[derive(Clone, Debug)]
pub struct StabilityResult {
    pub d: usize,
    pub kind: Kind,
    pub lambda: BigRat,
    pub optimum: BigRat,
    /// Optimum equals α_{K_{d,d}}(λ).
    pub tight: bool,
    pub dual: DualCertificate,
    pub views: Vec<LocalView>,
    pub zero_slack: Vec<LocalView>,
    pub theta_star: BigRat,
    pub f: BigRat,
    pub c: BigRat,
}

impl StabilityResult {
    pub fn zero_slack_certs(&self) -> BTreeSet<CanonicalForm> {
        self.zero_slack.iter().map(|v| v.cert.clone()).collect()
    }

    /// Checks Aᵀq − θ*x ≥ a with x the indicator of positive-slack views.
    pub fn augmented_dual_feasible(&self) -> bool {
        self.dual.slack.iter().all(|s| {
            let x = if s.is_zero() { BigRat::zero() } else { BigRat::one() };
            s - &self.theta_star * x >= BigRat::zero()
        })
    }
}

/// Lower bound on P(L ∉ L*) per unit of K_{d,d}-free mass.
///
/// match: min{(1+λ)^−(d−2), λ(1+λ)^−2d²}; ind: λ(1+λ)^−(2d+1);
/// potts(q): (λ^d/q)^{2d}, for λ ≤ 1.
pub fn f_closed_form(d: usize, kind: Kind, lambda: &BigRat) -> Result<BigRat> {
    if lambda <= &BigRat::zero() {
        return Err(invalid("lambda must be positive"));
    }
    let one_plus = BigRat::one() + lambda;
    Ok(match kind {
        Kind::Match => {
            let first = pow(&one_plus, d.saturating_sub(2)).recip();
            let second = lambda / pow(&one_plus, 2 * d * d);
            first.min(second)
        }
        Kind::Ind => lambda / pow(&one_plus, 2 * d + 1),
        Kind::Potts(q) => {
            if lambda > &BigRat::one() {
                return Err(invalid("the coloring bound needs lambda <= 1"));
            }
            pow(&(pow(lambda, d) / BigRat::from_integer(q.into())), 2 * d)
        }
    })
}

pub fn stability_constant(d: usize, kind: Kind, lambda: &BigRat) -> Result<StabilityResult> {
    let lp = build_lp(d, kind, lambda)?;
    let sol = lp.solve()?;
    let tight = sol.optimum == kdd_occupancy(d, kind, lambda)?;
    let zero_slack: Vec<LocalView> = lp
        .views
        .iter()
        .zip(&sol.dual.slack)
        .filter(|(_, s)| s.is_zero())
        .map(|(v, _)| v.clone())
        .collect();
    let theta_star = sol
        .dual
        .slack
        .iter()
        .filter(|s| !s.is_zero())
        .min()
        .cloned()
        .ok_or_else(|| Error::Degenerate("every slack is zero".into()))?;
    let f = f_closed_form(d, kind, lambda)?;
    let c = &f * &theta_star;
    let res = StabilityResult {
        d,
        kind,
        lambda: lambda.clone(),
        optimum: sol.optimum,
        tight,
        dual: sol.dual,
        views: lp.views,
        zero_slack,
        theta_star,
        f,
        c,
    };
    if !res.augmented_dual_feasible() {
        return Err(Error::Degenerate("augmented dual infeasible".into()));
    }
    Ok(res)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCheck {
    pub alpha_g: BigRat,
    pub alpha_kdd: BigRat,
    pub c: BigRat,
    pub delta: BigRat,
    /// α_K − c·δ.
    pub rhs: BigRat,
    /// rhs − α_G.
    pub margin: BigRat,
    pub holds: bool,
}

impl StabilityResult {
    /// α_G(λ) ≤ α_{K_{d,d}}(λ) − c·δ◦(G, K_{d,d}), exactly.
    pub fn gap_check(&self, g: &Graph) -> Result<GapCheck> {
        if !g.is_regular(self.d) {
            return Err(invalid(format!("graph is not {}-regular", self.d)));
        }
        if !self.tight {
            return Err(Error::Degenerate("LP is not tight; the constant does not bound the gap".into()));
        }
        let alpha_g = graph_occupancy(g, self.kind, &self.lambda)?;
        let alpha_kdd = self.optimum.clone();
        let delta = exact_sampling_distance(g, &complete_bipartite(self.d, self.d));
        let rhs = &alpha_kdd - &self.c * &delta;
        let margin = &rhs - &alpha_g;
        let holds = margin >= BigRat::zero();
        Ok(GapCheck { alpha_g, alpha_kdd, c: self.c.clone(), delta, rhs, margin, holds })
    }
}

pub fn stability_gap_check(g: &Graph, d: usize, kind: Kind, lambda: &BigRat) -> Result<GapCheck> {
    stability_constant(d, kind, lambda)?.gap_check(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizabilityCheck {
    pub p_outside: BigRat,
    pub fraction_outside: BigRat,
    pub f: BigRat,
    pub holds: bool,
}

/// The reference view set: zero-slack views of the LP, or for colorings the
/// support of the K_{d,d} view distribution.
pub fn reference_views(d: usize, kind: Kind, lambda: &BigRat) -> Result<BTreeSet<CanonicalForm>> {
    match kind {
        Kind::Potts(_) => Ok(local_view_distribution(&complete_bipartite(d, d), kind, lambda)?
            .probs
            .into_keys()
            .collect()),
        _ => Ok(stability_constant(d, kind, lambda)?.zero_slack_certs()),
    }
}

/// P(L ∉ L*) ≥ fraction_outside_kdd(G)·f(d, λ), exactly.
pub fn realizability_check(
    g: &Graph,
    d: usize,
    kind: Kind,
    lambda: &BigRat,
    reference: &BTreeSet<CanonicalForm>,
) -> Result<RealizabilityCheck> {
    if !g.is_regular(d) {
        return Err(invalid(format!("graph is not {d}-regular")));
    }
    let dist = local_view_distribution(g, kind, lambda)?;
    let p_outside: BigRat = dist
        .probs
        .iter()
        .filter(|(c, _)| !reference.contains(c))
        .map(|(_, p)| p)
        .sum();
    let fraction_outside = fraction_outside_kdd(g, d)?;
    let f = f_closed_form(d, kind, lambda)?;
    let holds = p_outside >= &fraction_outside * &f;
    Ok(RealizabilityCheck { p_outside, fraction_outside, f, holds })
}
