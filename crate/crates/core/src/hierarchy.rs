//! Six notions of one partition function dominating another, decided
//! exactly, and the implications between them.
//!
//! For Z_G = Σ a_k λ^k and Z_H = Σ b_k λ^k with a_0 = b_0, padded to a
//! common degree n:
//!
//! * COUNT: Σ a_k ≥ Σ b_k
//! * PART: Z_G(λ) ≥ Z_H(λ) for all λ ≥ 0
//! * COEF: a_k ≥ b_k for all k
//! * OCC: λZ_G′/Z_G ≥ λZ_H′/Z_H for all λ > 0
//! * MAX: a_n ≥ b_n
//! * FV: a_{k+1}/a_k ≥ b_{k+1}/b_k for all k < n

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{find_negative_point, fmt_rat, log_deriv_numerator, BigRat, RatPoly};
use crate::graph::Graph;
use crate::polys::{coeff_power, ind_coeffs, CoefVector, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Flag {
    Count,
    Part,
    Coef,
    Occ,
    Max,
    Fv,
}

impl Flag {
    pub const ALL: [Flag; 6] = [Flag::Count, Flag::Part, Flag::Coef, Flag::Occ, Flag::Max, Flag::Fv];
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flag::Count => "COUNT",
            Flag::Part => "PART",
            Flag::Coef => "COEF",
            Flag::Occ => "OCC",
            Flag::Max => "MAX",
            Flag::Fv => "FV",
        };
        f.write_str(s)
    }
}

/// Implications that always hold, as (premise, conclusion).
pub const IMPLICATIONS: [(Flag, Flag); 6] = [
    (Flag::Part, Flag::Count),
    (Flag::Part, Flag::Max),
    (Flag::Coef, Flag::Part),
    (Flag::Occ, Flag::Part),
    (Flag::Fv, Flag::Coef),
    (Flag::Fv, Flag::Occ),
];

/// Where a dominance statement fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Coefficient index (COEF, MAX, FV).
    Index(usize),
    /// A fugacity where the inequality fails (COUNT uses λ = 1).
    Lambda(BigRat),
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(1))?;
        match self {
            Witness::Index(k) => m.serialize_entry("k", k)?,
            Witness::Lambda(l) => m.serialize_entry("lambda", &fmt_rat(l))?,
        }
        m.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub flags: BTreeMap<Flag, bool>,
    pub witnesses: BTreeMap<Flag, Witness>,
    /// Both vectors have no zero below their last nonzero coefficient, the
    /// setting in which the implications are proved.
    pub contiguous: bool,
    /// Implications the flags violate; always empty on contiguous input
    /// unless there is a bug.
    pub violated: Vec<String>,
}

impl DominanceReport {
    pub fn get(&self, f: Flag) -> bool {
        self.flags[&f]
    }

    pub fn is_consistent(&self) -> bool {
        self.violated.is_empty()
    }

    fn violated_implications(flags: &BTreeMap<Flag, bool>) -> Vec<String> {
        IMPLICATIONS
            .iter()
            .filter(|(p, c)| flags[p] && !flags[c])
            .map(|(p, c)| format!("{p} => {c}"))
            .collect()
    }
}

fn validate(zg: &[BigInt], zh: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    if zg.is_empty() || zh.is_empty() {
        return Err(invalid("empty coefficient vector"));
    }
    if zg.iter().chain(zh).any(Signed::is_negative) {
        return Err(invalid("coefficients must be nonnegative"));
    }
    if zg[0] != zh[0] {
        return Err(invalid(format!("constant terms differ: {} vs {}", zg[0], zh[0])));
    }
    if zg[0].is_zero() {
        return Err(invalid("constant term must be positive"));
    }
    let n = zg.len().max(zh.len());
    let pad = |v: &[BigInt]| {
        let mut v = v.to_vec();
        v.resize(n, BigInt::zero());
        v
    };
    Ok((pad(zg), pad(zh)))
}

fn ratpoly(v: &[BigInt]) -> RatPoly {
    RatPoly::new(v.iter().map(|x| BigRat::from_integer(x.clone())).collect())
}

/// FV with the zero conventions: indices with b_k = 0 hold vacuously; where
/// a_k = 0 < b_k the inequality fails iff b_{k+1} > 0.
fn fv_failure(a: &[BigInt], b: &[BigInt]) -> Option<usize> {
    (0..a.len() - 1).find(|&k| {
        if b[k].is_zero() {
            false
        } else if a[k].is_zero() {
            b[k + 1].is_positive()
        } else {
            &a[k + 1] * &b[k] < &b[k + 1] * &a[k]
        }
    })
}

pub fn dominance(zg: &[BigInt], zh: &[BigInt]) -> Result<DominanceReport> {
    let (a, b) = validate(zg, zh)?;
    let n = a.len() - 1;
    let mut flags = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    let mut set = |f: Flag, w: Option<Witness>| {
        flags.insert(f, w.is_none());
        if let Some(w) = w {
            witnesses.insert(f, w);
        }
    };

    let sa: BigInt = a.iter().sum();
    let sb: BigInt = b.iter().sum();
    set(Flag::Count, (sa < sb).then(|| Witness::Lambda(BigRat::one())));

    let (pg, ph) = (ratpoly(&a), ratpoly(&b));
    set(Flag::Part, find_negative_point(&pg.sub(&ph)).map(Witness::Lambda));
    set(Flag::Coef, (1..=n).find(|&k| a[k] < b[k]).map(Witness::Index));
    set(Flag::Occ, find_negative_point(&log_deriv_numerator(&pg, &ph)).map(Witness::Lambda));
    set(Flag::Max, (a[n] < b[n]).then_some(Witness::Index(n)));
    set(Flag::Fv, fv_failure(&a, &b).map(Witness::Index));

    let contiguous = contiguous_support(zg) && contiguous_support(zh);
    let violated = if contiguous { DominanceReport::violated_implications(&flags) } else { Vec::new() };
    if !violated.is_empty() {
        log::error!("dominance flags violate {violated:?}");
    }
    Ok(DominanceReport { flags, witnesses, contiguous, violated })
}

fn contiguous_support(v: &[BigInt]) -> bool {
    let top = v.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    v[..=top].iter().all(|x| !x.is_zero())
}

fn signed(v: &[BigUint]) -> Vec<BigInt> {
    v.iter().map(|x| BigInt::from_biguint(Sign::Plus, x.clone())).collect()
}

/// `dominance` on coefficient vectors of the same model.
pub fn dominance_of(zg: &CoefVector, zh: &CoefVector) -> Result<DominanceReport> {
    if zg.kind != zh.kind {
        return Err(Error::KindMismatch(zg.kind.to_string(), zh.kind.to_string()));
    }
    dominance(&signed(&zg.coeffs), &signed(&zh.coeffs))
}

/// r_k = Σ_j (k − 2j + 1) b_j a_{k−j+1}, the coefficients of
/// Z_G′Z_H − Z_H′Z_G. Cross-checked against the polynomial product.
pub fn rk_coefficients(zg: &[BigInt], zh: &[BigInt]) -> Result<Vec<BigInt>> {
    let (a, b) = validate(zg, zh)?;
    let n = a.len() - 1;
    let coef = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    let r: Vec<BigInt> = (0..2 * n)
        .map(|k| {
            (0..=k + 1)
                .map(|j| BigInt::from(k as i64 - 2 * j as i64 + 1) * coef(&b, j) * coef(&a, k + 1 - j))
                .sum()
        })
        .collect();
    let direct = log_deriv_numerator(&ratpoly(&a), &ratpoly(&b));
    for (k, rk) in r.iter().enumerate() {
        if direct.coeff(k) != BigRat::from_integer(rk.clone()) {
            return Err(Error::Degenerate(format!("r_{k} disagrees with the direct product")));
        }
    }
    Ok(r)
}

/// Empty when the six flags respect every implication; otherwise the
/// violated implications. Vectors with interior zeros are out of scope and
/// always come back empty.
pub fn hierarchy_consistency(zg: &[BigInt], zh: &[BigInt]) -> Result<Vec<String>> {
    Ok(dominance(zg, zh)?.violated)
}

/// Coefficients of the union of n/(d+1) copies of K_{d+1}.
pub fn cliques_ind_coeffs(d: usize, n: usize) -> Result<CoefVector> {
    if !n.is_multiple_of(d + 1) {
        return Err(invalid(format!("d + 1 = {} must divide n = {n}", d + 1)));
    }
    let clique = CoefVector::from_u64(Kind::Ind, &[1, d as u64 + 1]);
    Ok(coeff_power(&clique, n / (d + 1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueComparison {
    /// First k ≤ n/(d+1) where the free volume of G is below the cliques'.
    pub free_volume_failure: Option<usize>,
    /// First k where i_k(G) < i_k(cliques).
    pub coefficient_failure: Option<usize>,
}

impl CliqueComparison {
    pub fn holds(&self) -> bool {
        self.free_volume_failure.is_none() && self.coefficient_failure.is_none()
    }
}

/// Free volume (k+1)i_{k+1}/i_k of a d-regular G is at least that of the
/// clique union for k ≤ n/(d+1), and i_k(G) ≥ i_k(cliques) for all k.
pub fn cutler_radcliffe_check(g: &Graph, d: usize, n: usize) -> Result<CliqueComparison> {
    if g.n() != n || !g.is_regular(d) {
        return Err(invalid(format!("graph must be {d}-regular on {n} vertices")));
    }
    let cl = cliques_ind_coeffs(d, n)?;
    let ig = ind_coeffs(g)?;
    let free_volume_failure = (0..=n / (d + 1)).find(|&k| {
        // i_k(G) ≥ i_k(CL) > 0 here, so cross-multiplying keeps the direction
        ig.get(k + 1) * cl.get(k) < cl.get(k + 1) * ig.get(k)
    });
    let coefficient_failure = (0..=n).find(|&k| ig.get(k) < cl.get(k));
    Ok(CliqueComparison { free_volume_failure, coefficient_failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_bipartite, enumerate_regular, prism, EnumerationConfig};
    use crate::polys::{hdn_coeffs, match_coeffs};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn count_and_max_incomparable() {
        let r = dominance(&v(&[1, 5, 2]), &v(&[1, 2, 3])).unwrap();
        assert!(r.get(Flag::Count));
        assert!(!r.get(Flag::Max));
        assert_eq!(r.witnesses[&Flag::Max], Witness::Index(2));
        let r = dominance(&v(&[1, 2, 3]), &v(&[1, 5, 2])).unwrap();
        assert!(!r.get(Flag::Count) && r.get(Flag::Max));
    }

    #[test]
    fn coef_without_occ() {
        let r = dominance(&v(&[1, 3, 1]), &v(&[1, 2, 1])).unwrap();
        assert!(r.get(Flag::Coef) && !r.get(Flag::Occ));
        // the cross-difference is 1 − λ, negative past λ = 1
        match &r.witnesses[&Flag::Occ] {
            Witness::Lambda(l) => assert!(*l > BigRat::one()),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn occ_without_coef() {
        let r = dominance(&v(&[1, 5, 5, 5]), &v(&[1, 4, 6, 1])).unwrap();
        assert!(r.get(Flag::Occ) && !r.get(Flag::Coef));
        assert_eq!(r.witnesses[&Flag::Coef], Witness::Index(2));
        assert!(r.is_consistent());
    }

    #[test]
    fn equal_vectors_dominate_both_ways() {
        let r = dominance(&v(&[1, 9, 18, 6]), &v(&[1, 9, 18, 6])).unwrap();
        assert!(Flag::ALL.iter().all(|&f| r.get(f)));
        assert!(rk_coefficients(&v(&[1, 9, 18, 6]), &v(&[1, 9, 18, 6])).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(dominance(&v(&[1, 2]), &v(&[2, 2])).is_err());
        assert!(dominance(&v(&[1, -2]), &v(&[1, 2])).is_err());
    }

    #[test]
    fn r0_formula() {
        let (a, b) = (v(&[2, 7, 1]), v(&[2, 3, 5]));
        let r = rk_coefficients(&a, &b).unwrap();
        assert_eq!(r[0], &a[1] * &b[0] - &b[1] * &a[0]);
    }

    #[test]
    fn fv_pair_from_kdd_union() {
        let zg = hdn_coeffs(Kind::Match, 3, 12).unwrap();
        let k33 = match_coeffs(&complete_bipartite(3, 3)).unwrap();
        let zh = crate::polys::disjoint_union_coeffs(&match_coeffs(&prism()).unwrap(), &k33).unwrap();
        let r = dominance_of(&zg, &zh).unwrap();
        assert!(r.get(Flag::Fv) && r.get(Flag::Coef) && r.get(Flag::Occ));
        let rk = rk_coefficients(&signed(&zg.coeffs), &signed(&zh.coeffs)).unwrap();
        assert!(rk.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn fv_zero_conventions() {
        // H runs out first: vacuous from then on
        assert!(fv_failure(&v(&[1, 4, 2]), &v(&[1, 3, 0])).is_none());
        // G runs out while H still grows
        assert_eq!(fv_failure(&v(&[1, 4, 0, 0]), &v(&[1, 2, 1, 1])), Some(1));
        // an interior zero in H makes FV vacuous past it, so COEF can fail
        let r = dominance(&v(&[1, 6, 0, 0]), &v(&[1, 1, 0, 5])).unwrap();
        assert!(r.get(Flag::Fv) && !r.get(Flag::Coef) && !r.contiguous && r.is_consistent());
    }

    #[test]
    fn cliques_minimize() {
        let n = 12;
        let cl = crate::graph::complete(4).disjoint_copies(3);
        assert!(cutler_radcliffe_check(&cl, 3, n).unwrap().holds());
        let two = complete_bipartite(3, 3).disjoint_copies(2);
        assert!(cutler_radcliffe_check(&two, 3, n).unwrap().holds());
        for n in [8, 12] {
            for g in enumerate_regular(&EnumerationConfig::new(3, n, 3)).unwrap() {
                assert!(cutler_radcliffe_check(&g, 3, n).unwrap().holds());
            }
        }
        assert!(cutler_radcliffe_check(&complete(4), 3, 5).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn implications_hold(
            c0 in 1i64..4,
            a in proptest::collection::vec(0i64..12, 0..6),
            b in proptest::collection::vec(0i64..12, 0..6),
        ) {
            let mut zg = vec![c0];
            zg.extend(a);
            let mut zh = vec![c0];
            zh.extend(b);
            let r = dominance(&v(&zg), &v(&zh)).unwrap();
            prop_assert!(r.is_consistent(), "{:?}", r.violated);
            if r.get(Flag::Fv) && r.contiguous {
                prop_assert!(rk_coefficients(&v(&zg), &v(&zh)).unwrap().iter().all(|x| !x.is_negative()));
            }
        }
    }
}
