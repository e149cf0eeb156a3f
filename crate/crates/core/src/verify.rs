//! Exhaustive checks of the extremal statements over enumerated classes of
//! regular graphs, with machine-readable verdicts.
//!
//! Each check is labeled by what backs it. `Theorem` checks hold for every
//! graph in the class, so a failure is a bug. `Conjecture` checks are open
//! statements, and a failure is a counterexample. `Asymptotic` checks are
//! theorems only for large n, so a failure at desk scale is an out-of-range
//! observation.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::distance::fraction_outside_kdd;
use crate::error::{invalid, Result};
use crate::exact::{fmt_rat, from_biguint, parse_rat, pow, to_f64, BigRat};
use crate::graph::{enumerate_regular, from_graph6, heawood, to_graph6, EnumerationConfig, Graph};
use crate::observables::{occupancy_fraction, GraphSize};
use crate::polys::{coeffs, hdn_coeffs, CoefVector, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backing {
    Theorem,
    Conjecture,
    Asymptotic,
    /// Computed and reported, never asserted.
    Unasserted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    CoefficientDominance,
    PartitionDominance,
    Girth5,
    Bregman,
}

impl Statement {
    pub fn command(&self) -> &'static str {
        match self {
            Statement::CoefficientDominance => "coef",
            Statement::PartitionDominance => "part",
            Statement::Girth5 => "girth5",
            Statement::Bregman => "bregman",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassParams {
    pub d: usize,
    pub n: usize,
    pub girth: usize,
    pub kind: String,
    pub q: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailWitness {
    pub check: String,
    pub k: Option<usize>,
    pub lambda: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphResult {
    pub graph6: String,
    pub pass: bool,
    pub backing: Backing,
    /// Largest K with c_j(G) ≤ c_j(reference) for all j ≤ K; null when
    /// already c_0 fails or the check is not coefficientwise.
    pub dominance_prefix: Option<usize>,
    /// Bregman: relative top-coefficient gap and the K_{d,d}-free fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<(f64, String)>,
    pub failures: Vec<FailWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub graphs: usize,
    pub passed: usize,
    pub failed: usize,
    pub theorem_failures: usize,
    pub conjecture_counterexamples: usize,
    pub out_of_range: usize,
    pub unasserted: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub statement: Statement,
    pub class: ClassParams,
    pub k_range: Option<(usize, usize)>,
    pub lambda_grid: Vec<String>,
    pub results: Vec<GraphResult>,
    pub summary: Summary,
    pub repro: String,
}

impl Verdict {
    pub fn theorem_backed_failure(&self) -> bool {
        self.summary.theorem_failures > 0
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// A verification request. `graph6` restricts the run to one graph, which
/// is how failure witnesses are reproduced.
#[derive(Clone, Debug)]
pub struct VerifySpec {
    pub statement: Statement,
    pub d: usize,
    pub n: usize,
    pub kind: Kind,
    pub girth: usize,
    pub k_range: Option<(usize, usize)>,
    pub lambda_grid: Vec<BigRat>,
    pub graph6: Option<String>,
}

impl VerifySpec {
    pub fn new(statement: Statement, d: usize, n: usize, kind: Kind) -> Self {
        VerifySpec {
            statement,
            d,
            n,
            kind,
            girth: if statement == Statement::Girth5 { 5 } else { 3 },
            k_range: None,
            lambda_grid: Vec::new(),
            graph6: None,
        }
    }

    pub fn command(&self, graph6: Option<&str>) -> String {
        let mut s = format!("partfn verify {} --d {} --n {} --kind {}", self.statement.command(), self.d, self.n, self.kind);
        if self.girth > 3 && self.statement != Statement::Girth5 {
            s += &format!(" --girth {}", self.girth);
        }
        if let Some((a, b)) = self.k_range {
            s += &format!(" --k-range {a}..{b}");
        }
        if !self.lambda_grid.is_empty() {
            let g: Vec<String> = self.lambda_grid.iter().map(fmt_rat).collect();
            s += &format!(" --lambda {}", g.join(","));
        }
        if let Some(g6) = graph6.or(self.graph6.as_deref()) {
            s += &format!(" --graph6 '{g6}'");
        }
        s
    }

    fn class(&self) -> Result<Vec<Graph>> {
        match &self.graph6 {
            Some(g6) => {
                let g = from_graph6(g6)?;
                if g.n() != self.n || !g.is_regular(self.d) {
                    return Err(invalid(format!("graph is not {}-regular on {} vertices", self.d, self.n)));
                }
                if self.girth > 3 && g.girth().is_some_and(|x| x < self.girth) {
                    return Err(invalid(format!("graph has girth below {}", self.girth)));
                }
                Ok(vec![g])
            }
            None => enumerate_regular(&EnumerationConfig::new(self.d, self.n, self.girth)),
        }
    }
}

fn first_violation(g: &CoefVector, h: &CoefVector, ks: impl Iterator<Item = usize>) -> Option<(usize, BigUint, BigUint)> {
    ks.map(|k| (k, g.get(k), h.get(k))).find(|(_, a, b)| a > b)
}

/// None when c_0(G) > c_0(H).
fn dominance_prefix(g: &CoefVector, h: &CoefVector) -> Option<usize> {
    let top = g.top().max(h.top());
    match (0..=top).find(|&k| g.get(k) > h.get(k)) {
        None => Some(top),
        Some(0) => None,
        Some(k) => Some(k - 1),
    }
}

fn coef_witness(check: &str, (k, a, b): (usize, BigUint, BigUint)) -> FailWitness {
    FailWitness { check: check.into(), k: Some(k), lambda: None, lhs: a.to_string(), rhs: b.to_string() }
}

fn potts_range(d: usize, n: usize, q: u32) -> usize {
    d * n / (2 * q as usize)
}

fn coefficient_result(spec: &VerifySpec, g: &Graph, h: &CoefVector) -> Result<GraphResult> {
    let c = coeffs(g, spec.kind)?;
    let top = c.top().max(h.top());
    let (lo, hi) = spec.k_range.unwrap_or((0, top));
    let (backing, hi) = match spec.kind {
        Kind::Potts(2) => (Backing::Unasserted, hi.min(potts_range(spec.d, spec.n, 2))),
        Kind::Potts(q) => (Backing::Asymptotic, hi.min(potts_range(spec.d, spec.n, q))),
        _ => (Backing::Conjecture, hi),
    };
    let failures: Vec<FailWitness> =
        first_violation(&c, h, lo..=hi).map(|w| coef_witness("coefficient", w)).into_iter().collect();
    Ok(GraphResult {
        graph6: to_graph6(g),
        pass: failures.is_empty(),
        backing,
        dominance_prefix: dominance_prefix(&c, h),
        gap: None,
        failures,
        repro: None,
    })
}

fn z_at(c: &CoefVector, lambda: &BigRat) -> BigRat {
    c.coeffs.iter().rev().fold(BigRat::zero(), |acc, x| acc * lambda + from_biguint(x))
}

fn partition_result(spec: &VerifySpec, g: &Graph, k: &CoefVector) -> Result<GraphResult> {
    let c = coeffs(g, spec.kind)?;
    let d = spec.d;
    let kdd_size = GraphSize { n: 2 * d, m: d * d };
    let mut failures = Vec::new();
    let potts = matches!(spec.kind, Kind::Potts(_));
    for l in &spec.lambda_grid {
        if potts && (*l > BigRat::one() || d != 3) {
            continue;
        }
        let lhs = pow(&z_at(&c, l), 2 * d);
        let rhs = pow(&z_at(k, l), g.n());
        if lhs > rhs {
            failures.push(FailWitness {
                check: "partition".into(),
                k: None,
                lambda: Some(fmt_rat(l)),
                lhs: fmt_rat(&lhs),
                rhs: fmt_rat(&rhs),
            });
        }
        let og = occupancy_fraction(&c, GraphSize::of(g), l)?;
        let ok = occupancy_fraction(k, kdd_size, l)?;
        // colorings: the K_{3,3} energy is a lower bound
        let bad = if potts { og < ok } else { og > ok };
        if bad {
            failures.push(FailWitness {
                check: if potts { "energy" } else { "occupancy" }.into(),
                k: None,
                lambda: Some(fmt_rat(l)),
                lhs: fmt_rat(&og),
                rhs: fmt_rat(&ok),
            });
        }
    }
    Ok(GraphResult {
        graph6: to_graph6(g),
        pass: failures.is_empty(),
        backing: Backing::Theorem,
        dominance_prefix: None,
        gap: None,
        failures,
        repro: None,
    })
}

fn bregman_result(spec: &VerifySpec, g: &Graph, h: &CoefVector) -> Result<GraphResult> {
    let c = coeffs(g, Kind::Match)?;
    let half = spec.n / 2;
    let (a, b) = (c.get(half), h.get(half));
    let failures = if a > b {
        vec![coef_witness("top_coefficient", (half, a.clone(), b.clone()))]
    } else {
        Vec::new()
    };
    let rel = 1.0 - to_f64(&(from_biguint(&a) / from_biguint(&b)));
    let outside = fraction_outside_kdd(g, spec.d)?;
    Ok(GraphResult {
        graph6: to_graph6(g),
        pass: failures.is_empty(),
        backing: Backing::Theorem,
        dominance_prefix: None,
        gap: Some((rel, fmt_rat(&outside))),
        failures,
        repro: None,
    })
}

/// Runs one verification. Graphs are checked in parallel; results keep the
/// enumeration order so reruns are byte-identical.
pub fn run(spec: &VerifySpec) -> Result<Verdict> {
    let (d, n) = (spec.d, spec.n);
    let reference = match spec.statement {
        Statement::Girth5 => {
            if spec.kind != Kind::Ind || d != 3 || n % 14 != 0 {
                return Err(invalid("the girth-5 check is for independent sets in cubic graphs with 14 | n"));
            }
            coeffs(&heawood().disjoint_copies(n / 14), Kind::Ind)?
        }
        Statement::PartitionDominance => {
            if d == 0 {
                return Err(invalid("d must be positive"));
            }
            hdn_coeffs(spec.kind, d, 2 * d)?
        }
        Statement::Bregman => {
            if spec.kind != Kind::Match {
                return Err(invalid("the Bregman check is for matchings"));
            }
            hdn_coeffs(Kind::Match, d, n)?
        }
        Statement::CoefficientDominance => hdn_coeffs(spec.kind, d, n)?,
    };
    let graphs = spec.class()?;
    let mut results: Vec<GraphResult> = graphs
        .par_iter()
        .map(|g| match spec.statement {
            Statement::CoefficientDominance => coefficient_result(spec, g, &reference),
            Statement::Girth5 => coefficient_result(spec, g, &reference).map(|mut r| {
                r.backing = Backing::Asymptotic;
                r
            }),
            Statement::PartitionDominance => partition_result(spec, g, &reference),
            Statement::Bregman => bregman_result(spec, g, &reference),
        })
        .collect::<Result<_>>()?;
    let mut summary = Summary { graphs: results.len(), ..Summary::default() };
    for r in &mut results {
        if r.pass {
            summary.passed += 1;
            continue;
        }
        r.repro = Some(spec.command(Some(&r.graph6)));
        match r.backing {
            Backing::Unasserted => {
                summary.unasserted += 1;
                summary.passed += 1;
                continue;
            }
            Backing::Theorem => summary.theorem_failures += 1,
            Backing::Conjecture => summary.conjecture_counterexamples += 1,
            Backing::Asymptotic => summary.out_of_range += 1,
        }
        summary.failed += 1;
    }
    Ok(Verdict {
        statement: spec.statement,
        class: ClassParams { d, n, girth: spec.girth, kind: spec.kind.to_string(), q: spec.kind.q() },
        k_range: spec.k_range,
        lambda_grid: spec.lambda_grid.iter().map(fmt_rat).collect(),
        results,
        summary,
        repro: spec.command(None),
    })
}

/// c_k(G) ≤ c_k(H_{d,n}) for every enumerated d-regular G. Colorings are
/// restricted to k ≤ dn/2q; q = 2 is computed but not asserted.
pub fn verify_coefficient_dominance(d: usize, n: usize, kind: Kind, k_range: Option<(usize, usize)>) -> Result<Verdict> {
    let mut spec = VerifySpec::new(Statement::CoefficientDominance, d, n, kind);
    spec.k_range = k_range;
    run(&spec)
}

/// Z_G(λ)^{2d} ≤ Z_{K_{d,d}}(λ)^n and occupancy dominance at each grid λ.
/// For colorings only d = 3 and λ ≤ 1 are checked, with the energy bound
/// reversed.
pub fn verify_partition_dominance(d: usize, n: usize, kind: Kind, lambda_grid: &[BigRat]) -> Result<Verdict> {
    let mut spec = VerifySpec::new(Statement::PartitionDominance, d, n, kind);
    spec.lambda_grid = lambda_grid.to_vec();
    run(&spec)
}

/// i_k(G) ≤ i_k(HW_n) over cubic graphs of girth at least 5.
pub fn verify_girth5(n: usize, k_range: Option<(usize, usize)>) -> Result<Verdict> {
    let mut spec = VerifySpec::new(Statement::Girth5, 3, n, Kind::Ind);
    spec.k_range = k_range;
    run(&spec)
}

/// m_{n/2}(G) ≤ m_{n/2}(H_{d,n}); each result carries the relative gap and
/// the K_{d,d}-free fraction.
pub fn verify_bregman_regular(d: usize, n: usize) -> Result<Verdict> {
    run(&VerifySpec::new(Statement::Bregman, d, n, Kind::Match))
}

/// Pearson correlation of Bregman gaps with the K_{d,d}-free fraction.
pub fn bregman_gap_correlation(v: &Verdict) -> Option<f64> {
    let pts: Vec<(f64, f64)> = v
        .results
        .iter()
        .filter_map(|r| r.gap.as_ref())
        .filter_map(|(g, f)| parse_rat(f).ok().map(|x| (to_f64(&x), *g)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Largest k with c_j(G) ≤ c_j(H) for all j ≤ k (None if c_0 fails), and
/// the range bound ⌊dn/2q⌋.
pub fn potts_dominance_range(g: &Graph, h: &Graph, q: u32) -> Result<(Option<usize>, usize)> {
    let d = g.max_degree();
    let a = coeffs(g, Kind::Potts(q))?;
    let b = coeffs(h, Kind::Potts(q))?;
    Ok((dominance_prefix(&a, &b), potts_range(d, g.n(), q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::graph::{complete_bipartite, cycle, generalized_petersen, prism};

    #[test]
    fn cycles_dominated() {
        let v = verify_coefficient_dominance(2, 8, Kind::Match, None).unwrap();
        assert_eq!(v.summary.graphs, 3);
        assert!(v.all_pass());
        let c8 = coeffs(&cycle(8), Kind::Match).unwrap();
        assert_eq!(c8.coeffs, CoefVector::from_u64(Kind::Match, &[1, 8, 20, 16, 2]).coeffs);
    }

    #[test]
    fn cubic_six_and_hdn_equality() {
        for kind in [Kind::Match, Kind::Ind] {
            let v = verify_coefficient_dominance(3, 6, kind, None).unwrap();
            assert_eq!(v.summary.graphs, 2);
            assert!(v.all_pass());
        }
        let mut spec = VerifySpec::new(Statement::CoefficientDominance, 3, 6, Kind::Match);
        spec.graph6 = Some(to_graph6(&complete_bipartite(3, 3)));
        let v = run(&spec).unwrap();
        assert_eq!(v.results[0].dominance_prefix, Some(3));
    }

    #[test]
    fn partition_grid() {
        let grid = [int(0), rat(1, 2), int(1), int(2)];
        let v = verify_partition_dominance(3, 8, Kind::Match, &grid).unwrap();
        assert!(v.all_pass() && !v.theorem_backed_failure());
        let v = verify_partition_dominance(3, 6, Kind::Potts(3), &grid).unwrap();
        assert!(v.all_pass());
    }

    #[test]
    fn prism_partition_below_kdd() {
        let zp = z_at(&coeffs(&prism(), Kind::Match).unwrap(), &int(1));
        assert!(zp < int(34));
        assert!(pow(&zp, 6) < pow(&int(34), 6));
    }

    #[test]
    fn bregman_values() {
        let v = verify_bregman_regular(3, 12).unwrap();
        assert!(v.all_pass());
        let u = prism().disjoint_union(&complete_bipartite(3, 3));
        let mut spec = VerifySpec::new(Statement::Bregman, 3, 12, Kind::Match);
        spec.graph6 = Some(to_graph6(&u));
        let r = &run(&spec).unwrap().results[0];
        assert_eq!(r.gap.as_ref().unwrap().1, "1/2");
        let c = coeffs(&u, Kind::Match).unwrap();
        assert_eq!(c.get(6), BigUint::from(24u32));
        assert!(bregman_gap_correlation(&v).is_some_and(|c| c > 0.0));
    }

    #[test]
    fn potts_q2_unasserted() {
        let v = verify_coefficient_dominance(3, 6, Kind::Potts(2), None).unwrap();
        assert_eq!(v.summary.failed, 0);
        assert!(v.results.iter().all(|r| r.backing == Backing::Unasserted));
    }

    #[test]
    fn potts_prism_range() {
        // at six vertices the prism already has more colorings with one
        // monochromatic edge: 90 vs 54 (q = 3), 936 vs 648 (q = 4)
        for (q, range) in [(3, 3), (4, 2)] {
            let got = potts_dominance_range(&prism(), &complete_bipartite(3, 3), q).unwrap();
            assert_eq!(got, (Some(0), range));
        }
    }

    #[test]
    fn repro_reruns_one_graph() {
        let mut spec = VerifySpec::new(Statement::CoefficientDominance, 3, 6, Kind::Ind);
        spec.graph6 = Some(to_graph6(&prism()));
        let v = run(&spec).unwrap();
        assert_eq!(v.summary.graphs, 1);
        assert!(v.repro.contains("--graph6"));
        spec.graph6 = Some(to_graph6(&cycle(6)));
        assert!(run(&spec).is_err());
    }

    #[test]
    fn petersen_7_2_vs_heawood() {
        let gp = generalized_petersen(7, 2);
        assert_eq!(gp.girth(), Some(5));
        let mut spec = VerifySpec::new(Statement::Girth5, 3, 14, Kind::Ind);
        spec.graph6 = Some(to_graph6(&gp));
        let v = run(&spec).unwrap();
        assert_eq!(v.results[0].backing, Backing::Asymptotic);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let a = verify_coefficient_dominance(2, 12, Kind::Match, None).unwrap().to_json();
        let b = verify_coefficient_dominance(2, 12, Kind::Match, None).unwrap().to_json();
        assert_eq!(a, b);
    }
}
