//! Size distributions of disjoint unions of K_{d,d}, the local limit
//! comparison with a Gaussian, and exact evaluation of the inequalities used
//! to move from occupancy bounds to individual coefficients.
//!
//! Everything here is exact except [`gnedenko_deviation`], which compares
//! an exact distribution against the Gaussian density in 256-bit floating
//! point (see [`crate::hp`]).

use std::io::Write;

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::distance::fraction_outside_kdd;
use crate::error::{invalid, Error, Result};
use crate::exact::{fmt_rat, from_biguint, int, pow, to_f64, BigRat};
use crate::graph::Graph;
use crate::hp::{Hp, PRECISION};
use crate::observables::{default_tune_tolerance, size_distribution, tune_lambda, SizeDistribution};
use crate::polys::{coeffs, convolve, hdn_coeffs, kdd_ind_coeffs, kdd_match_coeffs, potts_coeffs, CoefVector, Kind};

/// Below this many output coefficients convolution runs serially.
const PAR_THRESHOLD: usize = 64;

fn par_convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let len = a.len() + b.len() - 1;
    if len < PAR_THRESHOLD {
        return convolve(a, b);
    }
    (0..len)
        .into_par_iter()
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let mut s = BigUint::zero();
            for i in lo..=hi {
                s += &a[i] * &b[k - i];
            }
            s
        })
        .collect()
}

fn par_power(base: &[BigUint], k: usize) -> Vec<BigUint> {
    let mut acc = vec![BigUint::one()];
    let mut sq = base.to_vec();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = par_convolve(&acc, &sq);
        }
        e >>= 1;
        if e > 0 {
            sq = par_convolve(&sq, &sq);
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct ConvolutionPower {
    pub base: SizeDistribution,
    pub k: usize,
    pub dist: SizeDistribution,
}

/// Distribution of the sum of `k` independent copies of `base`.
pub fn convolution_power(base: &SizeDistribution, k: usize) -> Result<ConvolutionPower> {
    if k == 0 {
        return Err(invalid("the number of components must be at least 1"));
    }
    let den = base.prob.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let weights: Vec<BigUint> = base
        .prob
        .iter()
        .map(|p| (p * BigRat::from_integer(den.clone())).to_integer())
        .map(|w| w.to_biguint().ok_or_else(|| invalid("negative probability")))
        .collect::<Result<_>>()?;
    let total = BigRat::from_integer(pow(&BigRat::from_integer(den), k).to_integer());
    let prob = par_power(&weights, k).iter().map(|w| from_biguint(w) / &total).collect();
    let dist = SizeDistribution { kind: base.kind, lambda: base.lambda.clone(), prob };
    Ok(ConvolutionPower { base: base.clone(), k, dist })
}

fn kdd_coeffs(d: usize, kind: Kind) -> Result<CoefVector> {
    Ok(match kind {
        Kind::Match => kdd_match_coeffs(d),
        Kind::Ind => kdd_ind_coeffs(d),
        Kind::Potts(q) => potts_coeffs(&crate::graph::complete_bipartite(d, d), q)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GnedenkoRow {
    pub k: usize,
    pub probability: String,
    pub gaussian: String,
    pub deviation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GnedenkoReport {
    pub components: usize,
    pub mean: String,
    pub variance: String,
    pub argmax: usize,
    /// Decimal string with 50 significant digits.
    pub max_deviation: String,
    pub max_deviation_f64: f64,
    /// max_deviation · √K.
    pub scaled: f64,
    pub rows: Vec<GnedenkoRow>,
}

impl GnedenkoReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        out.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Digits printed for every floating value in the report.
const DIGITS: usize = 50;

/// max_k |P(S_K = k) − φ(k; Kμ, Kσ²)| for S_K a sum of K copies of `base`.
pub fn gnedenko_deviation(base: &SizeDistribution, k: usize) -> Result<GnedenkoReport> {
    let lattice = base.prob.windows(2).any(|w| !w[0].is_zero() && !w[1].is_zero());
    if !lattice {
        return Err(invalid("base support contains no two consecutive integers"));
    }
    let sum = convolution_power(base, k)?.dist;
    let kk = int(k as i64);
    let mean = base.mean() * &kk;
    let var = base.variance() * &kk;
    let mut hp = Hp::new();
    let mut best: Option<(usize, BigFloat)> = None;
    let mut rows = Vec::with_capacity(sum.prob.len());
    for (i, p) in sum.prob.iter().enumerate() {
        let g = hp.gaussian(&int(i as i64), &mean, &var);
        let exact = hp.from_rat(p);
        let dev = exact.sub(&g, PRECISION, astro_float::RoundingMode::ToEven).abs();
        rows.push(GnedenkoRow {
            k: i,
            probability: fmt_rat(p),
            gaussian: hp.to_string(&g, DIGITS),
            deviation: hp.to_string(&dev, DIGITS),
        });
        if best.as_ref().is_none_or(|(_, b)| dev > *b) {
            best = Some((i, dev));
        }
    }
    let (argmax, dev) = best.expect("nonempty distribution");
    let max_f = hp.to_f64(&dev);
    Ok(GnedenkoReport {
        components: k,
        mean: fmt_rat(&mean),
        variance: fmt_rat(&var),
        argmax,
        max_deviation: hp.to_string(&dev, DIGITS),
        max_deviation_f64: max_f,
        scaled: max_f * (k as f64).sqrt(),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub r: usize,
    /// λ^r m_k / m_{k−r}.
    pub ratio: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct RatioLemmaReport {
    pub kind: Kind,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub epsilon: BigRat,
    pub lambda: BigRat,
    /// 2ε/d for matchings.
    pub lambda_lower: Option<BigRat>,
    /// Matchings: λ at which a K_{d,d} has mean (1−ε)d. Colorings: 1.
    pub lambda_upper: BigRat,
    pub lambda_in_range: bool,
    pub rows: Vec<RatioRow>,
    pub sandwich: bool,
}

impl RatioLemmaReport {
    pub fn ok(&self) -> bool {
        self.lambda_in_range && self.sandwich
    }
}

fn lemma_epsilon(kind: Kind, d: usize, n: usize, k: usize) -> Result<BigRat> {
    let kr = int(k as i64);
    let nr = int(n as i64);
    let top = match kind {
        Kind::Match => int(1) - int(2) * &kr / &nr,
        Kind::Potts(q) => int(1) - int(2 * q as i64) * &kr / int((d * n) as i64),
        Kind::Ind => return Err(invalid("the ratio lemma is stated for matchings and colorings")),
    };
    let eps = (&kr / &nr).min(top);
    if eps <= BigRat::zero() {
        return Err(invalid(format!("k = {k} is outside the lemma's range for n = {n}")));
    }
    Ok(eps)
}

/// Tunes λ so that H_{d,n} has mean size k and checks
/// (1−δ)m_{k−r} ≤ λ^r m_k ≤ (1+δ)m_{k−r} for 0 ≤ r ≤ r_max.
pub fn ratio_lemma_check(d: usize, n: usize, k: usize, r_max: usize, delta: &BigRat, kind: Kind) -> Result<RatioLemmaReport> {
    if d == 0 || !n.is_multiple_of(2 * d) {
        return Err(invalid(format!("2d must divide n (d={d}, n={n})")));
    }
    if r_max > k {
        return Err(invalid("r_max exceeds k"));
    }
    let epsilon = lemma_epsilon(kind, d, n, k)?;
    let base = kdd_coeffs(d, kind)?;
    let comps = n / (2 * d);
    let target = int(k as i64) / int(comps as i64);
    let lambda = tune_lambda(&base, &target, &default_tune_tolerance())?.lambda;
    let (lambda_lower, lambda_upper) = match kind {
        Kind::Match => {
            let lower = int(2) * &epsilon / int(d as i64);
            let upper_target = (int(1) - &epsilon) * int(d as i64);
            let upper = tune_lambda(&base, &upper_target, &default_tune_tolerance())?.hi;
            (Some(lower), upper)
        }
        _ => (None, int(1)),
    };
    let lambda_in_range = match &lambda_lower {
        Some(lo) => lambda >= *lo && lambda <= lambda_upper,
        None => lambda < lambda_upper,
    };
    let h = CoefVector::new(kind, par_power(&base.coeffs, comps));
    let mk = from_biguint(&h.get(k));
    let lo = int(1) - delta;
    let hi = int(1) + delta;
    let mut rows = Vec::with_capacity(r_max + 1);
    let mut lr = BigRat::one();
    for r in 0..=r_max {
        let prev = from_biguint(&h.get(k - r));
        let mid = &lr * &mk;
        let holds = &lo * &prev <= mid && mid <= &hi * &prev;
        let ratio = if prev.is_zero() { "inf".to_string() } else { fmt_rat(&(&mid / &prev)) };
        rows.push(RatioRow { r, ratio, holds });
        lr *= &lambda;
    }
    let sandwich = rows.iter().all(|r| r.holds);
    Ok(RatioLemmaReport { kind, d, n, k, epsilon, lambda, lambda_lower, lambda_upper, lambda_in_range, rows, sandwich })
}

/// Smallest n = 2d·K in [2d, n_max] for which the sandwich holds at
/// k = ⌊n·k_fraction⌋.
pub fn ratio_lemma_first_n(
    d: usize,
    k_fraction: &BigRat,
    r_max: usize,
    delta: &BigRat,
    kind: Kind,
    n_max: usize,
) -> Result<Option<usize>> {
    for n in (2 * d..=n_max).step_by(2 * d) {
        let k = (k_fraction * int(n as i64)).floor().to_integer();
        let k: usize = k.try_into().map_err(|_| invalid("k out of range"))?;
        if k < r_max || lemma_epsilon(kind, d, n, k).is_err() {
            continue;
        }
        if ratio_lemma_check(d, n, k, r_max, delta, kind)?.sandwich {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransferCase {
    Small1,
    Small2,
    Large,
}

impl std::str::FromStr for TransferCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "small1" => Ok(TransferCase::Small1),
            "small2" => Ok(TransferCase::Small2),
            "large" => Ok(TransferCase::Large),
            _ => Err(Error::Parse(format!("unknown case {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditParams {
    pub delta: BigRat,
    pub delta_prime: BigRat,
}

impl Default for AuditParams {
    fn default() -> Self {
        AuditParams { delta: crate::exact::rat(1, 3), delta_prime: crate::exact::rat(1, 10) }
    }
}

/// One inequality lhs ≤ rhs (or lhs < rhs when `strict`).
#[derive(Clone, Debug, Serialize)]
pub struct AuditItem {
    pub name: String,
    #[serde(serialize_with = "ser_rat")]
    pub lhs: BigRat,
    #[serde(serialize_with = "ser_rat")]
    pub rhs: BigRat,
    pub strict: bool,
    pub holds: bool,
    /// rhs / lhs, or null when lhs = 0.
    pub factor: Option<f64>,
}

fn ser_rat<S: serde::Serializer>(x: &BigRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(x))
}

fn item(name: &str, lhs: BigRat, rhs: BigRat, strict: bool) -> AuditItem {
    let holds = if strict { lhs < rhs } else { lhs <= rhs };
    let factor = (!lhs.is_zero()).then(|| to_f64(&(&rhs / &lhs)));
    AuditItem { name: name.to_string(), lhs, rhs, strict, holds, factor }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferAudit {
    pub case: TransferCase,
    pub kind: String,
    pub d: usize,
    pub n: usize,
    pub n1: usize,
    pub k: usize,
    pub lambda: Option<String>,
    pub split: Option<usize>,
    pub items: Vec<AuditItem>,
}

impl TransferAudit {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| i.holds)
    }

    pub fn get(&self, name: &str) -> Option<&AuditItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

fn c(v: &CoefVector, k: usize) -> BigRat {
    from_biguint(&v.get(k))
}

fn z(v: &CoefVector, lambda: &BigRat) -> BigRat {
    let mut s = BigRat::zero();
    let mut p = BigRat::one();
    for x in &v.coeffs {
        s += from_biguint(x) * &p;
        p *= lambda;
    }
    s
}

fn empty_or_hdn(kind: Kind, d: usize, n: usize) -> Result<CoefVector> {
    if n == 0 {
        Ok(CoefVector::one(kind))
    } else {
        hdn_coeffs(kind, d, n)
    }
}

/// Evaluates the inequalities of one case of the transfer argument for
/// G = G′ ⊔ H_{d,n−n₁}, with n₁ = |G′|. Each displayed step is reported
/// separately with its two sides.
pub fn transfer_inequality_audit(
    gprime: &Graph,
    d: usize,
    n: usize,
    k: usize,
    case: TransferCase,
    kind: Kind,
    params: &AuditParams,
) -> Result<TransferAudit> {
    let n1 = gprime.n();
    if !gprime.is_regular(d) {
        return Err(invalid(format!("G' is not {d}-regular")));
    }
    if fraction_outside_kdd(gprime, d)? != BigRat::one() {
        return Err(invalid("G' has a K_{d,d} component"));
    }
    if !n1.is_multiple_of(2 * d) || !n.is_multiple_of(2 * d) || n < n1 {
        return Err(invalid(format!("need 2d | n1, 2d | n and n1 <= n (n1={n1}, n={n})")));
    }
    let n2 = n - n1;
    let gp = coeffs(gprime, kind)?;
    let h_prime = hdn_coeffs(kind, d, n1)?;
    let h2 = empty_or_hdn(kind, d, n2)?;
    let h = hdn_coeffs(kind, d, n)?;
    let g = CoefVector::new(kind, par_convolve(&gp.coeffs, &h2.coeffs));
    let conclusion = item("conclusion", c(&g, k), c(&h, k), false);
    let mut audit = TransferAudit {
        case,
        kind: kind.to_string(),
        d,
        n,
        n1,
        k,
        lambda: None,
        split: None,
        items: Vec::new(),
    };
    let delta = &params.delta;
    match (kind, case) {
        (Kind::Potts(q), TransferCase::Small1) => {
            let qq = int(q as i64);
            let items = &mut audit.items;
            items.push(item("top_gap", c(&gp, 0), (int(1) - delta) * c(&h_prime, 0), false));
            if k == 0 {
                return Err(invalid("the coloring claim needs k >= 1"));
            }
            items.push(item("claim", c(&h, k - 1), delta * pow(&qq, n1).recip() * c(&h, k), true));
            let tail = (0..k).map(|j| c(&h2, j)).max().unwrap_or_default();
            items.push(item("tail_absorbed", pow(&qq, n1) * tail, delta * c(&h2, k), false));
            items.push(item("split", c(&g, k), c(&h_prime, 0) * c(&h2, k), false));
            items.push(conclusion);
        }
        (Kind::Potts(_), _) | (Kind::Ind, _) => {
            return Err(invalid("only the matching cases and the coloring small1 case are audited"));
        }
        (Kind::Match, TransferCase::Small1) => {
            let half = n1 / 2;
            if k < half || 2 * k > n {
                return Err(invalid("small1 needs n1/2 <= k <= n/2"));
            }
            let items = &mut audit.items;
            items.push(item("top_gap", c(&gp, half), (int(1) - delta) * c(&h_prime, half), false));
            if !c(&h, k).is_zero() {
                let ratio = c(&h, k + 1) / c(&h, k);
                let bound = int((d * (n - 2 * k)) as i64) / int(2 * (k as i64 + 1));
                items.push(item("ratio_bound", ratio.clone(), bound, false));
                let two = pow(&int(2), d * half);
                items.push(item("top_only", ratio, delta / two, true));
            }
            let two = pow(&int(2), d * half);
            let tail = (k - half + 1..=h2.top()).map(|j| c(&h2, j)).max().unwrap_or_default();
            items.push(item("tail_absorbed", two * tail, delta * c(&h2, k - half), false));
            items.push(item("split", c(&g, k), c(&h_prime, half) * c(&h2, k - half), false));
            items.push(conclusion);
        }
        (Kind::Match, TransferCase::Small2) => {
            if n2 == 0 {
                return Err(invalid("Small-2 needs a nonempty K_{d,d} part"));
            }
            let half = n1 / 2;
            let target = int(k as i64);
            let lambda = tune_lambda(&h2, &target, &default_tune_tolerance())?.lambda;
            let eps = lemma_epsilon(Kind::Match, d, n, k)?;
            let dp = &params.delta_prime;
            let items = &mut audit.items;
            items.push(item("lambda_lower", int(2) * eps / int(d as i64), lambda.clone(), false));
            let mk = c(&h2, k);
            let mut worst_lo = None::<AuditItem>;
            let mut worst_hi = None::<AuditItem>;
            let mut lr = BigRat::one();
            for r in 0..=half.min(k) {
                let prev = c(&h2, k - r);
                let mid = &lr * &mk;
                let lo = item("sandwich_lower", (int(1) - dp) * &prev, mid.clone(), false);
                let hi = item("sandwich_upper", mid, (int(1) + dp) * prev, false);
                if worst_lo.as_ref().is_none_or(|w| !lo.holds && w.holds) {
                    worst_lo = Some(lo);
                }
                if worst_hi.as_ref().is_none_or(|w| !hi.holds && w.holds) {
                    worst_hi = Some(hi);
                }
                lr *= &lambda;
            }
            items.extend(worst_lo);
            items.extend(worst_hi);
            let zg = z(&gp, &lambda);
            let zh = z(&h_prime, &lambda);
            items.push(item("z_gap", zg, (int(1) - dp) / (int(1) + int(2) * dp) * zh, false));
            items.push(conclusion);
            audit.lambda = Some(fmt_rat(&lambda));
        }
        (Kind::Match, TransferCase::Large) => {
            if n2 == 0 || k == 0 || 2 * k >= n {
                return Err(invalid("Large needs a nonempty K_{d,d} part and 0 < k < n/2"));
            }
            let half = n1 / 2;
            let target = int(k as i64);
            let lambda = tune_lambda(&h, &target, &default_tune_tolerance())?.lambda;
            let s = (0..=half.min(k))
                .max_by(|&a, &b| (c(&gp, a) * c(&h2, k - a)).cmp(&(c(&gp, b) * c(&h2, k - b))).then(b.cmp(&a)))
                .expect("nonempty range");
            let mult = int(half as i64 + 1);
            let a = k * n1 / n;
            let b = (k * n2).div_ceil(n);
            let items = &mut audit.items;
            items.push(item("most_likely_split", c(&g, k), &mult * c(&gp, s) * c(&h2, k - s), false));
            items.push(item("balanced_split", c(&h_prime, a) * c(&h2, b), c(&h, k), false));
            let pg = size_distribution(&gp, &lambda)?;
            let ph1 = size_distribution(&h_prime, &lambda)?;
            let ph2 = size_distribution(&h2, &lambda)?;
            let denom = z(&gp, &lambda) * pg.get(s) * ph2.get(k - s);
            let product = if denom.is_zero() {
                return Err(Error::Degenerate("most likely split has probability zero".into()));
            } else {
                z(&h_prime, &lambda) * ph1.get(a) * ph2.get(b) / denom
            };
            items.push(item("cancelled", mult, product, false));
            items.push(conclusion);
            audit.lambda = Some(fmt_rat(&lambda));
            audit.split = Some(s);
        }
    }
    Ok(audit)
}

/// m_{k+1}/m_k ≤ d(n−2k)/(2(k+1)) on H_{d,n} for every k; returns the
/// first k where it fails.
pub fn free_volume_ratio_bound_check(d: usize, n: usize) -> Result<Option<usize>> {
    let h = hdn_coeffs(Kind::Match, d, n)?;
    for k in 0..h.top() {
        let lhs = BigInt::from(h.get(k + 1)) * BigInt::from(2 * (k + 1));
        let rhs = BigInt::from(h.get(k)) * BigInt::from(d * (n - 2 * k));
        if lhs > rhs {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::graph::{complete_bipartite, enumerate_regular, prism, EnumerationConfig};
    use proptest::prelude::*;

    fn kdd_dist(d: usize, l: &BigRat) -> SizeDistribution {
        size_distribution(&kdd_match_coeffs(d), l).unwrap()
    }

    #[test]
    fn power_matches_union() {
        for l in [rat(1, 2), int(1), int(2)] {
            let p = convolution_power(&kdd_dist(3, &l), 2).unwrap();
            let direct = size_distribution(&hdn_coeffs(Kind::Match, 3, 12).unwrap(), &l).unwrap();
            assert_eq!(p.dist, direct);
        }
    }

    #[test]
    fn power_one_and_mean() {
        let base = kdd_dist(3, &int(1));
        assert_eq!(convolution_power(&base, 1).unwrap().dist, base);
        let p = convolution_power(&base, 50).unwrap();
        assert_eq!(p.dist.mean(), int(50) * rat(63, 34));
        assert_eq!(p.dist.variance(), int(50) * base.variance());
        assert_eq!(p.dist.total(), int(1));
        assert!(convolution_power(&base, 0).is_err());
    }

    #[test]
    fn parallel_convolution_agrees() {
        let a: Vec<BigUint> = (1..100u32).map(BigUint::from).collect();
        let b: Vec<BigUint> = (3..80u32).map(|x| BigUint::from(x * x)).collect();
        assert_eq!(par_convolve(&a, &b), convolve(&a, &b));
    }

    #[test]
    fn lattice_violation_flagged() {
        let base = SizeDistribution { kind: Kind::Match, lambda: int(1), prob: vec![rat(1, 2), int(0), rat(1, 2)] };
        assert!(gnedenko_deviation(&base, 10).is_err());
    }

    #[test]
    fn bernoulli_deviation_shrinks() {
        let base = SizeDistribution { kind: Kind::Match, lambda: int(1), prob: vec![rat(1, 2), rat(1, 2)] };
        let a = gnedenko_deviation(&base, 16).unwrap().max_deviation_f64;
        let b = gnedenko_deviation(&base, 256).unwrap().max_deviation_f64;
        assert!(b < a / 4.0, "{a} {b}");
    }

    #[test]
    fn kdd_scaled_deviation_decreases() {
        let base = kdd_dist(3, &int(1));
        let s: Vec<f64> = [25, 100].iter().map(|&k| gnedenko_deviation(&base, k).unwrap().scaled).collect();
        assert!(s[1] <= s[0] * 1.05, "{s:?}");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let base = kdd_dist(2, &int(1));
        let r = gnedenko_deviation(&base, 3).unwrap();
        let text = r.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,probability,gaussian,deviation"));
        assert_eq!(lines.count(), 7);
    }

    #[test]
    fn ratio_r0_trivial_and_range_errors() {
        let r = ratio_lemma_check(3, 24, 6, 0, &rat(1, 10), Kind::Match).unwrap();
        assert!(r.sandwich && r.lambda_in_range);
        assert!(ratio_lemma_check(3, 24, 12, 0, &rat(1, 10), Kind::Match).is_err());
        assert!(ratio_lemma_check(3, 24, 0, 0, &rat(1, 10), Kind::Match).is_err());
        assert!(ratio_lemma_check(3, 25, 6, 0, &rat(1, 10), Kind::Match).is_err());
    }

    #[test]
    fn ratio_lambda_bounds() {
        for (n, k) in [(60, 12), (120, 30), (120, 45)] {
            let r = ratio_lemma_check(3, n, k, 2, &rat(1, 2), Kind::Match).unwrap();
            assert!(r.lambda_in_range, "n={n} k={k}");
            // λ/(1+λ) ≥ 2k/(nd)
            let l = &r.lambda;
            assert!(l / (int(1) + l) >= int(2 * k as i64) / int((n * 3) as i64));
        }
    }

    #[test]
    fn potts_ratio_lambda_below_one() {
        let r = ratio_lemma_check(3, 24, 4, 1, &rat(1, 2), Kind::Potts(3)).unwrap();
        assert!(r.lambda < int(1) && r.lambda_in_range);
    }

    #[test]
    fn top_gap_on_prism() {
        let a = transfer_inequality_audit(&prism(), 3, 6, 3, TransferCase::Small1, Kind::Match, &AuditParams::default())
            .unwrap();
        let t = a.get("top_gap").unwrap();
        assert_eq!((t.lhs.clone(), t.rhs.clone()), (int(4), rat(2, 3) * int(6)));
        assert!(t.holds);
    }

    #[test]
    fn ratio_bound_on_hdn() {
        for n in (6..=240).step_by(6) {
            assert_eq!(free_volume_ratio_bound_check(3, n).unwrap(), None, "n={n}");
        }
    }

    #[test]
    fn large_case_chain() {
        let gs = enumerate_regular(&EnumerationConfig::new(3, 12, 3)).unwrap();
        let g = gs.into_iter().find(|g| fraction_outside_kdd(g, 3).unwrap() == int(1)).unwrap();
        let a = transfer_inequality_audit(&g, 3, 24, 8, TransferCase::Large, Kind::Match, &AuditParams::default()).unwrap();
        assert!(a.get("most_likely_split").unwrap().holds);
        assert!(a.get("balanced_split").unwrap().holds);
        assert!(a.get("conclusion").unwrap().holds);
        assert!(a.split.is_some());
    }

    #[test]
    fn audit_preconditions() {
        let p = AuditParams::default();
        assert!(transfer_inequality_audit(&complete_bipartite(3, 3), 3, 12, 3, TransferCase::Small1, Kind::Match, &p).is_err());
        assert!(transfer_inequality_audit(&prism(), 3, 8, 3, TransferCase::Small1, Kind::Match, &p).is_err());
    }

    #[test]
    fn potts_claim_evaluated() {
        let a = transfer_inequality_audit(&prism(), 3, 24, 1, TransferCase::Small1, Kind::Potts(3), &AuditParams::default())
            .unwrap();
        assert!(a.get("claim").is_some() && a.get("top_gap").unwrap().holds);
        assert!(a.get("conclusion").unwrap().holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn power_mean_and_variance(num in 1i64..8, den in 1i64..8, k in 1usize..12, d in 1usize..4) {
            let base = kdd_dist(d, &rat(num, den));
            let p = convolution_power(&base, k).unwrap();
            let kk = int(k as i64);
            prop_assert_eq!(p.dist.mean(), base.mean() * &kk);
            prop_assert_eq!(p.dist.variance(), base.variance() * &kk);
            let direct = size_distribution(&hdn_coeffs(Kind::Match, d, 2 * d * k).unwrap(), &rat(num, den)).unwrap();
            prop_assert_eq!(p.dist, direct);
        }
    }
}
