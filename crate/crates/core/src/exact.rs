//! Exact rationals, univariate rational polynomials and sign decisions.
//!
//! Sign questions of the form "is p(x) >= 0 for every x >= 0" are decided
//! with Sturm sequences and rational bisection: no sampling, no tolerance.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub type BigRat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn from_biguint(n: &BigUint) -> BigRat {
    BigRat::from_integer(BigInt::from(n.clone()))
}

/// `x^k` for a non-negative exponent.
pub fn pow(x: &BigRat, k: usize) -> BigRat {
    num_traits::pow(x.clone(), k)
}

/// Parses `"a/b"`, `"a"` or a terminating decimal such as `"0.25"`.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRat::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRat::from_integer(n))
}

/// Canonical string form `a/b` (or `a` for integers).
pub fn fmt_rat(x: &BigRat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Lossy conversion for human-readable output only.
pub fn to_f64(x: &BigRat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of `x^i`.
/// The highest stored coefficient is never zero; the zero polynomial has no
/// coefficients and degree -1.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rat).collect();
        write!(f, "RatPoly[{}]", parts.join(", "))
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn from_biguints(cs: &[BigUint]) -> Self {
        Self::new(cs.iter().map(from_biguint).collect())
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, div: &RatPoly) -> RatPoly {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dl = div.coeffs.len();
        let lead = div.leading();
        while r.len() >= dl {
            let shift = r.len() - dl;
            let factor = r.last().unwrap() / &lead;
            if !factor.is_zero() {
                for (j, c) in div.coeffs.iter().enumerate() {
                    r[shift + j] -= &factor * c;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    /// Divides out the largest power of `x`, returning `(m, q)` with `p = x^m q`.
    fn strip_x(&self) -> (usize, RatPoly) {
        let m = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (m, RatPoly::new(self.coeffs[m..].to_vec()))
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<RatPoly> {
        let mut seq = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }
}

fn sign_changes(seq: &[RatPoly], x: &BigRat) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Cauchy bound: every real root has absolute value below the result.
pub fn root_bound(p: &RatPoly) -> BigRat {
    let lead = p.leading().abs();
    let m = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRat::zero);
    m + BigRat::one()
}

/// Returns a rational `x >= 0` with `p(x) < 0`, or `None` when `p >= 0` on `[0, inf)`.
pub fn find_negative_point(p: &RatPoly) -> Option<BigRat> {
    if p.is_zero() {
        return None;
    }
    let (_, q) = p.strip_x();
    // p = x^m q and x^m >= 0, so it suffices to check q on (0, inf),
    // equivalently on [0, inf) by continuity.
    let zero = BigRat::zero();
    if q.eval(&zero).is_negative() {
        return Some(zero);
    }
    if q.degree() <= 0 {
        return None;
    }
    let bound = root_bound(&q);
    if q.leading().is_negative() {
        return Some(bound);
    }
    let sturm = q.sturm_sequence();
    // Bisect (0, bound] until each piece holds at most one distinct root,
    // keeping every endpoint off the roots. Consecutive roots are then
    // separated by some endpoint, so checking endpoints decides the sign.
    let mut stack = vec![(zero, bound)];
    while let Some((a, b)) = stack.pop() {
        if q.eval(&b).is_negative() {
            return Some(b);
        }
        let count = sign_changes(&sturm, &a) as isize - sign_changes(&sturm, &b) as isize;
        if count <= 1 {
            continue;
        }
        let mut m = (&a + &b) / int(2);
        let mut k = 3;
        while q.eval(&m).is_zero() {
            m = &a + (&b - &a) / int(k);
            k += 1;
        }
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
    None
}

/// True iff `p(x) >= 0` for every real `x >= 0`.
pub fn poly_nonneg_on_nonneg_axis(p: &RatPoly) -> bool {
    find_negative_point(p).is_none()
}

pub fn poly_eval(p: &RatPoly, x: &BigRat) -> BigRat {
    p.eval(x)
}

/// `Z_G'(λ)Z_H(λ) - Z_H'(λ)Z_G(λ)`; positive exactly where `G` has the
/// larger logarithmic derivative.
pub fn log_deriv_numerator(zg: &RatPoly, zh: &RatPoly) -> RatPoly {
    zg.derivative().mul(zh).sub(&zh.derivative().mul(zg))
}

fn check_partition_fn(p: &RatPoly, name: &str) -> Result<()> {
    if p.coeffs.iter().any(|c| c.is_negative()) {
        return Err(Error::InvalidInput(format!("{name} has a negative coefficient")));
    }
    if !p.coeff(0).is_positive() {
        return Err(Error::InvalidInput(format!("{name} needs a positive constant term")));
    }
    Ok(())
}

/// Decides `λ Z_G'/Z_G >= λ Z_H'/Z_H` for all `λ > 0`.
pub fn log_deriv_compare(zg: &RatPoly, zh: &RatPoly) -> Result<bool> {
    check_partition_fn(zg, "zg")?;
    check_partition_fn(zh, "zh")?;
    Ok(poly_nonneg_on_nonneg_axis(&log_deriv_numerator(zg, zh)))
}

pub fn cmp_rat(a: &BigRat, b: &BigRat) -> Ordering {
    a.cmp(b)
}
