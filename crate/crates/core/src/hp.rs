//! High-precision floating point for the one place the crate needs a
//! transcendental function: the Gaussian density in the local limit
//! comparison. Values are computed with 256-bit mantissas (about 77
//! significant decimal digits).

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::exact::BigRat;

/// Mantissa bits used throughout.
pub const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Hp {
    cc: Consts,
}

impl Default for Hp {
    fn default() -> Self {
        Self::new()
    }
}

impl Hp {
    pub fn new() -> Self {
        Hp { cc: Consts::new().expect("constant cache") }
    }

    pub fn from_rat(&mut self, x: &BigRat) -> BigFloat {
        let num = BigFloat::parse(&x.numer().to_string(), Radix::Dec, PRECISION, RM, &mut self.cc);
        let den = BigFloat::parse(&x.denom().to_string(), Radix::Dec, PRECISION, RM, &mut self.cc);
        num.div(&den, PRECISION, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(PRECISION, RM)
    }

    /// Density of N(mean, var) at x.
    pub fn gaussian(&mut self, x: &BigRat, mean: &BigRat, var: &BigRat) -> BigFloat {
        let two_var = self.from_rat(&(var * BigRat::from_integer(2.into())));
        let dx = self.from_rat(&(x - mean));
        let expo = dx.mul(&dx, PRECISION, RM).div(&two_var, PRECISION, RM).neg();
        let e = expo.exp(PRECISION, RM, &mut self.cc);
        let norm = self.pi().mul(&two_var, PRECISION, RM).sqrt(PRECISION, RM);
        e.div(&norm, PRECISION, RM)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_string(&mut self, x: &BigFloat, digits: usize) -> String {
        let s = x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into());
        truncate_mantissa(&s, digits)
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        self.to_string(x, 20).parse().unwrap_or(f64::NAN)
    }
}

/// Cuts the mantissa of a "d.ddd…e±x" string to `digits` significant digits.
fn truncate_mantissa(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mut out = String::new();
    let mut seen = 0;
    for ch in mant.chars() {
        if ch.is_ascii_digit() {
            if seen == digits {
                break;
            }
            seen += 1;
        }
        out.push(ch);
    }
    out + exp
}
