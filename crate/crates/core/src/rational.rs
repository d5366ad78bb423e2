//! Exact rational helpers shared by every module.
//!
//! Rationals travel through JSON as the string `"p/q"` in lowest terms with
//! `q > 0`. Parsing also accepts a bare integer `"p"`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Shorthand for a small rational literal.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

pub fn parse(s: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = d
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Q::new(num, den))
}

/// Canonical `"p/q"` form. Integers keep the `/1`.
pub fn format(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| ln(x).exp())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 960 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational, stable for huge numerators
/// and denominators.
pub fn ln(x: &Q) -> f64 {
    assert!(x.is_positive(), "log of non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Exact integer power, negative exponents allowed for nonzero bases.
pub fn pow(x: &Q, e: i64) -> Q {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Exact `n`-th root of a positive rational if it is rational.
pub fn exact_root(x: &Q, n: u32) -> Option<Q> {
    if n == 0 || !x.is_positive() {
        return None;
    }
    let rn = x.numer().nth_root(n);
    let rd = x.denom().nth_root(n);
    let r = Q::new(rn, rd);
    (pow(&r, n as i64) == *x).then_some(r)
}

/// `x - floor(x)`, in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_unit(x: &Q) -> bool {
    x.is_one()
}

/// Extended gcd over `i64`: returns `(g, a, b)` with `a*x + b*y = g`.
pub fn ext_gcd(x: i64, y: i64) -> (i64, i64, i64) {
    let e = x.extended_gcd(&y);
    (e.gcd, e.x, e.y)
}

/// Serde adapter for a single rational stored as `"p/q"`.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of `["p/q", "r/s"]` pairs.
pub mod serde_q_pairs {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Q, Q)], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<[String; 2]> = v.iter().map(|(a, b)| [format(a), format(b)]).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Q, Q)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| Ok((parse(a)?, parse(b)?)))
            .collect::<Result<_, ParseRationalError>>()
            .map_err(serde::de::Error::custom)
    }
}
