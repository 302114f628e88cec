//! Exact rational scalars and dense vectors.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used everywhere in the crate.
pub type Q = BigRational;

/// Dense vector of exact rationals.
pub type Vector = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zeros(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

pub fn from_ints(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

/// `a + c * b`
pub fn axpy(a: &[Q], c: &Q, b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Positive rescaling of `a` to the primitive integer vector on its ray.
///
/// The zero vector is returned unchanged.
pub fn primitive_integer(a: &[Q]) -> Vector {
    if is_zero(a) {
        return a.to_vec();
    }
    let lcm = a
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Q::from_integer(x / &gcd))
        .collect()
}

/// Returns `Some(c)` with `b = c * a` when the two vectors are proportional
/// and `a` is nonzero.
pub fn proportionality(a: &[Q], b: &[Q]) -> Option<Q> {
    let pivot = a.iter().position(|x| !x.is_zero())?;
    let c = &b[pivot] / &a[pivot];
    a.iter()
        .zip(b)
        .all(|(x, y)| &(x * &c) == y)
        .then_some(c)
}

/// True when `b = c * a` for some `c > 0`. Zero vectors are never positively
/// proportional to anything.
pub fn positively_proportional(a: &[Q], b: &[Q]) -> bool {
    if is_zero(b) {
        return false;
    }
    matches!(proportionality(a, b), Some(c) if c.is_positive())
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn fmt_vec(v: &[Q], sep: &str) -> String {
    v.iter().map(fmt_q).collect::<Vec<_>>().join(sep)
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

/// Parses a comma-separated list of rationals.
pub fn parse_vec(s: &str) -> Result<Vector> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

pub(crate) mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| parse_q(x).map_err(serde::de::Error::custom))
            .collect()
    }
}
