//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. This module adds the canonical string
//! form used by every serializer in the crate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub use num_rational::BigRational as Rational;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Builds `n/d` from machine integers. Panics on a zero denominator.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical form: `p/q` in lowest terms, `p` alone when `q = 1`, sign on the numerator.
pub fn to_canonical(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p`, `-p`, `p/q` or `-p/q`. Whitespace and `+` signs are rejected so
/// that parsing is the exact inverse of [`to_canonical`] on its image, up to
/// reduction of non-reduced input.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits_ok = |t: &str, allow_sign: bool| {
        let t = if allow_sign { t.strip_prefix('-').unwrap_or(t) } else { t };
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return Err(err());
    }
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = match den {
        Some(d) if digits_ok(d, false) => d.parse().map_err(|_| err())?,
        Some(_) => return Err(err()),
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli numbers B_0..=B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); n + 1];
    b[0] = Rational::one();
    for m in 1..=n {
        let mut acc = Rational::zero();
        for k in 0..m {
            acc += Rational::from_integer(binomial(m as u64 + 1, k as u64)) * &b[k];
        }
        b[m] = -acc / Rational::from_integer(BigInt::from(m + 1));
    }
    b
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&to_canonical(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(to_canonical(&q(-45, 8)), "-45/8");
        assert_eq!(to_canonical(&q(6, -4)), "-3/2");
        assert_eq!(to_canonical(&q(0, 7)), "0");
        assert_eq!(to_canonical(&int(3)), "3");
    }

    #[test]
    fn parse_round_trip_and_rejects() {
        for s in ["3", "-45/8", "0", "11779039621933858193/237732006111215616000"] {
            assert_eq!(to_canonical(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("4/6").unwrap(), q(2, 3));
        for bad in ["", "1/0", "+1", " 1", "1/-2", "a", "1//2", "-"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(14);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[14], q(7, 6));
        assert!(b[13].is_zero());
    }
}
