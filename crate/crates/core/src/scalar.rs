//! Scalar abstraction shared by the counting engine.
//!
//! Every counting routine is generic over [`Weight`], which is any
//! `num_traits::Num` type that can be cloned and ordered. Exact work uses
//! [`Rational`] (arbitrary precision); `f64` is accepted for quick estimates
//! and `BigUint`/`u64` for pure counts.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Integer = BigInt;
pub type Natural = BigUint;

pub trait Weight: Num + Clone + PartialOrd + Debug + Send + Sync {}

impl<T> Weight for T where T: Num + Clone + PartialOrd + Debug + Send + Sync {}

/// Weights that also support signed field arithmetic (needed for spectra).
pub trait Field: Weight + Signed {}

impl<T> Field for T where T: Weight + Signed {}

/// `k` as an element of `W`, built by binary doubling.
pub fn from_count<W: Weight>(mut k: u64) -> W {
    let mut acc = W::zero();
    let mut unit = W::one();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + unit.clone();
        }
        k >>= 1;
        if k > 0 {
            unit = unit.clone() + unit;
        }
    }
    acc
}

pub fn pow<W: Weight>(base: &W, mut exp: u64) -> W {
    let mut acc = W::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * sq.clone();
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * sq;
        }
    }
    acc
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
        let q = BigInt::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num = BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(num, den));
    }
    let p = BigInt::from_str_radix(t, 10).map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn natural_to_rational(n: &Natural) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// Natural log of a positive rational, as `f64`. Only used for reporting.
pub fn ln_rational(r: &Rational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

pub fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN);
        return f.abs().ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(n.abs() >> shift)).unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Serde helpers that store rationals as `"p/q"` strings.
pub mod serde_rat {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(fmt_rational).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod mat {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            m.iter()
                .map(|row| row.iter().map(fmt_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Rational>>, D::Error> {
            let m = Vec::<Vec<String>>::deserialize(d)?;
            m.iter()
                .map(|row| {
                    row.iter()
                        .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                        .collect()
                })
                .collect()
        }
    }

    pub mod cube {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(c: &[Vec<Vec<Rational>>], s: S) -> Result<S::Ok, S::Error> {
            c.iter()
                .map(|m| {
                    m.iter()
                        .map(|row| row.iter().map(fmt_rational).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Vec<Rational>>>, D::Error> {
            let c = Vec::<Vec<Vec<String>>>::deserialize(d)?;
            c.iter()
                .map(|m| {
                    m.iter()
                        .map(|row| {
                            row.iter()
                                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        }
    }
}
