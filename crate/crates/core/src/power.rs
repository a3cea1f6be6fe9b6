//! Formal products `∏ bᵢ^{eᵢ}` of positive rationals with rational exponents,
//! and their exact comparison.
//!
//! The exact path clears exponent denominators and compares big integers.
//! When that would exceed the configured bit budget, the comparison falls
//! back to fixed-point logarithm intervals, which can only decide strict
//! inequalities.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, ln_rational, serde_rat, Rational};

pub const DEFAULT_BITCAP: u64 = 10_000_000;
pub const BITCAP_ENV: &str = "HOMLAB_BITCAP";

/// Comparator settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareConfig {
    /// Largest estimated operand size, in bits, for the exact path.
    pub bitcap: u64,
    /// Starting working precision of the interval path.
    pub initial_precision: u32,
    /// The interval path gives up above this precision.
    pub max_precision: u32,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            bitcap: DEFAULT_BITCAP,
            initial_precision: 64,
            max_precision: 1 << 14,
        }
    }
}

impl CompareConfig {
    /// Defaults, with `HOMLAB_BITCAP` overriding the bit cap when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(cap) = std::env::var(BITCAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            cfg.bitcap = cap;
        }
        cfg
    }

    pub fn with_bitcap(bitcap: u64) -> Self {
        CompareConfig {
            bitcap,
            ..Self::default()
        }
    }

    /// Forces the exact path regardless of operand size.
    pub fn exact_only() -> Self {
        Self::with_bitcap(u64::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    /// True when decided by exact integer arithmetic.
    pub exact: bool,
}

/// One factor `base^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    #[serde(with = "serde_rat")]
    pub base: Rational,
    #[serde(with = "serde_rat")]
    pub exponent: Rational,
}

/// Normalized product: bases are distinct, positive and not 1, exponents are
/// nonzero, and factors are sorted by base.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerProduct {
    factors: Vec<Factor>,
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(factors: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut out = Vec::new();
        for (base, exponent) in factors {
            if !base.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "power-product base must be positive, got {}",
                    fmt_rational(&base)
                )));
            }
            out.push(Factor { base, exponent });
        }
        Ok(Self::normalized(out))
    }

    pub fn rational(r: Rational) -> Result<Self> {
        Self::new([(r, Rational::one())])
    }

    pub fn power(base: Rational, exponent: Rational) -> Result<Self> {
        Self::new([(base, exponent)])
    }

    fn normalized(mut factors: Vec<Factor>) -> Self {
        factors.sort_by(|a, b| a.base.cmp(&b.base));
        let mut merged: Vec<Factor> = Vec::with_capacity(factors.len());
        for f in factors {
            match merged.last_mut() {
                Some(last) if last.base == f.base => last.exponent += f.exponent,
                _ => merged.push(f),
            }
        }
        merged.retain(|f| !f.base.is_one() && !f.exponent.is_zero());
        PowerProduct { factors: merged }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        Self::normalized(self.factors.iter().chain(&other.factors).cloned().collect())
    }

    pub fn pow(&self, e: &Rational) -> PowerProduct {
        Self::normalized(
            self.factors
                .iter()
                .map(|f| Factor {
                    base: f.base.clone(),
                    exponent: &f.exponent * e,
                })
                .collect(),
        )
    }

    pub fn recip(&self) -> PowerProduct {
        self.pow(&-Rational::one())
    }

    /// Exact value when every exponent is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        let mut acc = Rational::one();
        for f in &self.factors {
            if !f.exponent.is_integer() {
                return None;
            }
            let k = f.exponent.to_integer().to_i32()?;
            acc *= num_traits::pow::Pow::pow(&f.base, k);
        }
        Some(acc)
    }

    /// Natural log as `f64`, for reporting.
    pub fn ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| ln_rational(&f.base) * f.exponent.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Lcm of the exponent denominators.
    pub fn exponent_lcm(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, f| acc.lcm(f.exponent.denom()))
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| {
                if x.exponent.is_one() {
                    fmt_rational(&x.base)
                } else {
                    format!("{}^({})", fmt_rational(&x.base), fmt_rational(&x.exponent))
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Compares with [`CompareConfig::from_env`].
pub fn compare_power_products(lhs: &PowerProduct, rhs: &PowerProduct) -> Result<Comparison> {
    compare_with(lhs, rhs, &CompareConfig::from_env())
}

pub fn compare_with(
    lhs: &PowerProduct,
    rhs: &PowerProduct,
    cfg: &CompareConfig,
) -> Result<Comparison> {
    let ratio = lhs.mul(&rhs.recip());
    if ratio.factors.is_empty() {
        return Ok(Comparison {
            ordering: Ordering::Equal,
            exact: true,
        });
    }
    let l = ratio.exponent_lcm();
    if estimated_bits(&ratio, &l) <= cfg.bitcap {
        return Ok(Comparison {
            ordering: exact_sign(&ratio, &l),
            exact: true,
        });
    }
    log_interval_sign(&ratio, cfg).map(|ordering| Comparison {
        ordering,
        exact: false,
    })
}

/// Rough bit size of the larger side after clearing denominators.
fn estimated_bits(ratio: &PowerProduct, l: &BigInt) -> u64 {
    let mut total = 0f64;
    for f in &ratio.factors {
        let k = (&f.exponent * Rational::from_integer(l.clone())).to_integer();
        let size = (f.base.numer().bits() + f.base.denom().bits()) as f64;
        total += k.abs().to_f64().unwrap_or(f64::INFINITY) * size;
    }
    if total.is_finite() && total < u64::MAX as f64 {
        total as u64
    } else {
        u64::MAX
    }
}

/// Sign of `log(ratio)` via `ratio^L = X / Y` with integers `X, Y`.
fn exact_sign(ratio: &PowerProduct, l: &BigInt) -> Ordering {
    let mut x = BigInt::one();
    let mut y = BigInt::one();
    for f in &ratio.factors {
        let k = (&f.exponent * Rational::from_integer(l.clone())).to_integer();
        let e = k.abs().to_u32().expect("exponent fits after bit-cap check");
        let p = num_traits::pow(f.base.numer().clone(), e as usize);
        let q = num_traits::pow(f.base.denom().clone(), e as usize);
        if k.is_positive() {
            x *= p;
            y *= q;
        } else {
            x *= q;
            y *= p;
        }
    }
    x.cmp(&y)
}

/// Sign of `Σ eᵢ ln bᵢ`, doubling the working precision until the error
/// bound excludes zero.
fn log_interval_sign(ratio: &PowerProduct, cfg: &CompareConfig) -> Result<Ordering> {
    let mut prec = cfg.initial_precision.max(16);
    loop {
        let (center, err) = log_sum(ratio, prec);
        if center > err {
            return Ok(Ordering::Greater);
        }
        if -&center > err {
            return Ok(Ordering::Less);
        }
        if prec >= cfg.max_precision {
            return Err(Error::UndecidedAtPrecisionCap(prec));
        }
        prec = (prec * 2).min(cfg.max_precision);
    }
}

/// `Σ eᵢ ln bᵢ` in units of `2^-w` together with an error bound in ulps.
fn log_sum(ratio: &PowerProduct, w: u32) -> (BigInt, BigInt) {
    let mut ln2 = None;
    let mut center = BigInt::zero();
    let mut err = BigInt::zero();
    for f in &ratio.factors {
        let (ln_num, e_num) = ln_fixed(f.base.numer(), w, &mut ln2);
        let (ln_den, e_den) = ln_fixed(f.base.denom(), w, &mut ln2);
        let ln_b = ln_num - ln_den;
        let e_b = e_num + e_den;
        let scaled = &ln_b * f.exponent.numer();
        center += scaled.div_floor(f.exponent.denom());
        // |e|·err plus one ulp for the floor
        let abs_e = f.exponent.abs();
        err += (Rational::from_integer(e_b) * abs_e).ceil().to_integer() + BigInt::one();
    }
    (center, err)
}

/// Fixed-point `2·atanh(z)` for `z = num/den ∈ [0, 1/3]`, in units of `2^-w`,
/// with its error bound in ulps.
fn atanh2_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigInt) {
    let z = (num << w).div_floor(den);
    let z2 = (&z * &z) >> w;
    let mut term = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    let mut terms = 0u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(k);
        term = (&term * &z2) >> w;
        k += 2;
        terms += 1;
        debug_assert!(terms < 4 * w as u64 + 8);
    }
    (sum << 1, BigInt::from(12 * terms + 20))
}

/// Fixed-point `ln n` for a positive integer `n`, with error bound in ulps.
fn ln_fixed(n: &BigInt, w: u32, ln2_cache: &mut Option<(BigInt, BigInt)>) -> (BigInt, BigInt) {
    debug_assert!(n.sign() == Sign::Plus);
    if n.is_one() {
        return (BigInt::zero(), BigInt::zero());
    }
    let k = n.bits() - 1;
    // n = m·2^k with m ∈ [1, 2); M = m·2^w rounded down
    let m = if k as u32 >= w {
        n >> (k as u32 - w)
    } else {
        n << (w - k as u32)
    };
    let one = BigInt::one() << w;
    let (ln_m, e_m) = atanh2_fixed(&(&m - &one), &(&m + &one), w);
    let (ln2, e2) = ln2_cache
        .get_or_insert_with(|| atanh2_fixed(&BigInt::one(), &BigInt::from(3), w))
        .clone();
    let kk = BigInt::from(k);
    (&kk * ln2 + ln_m, (&kk + 2u32) * (e2 + e_m) + 4u32)
}
