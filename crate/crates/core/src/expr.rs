//! Nonnegative expressions built from rationals, rational powers, products
//! and sums, with an exact-where-possible comparator.
//!
//! Each side is first rewritten as a sum of monomials `c·∏ pⱼ^{fⱼ}` over a
//! pairwise coprime basis of non-perfect-power integers with `fⱼ ∈ (0, 1)`.
//! That form is unique, so equal values give equal forms. Sides that reduce
//! to a single monomial go to the power-product comparator; anything else is
//! separated by rational interval enclosures with outward rounding.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::power::{compare_with, CompareConfig, Comparison, PowerProduct};
use crate::scalar::{fmt_rational, ln_rational, serde_rat, Rational};

/// Expansion stops (and the interval path takes over) beyond this many terms.
const MAX_TERMS: usize = 4096;
/// Largest integer power of a multi-term sum that is expanded symbolically.
const MAX_EXPAND_POWER: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Rat(#[serde(with = "serde_rat")] Rational),
    Pow(Box<Expr>, #[serde(with = "serde_rat")] Rational),
    Prod(Vec<Expr>),
    Sum(Vec<Expr>),
}

impl Expr {
    pub fn rat(r: Rational) -> Expr {
        Expr::Rat(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rat(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Expr {
        Expr::Rat(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::Rat(Rational::one())
    }

    /// `base^exponent`; integer exponents on rationals are applied eagerly.
    pub fn pow(base: Expr, exponent: Rational) -> Expr {
        if exponent.is_one() {
            return base;
        }
        if let Expr::Rat(r) = &base {
            if exponent.is_integer() && (!r.is_zero() || exponent.is_positive()) {
                if let Some(k) = exponent.to_integer().to_i32() {
                    return Expr::Rat(num_traits::pow::Pow::pow(r, k));
                }
            }
        }
        Expr::Pow(Box::new(base), exponent)
    }

    pub fn power(base: Rational, exponent: Rational) -> Expr {
        Expr::pow(Expr::Rat(base), exponent)
    }

    pub fn prod(items: impl IntoIterator<Item = Expr>) -> Expr {
        let items: Vec<Expr> = items.into_iter().collect();
        if items.len() == 1 {
            return items.into_iter().next().expect("one item");
        }
        Expr::Prod(items)
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Expr {
        let items: Vec<Expr> = items.into_iter().collect();
        if items.len() == 1 {
            return items.into_iter().next().expect("one item");
        }
        Expr::Sum(items)
    }

    /// Natural log of the value as `f64` (`-inf` for zero), for reporting.
    pub fn ln(&self) -> f64 {
        match self {
            Expr::Rat(r) => {
                if r.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    ln_rational(r)
                }
            }
            Expr::Pow(b, e) => {
                let e = e.to_f64().unwrap_or(f64::NAN);
                if e == 0.0 {
                    0.0
                } else {
                    e * b.ln()
                }
            }
            Expr::Prod(items) => items.iter().map(Expr::ln).sum(),
            Expr::Sum(items) => {
                let logs: Vec<f64> = items.iter().map(Expr::ln).collect();
                let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if max == f64::NEG_INFINITY {
                    return max;
                }
                max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
            }
        }
    }

    /// Exact value when the expression is rational after normalization.
    pub fn to_rational(&self) -> Option<Rational> {
        let terms = raw_terms(self).ok()??;
        let mut monos = canonicalize(&[terms]);
        let side = monos.pop()?;
        match side.len() {
            0 => Some(Rational::zero()),
            1 if side[0].radical.is_empty() => Some(side[0].coef.clone()),
            _ => None,
        }
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::Rat(r)
    }
}

impl From<&PowerProduct> for Expr {
    fn from(p: &PowerProduct) -> Self {
        if p.factors().is_empty() {
            return Expr::one();
        }
        Expr::prod(
            p.factors()
                .iter()
                .map(|f| Expr::power(f.base.clone(), f.exponent.clone())),
        )
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(r) => write!(f, "{}", fmt_rational(r)),
            Expr::Pow(b, e) => match **b {
                Expr::Rat(_) => write!(f, "{b}^({})", fmt_rational(e)),
                _ => write!(f, "({b})^({})", fmt_rational(e)),
            },
            Expr::Prod(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|x| match x {
                        Expr::Sum(_) => format!("({x})"),
                        _ => x.to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join("·"))
            }
            Expr::Sum(items) => {
                let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

/// `coef · ∏ base^exp` before canonicalization.
#[derive(Clone, Debug)]
struct RawTerm {
    coef: Rational,
    factors: Vec<(Rational, Rational)>,
}

/// Sum of raw terms; `None` when the expression is not expandable.
fn raw_terms(e: &Expr) -> Result<Option<Vec<RawTerm>>> {
    Ok(match e {
        Expr::Rat(r) => {
            if r.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "negative value {} in expression",
                    fmt_rational(r)
                )));
            }
            if r.is_zero() {
                Some(Vec::new())
            } else {
                Some(vec![RawTerm {
                    coef: r.clone(),
                    factors: Vec::new(),
                }])
            }
        }
        Expr::Sum(items) => {
            let mut out = Vec::new();
            for item in items {
                let Some(t) = raw_terms(item)? else {
                    return Ok(None);
                };
                out.extend(t);
            }
            (out.len() <= MAX_TERMS).then_some(out)
        }
        Expr::Prod(items) => {
            let mut acc = vec![RawTerm {
                coef: Rational::one(),
                factors: Vec::new(),
            }];
            for item in items {
                let Some(t) = raw_terms(item)? else {
                    return Ok(None);
                };
                acc = match multiply(&acc, &t) {
                    Some(m) => m,
                    None => return Ok(None),
                };
            }
            Some(acc)
        }
        Expr::Pow(base, r) => {
            if r.is_zero() {
                return Ok(Some(vec![RawTerm {
                    coef: Rational::one(),
                    factors: Vec::new(),
                }]));
            }
            let Some(mut t) = raw_terms(base)? else {
                return Ok(None);
            };
            if t.len() > 1 {
                t = merge_terms(&t);
            }
            match t.len() {
                0 => {
                    if r.is_negative() {
                        return Err(Error::InvalidArgument("negative power of zero".into()));
                    }
                    Some(Vec::new())
                }
                1 => {
                    let term = &t[0];
                    let mut factors: Vec<(Rational, Rational)> = term
                        .factors
                        .iter()
                        .map(|(b, e)| (b.clone(), e * r))
                        .collect();
                    factors.push((term.coef.clone(), r.clone()));
                    Some(vec![RawTerm {
                        coef: Rational::one(),
                        factors,
                    }])
                }
                _ => {
                    let small = r.is_integer()
                        && r.is_positive()
                        && r.to_integer()
                            .to_u32()
                            .is_some_and(|k| k <= MAX_EXPAND_POWER);
                    if !small {
                        return Ok(None);
                    }
                    let k = r.to_integer().to_u32().expect("checked");
                    let mut acc = t.clone();
                    for _ in 1..k {
                        acc = match multiply(&acc, &t) {
                            Some(m) => m,
                            None => return Ok(None),
                        };
                    }
                    Some(acc)
                }
            }
        }
    })
}

/// Collects like terms through the canonical form.
fn merge_terms(t: &[RawTerm]) -> Vec<RawTerm> {
    let side = canonicalize(&[t.to_vec()]).pop().expect("one side");
    side.into_iter()
        .map(|m| RawTerm {
            coef: m.coef,
            factors: m
                .radical
                .into_iter()
                .map(|(p, e)| (Rational::from_integer(p), e))
                .collect(),
        })
        .collect()
}

fn multiply(a: &[RawTerm], b: &[RawTerm]) -> Option<Vec<RawTerm>> {
    if a.len() * b.len() > MAX_TERMS {
        return None;
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(RawTerm {
                coef: &x.coef * &y.coef,
                factors: x.factors.iter().chain(&y.factors).cloned().collect(),
            });
        }
    }
    Some(out)
}

/// Canonical monomial `coef · ∏ basis^frac` with every `frac ∈ (0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial {
    radical: BTreeMap<BigInt, Rational>,
    coef: Rational,
}

/// Canonical forms for several sides over one joint coprime basis. Each side
/// is sorted with like terms merged.
fn canonicalize(sides: &[Vec<RawTerm>]) -> Vec<Vec<Monomial>> {
    let mut numbers = Vec::new();
    for side in sides {
        for t in side {
            for (b, _) in &t.factors {
                numbers.push(b.numer().clone());
                numbers.push(b.denom().clone());
            }
        }
    }
    let basis = coprime_basis(numbers);
    sides
        .iter()
        .map(|side| {
            let mut merged: BTreeMap<BTreeMap<BigInt, Rational>, Rational> = BTreeMap::new();
            for t in side {
                let mut coef = t.coef.clone();
                let mut exps: BTreeMap<BigInt, Rational> = BTreeMap::new();
                for (b, e) in &t.factors {
                    for (p, k) in factor_over(b.numer(), &basis) {
                        *exps.entry(p).or_insert_with(Rational::zero) +=
                            e * Rational::from_integer(k.into());
                    }
                    for (p, k) in factor_over(b.denom(), &basis) {
                        *exps.entry(p).or_insert_with(Rational::zero) -=
                            e * Rational::from_integer(k.into());
                    }
                }
                let mut radical = BTreeMap::new();
                for (p, e) in exps {
                    let whole = e.floor();
                    let frac = &e - &whole;
                    let w = whole.to_integer().to_i32().expect("integer part fits");
                    coef *= num_traits::pow::Pow::pow(&Rational::from_integer(p.clone()), w);
                    if !frac.is_zero() {
                        radical.insert(p, frac);
                    }
                }
                *merged.entry(radical).or_insert_with(Rational::zero) += coef;
            }
            merged
                .into_iter()
                .map(|(radical, coef)| Monomial { radical, coef })
                .collect()
        })
        .collect()
}

/// Pairwise coprime integers `> 1`, none a perfect power, whose products
/// give every input (up to powers).
fn coprime_basis(numbers: Vec<BigInt>) -> Vec<BigInt> {
    let mut basis: Vec<BigInt> = Vec::new();
    for n in numbers {
        if n <= BigInt::one() {
            continue;
        }
        let mut pending = vec![n];
        while let Some(x) = pending.pop() {
            if x.is_one() || basis.contains(&x) {
                continue;
            }
            match basis.iter().position(|b| !b.gcd(&x).is_one()) {
                None => basis.push(x),
                Some(i) => {
                    let b = basis.swap_remove(i);
                    let g = b.gcd(&x);
                    pending.push(&b / &g);
                    pending.push(&x / &g);
                    pending.push(g);
                }
            }
        }
    }
    let mut out: Vec<BigInt> = basis.into_iter().map(perfect_power_root).collect();
    out.sort();
    out.dedup();
    out
}

/// Smallest `r` with `r^k = n` for some `k ≥ 1`.
fn perfect_power_root(n: BigInt) -> BigInt {
    let mut n = n;
    let mut k = 2u32;
    while (k as u64) < n.bits() {
        if is_small_prime(k) {
            let r = n.nth_root(k);
            if num_traits::pow(r.clone(), k as usize) == n {
                n = r;
                continue;
            }
        }
        k += 1;
    }
    n
}

fn is_small_prime(k: u32) -> bool {
    k >= 2
        && (2..)
            .take_while(|d| d * d <= k)
            .all(|d| !k.is_multiple_of(d))
}

/// Exponents of `n` over `basis`; `n` must be a product of basis powers.
fn factor_over(n: &BigInt, basis: &[BigInt]) -> Vec<(BigInt, u32)> {
    let mut rest = n.clone();
    let mut out = Vec::new();
    for p in basis {
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        if rest.is_one() {
            break;
        }
    }
    debug_assert!(rest.is_one(), "{n} does not factor over the basis");
    out
}

fn monomial_power_product(m: &Monomial) -> PowerProduct {
    let mut factors = vec![(m.coef.clone(), Rational::one())];
    factors.extend(
        m.radical
            .iter()
            .map(|(p, e)| (Rational::from_integer(p.clone()), e.clone())),
    );
    PowerProduct::new(factors).expect("canonical bases are positive")
}

/// Orders two nonnegative expressions.
pub fn compare_exprs(lhs: &Expr, rhs: &Expr, cfg: &CompareConfig) -> Result<Comparison> {
    if let Some(c) = canonical_compare(lhs, rhs, cfg)? {
        return Ok(c);
    }
    // x ↦ x^N is monotone, so raising both sides can turn opaque fractional
    // powers of sums into expandable integer ones
    let (l, r) = (flatten_pow(lhs), flatten_pow(rhs));
    let n = num_integer::Integer::lcm(&outer_denominator(&l), &outer_denominator(&r));
    if n > 1 && n <= MAX_RAISE {
        let (l, r) = (raise(&l, n), raise(&r, n));
        if let Some(c) = canonical_compare(&l, &r, cfg)? {
            return Ok(c);
        }
    }
    interval_compare(lhs, rhs, cfg)
}

/// Largest power both sides are raised to before falling back to intervals.
const MAX_RAISE: u64 = 12;

/// Pushes powers through products and merges nested powers.
fn flatten_pow(e: &Expr) -> Expr {
    match e {
        Expr::Rat(_) => e.clone(),
        Expr::Sum(items) => Expr::Sum(items.iter().map(flatten_pow).collect()),
        Expr::Prod(items) => Expr::Prod(items.iter().map(flatten_pow).collect()),
        Expr::Pow(base, r) => match flatten_pow(base) {
            Expr::Pow(b, s) => Expr::pow(*b, s * r),
            Expr::Prod(items) => Expr::Prod(
                items
                    .into_iter()
                    .map(|x| flatten_pow(&Expr::pow(x, r.clone())))
                    .collect(),
            ),
            b => Expr::pow(b, r.clone()),
        },
    }
}

/// Lcm of the exponent denominators outside every sum.
fn outer_denominator(e: &Expr) -> u64 {
    match e {
        Expr::Rat(_) | Expr::Sum(_) => 1,
        Expr::Pow(_, r) => r.denom().to_u64().unwrap_or(u64::MAX),
        Expr::Prod(items) => items.iter().map(outer_denominator).fold(1, |a, b| {
            if a == u64::MAX || b == u64::MAX {
                u64::MAX
            } else {
                num_integer::Integer::lcm(&a, &b)
            }
        }),
    }
}

/// `e^n` with the power pushed onto the outer factors.
fn raise(e: &Expr, n: u64) -> Expr {
    let n_rat = Rational::from_integer(n.into());
    match e {
        Expr::Prod(items) => Expr::Prod(items.iter().map(|x| raise(x, n)).collect()),
        Expr::Pow(b, r) => Expr::pow((**b).clone(), r * n_rat),
        _ => Expr::pow(e.clone(), n_rat),
    }
}

/// Exact decision through canonical forms, when both sides expand.
fn canonical_compare(lhs: &Expr, rhs: &Expr, cfg: &CompareConfig) -> Result<Option<Comparison>> {
    if let (Some(l), Some(r)) = (raw_terms(lhs)?, raw_terms(rhs)?) {
        let forms = canonicalize(&[l, r]);
        let (l, r) = (&forms[0], &forms[1]);
        if l == r {
            return Ok(Some(Comparison {
                ordering: Ordering::Equal,
                exact: true,
            }));
        }
        match (l.len(), r.len()) {
            (0, _) => {
                return Ok(Some(Comparison {
                    ordering: Ordering::Less,
                    exact: true,
                }))
            }
            (_, 0) => {
                return Ok(Some(Comparison {
                    ordering: Ordering::Greater,
                    exact: true,
                }))
            }
            (1, 1) => {
                return compare_with(
                    &monomial_power_product(&l[0]),
                    &monomial_power_product(&r[0]),
                    cfg,
                )
                .map(Some)
            }
            _ => {}
        }
    }
    Ok(None)
}

fn interval_compare(lhs: &Expr, rhs: &Expr, cfg: &CompareConfig) -> Result<Comparison> {
    let mut prec = cfg.initial_precision.max(16);
    loop {
        let (l_lo, l_hi) = enclose(lhs, prec)?;
        let (r_lo, r_hi) = enclose(rhs, prec)?;
        if l_lo == l_hi && r_lo == r_hi && l_lo == r_lo {
            // both enclosures collapsed to the same point
            return Ok(Comparison {
                ordering: Ordering::Equal,
                exact: true,
            });
        }
        if l_lo > r_hi {
            return Ok(Comparison {
                ordering: Ordering::Greater,
                exact: false,
            });
        }
        if l_hi < r_lo {
            return Ok(Comparison {
                ordering: Ordering::Less,
                exact: false,
            });
        }
        if prec >= cfg.max_precision {
            return Err(Error::UndecidedAtPrecisionCap(prec));
        }
        prec = (prec * 2).min(cfg.max_precision);
    }
}

/// Rigorous enclosure `[lo, hi]` of a nonnegative expression, with endpoints
/// rounded outward to about `prec` significant bits.
pub fn enclose(e: &Expr, prec: u32) -> Result<(Rational, Rational)> {
    Ok(match e {
        Expr::Rat(r) => {
            if r.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "negative value {} in expression",
                    fmt_rational(r)
                )));
            }
            (round(r, prec, false), round(r, prec, true))
        }
        Expr::Sum(items) => {
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for item in items {
                let (a, b) = enclose(item, prec)?;
                lo += a;
                hi += b;
            }
            (round(&lo, prec, false), round(&hi, prec, true))
        }
        Expr::Prod(items) => {
            let mut lo = Rational::one();
            let mut hi = Rational::one();
            for item in items {
                let (a, b) = enclose(item, prec)?;
                lo = round(&(lo * a), prec, false);
                hi = round(&(hi * b), prec, true);
            }
            (lo, hi)
        }
        Expr::Pow(base, r) => {
            if r.is_zero() {
                return Ok((Rational::one(), Rational::one()));
            }
            let (lo, hi) = enclose(base, prec)?;
            let p = r.numer().abs().to_u32().ok_or_else(|| {
                Error::InvalidArgument(format!("exponent {} too large", fmt_rational(r)))
            })?;
            let q = r.denom().to_u32().ok_or_else(|| {
                Error::InvalidArgument(format!("exponent {} too large", fmt_rational(r)))
            })?;
            let down =
                |x: &Rational| root_bound(&num_traits::pow(x.clone(), p as usize), q, prec, false);
            let up =
                |x: &Rational| root_bound(&num_traits::pow(x.clone(), p as usize), q, prec, true);
            if r.is_positive() {
                (down(&lo), up(&hi))
            } else {
                if lo.is_zero() {
                    if hi.is_zero() {
                        return Err(Error::InvalidArgument("negative power of zero".into()));
                    }
                    // enclosure touches zero; widen until it does not
                    return enclose(e, prec * 2);
                }
                let a = up(&hi);
                let b = down(&lo);
                (
                    round(&a.recip(), prec, false),
                    round(&b.recip(), prec, true),
                )
            }
        }
    })
}

/// `x` rounded down (or up) to about `prec` significant bits.
fn round(x: &Rational, prec: u32, up: bool) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let mag = x.numer().bits() as i64 - x.denom().bits() as i64;
    let s = prec as i64 - mag;
    let scaled = x * pow2(s);
    let n = if up { scaled.ceil() } else { scaled.floor() };
    n * pow2(-s)
}

fn pow2(s: i64) -> Rational {
    if s >= 0 {
        Rational::from_integer(BigInt::one() << s as u64)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-s) as u64)
    }
}

/// Lower (or upper) bound on `y^(1/q)` with about `prec` significant bits.
fn root_bound(y: &Rational, q: u32, prec: u32, up: bool) -> Rational {
    if y.is_zero() || q == 1 {
        return round(y, prec, up);
    }
    let mag = y.numer().bits() as i64 - y.denom().bits() as i64;
    let q64 = q as i64;
    let s = num_integer::Integer::div_ceil(&(prec as i64 * q64 - mag), &q64) * q64;
    let scaled = y * pow2(s);
    let r = if up {
        let big = scaled.ceil().to_integer();
        let r = big.nth_root(q);
        if num_traits::pow(r.clone(), q as usize) < big {
            r + 1
        } else {
            r
        }
    } else {
        scaled.floor().to_integer().nth_root(q)
    };
    Rational::from_integer(r) * pow2(-s / q64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn cmp(l: &Expr, r: &Expr) -> Comparison {
        compare_exprs(l, r, &CompareConfig::default()).unwrap()
    }

    fn sqrt(n: i64) -> Expr {
        Expr::power(int(n), rat(1, 2))
    }

    #[test]
    fn canonical_equalities() {
        // √8 = 2√2
        let c = cmp(&sqrt(8), &Expr::prod([Expr::int(2), sqrt(2)]));
        assert_eq!(
            c,
            Comparison {
                ordering: Ordering::Equal,
                exact: true
            }
        );
        // √2 + √8 = √18
        let c = cmp(&Expr::sum([sqrt(2), sqrt(8)]), &sqrt(18));
        assert_eq!(c.ordering, Ordering::Equal);
        // 3^(1/2)·12^(1/2) = 6
        let c = cmp(&Expr::prod([sqrt(3), sqrt(12)]), &Expr::int(6));
        assert_eq!(
            c,
            Comparison {
                ordering: Ordering::Equal,
                exact: true
            }
        );
        // (4)^(1/4) = 2^(1/2)
        let c = cmp(&Expr::power(int(4), rat(1, 4)), &sqrt(2));
        assert_eq!(c.ordering, Ordering::Equal);
        // (2/3)^(1/2)·(3/2)^(1/2) = 1
        let c = cmp(
            &Expr::prod([
                Expr::power(rat(2, 3), rat(1, 2)),
                Expr::power(rat(3, 2), rat(1, 2)),
            ]),
            &Expr::one(),
        );
        assert_eq!(c.ordering, Ordering::Equal);
    }

    #[test]
    fn sums_use_intervals() {
        // 5 + √5 ≈ 7.236 < √70 ≈ 8.367
        let lhs = Expr::sum([Expr::int(5), sqrt(5)]);
        let c = cmp(&lhs, &sqrt(70));
        assert_eq!(
            c,
            Comparison {
                ordering: Ordering::Less,
                exact: false
            }
        );
        // √2 + √3 ≈ 3.146 > π-ish rational 3.14
        let c = cmp(&Expr::sum([sqrt(2), sqrt(3)]), &Expr::rat(rat(314, 100)));
        assert_eq!(c.ordering, Ordering::Greater);
        // rational sums stay exact
        let c = cmp(&Expr::sum([Expr::int(1), Expr::int(2)]), &Expr::int(4));
        assert_eq!(
            c,
            Comparison {
                ordering: Ordering::Less,
                exact: true
            }
        );
    }

    #[test]
    fn zero_handling() {
        let zero_pow = Expr::power(int(0), rat(3, 2));
        assert_eq!(cmp(&zero_pow, &Expr::zero()).ordering, Ordering::Equal);
        assert_eq!(cmp(&zero_pow, &sqrt(2)).ordering, Ordering::Less);
        assert_eq!(Expr::power(int(0), int(0)).to_rational(), Some(int(1)));
        assert!(compare_exprs(
            &Expr::power(int(0), rat(-1, 2)),
            &Expr::one(),
            &CompareConfig::default()
        )
        .is_err());
    }

    #[test]
    fn opaque_powers_of_sums() {
        // (√2 + 1)^(1/3) vs 1.34: value ≈ 1.3415
        let e = Expr::pow(Expr::sum([sqrt(2), Expr::one()]), rat(1, 3));
        assert_eq!(
            cmp(&e, &Expr::rat(rat(134, 100))).ordering,
            Ordering::Greater
        );
        assert_eq!(
            cmp(&e, &Expr::rat(rat(1342, 1000))).ordering,
            Ordering::Less
        );
        // (√2 + 1)^2 = 3 + 2√2 expands exactly
        let sq = Expr::pow(Expr::sum([sqrt(2), Expr::one()]), int(2));
        let c = cmp(
            &sq,
            &Expr::sum([Expr::int(3), Expr::prod([Expr::int(2), sqrt(2)])]),
        );
        assert_eq!(
            c,
            Comparison {
                ordering: Ordering::Equal,
                exact: true
            }
        );
    }

    #[test]
    fn powers_of_collapsing_sums() {
        // (2 + 2)^(1/2) = 2 and (√2 + √8)^(2/3) = 18^(1/3)
        let e = Expr::pow(Expr::sum([Expr::int(2), Expr::int(2)]), rat(1, 2));
        assert_eq!(
            cmp(&e, &Expr::int(2)),
            Comparison {
                ordering: Ordering::Equal,
                exact: true
            }
        );
        let e = Expr::pow(Expr::sum([sqrt(2), sqrt(8)]), rat(2, 3));
        assert_eq!(
            cmp(&e, &Expr::power(int(18), rat(1, 3))).ordering,
            Ordering::Equal
        );
        let empty = Expr::pow(Expr::Sum(Vec::new()), rat(1, 2));
        assert_eq!(cmp(&empty, &Expr::zero()).ordering, Ordering::Equal);
    }

    #[test]
    fn enclosures_contain_value() {
        let e = Expr::sum([sqrt(2), Expr::power(rat(7, 3), rat(-2, 5))]);
        let v = 2f64.sqrt() + (7.0f64 / 3.0).powf(-0.4);
        for prec in [16, 64, 256] {
            let (lo, hi) = enclose(&e, prec).unwrap();
            assert!(lo.to_f64().unwrap() <= v + 1e-12 && v - 1e-12 <= hi.to_f64().unwrap());
            assert!(lo < hi);
        }
    }

    #[test]
    fn basis() {
        let b = coprime_basis(vec![BigInt::from(12), BigInt::from(18), BigInt::from(8)]);
        assert_eq!(b, vec![BigInt::from(2), BigInt::from(3)]);
        let b = coprime_basis(vec![BigInt::from(36)]);
        assert_eq!(b, vec![BigInt::from(6)]);
    }

    #[test]
    fn serde_roundtrip() {
        let e = Expr::sum([
            sqrt(2),
            Expr::prod([Expr::int(3), Expr::power(rat(2, 7), rat(5, 3))]),
        ]);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<Expr>(&s).unwrap(), e);
        assert!((e.ln() - (2f64.sqrt() + 3.0 * (2.0f64 / 7.0).powf(5.0 / 3.0)).ln()).abs() < 1e-12);
    }
}
