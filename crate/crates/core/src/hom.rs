//! Exact homomorphism counts and the quantities built from them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::ColorSet;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::{bits, mask_upto, Graph};
use crate::model::Model;
use crate::scalar::{fmt_rational, parse_rational, pow, serde_rat, Rational, Weight};

pub const MAX_EPS_VERTICES: usize = 12;

/// Weights `λ_v: Ω → ℚ≥0` for one vertex; a list is the 0/1 case.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexConstraint<W = Rational> {
    pub weights: Vec<W>,
}

impl Serialize for VertexConstraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::vec::serialize(&self.weights, s)
    }
}

impl<'de> Deserialize<'de> for VertexConstraint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let weights = serde_rat::vec::deserialize(d)?;
        VertexConstraint::new(weights).map_err(serde::de::Error::custom)
    }
}

impl<W: Weight> VertexConstraint<W> {
    pub fn new(weights: Vec<W>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| *w < W::zero()) {
            return Err(Error::NegativeWeight(format!("constraint entry {i}")));
        }
        Ok(VertexConstraint { weights })
    }

    pub fn ones(q: usize) -> Self {
        VertexConstraint {
            weights: vec![W::one(); q],
        }
    }

    pub fn from_set(q: usize, set: ColorSet) -> Self {
        VertexConstraint {
            weights: (0..q)
                .map(|c| if set.contains(c) { W::one() } else { W::zero() })
                .collect(),
        }
    }

    pub fn q(&self) -> usize {
        self.weights.len()
    }

    /// Colors with nonzero weight.
    pub fn support(&self) -> ColorSet {
        ColorSet::from_colors(
            &self
                .weights
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(c, _)| c)
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_list(&self) -> bool {
        self.weights.iter().all(|w| w.is_zero() || w.is_one())
    }
}

/// Parses one constraint per vertex. Accepted line forms, in vertex order
/// or keyed by vertex: `"v: {0,2}"` (a list), `"v: r0 r1 ..."` (weights), or
/// a bare row of weights. `#` starts a comment.
pub fn parse_constraints(text: &str, n: usize, q: usize) -> Result<Vec<VertexConstraint>> {
    let mut out: Vec<Option<VertexConstraint>> = vec![None; n];
    let mut next = 0usize;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (v, body) = match line.split_once(':') {
            Some((v, body)) => (
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad vertex id in {line:?}")))?,
                body.trim(),
            ),
            None => (next, line),
        };
        if v >= n {
            return Err(Error::Parse(format!(
                "vertex {v} out of range for {n} vertices"
            )));
        }
        let c = if let Some(inner) = body.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| Error::Parse(format!("unclosed list in {line:?}")))?;
            let mut colors = Vec::new();
            for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let c = t
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad color {t:?}")))?;
                if c >= q {
                    return Err(Error::Parse(format!("color {c} out of range for q = {q}")));
                }
                colors.push(c);
            }
            VertexConstraint::from_set(q, ColorSet::from_colors(&colors))
        } else {
            let w: Vec<Rational> = body
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<_>>()?;
            if w.len() != q {
                return Err(Error::DimensionMismatch {
                    expected: q,
                    found: w.len(),
                });
            }
            VertexConstraint::new(w)?
        };
        out[v] = Some(c);
        next = v + 1;
    }
    out.into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::Parse(format!("no constraint for vertex {v}"))))
        .collect()
}

/// A nonnegative matrix `f_uv` over `Ω_u × Ω_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeKernel<W = Rational> {
    rows: Vec<Vec<W>>,
}

impl Serialize for EdgeKernel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::mat::serialize(&self.rows, s)
    }
}

impl<'de> Deserialize<'de> for EdgeKernel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = serde_rat::mat::deserialize(d)?;
        EdgeKernel::new(rows).map_err(serde::de::Error::custom)
    }
}

impl<W: Weight> EdgeKernel<W> {
    pub fn new(rows: Vec<Vec<W>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            if row.iter().any(|w| *w < W::zero()) {
                return Err(Error::NegativeWeight("kernel entry".into()));
            }
        }
        Ok(EdgeKernel { rows })
    }

    pub fn rows(&self) -> &[Vec<W>] {
        &self.rows
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.rows.first().map_or(0, Vec::len))
    }

    pub fn get(&self, x: usize, y: usize) -> &W {
        &self.rows[x][y]
    }

    /// `f_vu(y, x) = f_uv(x, y)`.
    pub fn transpose(&self) -> Self {
        let (r, c) = self.shape();
        EdgeKernel {
            rows: (0..c)
                .map(|y| (0..r).map(|x| self.rows[x][y].clone()).collect())
                .collect(),
        }
    }

    pub fn all_ones(r: usize, c: usize) -> Self {
        EdgeKernel {
            rows: vec![vec![W::one(); c]; r],
        }
    }

    /// `1_{x≠y}` on `q` colors.
    pub fn distinct(q: usize) -> Self {
        EdgeKernel {
            rows: (0..q)
                .map(|x| {
                    (0..q)
                        .map(|y| if x != y { W::one() } else { W::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    /// `f(x, y) = g(x)·h(y)`.
    pub fn rank_one(g: &[W], h: &[W]) -> Result<Self> {
        Self::new(
            g.iter()
                .map(|a| h.iter().map(|b| a.clone() * b.clone()).collect())
                .collect(),
        )
    }

    pub fn from_model(m: &Model<W>) -> Self {
        EdgeKernel {
            rows: m.edge_weights().to_vec(),
        }
    }
}

fn effective_weights<W: Weight>(m: &Model<W>, c: Option<&VertexConstraint<W>>) -> Result<Vec<W>> {
    match c {
        None => Ok(m.vertex_weights().to_vec()),
        Some(c) => {
            if c.q() != m.q() {
                return Err(Error::DimensionMismatch {
                    expected: m.q(),
                    found: c.q(),
                });
            }
            Ok(m.vertex_weights()
                .iter()
                .zip(&c.weights)
                .map(|(a, b)| a.clone() * b.clone())
                .collect())
        }
    }
}

/// `hom(G, H)` with optional per-vertex weights `λ_v`, exactly.
///
/// Entries are scaled to integers first; the sum runs over all assignments
/// with zero-weight colors pruned.
pub fn hom(g: &Graph, m: &Model, constraints: Option<&[VertexConstraint]>) -> Result<Rational> {
    let weights = vertex_weight_table(g, m, constraints)?;
    let edge_den = lcm_denominators(m.edge_weights().iter().flatten());
    let edge_int: Vec<Vec<BigInt>> = m
        .edge_weights()
        .iter()
        .map(|row| row.iter().map(|w| scale(w, &edge_den)).collect())
        .collect();
    let mut den = num_traits::pow(edge_den.clone(), g.m());
    let mut vertex_int = Vec::with_capacity(g.n());
    for w in &weights {
        let d = lcm_denominators(w.iter());
        vertex_int.push(
            w.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, scale(x, &d)))
                .collect::<Vec<_>>(),
        );
        den *= d;
    }
    let total = match hom_core_u128(g, &edge_int, &vertex_int) {
        Some(t) => BigInt::from(t),
        None => hom_core(g, &edge_int, &vertex_int),
    };
    Ok(Rational::new(total, den))
}

/// `hom` over any weight type, without integer scaling.
pub fn hom_with<W: Weight>(
    g: &Graph,
    m: &Model<W>,
    constraints: Option<&[VertexConstraint<W>]>,
) -> Result<W> {
    let weights = vertex_weight_table(g, m, constraints)?;
    let vertex: Vec<Vec<(usize, W)>> = weights
        .into_iter()
        .map(|w| {
            w.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect()
        })
        .collect();
    Ok(hom_core(g, m.edge_weights(), &vertex))
}

fn vertex_weight_table<W: Weight>(
    g: &Graph,
    m: &Model<W>,
    constraints: Option<&[VertexConstraint<W>]>,
) -> Result<Vec<Vec<W>>> {
    match constraints {
        None => Ok(vec![m.vertex_weights().to_vec(); g.n()]),
        Some(cs) => {
            if cs.len() != g.n() {
                return Err(Error::DimensionMismatch {
                    expected: g.n(),
                    found: cs.len(),
                });
            }
            cs.iter().map(|c| effective_weights(m, Some(c))).collect()
        }
    }
}

fn lcm_denominators<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

fn scale(r: &Rational, den: &BigInt) -> BigInt {
    (r * Rational::from_integer(den.clone())).to_integer()
}

/// Σ over assignments of ∏ edge weights · ∏ vertex weights, by depth-first
/// search with the last vertex summed in closed form.
fn hom_core<W: Weight>(g: &Graph, edge: &[Vec<W>], vertex: &[Vec<(usize, W)>]) -> W {
    let n = g.n();
    if n == 0 {
        return W::one();
    }
    let back: Vec<Vec<usize>> = (0..n)
        .map(|v| bits(g.neighbors(v) & mask_upto(v)).collect())
        .collect();
    let mut colors = vec![0usize; n];
    let mut total = W::zero();
    dfs(0, W::one(), edge, vertex, &back, &mut colors, &mut total);
    total
}

fn dfs<W: Weight>(
    k: usize,
    partial: W,
    edge: &[Vec<W>],
    vertex: &[Vec<(usize, W)>],
    back: &[Vec<usize>],
    colors: &mut [usize],
    total: &mut W,
) {
    let last = k + 1 == vertex.len();
    let mut level_sum = W::zero();
    for (c, w) in &vertex[k] {
        let mut f = w.clone();
        for &u in &back[k] {
            let e = &edge[colors[u]][*c];
            if e.is_zero() {
                f = W::zero();
                break;
            }
            f = f * e.clone();
        }
        if f.is_zero() {
            continue;
        }
        if last {
            level_sum = level_sum + f;
        } else {
            colors[k] = *c;
            dfs(
                k + 1,
                partial.clone() * f,
                edge,
                vertex,
                back,
                colors,
                total,
            );
        }
    }
    if last {
        *total = total.clone() + partial * level_sum;
    }
}

/// Same search in `u128`; `None` on overflow or oversized inputs.
fn hom_core_u128(g: &Graph, edge: &[Vec<BigInt>], vertex: &[Vec<(usize, BigInt)>]) -> Option<u128> {
    let edge: Vec<Vec<u128>> = edge
        .iter()
        .map(|row| row.iter().map(|x| x.to_u128()).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let vertex: Vec<Vec<(usize, u128)>> = vertex
        .iter()
        .map(|row| {
            row.iter()
                .map(|(c, x)| Some((*c, x.to_u128()?)))
                .collect::<Option<_>>()
        })
        .collect::<Option<_>>()?;
    let n = g.n();
    if n == 0 {
        return Some(1);
    }
    let back: Vec<Vec<usize>> = (0..n)
        .map(|v| bits(g.neighbors(v) & mask_upto(v)).collect())
        .collect();
    let mut colors = vec![0usize; n];
    dfs_u128(0, 1, &edge, &vertex, &back, &mut colors)
}

fn dfs_u128(
    k: usize,
    partial: u128,
    edge: &[Vec<u128>],
    vertex: &[Vec<(usize, u128)>],
    back: &[Vec<usize>],
    colors: &mut [usize],
) -> Option<u128> {
    let last = k + 1 == vertex.len();
    let mut sum: u128 = 0;
    for &(c, w) in &vertex[k] {
        let mut f = w;
        for &u in &back[k] {
            f = f.checked_mul(edge[colors[u]][c])?;
            if f == 0 {
                break;
            }
        }
        if f == 0 {
            continue;
        }
        if last {
            sum = sum.checked_add(f)?;
        } else {
            colors[k] = c;
            let sub = dfs_u128(k + 1, partial.checked_mul(f)?, edge, vertex, back, colors)?;
            sum = sum.checked_add(sub)?;
        }
    }
    if last {
        partial.checked_mul(sum)
    } else {
        Some(sum)
    }
}

/// `Σ_{x∈Ω₁^a, y∈Ω₂^b} ∏ row(xᵢ) ∏ col(yⱼ) ∏ f(xᵢ, yⱼ)`, contracted over
/// multisets on whichever side has fewer of them.
pub fn kernel_biclique_sum(
    f: &EdgeKernel,
    row_weights: &[Rational],
    col_weights: &[Rational],
    a: usize,
    b: usize,
) -> Result<Rational> {
    let (r, c) = f.shape();
    if row_weights.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: row_weights.len(),
        });
    }
    if col_weights.len() != c {
        return Err(Error::DimensionMismatch {
            expected: c,
            found: col_weights.len(),
        });
    }
    if multiset_count(c, b) > multiset_count(r, a) {
        return kernel_biclique_sum(&f.transpose(), col_weights, row_weights, b, a);
    }
    let cols: Vec<usize> = (0..c).filter(|&y| !col_weights[y].is_zero()).collect();
    let start: Vec<Rational> = row_weights.to_vec();
    let mut total = Rational::zero();
    let mut state = BicliqueWalk {
        f,
        col_weights,
        cols: &cols,
        a,
        b,
        total: &mut total,
    };
    state.walk(0, b, &start, Rational::one(), &factorials(b));
    Ok(total)
}

fn multiset_count(q: usize, k: usize) -> f64 {
    // C(q+k-1, k)
    (1..=k).fold(1.0, |acc, i| acc * (q + i - 1) as f64 / i as f64)
}

fn factorials(k: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for i in 1..=k {
        let next = &out[i - 1] * Rational::from_integer(i.into());
        out.push(next);
    }
    out
}

struct BicliqueWalk<'a> {
    f: &'a EdgeKernel,
    col_weights: &'a [Rational],
    cols: &'a [usize],
    a: usize,
    b: usize,
    total: &'a mut Rational,
}

impl BicliqueWalk<'_> {
    /// `inner[x] = row(x)·∏ f(x, y)^{k_y}` for the counts chosen so far;
    /// `weight = ∏ col(y)^{k_y} / ∏ k_y!`.
    fn walk(
        &mut self,
        idx: usize,
        remaining: usize,
        inner: &[Rational],
        weight: Rational,
        fact: &[Rational],
    ) {
        if remaining == 0 {
            let s: Rational = inner.iter().sum();
            let term = pow(&s, self.a as u64) * weight * &fact[self.b];
            *self.total += term;
            return;
        }
        if idx == self.cols.len() {
            return;
        }
        let y = self.cols[idx];
        // k = 0
        self.walk(idx + 1, remaining, inner, weight.clone(), fact);
        let mut cur = inner.to_vec();
        let mut w = weight;
        for k in 1..=remaining {
            for (x, v) in cur.iter_mut().enumerate() {
                if !v.is_zero() {
                    *v *= self.f.get(x, y);
                }
            }
            w = w * &self.col_weights[y] / Rational::from_integer(k.into());
            if cur.iter().all(Zero::is_zero) && self.a > 0 {
                break;
            }
            self.walk(idx + 1, remaining - k, &cur, w.clone(), fact);
        }
    }
}

/// `hom(K_{a,b}, H)`, part A carrying `side_constraints.0` and part B
/// carrying `side_constraints.1`.
pub fn hom_biclique(
    a: usize,
    b: usize,
    m: &Model,
    side_constraints: Option<(&VertexConstraint, &VertexConstraint)>,
) -> Result<Rational> {
    let (ca, cb) = match side_constraints {
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    };
    let wa = effective_weights(m, ca)?;
    let wb = effective_weights(m, cb)?;
    kernel_biclique_sum(&EdgeKernel::from_model(m), &wa, &wb, a, b)
}

/// `‖f‖_{K_{a,b}}` as `base^(1/(ab))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicliqueNorm {
    #[serde(with = "serde_rat")]
    pub base: Rational,
    #[serde(with = "serde_rat")]
    pub exponent: Rational,
}

impl BicliqueNorm {
    pub fn to_expr(&self) -> Expr {
        Expr::power(self.base.clone(), self.exponent.clone())
    }
}

/// `a` copies on the row side of `f`, `b` on the column side.
pub fn biclique_norm_power(f: &EdgeKernel, a: usize, b: usize) -> Result<BicliqueNorm> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument(
            "biclique norm needs a, b >= 1".into(),
        ));
    }
    let (r, c) = f.shape();
    let base = kernel_biclique_sum(
        f,
        &vec![Rational::one(); r],
        &vec![Rational::one(); c],
        a,
        b,
    )?;
    Ok(BicliqueNorm {
        base,
        exponent: Rational::new(BigInt::one(), BigInt::from(a * b)),
    })
}

/// `h_a(λ) = hom_λ(K_a, H)`, summed over color multisets.
pub fn hom_clique(a: usize, m: &Model, lambda: Option<&VertexConstraint>) -> Result<Rational> {
    let w = effective_weights(m, lambda)?;
    let colors: Vec<usize> = (0..m.q()).filter(|&c| !w[c].is_zero()).collect();
    let mut counts = vec![0usize; m.q()];
    let mut total = Rational::zero();
    clique_walk(
        m,
        &w,
        &colors,
        0,
        a,
        Rational::one(),
        &mut counts,
        &mut total,
    );
    Ok(total * factorials(a).pop().expect("nonempty"))
}

#[allow(clippy::too_many_arguments)]
fn clique_walk(
    m: &Model,
    w: &[Rational],
    colors: &[usize],
    idx: usize,
    remaining: usize,
    acc: Rational,
    counts: &mut [usize],
    total: &mut Rational,
) {
    if remaining == 0 {
        *total += acc;
        return;
    }
    if idx == colors.len() {
        return;
    }
    let c = colors[idx];
    clique_walk(m, w, colors, idx + 1, remaining, acc.clone(), counts, total);
    // adding one more vertex of color c multiplies by w(c)·H(c,c)^{k}·∏ H(d,c)^{k_d}
    let cross: Rational = colors[..idx]
        .iter()
        .map(|&d| pow(m.edge(d, c), counts[d] as u64))
        .product();
    let mut cur = acc;
    for k in 1..=remaining {
        cur = cur * &w[c] * &cross * pow(m.edge(c, c), (k - 1) as u64)
            / Rational::from_integer(k.into());
        if cur.is_zero() {
            break;
        }
        counts[c] = k;
        clique_walk(
            m,
            w,
            colors,
            idx + 1,
            remaining - k,
            cur.clone(),
            counts,
            total,
        );
    }
    counts[c] = 0;
}

/// `hom(G, H_ε)` as a polynomial in `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EpsPolynomial {
    #[serde(with = "serde_rat::vec")]
    pub coeffs: Vec<Rational>,
}

impl EpsPolynomial {
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, eps: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * eps + c)
    }
}

impl fmt::Display for EpsPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `2^{-n} Σ_{x∈{0,1}^n} (1+2ε)^{m(x)}`, `m(x)` the monochromatic edges.
pub fn hom_eps_polynomial(g: &Graph) -> Result<EpsPolynomial> {
    let n = g.n();
    if n > MAX_EPS_VERTICES {
        return Err(Error::LimitExceeded {
            what: format!("eps polynomial on {n} vertices"),
            limit: MAX_EPS_VERTICES,
        });
    }
    let edges = g.m();
    let mut cnt = vec![0u64; edges + 1];
    for x in 0u64..1 << n {
        let mono = g
            .edges()
            .iter()
            .filter(|&&(u, v)| (x >> u & 1) == (x >> v & 1))
            .count();
        cnt[mono] += 1;
    }
    // (1+2ε)^m = Σ_k C(m,k) 2^k ε^k
    let mut coeffs = vec![BigInt::zero(); edges + 1];
    for (m, &c) in cnt.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut binom = BigInt::one();
        for (k, slot) in coeffs.iter_mut().enumerate().take(m + 1) {
            *slot += (&binom * BigInt::from(c)) << k;
            binom = binom * BigInt::from(m - k) / BigInt::from(k + 1);
        }
    }
    let den = BigInt::one() << n;
    let mut coeffs: Vec<Rational> = coeffs
        .into_iter()
        .map(|c| Rational::new(c, den.clone()))
        .collect();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(EpsPolynomial { coeffs })
}

/// Sum of the model's vertex weights under `λ` (`h_1(λ)`).
pub fn total_weight(m: &Model, lambda: Option<&VertexConstraint>) -> Result<Rational> {
    Ok(effective_weights(m, lambda)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, GraphFamilySpec};
    use crate::model::{
        model_complete_looped, model_h_eps, model_hard_core, model_two_spin, random_model,
        RandomKind,
    };
    use crate::scalar::{int, rat};

    fn named(s: &str) -> Graph {
        build_named(&GraphFamilySpec::parse(s).unwrap()).unwrap()
    }

    /// Plain enumeration of all `q^n` maps.
    fn brute_hom(g: &Graph, m: &Model, cs: Option<&[VertexConstraint]>) -> Rational {
        let (n, q) = (g.n(), m.q());
        let mut total = Rational::zero();
        for idx in 0..q.pow(n as u32) {
            let x: Vec<usize> = (0..n).map(|i| idx / q.pow(i as u32) % q).collect();
            let mut w = Rational::one();
            for &(u, v) in g.edges() {
                w *= m.edge(x[u], x[v]);
            }
            for v in 0..n {
                w *= &m.vertex_weights()[x[v]];
                if let Some(cs) = cs {
                    w *= &cs[v].weights[x[v]];
                }
            }
            total += w;
        }
        total
    }

    #[test]
    fn hom_examples() {
        let k3 = model_complete_looped(3, 0).unwrap();
        assert_eq!(hom(&named("C6"), &k3, None).unwrap(), int(66));
        assert_eq!(
            hom(&named("C6"), &model_hard_core(), None).unwrap(),
            int(18)
        );
        for g in ["K4", "C5", "petersen"] {
            assert_eq!(
                hom(&named(g), &model_h_eps(&int(0)).unwrap(), None).unwrap(),
                int(1)
            );
        }
        assert_eq!(
            hom(&named("K2"), &model_complete_looped(2, 1).unwrap(), None).unwrap(),
            int(3)
        );
        assert_eq!(hom(&named("K2"), &k3, None).unwrap(), int(6));
        assert_eq!(
            hom(&named("K5"), &model_complete_looped(1, 1).unwrap(), None).unwrap(),
            int(1)
        );
    }

    #[test]
    fn hom_matches_brute_force_with_constraints() {
        for seed in 0..20 {
            let m = random_model(3, seed, RandomKind::General).unwrap();
            for g in ["C4", "K4", "P4", "K1,3"] {
                let g = named(g);
                let cs: Vec<VertexConstraint> = (0..g.n())
                    .map(|v| {
                        VertexConstraint::new(vec![
                            rat(v as i64 + 1, 2),
                            int(0),
                            rat(3, (seed as i64) + 1),
                        ])
                        .unwrap()
                    })
                    .collect();
                assert_eq!(hom(&g, &m, None).unwrap(), brute_hom(&g, &m, None));
                assert_eq!(
                    hom(&g, &m, Some(&cs)).unwrap(),
                    brute_hom(&g, &m, Some(&cs))
                );
                let f = m.map(|x| x.to_f64().unwrap());
                let approx = hom_with(&g, &f, None).unwrap();
                let exact = hom(&g, &m, None).unwrap().to_f64().unwrap();
                assert!((approx - exact).abs() <= 1e-9 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn hom_dimension_errors() {
        let m = model_hard_core();
        let cs = vec![VertexConstraint::ones(3); 2];
        assert!(matches!(
            hom(&named("K2"), &m, Some(&cs)),
            Err(Error::DimensionMismatch { .. })
        ));
        let cs = vec![VertexConstraint::ones(2); 3];
        assert!(matches!(
            hom(&named("K2"), &m, Some(&cs)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn biclique_examples() {
        let k3 = model_complete_looped(3, 0).unwrap();
        assert_eq!(hom_biclique(2, 2, &k3, None).unwrap(), int(18));
        assert_eq!(
            hom_biclique(2, 2, &model_hard_core(), None).unwrap(),
            int(7)
        );
        let m = random_model(3, 4, RandomKind::General).unwrap();
        let s: Rational = m.vertex_weights().iter().sum();
        assert_eq!(hom_biclique(3, 0, &m, None).unwrap(), pow(&s, 3));
        assert_eq!(hom_biclique(0, 0, &m, None).unwrap(), int(1));
    }

    #[test]
    fn biclique_matches_hom() {
        for seed in 0..6 {
            let m = random_model(2 + (seed as usize % 2), seed, RandomKind::General).unwrap();
            for a in 1..=3 {
                for b in 1..=3 {
                    let g = build_named(&GraphFamilySpec::Biclique { a, b }).unwrap();
                    assert_eq!(
                        hom_biclique(a, b, &m, None).unwrap(),
                        hom(&g, &m, None).unwrap()
                    );
                    let la =
                        VertexConstraint::new(vec![int(1), rat(1, 3), int(2)][..m.q()].to_vec())
                            .unwrap();
                    let lb = VertexConstraint::new(vec![int(0), int(5), int(1)][..m.q()].to_vec())
                        .unwrap();
                    let cs: Vec<_> = (0..a + b)
                        .map(|v| if v < a { la.clone() } else { lb.clone() })
                        .collect();
                    assert_eq!(
                        hom_biclique(a, b, &m, Some((&la, &lb))).unwrap(),
                        hom(&g, &m, Some(&cs)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let n = biclique_norm_power(&EdgeKernel::all_ones(2, 2), 2, 2).unwrap();
        assert_eq!((n.base, n.exponent), (int(16), rat(1, 4)));
        assert_eq!(
            biclique_norm_power(&EdgeKernel::distinct(2), 2, 2)
                .unwrap()
                .base,
            int(2)
        );
        assert_eq!(
            biclique_norm_power(&EdgeKernel::distinct(3), 2, 2)
                .unwrap()
                .base,
            int(18)
        );
        // asymmetric kernel: a copies on the row side
        let f = EdgeKernel::new(vec![
            vec![int(1), int(2), int(0)],
            vec![int(3), int(1), int(1)],
        ])
        .unwrap();
        let mut brute = Rational::zero();
        for x in 0..4 {
            for y in 0..27 {
                let xs = [x % 2, x / 2];
                let ys = [y % 3, y / 3 % 3, y / 9];
                let mut p = Rational::one();
                for &i in &xs {
                    for &j in &ys {
                        p *= f.get(i, j);
                    }
                }
                brute += p;
            }
        }
        assert_eq!(biclique_norm_power(&f, 2, 3).unwrap().base, brute);
    }

    #[test]
    fn clique_examples() {
        let m = model_two_spin(&int(2), &int(1), &int(2), &int(1), &int(1)).unwrap();
        assert_eq!(hom_clique(2, &m, None).unwrap(), int(6));
        assert_eq!(hom_clique(3, &m, None).unwrap(), int(28));
        assert_eq!(hom_clique(0, &m, None).unwrap(), int(1));
        for seed in 0..10 {
            let m = random_model(3, seed, RandomKind::Psd).unwrap();
            let lam = VertexConstraint::new(vec![int(1), rat(1, 2), int(0)]).unwrap();
            for a in 1..=4 {
                let g = build_named(&GraphFamilySpec::Complete { n: a }).unwrap();
                let cs = vec![lam.clone(); a];
                assert_eq!(
                    hom_clique(a, &m, Some(&lam)).unwrap(),
                    brute_hom(&g, &m, Some(&cs))
                );
            }
        }
    }

    #[test]
    fn eps_polynomial_examples() {
        let k3 = hom_eps_polynomial(&named("K3")).unwrap();
        assert_eq!(k3.coeffs, vec![int(1), int(3), int(3), int(2)]);
        let c4 = hom_eps_polynomial(&named("C4")).unwrap();
        assert_eq!(c4.coeffs, vec![int(1), int(4), int(6), int(4), int(2)]);
        let k2 = hom_eps_polynomial(&named("K2")).unwrap();
        assert_eq!(k2.coeffs, vec![int(1), int(1)]);
        let eps = rat(1, 10);
        let m = model_h_eps(&eps).unwrap();
        for g in ["K3", "C5", "K2,3"] {
            let g = named(g);
            assert_eq!(
                hom_eps_polynomial(&g).unwrap().eval(&eps),
                hom(&g, &m, None).unwrap()
            );
        }
        assert!(hom_eps_polynomial(&Graph::empty(13).unwrap()).is_err());
    }

    #[test]
    fn constraint_parsing() {
        let cs = parse_constraints("0: {0,2}\n# comment\n1: 1/2 0 3\n2 1 1\n", 3, 3).unwrap();
        assert_eq!(cs[0].weights, vec![int(1), int(0), int(1)]);
        assert_eq!(cs[1].weights, vec![rat(1, 2), int(0), int(3)]);
        assert_eq!(cs[2].weights, vec![int(2), int(1), int(1)]);
        assert!(parse_constraints("0: {0,5}\n", 1, 3).is_err());
        assert!(parse_constraints("0: {0}\n", 2, 3).is_err());
    }
}
