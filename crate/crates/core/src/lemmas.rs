//! Local lemma instances: validation, evaluation and random generation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{cc, ominus, ColorSet};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::{add_apexes, build_named, Graph, GraphFamilySpec};
use crate::hom::{hom, hom_clique, kernel_biclique_sum, EdgeKernel, VertexConstraint};
use crate::model::{classify_model, random_model, small_rational, Model, RandomKind};
use crate::power::CompareConfig;
use crate::report::{Flag, IneqReport};
use crate::scalar::{natural_to_rational, pow, rat, serde_rat, Rational};
use crate::sym::{check_sym_corollary, check_sym_monotone};

pub const LEMMA_IDS: [&str; 13] = [
    "mixed-norm",
    "mixed-norm-2",
    "local-123",
    "color-holder",
    "color-bcd",
    "color-ac",
    "color-abc",
    "clique-cs",
    "h-log-convex",
    "f-log-conv",
    "m-log-conv",
    "sym-monotone",
    "sym-corollary",
];

/// Which inequality of the `M_s` family to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "part")]
pub enum MPart {
    /// `M_{b+1} ≥ M_b M_1`
    A,
    /// `M_s M_{s+2} ≥ M_{s+1}²`
    B { s: usize },
    /// `M_{a+1} ≥ M_1^{a+1}`
    C,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lemma", rename_all = "kebab-case")]
pub enum LemmaInstance {
    /// `‖AᵀB‖²_{L1,q} ≤ ‖AᵀA‖_{Lq,q} ‖BᵀB‖_{L1,1}`
    MixedNorm {
        #[serde(with = "serde_rat::mat")]
        a: Vec<Vec<Rational>>,
        #[serde(with = "serde_rat::mat")]
        b: Vec<Vec<Rational>>,
        #[serde(with = "serde_rat")]
        q: Rational,
    },
    #[serde(rename = "mixed-norm-2")]
    MixedNorm2 {
        /// `f[s][t]`
        #[serde(with = "serde_rat::mat")]
        f: Vec<Vec<Rational>>,
        /// `g[s][t][u]`
        #[serde(with = "serde_rat::cube")]
        g: Vec<Vec<Vec<Rational>>>,
        /// `h[s][t][v]`
        #[serde(with = "serde_rat::cube")]
        h: Vec<Vec<Vec<Rational>>>,
        #[serde(with = "serde_rat")]
        q: Rational,
    },
    #[serde(rename = "local-123")]
    Local123 {
        f12: EdgeKernel,
        f23: EdgeKernel,
        beta: usize,
        gamma: usize,
        delta: usize,
    },
    ColorHolder {
        colors: usize,
        looped: ColorSet,
        a_set: ColorSet,
        b_set: ColorSet,
        k: usize,
        r: usize,
        s: usize,
        t: usize,
    },
    ColorBcd {
        colors: usize,
        looped: ColorSet,
        b_set: ColorSet,
        c_set: ColorSet,
        d_set: ColorSet,
        b: usize,
        c: usize,
        k: usize,
        #[serde(with = "serde_rat")]
        t: Rational,
    },
    ColorAc {
        colors: usize,
        looped: ColorSet,
        a_set: ColorSet,
        b_set: ColorSet,
        c_set: ColorSet,
        a: usize,
        b: usize,
        c: usize,
    },
    ColorAbc {
        colors: usize,
        looped: ColorSet,
        a_set: ColorSet,
        b_set: ColorSet,
        c_set: ColorSet,
        a: usize,
        b: usize,
        c: usize,
    },
    /// `hom_λ(G••) hom_μ(G) ≥ hom_ν(G•)²`; apex entries come last.
    CliqueCs {
        model: Model,
        n: usize,
        edges: Vec<(usize, usize)>,
        lambda: Vec<VertexConstraint>,
        mu: Vec<VertexConstraint>,
        nu: Vec<VertexConstraint>,
    },
    HLogConvex {
        model: Model,
        t: usize,
        lambda: VertexConstraint,
        mu: VertexConstraint,
        nu: VertexConstraint,
    },
    /// `s = None` checks `F_0^{a-1} F_a ≥ F_1^a`.
    FLogConv {
        model: Model,
        a: usize,
        mu: VertexConstraint,
        nu: VertexConstraint,
        #[serde(default)]
        s: Option<usize>,
    },
    MLogConv {
        model: Model,
        a: usize,
        b: usize,
        lambda: VertexConstraint,
        mu: VertexConstraint,
        #[serde(flatten)]
        part: MPart,
    },
    SymMonotone {
        #[serde(with = "serde_rat::vec")]
        alphas: Vec<Rational>,
        k: usize,
    },
    SymCorollary {
        #[serde(with = "serde_rat::vec")]
        alphas: Vec<Rational>,
        k: usize,
        /// `τ(0), τ(1), …`
        #[serde(with = "serde_rat::vec")]
        tau: Vec<Rational>,
    },
}

fn violated(cond: impl Into<String>) -> Error {
    Error::PreconditionViolated(cond.into())
}

fn require(ok: bool, cond: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(violated(cond))
    }
}

fn frac(num: i64, den: i64) -> Rational {
    rat(num, den)
}

fn nat(x: num_bigint::BigUint) -> Rational {
    natural_to_rational(&x)
}

fn size_of(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn nonneg_mat(m: &[Vec<Rational>], name: &str) -> Result<usize> {
    let cols = m.first().map_or(0, Vec::len);
    for row in m {
        require(row.len() == cols, &format!("{name} is rectangular"))?;
        require(
            row.iter().all(|x| !x.is_negative()),
            &format!("{name} is nonnegative"),
        )?;
    }
    Ok(cols)
}

fn cube_shape(c: &[Vec<Vec<Rational>>], name: &str) -> Result<(usize, usize, usize)> {
    let s = c.len();
    let t = c.first().map_or(0, Vec::len);
    let u = c.first().and_then(|m| m.first()).map_or(0, Vec::len);
    for m in c {
        require(m.len() == t, &format!("{name} is a box"))?;
        for row in m {
            require(row.len() == u, &format!("{name} is a box"))?;
            require(
                row.iter().all(|x| !x.is_negative()),
                &format!("{name} is nonnegative"),
            )?;
        }
    }
    Ok((s, t, u))
}

fn check_sets(colors: usize, sets: &[(ColorSet, &str)]) -> Result<()> {
    require(
        (1..=crate::coloring::MAX_COLORS).contains(&colors),
        "1 <= colors <= 64",
    )?;
    for (set, name) in sets {
        require(
            set.is_subset(ColorSet::full(colors)),
            &format!("{name} is a subset of the colors"),
        )?;
    }
    Ok(())
}

fn require_psd(m: &Model) -> Result<()> {
    require(
        classify_model(m)?.ferromagnetic,
        "H is positive semidefinite",
    )
}

fn require_q(c: &VertexConstraint, m: &Model, name: &str) -> Result<()> {
    require(c.q() == m.q(), &format!("{name} has one entry per color"))
}

impl LemmaInstance {
    pub fn id(&self) -> &'static str {
        match self {
            LemmaInstance::MixedNorm { .. } => "mixed-norm",
            LemmaInstance::MixedNorm2 { .. } => "mixed-norm-2",
            LemmaInstance::Local123 { .. } => "local-123",
            LemmaInstance::ColorHolder { .. } => "color-holder",
            LemmaInstance::ColorBcd { .. } => "color-bcd",
            LemmaInstance::ColorAc { .. } => "color-ac",
            LemmaInstance::ColorAbc { .. } => "color-abc",
            LemmaInstance::CliqueCs { .. } => "clique-cs",
            LemmaInstance::HLogConvex { .. } => "h-log-convex",
            LemmaInstance::FLogConv { .. } => "f-log-conv",
            LemmaInstance::MLogConv { .. } => "m-log-conv",
            LemmaInstance::SymMonotone { .. } => "sym-monotone",
            LemmaInstance::SymCorollary { .. } => "sym-corollary",
        }
    }

    /// Checks the stated hypotheses; the error names the failing one.
    pub fn validate(&self) -> Result<()> {
        match self {
            LemmaInstance::MixedNorm { a, b, q } => {
                require(q >= &Rational::one(), "q >= 1")?;
                nonneg_mat(a, "A")?;
                nonneg_mat(b, "B")?;
                require(a.len() == b.len(), "A and B have the same number of rows")
            }
            LemmaInstance::MixedNorm2 { f, g, h, q } => {
                require(q >= &Rational::one(), "q >= 1")?;
                let ft = nonneg_mat(f, "f")?;
                let (gs, gt, _) = cube_shape(g, "g")?;
                let (hs, ht, _) = cube_shape(h, "h")?;
                require(gs == f.len() && hs == f.len(), "f, g, h share the s range")?;
                require(gt == ft && ht == ft, "f, g, h share the t range")
            }
            LemmaInstance::Local123 {
                f12,
                f23,
                beta,
                gamma,
                delta,
            } => {
                require(1 <= *beta && beta <= delta, "1 <= beta <= delta")?;
                require(*gamma >= 2, "gamma >= 2")?;
                require(
                    f12.shape().1 == f23.shape().0,
                    "f12 and f23 share the middle color set",
                )
            }
            LemmaInstance::ColorHolder {
                colors,
                a_set,
                b_set,
                looped,
                r,
                s,
                t,
                ..
            } => {
                check_sets(
                    *colors,
                    &[(*a_set, "A"), (*b_set, "B"), (*looped, "looped set")],
                )?;
                require(r <= s && s <= t, "r <= s <= t")
            }
            LemmaInstance::ColorBcd {
                colors,
                looped,
                b_set,
                c_set,
                d_set,
                b,
                c,
                k,
                t,
            } => {
                check_sets(
                    *colors,
                    &[
                        (*b_set, "B"),
                        (*c_set, "C"),
                        (*d_set, "D"),
                        (*looped, "looped set"),
                    ],
                )?;
                require(d_set.is_subset(*c_set), "D is a subset of C")?;
                require(
                    d_set.intersect(*looped).is_empty(),
                    "D avoids looped colors",
                )?;
                require(*b >= 2, "b >= 2")?;
                require(*c >= 1 && *k >= 1, "c, k >= 1")?;
                require(t >= &Rational::one(), "t >= 1")
            }
            LemmaInstance::ColorAc {
                colors,
                looped,
                a_set,
                b_set,
                c_set,
                a,
                b,
                c,
            }
            | LemmaInstance::ColorAbc {
                colors,
                looped,
                a_set,
                b_set,
                c_set,
                a,
                b,
                c,
            } => {
                check_sets(
                    *colors,
                    &[
                        (*a_set, "A"),
                        (*b_set, "B"),
                        (*c_set, "C"),
                        (*looped, "looped set"),
                    ],
                )?;
                require(*a >= 1 && *b >= 1 && *c >= 1, "a, b, c >= 1")?;
                require(b.max(c) <= a, "max(b, c) <= a")?;
                require(b + c > 2, "b + c > 2")
            }
            LemmaInstance::CliqueCs {
                model,
                n,
                edges,
                lambda,
                mu,
                nu,
            } => {
                Graph::from_edges(*n, edges)?;
                require(lambda.len() == n + 2, "lambda has n + 2 entries")?;
                require(mu.len() == *n, "mu has n entries")?;
                require(nu.len() == n + 1, "nu has n + 1 entries")?;
                for c in lambda.iter().chain(mu).chain(nu) {
                    require_q(c, model, "each weight")?;
                }
                for v in 0..*n {
                    for x in 0..model.q() {
                        let l = &lambda[v].weights[x] * &mu[v].weights[x];
                        let r = &nu[v].weights[x] * &nu[v].weights[x];
                        require(l == r, "lambda_v mu_v = nu_v^2")?;
                    }
                }
                require(
                    lambda[*n] == nu[*n] && lambda[n + 1] == nu[*n],
                    "new-vertex entries of lambda and nu are identical",
                )
            }
            LemmaInstance::HLogConvex {
                model,
                t,
                lambda,
                mu,
                nu,
            } => {
                require(*t >= 2, "t >= 2")?;
                for (c, name) in [(lambda, "lambda"), (mu, "mu"), (nu, "nu")] {
                    require_q(c, model, name)?;
                }
                for x in 0..model.q() {
                    require(
                        &lambda.weights[x] * &mu.weights[x] == &nu.weights[x] * &nu.weights[x],
                        "lambda mu = nu^2",
                    )?;
                }
                require_psd(model)
            }
            LemmaInstance::FLogConv {
                model,
                a,
                mu,
                nu,
                s,
            } => {
                require(*a >= 1, "a >= 1")?;
                require_q(mu, model, "mu")?;
                require_q(nu, model, "nu")?;
                if let Some(s) = s {
                    require(s + 2 <= *a, "s <= a - 2")?;
                }
                require_psd(model)
            }
            LemmaInstance::MLogConv {
                model,
                a,
                b,
                lambda,
                mu,
                part,
            } => {
                require(1 <= *b && b <= a, "1 <= b <= a")?;
                require_q(lambda, model, "lambda")?;
                require_q(mu, model, "mu")?;
                if let MPart::B { s } = part {
                    require(b <= s && s < a, "b <= s <= a - 1")?;
                }
                require_psd(model)
            }
            LemmaInstance::SymMonotone { alphas, k } => {
                require(!alphas.is_empty() && *k >= 1, "n, k >= 1")?;
                require(
                    alphas.iter().all(|a| !a.is_negative()),
                    "alphas are nonnegative",
                )
            }
            LemmaInstance::SymCorollary { alphas, k, tau } => {
                require(!alphas.is_empty() && *k >= 1, "n, k >= 1")?;
                require(
                    alphas.iter().all(|a| !a.is_negative()),
                    "alphas are nonnegative",
                )?;
                require(tau.len() > alphas.len().min(*k), "tau covers 0..=min(n, k)")?;
                require(
                    tau.windows(2).all(|w| w[1] <= w[0]) && tau.iter().all(|t| !t.is_negative()),
                    "tau is nonnegative and nonincreasing",
                )
            }
        }
    }

    fn describe(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| self.id().to_string())
    }
}

/// Evaluates both sides of the instance's inequality exactly.
pub fn check_local_lemma(inst: &LemmaInstance, cfg: &CompareConfig) -> Result<IneqReport> {
    inst.validate()?;
    let (lhs, rhs, note) = match inst {
        LemmaInstance::SymMonotone { alphas, k } => return check_sym_monotone(alphas, *k, cfg),
        LemmaInstance::SymCorollary { alphas, k, tau } => {
            return check_sym_corollary(alphas, *k, tau, cfg)
        }
        LemmaInstance::MixedNorm { a, b, q } => sides_mixed_norm(a, b, q),
        LemmaInstance::MixedNorm2 { f, g, h, q } => sides_mixed_norm_2(f, g, h, q),
        LemmaInstance::Local123 {
            f12,
            f23,
            beta,
            gamma,
            delta,
        } => sides_local_123(f12, f23, *beta, *gamma, *delta)?,
        LemmaInstance::ColorHolder {
            looped,
            a_set,
            b_set,
            k,
            r,
            s,
            t,
            ..
        } => sides_color_holder(*looped, *a_set, *b_set, *k, *r, *s, *t),
        LemmaInstance::ColorBcd {
            looped,
            b_set,
            c_set,
            d_set,
            b,
            c,
            k,
            t,
            ..
        } => sides_color_bcd(*looped, *b_set, *c_set, *d_set, *b, *c, *k, t),
        LemmaInstance::ColorAc {
            looped,
            a_set,
            b_set,
            c_set,
            a,
            b,
            c,
            ..
        } => sides_color_ac(*looped, *a_set, *b_set, *c_set, *a, *b, *c, false),
        LemmaInstance::ColorAbc {
            looped,
            a_set,
            b_set,
            c_set,
            a,
            b,
            c,
            ..
        } => sides_color_ac(*looped, *a_set, *b_set, *c_set, *a, *b, *c, true),
        LemmaInstance::CliqueCs {
            model,
            n,
            edges,
            lambda,
            mu,
            nu,
        } => sides_clique_cs(model, *n, edges, lambda, mu, nu)?,
        LemmaInstance::HLogConvex {
            model,
            t,
            lambda,
            mu,
            nu,
        } => sides_h_log_convex(model, *t, lambda, mu, nu)?,
        LemmaInstance::FLogConv {
            model,
            a,
            mu,
            nu,
            s,
        } => sides_f_log_conv(model, *a, mu, nu, *s)?,
        LemmaInstance::MLogConv {
            model,
            a,
            b,
            lambda,
            mu,
            part,
        } => sides_m_log_conv(model, *a, *b, lambda, mu, *part)?,
    };
    let mut report = IneqReport::decide(inst.id(), inst.describe(), lhs, rhs, cfg)?
        .flag_if_violated(Flag::ContradictsTheorem);
    report.note = note;
    Ok(report)
}

type Sides = (Expr, Expr, Option<String>);

fn plain(lhs: Expr, rhs: Expr) -> Sides {
    (lhs, rhs, None)
}

fn transpose_mul(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cx = x.first().map_or(0, Vec::len);
    let cy = y.first().map_or(0, Vec::len);
    (0..cx)
        .map(|i| {
            (0..cy)
                .map(|j| x.iter().zip(y).map(|(rx, ry)| &rx[i] * &ry[j]).sum())
                .collect()
        })
        .collect()
}

fn sides_mixed_norm(a: &[Vec<Rational>], b: &[Vec<Rational>], q: &Rational) -> Sides {
    let ab = transpose_mul(a, b);
    let row_sums = ab
        .iter()
        .map(|row| Expr::power(row.iter().sum(), q.clone()));
    let lhs = Expr::pow(Expr::sum(row_sums), Rational::from_integer(2.into()) / q);
    let aa = transpose_mul(a, a);
    let aa_norm = Expr::pow(
        Expr::sum(
            aa.iter()
                .flatten()
                .map(|x| Expr::power(x.clone(), q.clone())),
        ),
        q.recip(),
    );
    let bb: Rational = transpose_mul(b, b).into_iter().flatten().sum();
    plain(lhs, Expr::prod([aa_norm, Expr::rat(bb)]))
}

fn sides_mixed_norm_2(
    f: &[Vec<Rational>],
    g: &[Vec<Vec<Rational>>],
    h: &[Vec<Vec<Rational>>],
    q: &Rational,
) -> Sides {
    let ns = f.len();
    let nt = f.first().map_or(0, Vec::len);
    let nu = g.first().and_then(|m| m.first()).map_or(0, Vec::len);
    let nv = h.first().and_then(|m| m.first()).map_or(0, Vec::len);
    let mut lhs_terms = Vec::new();
    let mut g_terms = Vec::new();
    let mut h_terms = Vec::new();
    for t in 0..nt {
        for v in 0..nv {
            let mut inner = Rational::zero();
            for s in 0..ns {
                let gs: Rational = (0..nu).map(|u| &g[s][t][u]).sum();
                inner += &f[s][t] * gs * &h[s][t][v];
            }
            lhs_terms.push(Expr::power(inner, q.clone()));
        }
        let mut gg = Rational::zero();
        for s in 0..ns {
            let gs: Rational = (0..nu).map(|u| &g[s][t][u]).sum();
            gg += &f[s][t] * &gs * &gs;
        }
        g_terms.push(Expr::power(gg, q.clone()));
        for v in 0..nv {
            for w in 0..nv {
                let hh: Rational = (0..ns).map(|s| &f[s][t] * &h[s][t][v] * &h[s][t][w]).sum();
                h_terms.push(Expr::power(hh, q.clone()));
            }
        }
    }
    let lhs = Expr::pow(Expr::sum(lhs_terms), Rational::from_integer(2.into()));
    plain(lhs, Expr::prod([Expr::sum(g_terms), Expr::sum(h_terms)]))
}

fn sides_local_123(
    f12: &EdgeKernel,
    f23: &EdgeKernel,
    beta: usize,
    gamma: usize,
    delta: usize,
) -> Result<Sides> {
    let (n1, n2) = f12.shape();
    let n3 = f23.shape().1;
    let ones2 = vec![Rational::one(); n2];
    let ones3 = vec![Rational::one(); n3];
    let exp = frac(delta as i64, beta as i64);
    let mut terms = Vec::with_capacity(n1);
    for x in 0..n1 {
        // ‖f23^x‖^{β(γ-1)} folds f12(x, ·) into the row weights
        let s = kernel_biclique_sum(f23, &f12.rows()[x], &ones3, beta, gamma - 1)?;
        terms.push(Expr::power(s, exp.clone()));
    }
    let n12 = kernel_biclique_sum(f12, &vec![Rational::one(); n1], &ones2, gamma, delta)?;
    let n23 = kernel_biclique_sum(f23, &ones2, &ones3, beta, gamma)?;
    let rhs = Expr::prod([
        Expr::power(n12, frac(1, gamma as i64)),
        Expr::power(
            n23,
            frac((delta * (gamma - 1)) as i64, (beta * gamma) as i64),
        ),
    ]);
    Ok(plain(Expr::sum(terms), rhs))
}

fn cc_rat(a: ColorSet, b: ColorSet, x: usize, y: usize, looped: ColorSet) -> Rational {
    nat(cc(a, b, x, y, looped))
}

#[allow(clippy::too_many_arguments)]
fn sides_color_holder(
    looped: ColorSet,
    a: ColorSet,
    b: ColorSet,
    k: usize,
    r: usize,
    s: usize,
    t: usize,
) -> Sides {
    let lhs = Expr::rat(cc_rat(a, b, k, s, looped));
    if r == t {
        return plain(lhs.clone(), lhs);
    }
    let span = (t - r) as i64;
    let rhs = Expr::prod([
        Expr::power(cc_rat(a, b, k, r, looped), frac((t - s) as i64, span)),
        Expr::power(cc_rat(a, b, k, t, looped), frac((s - r) as i64, span)),
    ]);
    plain(lhs, rhs)
}

/// All sequences in `set^k`.
fn sequences(set: ColorSet, k: usize) -> Vec<Vec<usize>> {
    let colors: Vec<usize> = set.iter().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                colors.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn sides_color_bcd(
    looped: ColorSet,
    b_set: ColorSet,
    c_set: ColorSet,
    d_set: ColorSet,
    b: usize,
    c: usize,
    k: usize,
    t: &Rational,
) -> Sides {
    let e_lhs = t / size_of(b - 1);
    let e_rhs = t * size_of(c - 1) / size_of((b - 1) * c);
    let e_c = -(Rational::one() - frac(k as i64, c as i64)) * t;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for x in sequences(d_set, k) {
        let mut l = Vec::with_capacity(k);
        let mut r = Vec::with_capacity(k + 2);
        for &xi in &x {
            let one = ColorSet::singleton(xi);
            l.push(Expr::power(
                cc_rat(b_set.minus(one), c_set.minus(one), c - 1, b - 1, looped),
                e_lhs.clone(),
            ));
            r.push(Expr::power(
                cc_rat(b_set.minus(one), c_set, c, b - 1, looped),
                e_rhs.clone(),
            ));
        }
        let used = ColorSet::from_colors(&x);
        r.push(Expr::power(size_of(c_set.minus(used).len()), t.clone()));
        r.push(Expr::power(size_of(c_set.len()), e_c.clone()));
        lhs.push(Expr::prod(l));
        rhs.push(Expr::prod(r));
    }
    plain(Expr::Sum(lhs), Expr::Sum(rhs))
}

#[allow(clippy::too_many_arguments)]
fn sides_color_ac(
    looped: ColorSet,
    a_set: ColorSet,
    b_set: ColorSet,
    c_set: ColorSet,
    a: usize,
    b: usize,
    c: usize,
    abc: bool,
) -> Sides {
    let w = (b + c - 2) as i64;
    let lhs: Vec<Expr> = a_set
        .iter()
        .map(|x| {
            let one = ColorSet::singleton(x);
            Expr::power(
                cc_rat(
                    ominus(b_set, one, looped),
                    ominus(c_set, one, looped),
                    c - 1,
                    b - 1,
                    looped,
                ),
                frac(a as i64, w),
            )
        })
        .collect();
    let ac = Expr::power(
        cc_rat(a_set, c_set, c, a, looped),
        frac((b - 1) as i64, c as i64 * w),
    );
    let rhs = if abc {
        Expr::prod([
            Expr::power(
                cc_rat(a_set, b_set, b, a, looped),
                frac((c - 1) as i64, b as i64 * w),
            ),
            ac,
            Expr::power(
                cc_rat(b_set, c_set, c, b, looped),
                frac((a * (b - 1) * (c - 1)) as i64, w * (b * c) as i64),
            ),
        ])
    } else {
        let inner: Vec<Expr> = a_set
            .iter()
            .map(|x| {
                Expr::power(
                    cc_rat(
                        ominus(b_set, ColorSet::singleton(x), looped),
                        c_set,
                        c,
                        b - 1,
                        looped,
                    ),
                    frac(a as i64, c as i64),
                )
            })
            .collect();
        Expr::prod([ac, Expr::pow(Expr::Sum(inner), frac((c - 1) as i64, w))])
    };
    plain(Expr::Sum(lhs), rhs)
}

fn sides_clique_cs(
    model: &Model,
    n: usize,
    edges: &[(usize, usize)],
    lambda: &[VertexConstraint],
    mu: &[VertexConstraint],
    nu: &[VertexConstraint],
) -> Result<Sides> {
    let g = Graph::from_edges(n, edges)?;
    let two = hom(&add_apexes(&g, 2)?, model, Some(lambda))?;
    let base = hom(&g, model, Some(mu))?;
    let one = hom(&add_apexes(&g, 1)?, model, Some(nu))?;
    Ok(plain(Expr::rat(&one * &one), Expr::rat(two * base)))
}

fn sides_h_log_convex(
    model: &Model,
    t: usize,
    lambda: &VertexConstraint,
    mu: &VertexConstraint,
    nu: &VertexConstraint,
) -> Result<Sides> {
    let lhs = Expr::power(hom_clique(t, model, Some(nu))?, frac(2, t as i64));
    let rhs = Expr::prod([
        Expr::power(
            hom_clique(t + 1, model, Some(lambda))?,
            frac(1, (t + 1) as i64),
        ),
        Expr::power(hom_clique(t - 1, model, Some(mu))?, frac(1, (t - 1) as i64)),
    ]);
    Ok((
        lhs,
        rhs,
        Some("degree hypothesis read as satisfied by the clique theorem".into()),
    ))
}

fn f_value(
    model: &Model,
    a: usize,
    mu: &VertexConstraint,
    nu: &VertexConstraint,
    i: usize,
) -> Result<Rational> {
    let g = build_named(&GraphFamilySpec::Complete { n: a })?;
    let lambda: Vec<VertexConstraint> = (0..a)
        .map(|j| if j < i { mu.clone() } else { nu.clone() })
        .collect();
    hom(&g, model, Some(&lambda))
}

fn sides_f_log_conv(
    model: &Model,
    a: usize,
    mu: &VertexConstraint,
    nu: &VertexConstraint,
    s: Option<usize>,
) -> Result<Sides> {
    let f = |i| f_value(model, a, mu, nu, i);
    Ok(match s {
        Some(s) => {
            let mid = f(s + 1)?;
            plain(Expr::rat(&mid * &mid), Expr::rat(f(s)? * f(s + 2)?))
        }
        None => plain(
            Expr::rat(pow(&f(1)?, a as u64)),
            Expr::rat(pow(&f(0)?, (a - 1) as u64) * f(a)?),
        ),
    })
}

/// Compositions of `total` into `parts` nonnegative parts.
fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `h_s(w)` for weights `w(x) = coef(x)·base(x)^exp`, as a sum over color
/// multisets.
fn clique_expr(
    model: &Model,
    s: usize,
    coef: &[Rational],
    base: &[Rational],
    exp: &Rational,
) -> Expr {
    let q = model.q();
    let mut fact = vec![Rational::one()];
    for i in 1..=s {
        let next = &fact[i - 1] * size_of(i);
        fact.push(next);
    }
    let mut terms = Vec::new();
    for counts in compositions(q, s) {
        let mut c = fact[s].clone();
        for x in 0..q {
            let k = counts[x];
            if k == 0 {
                continue;
            }
            c = c * pow(&(&coef[x] * &model.vertex_weights()[x]), k as u64) / &fact[k];
            c *= pow(model.edge(x, x), (k * (k - 1) / 2) as u64);
            for y in x + 1..q {
                c *= pow(model.edge(x, y), (k * counts[y]) as u64);
            }
        }
        if c.is_zero() {
            continue;
        }
        let mut factors = vec![Expr::rat(c)];
        for x in 0..q {
            if counts[x] > 0 && !exp.is_zero() {
                factors.push(Expr::power(base[x].clone(), exp * size_of(counts[x])));
            }
        }
        terms.push(Expr::prod(factors));
    }
    Expr::Sum(terms)
}

fn sides_m_log_conv(
    model: &Model,
    a: usize,
    b: usize,
    lambda: &VertexConstraint,
    mu: &VertexConstraint,
    part: MPart,
) -> Result<Sides> {
    let q = model.q();
    // η(x)^b = h_b(μ H(x, ·))
    let eta_b: Vec<Rational> = (0..q)
        .map(|x| {
            let w =
                VertexConstraint::new((0..q).map(|y| &mu.weights[y] * model.edge(x, y)).collect())?;
            hom_clique(b, model, Some(&w))
        })
        .collect::<Result<_>>()?;
    let hb1 = hom_clique(b + 1, model, Some(mu))?;
    let m = |s: usize| {
        Expr::prod([
            clique_expr(
                model,
                s,
                &lambda.weights,
                &eta_b,
                &frac((a + 1 - s) as i64, b as i64),
            ),
            Expr::power(
                hb1.clone(),
                frac((s * (s.max(1) - 1)) as i64, (b + 1) as i64),
            ),
        ])
    };
    let (lhs, rhs) = match part {
        MPart::A => (Expr::prod([m(b), m(1)]), m(b + 1)),
        MPart::B { s } => (
            Expr::pow(m(s + 1), Rational::from_integer(2.into())),
            Expr::prod([m(s), m(s + 2)]),
        ),
        MPart::C => (Expr::pow(m(1), size_of(a + 1)), m(a + 1)),
    };
    Ok((
        lhs,
        rhs,
        Some("degree hypothesis read as satisfied by the clique theorem".into()),
    ))
}

// ---------------------------------------------------------------------------
// random instances

fn lemma_index(id: &str) -> Result<usize> {
    LEMMA_IDS
        .iter()
        .position(|&x| x == id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown lemma id '{id}'")))
}

fn rand_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Vec<Vec<Rational>> {
    (0..r)
        .map(|_| (0..c).map(|_| small_rational(rng, 0, 4, 3)).collect())
        .collect()
}

/// Nonempty subset of the colors.
fn rand_set(rng: &mut ChaCha8Rng, colors: usize) -> ColorSet {
    ColorSet(rng.gen_range(1..1u64 << colors))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    [frac(1, 1), frac(3, 2), frac(2, 1), frac(3, 1)]
        .choose(rng)
        .expect("nonempty")
        .clone()
}

fn rand_weights(rng: &mut ChaCha8Rng, q: usize) -> VertexConstraint {
    VertexConstraint::new((0..q).map(|_| small_rational(rng, 0, 4, 3)).collect())
        .expect("nonnegative")
}

/// `(λ, μ, ν)` with `λμ = ν²` pointwise.
fn rand_triple(
    rng: &mut ChaCha8Rng,
    q: usize,
) -> (VertexConstraint, VertexConstraint, VertexConstraint) {
    let mut l = Vec::with_capacity(q);
    let mut m = Vec::with_capacity(q);
    let mut n = Vec::with_capacity(q);
    for _ in 0..q {
        let nu = small_rational(rng, 0, 4, 3);
        if nu.is_zero() && rng.gen_bool(0.5) {
            // one of λ, μ vanishes
            let other = small_rational(rng, 0, 4, 3);
            if rng.gen_bool(0.5) {
                l.push(other);
                m.push(Rational::zero());
            } else {
                l.push(Rational::zero());
                m.push(other);
            }
        } else {
            let mu = small_rational(rng, 1, 4, 3);
            l.push(&nu * &nu / &mu);
            m.push(mu);
        }
        n.push(nu);
    }
    let wrap = |w| VertexConstraint::new(w).expect("nonnegative");
    (wrap(l), wrap(m), wrap(n))
}

fn psd_model(rng: &mut ChaCha8Rng, max_q: usize) -> Model {
    let q = rng.gen_range(1..=max_q);
    random_model(q, rng.gen(), RandomKind::Psd).expect("q in range")
}

/// Deterministic precondition-satisfying instance of lemma `id`.
pub fn random_instance(id: &str, seed: u64) -> Result<LemmaInstance> {
    let idx = lemma_index(id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(100 + idx as u64);
    let rng = &mut rng;
    let inst = match id {
        "mixed-norm" => {
            let m = rng.gen_range(1..=3);
            let (n, k) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            LemmaInstance::MixedNorm {
                a: rand_mat(rng, m, n),
                b: rand_mat(rng, m, k),
                q: rand_q(rng),
            }
        }
        "mixed-norm-2" => {
            let (ns, nt, nu, nv) = (
                rng.gen_range(1..=2),
                rng.gen_range(1..=2),
                rng.gen_range(1..=2),
                rng.gen_range(1..=2),
            );
            LemmaInstance::MixedNorm2 {
                f: rand_mat(rng, ns, nt),
                g: (0..ns).map(|_| rand_mat(rng, nt, nu)).collect(),
                h: (0..ns).map(|_| rand_mat(rng, nt, nv)).collect(),
                q: rand_q(rng),
            }
        }
        "local-123" => {
            let (n1, n2, n3) = (
                rng.gen_range(1..=3),
                rng.gen_range(1..=3),
                rng.gen_range(1..=3),
            );
            let delta = rng.gen_range(1..=3);
            LemmaInstance::Local123 {
                f12: EdgeKernel::new(rand_mat(rng, n1, n2))?,
                f23: EdgeKernel::new(rand_mat(rng, n2, n3))?,
                beta: rng.gen_range(1..=delta),
                gamma: rng.gen_range(2..=3),
                delta,
            }
        }
        "color-holder" => {
            let colors = rng.gen_range(2..=4);
            let mut v = [
                rng.gen_range(0..=4),
                rng.gen_range(0..=4),
                rng.gen_range(0..=4),
            ];
            v.sort_unstable();
            LemmaInstance::ColorHolder {
                colors,
                looped: ColorSet(rng.gen_range(0..1u64 << colors)),
                a_set: rand_set(rng, colors),
                b_set: rand_set(rng, colors),
                k: rng.gen_range(0..=3),
                r: v[0],
                s: v[1],
                t: v[2],
            }
        }
        "color-bcd" => {
            let colors = rng.gen_range(2..=4);
            let looped = ColorSet(rng.gen_range(0..1u64 << colors));
            let c_set = rand_set(rng, colors);
            let d_set = ColorSet(rng.gen_range(0..1u64 << colors)).intersect(c_set.minus(looped));
            LemmaInstance::ColorBcd {
                colors,
                looped,
                b_set: rand_set(rng, colors),
                c_set,
                d_set,
                b: rng.gen_range(2..=3),
                c: rng.gen_range(1..=3),
                k: rng.gen_range(1..=3),
                t: [frac(1, 1), frac(3, 2), frac(2, 1), frac(5, 2)]
                    .choose(rng)
                    .expect("nonempty")
                    .clone(),
            }
        }
        "color-ac" | "color-abc" => {
            let colors = rng.gen_range(2..=4);
            let a = rng.gen_range(2..=4);
            let (mut b, mut c) = (rng.gen_range(1..=a), rng.gen_range(1..=a));
            if b + c == 2 {
                if rng.gen_bool(0.5) {
                    b = 2;
                } else {
                    c = 2;
                }
            }
            let (looped, a_set, b_set, c_set) = (
                ColorSet(rng.gen_range(0..1u64 << colors)),
                rand_set(rng, colors),
                rand_set(rng, colors),
                rand_set(rng, colors),
            );
            if id == "color-ac" {
                LemmaInstance::ColorAc {
                    colors,
                    looped,
                    a_set,
                    b_set,
                    c_set,
                    a,
                    b,
                    c,
                }
            } else {
                LemmaInstance::ColorAbc {
                    colors,
                    looped,
                    a_set,
                    b_set,
                    c_set,
                    a,
                    b,
                    c,
                }
            }
        }
        "clique-cs" => {
            let q = rng.gen_range(1..=3);
            let model = random_model(q, rng.gen(), RandomKind::General)?;
            let n = rng.gen_range(1..=3);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|v| (0..v).map(move |u| (u, v)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let mut lambda = Vec::with_capacity(n + 2);
            let mut mu = Vec::with_capacity(n);
            let mut nu = Vec::with_capacity(n + 1);
            for _ in 0..n {
                let (l, m, v) = rand_triple(rng, q);
                lambda.push(l);
                mu.push(m);
                nu.push(v);
            }
            let apex = rand_weights(rng, q);
            lambda.push(apex.clone());
            lambda.push(apex.clone());
            nu.push(apex);
            LemmaInstance::CliqueCs {
                model,
                n,
                edges,
                lambda,
                mu,
                nu,
            }
        }
        "h-log-convex" => {
            let model = psd_model(rng, 3);
            let (lambda, mu, nu) = rand_triple(rng, model.q());
            LemmaInstance::HLogConvex {
                t: rng.gen_range(2..=3),
                model,
                lambda,
                mu,
                nu,
            }
        }
        "f-log-conv" => {
            let model = psd_model(rng, 3);
            let a = rng.gen_range(1..=4);
            let s = if a >= 2 && rng.gen_bool(0.7) {
                Some(rng.gen_range(0..=a - 2))
            } else {
                None
            };
            LemmaInstance::FLogConv {
                mu: rand_weights(rng, model.q()),
                nu: rand_weights(rng, model.q()),
                model,
                a,
                s,
            }
        }
        "m-log-conv" => {
            let model = psd_model(rng, 2);
            let a = rng.gen_range(1..=3);
            let b = rng.gen_range(1..=a);
            let mut parts = vec![MPart::A, MPart::C];
            parts.extend((b..a).map(|s| MPart::B { s }));
            let part = *parts.choose(rng).expect("nonempty");
            LemmaInstance::MLogConv {
                lambda: rand_weights(rng, model.q()),
                mu: rand_weights(rng, model.q()),
                model,
                a,
                b,
                part,
            }
        }
        "sym-monotone" => {
            let n = rng.gen_range(1..=4);
            LemmaInstance::SymMonotone {
                alphas: (0..n).map(|_| small_rational(rng, 0, 4, 3)).collect(),
                k: rng.gen_range(1..=5),
            }
        }
        "sym-corollary" => {
            let n = rng.gen_range(1..=4);
            let k = rng.gen_range(1..=5);
            let mut tau: Vec<Rational> = (0..=n.min(k))
                .map(|_| small_rational(rng, 0, 4, 3))
                .collect();
            tau.sort_by(|x, y| y.cmp(x));
            LemmaInstance::SymCorollary {
                alphas: (0..n).map(|_| small_rational(rng, 0, 4, 3)).collect(),
                k,
                tau,
            }
        }
        _ => unreachable!("id checked above"),
    };
    debug_assert!(inst.validate().is_ok(), "{}", inst.describe());
    Ok(inst)
}

/// Loads a lemma instance from JSON text.
pub fn parse_lemma_instance(text: &str) -> Result<LemmaInstance> {
    Ok(serde_json::from_str(text)?)
}
