//! Checkers for the reverse-Sidorenko, graphical Brascamp–Lieb, clique and
//! swapping inequalities.

use std::collections::{HashSet, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::ColorSet;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::{bits, tensor_with_k2, Graph};
use crate::hom::{
    hom, hom_biclique, hom_clique, kernel_biclique_sum, EdgeKernel, VertexConstraint,
};
use crate::model::{classify_model, describe_model, two_spin_rule, Model};
use crate::power::CompareConfig;
use crate::report::{Flag, IneqReport};
use crate::scalar::Rational;

pub const REVERSE_SIDORENKO: &str = "reverse-sidorenko";
pub const GRAPHICAL_BL: &str = "graphical-bl";
pub const CLIQUE_MAX: &str = "clique-max";
pub const BST: &str = "bst";

pub const MAX_SWAP_VERTICES: usize = 7;

fn frac(num: usize, den: usize) -> Rational {
    Rational::new(num.into(), den.into())
}

fn require_no_isolated(g: &Graph) -> Result<()> {
    match g.isolated_vertex() {
        Some(v) => Err(Error::IsolatedVertex(v)),
        None => Ok(()),
    }
}

fn check_constraint_count<T>(g: &Graph, cs: Option<&[T]>) -> Result<()> {
    match cs {
        Some(cs) if cs.len() != g.n() => Err(Error::DimensionMismatch {
            expected: g.n(),
            found: cs.len(),
        }),
        _ => Ok(()),
    }
}

/// Looped set of `m` when it is a partially looped complete graph with
/// uniform vertex weights.
pub fn semiproper_looped_set(m: &Model) -> Option<ColorSet> {
    let q = m.q();
    let w0 = m.vertex_weights().first()?;
    if m.vertex_weights().iter().any(|w| w != w0) {
        return None;
    }
    for i in 0..q {
        for j in 0..q {
            let e = m.edge(i, j);
            let ok = if i == j {
                e.is_zero() || e.is_one()
            } else {
                e.is_one()
            };
            if !ok {
                return None;
            }
        }
    }
    Some(ColorSet::from_colors(
        &(0..q)
            .filter(|&c| m.edge(c, c).is_one())
            .collect::<Vec<_>>(),
    ))
}

fn instance_name(g: &Graph, m: &Model, constraints: bool) -> String {
    let mut s = format!("G={} H={}", g.to_graph6(), describe_model(m));
    if constraints {
        s.push_str(" +constraints");
    }
    s
}

/// `hom(G, H) ≤ ∏_{uv} hom(K_{d_u,d_v}, H)^{1/(d_u d_v)}`, with constraints
/// carried into the biclique counts.
pub fn check_reverse_sidorenko(
    g: &Graph,
    m: &Model,
    constraints: Option<&[VertexConstraint]>,
    cfg: &CompareConfig,
) -> Result<IneqReport> {
    require_no_isolated(g)?;
    check_constraint_count(g, constraints)?;
    let lhs = hom(g, m, constraints)?;
    let mut factors = Vec::with_capacity(g.m());
    for &(u, v) in g.edges() {
        let (du, dv) = (g.degree(u), g.degree(v));
        let sides = constraints.map(|cs| (&cs[u], &cs[v]));
        // part A holds d_v copies of u
        let base = hom_biclique(dv, du, m, sides)?;
        factors.push(Expr::power(base, frac(1, du * dv)));
    }
    let report = IneqReport::decide(
        REVERSE_SIDORENKO,
        instance_name(g, m, constraints.is_some()),
        Expr::rat(lhs),
        Expr::prod(factors),
        cfg,
    )?;
    let lists_only = constraints.is_none_or(|cs| cs.iter().all(VertexConstraint::is_list));
    let flag = if g.is_triangle_free() || (lists_only && semiproper_looped_set(m).is_some()) {
        Flag::ContradictsTheorem
    } else if constraints.is_none() && classify_model(m)?.antiferromagnetic {
        Flag::ConjectureCounterexample
    } else {
        Flag::Finding
    };
    Ok(report.flag_if_violated(flag))
}

/// Per-vertex color-set sizes implied by a kernel family.
fn kernel_sizes(g: &Graph, kernels: &[EdgeKernel]) -> Result<Vec<usize>> {
    if kernels.len() != g.m() {
        return Err(Error::DimensionMismatch {
            expected: g.m(),
            found: kernels.len(),
        });
    }
    let mut sizes: Vec<Option<usize>> = vec![None; g.n()];
    for (&(u, v), f) in g.edges().iter().zip(kernels) {
        let (r, c) = f.shape();
        for (w, s) in [(u, r), (v, c)] {
            match sizes[w] {
                Some(t) if t != s => {
                    return Err(Error::DimensionMismatch {
                        expected: t,
                        found: s,
                    })
                }
                _ => sizes[w] = Some(s),
            }
        }
    }
    sizes
        .into_iter()
        .enumerate()
        .map(|(v, s)| s.ok_or(Error::IsolatedVertex(v)))
        .collect()
}

/// `Σ_{x∈Ω_V} ∏_{uv} f_uv(x_u, x_v)` by depth-first search over vertices.
pub fn kernel_hom(g: &Graph, kernels: &[EdgeKernel]) -> Result<Rational> {
    let sizes = kernel_sizes(g, kernels)?;
    // back[k]: edges to earlier vertices as (earlier vertex, kernel, k is row side)
    let mut back: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); g.n()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if u < v {
            back[v].push((u, i, false));
        } else {
            back[u].push((v, i, true));
        }
    }
    let mut colors = vec![0usize; g.n()];
    Ok(kernel_rec(0, &sizes, &back, kernels, &mut colors))
}

fn kernel_rec(
    k: usize,
    sizes: &[usize],
    back: &[Vec<(usize, usize, bool)>],
    kernels: &[EdgeKernel],
    colors: &mut [usize],
) -> Rational {
    if k == sizes.len() {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for x in 0..sizes[k] {
        let mut w = Rational::one();
        for &(u, e, row) in &back[k] {
            let f = &kernels[e];
            w *= if row {
                f.get(x, colors[u])
            } else {
                f.get(colors[u], x)
            };
            if w.is_zero() {
                break;
            }
        }
        if w.is_zero() {
            continue;
        }
        colors[k] = x;
        total += w * kernel_rec(k + 1, sizes, back, kernels, colors);
    }
    total
}

/// `Σ ∏ f_uv ≤ ∏_{uv} ‖f_uv‖_{K_{d_v,d_u}}`. Kernels follow `g.edges()`,
/// rows indexed by the first endpoint.
pub fn check_graphical_bl(
    g: &Graph,
    kernels: &[EdgeKernel],
    cfg: &CompareConfig,
) -> Result<IneqReport> {
    require_no_isolated(g)?;
    let lhs = kernel_hom(g, kernels)?;
    let mut factors = Vec::with_capacity(g.m());
    for (&(u, v), f) in g.edges().iter().zip(kernels) {
        let (du, dv) = (g.degree(u), g.degree(v));
        let (r, c) = f.shape();
        let base = kernel_biclique_sum(
            f,
            &vec![Rational::one(); r],
            &vec![Rational::one(); c],
            dv,
            du,
        )?;
        factors.push(Expr::power(base, frac(1, du * dv)));
    }
    let report = IneqReport::decide(
        GRAPHICAL_BL,
        format!("G={} kernels={}", g.to_graph6(), kernels.len()),
        Expr::rat(lhs),
        Expr::prod(factors),
        cfg,
    )?;
    let flag = if g.is_triangle_free() {
        Flag::ContradictsTheorem
    } else {
        Flag::Finding
    };
    Ok(report.flag_if_violated(flag))
}

/// Kernels `L_u(x)·H(x,y)·L_v(y)` for lists `L`, with `H` the model's
/// edge weights.
pub fn fold_lists(g: &Graph, m: &Model, lists: &[ColorSet]) -> Result<Vec<EdgeKernel>> {
    check_constraint_count(g, Some(lists))?;
    g.edges()
        .iter()
        .map(|&(u, v)| {
            EdgeKernel::new(
                (0..m.q())
                    .map(|x| {
                        (0..m.q())
                            .map(|y| {
                                if lists[u].contains(x) && lists[v].contains(y) {
                                    m.edge(x, y).clone()
                                } else {
                                    Rational::zero()
                                }
                            })
                            .collect()
                    })
                    .collect(),
            )
        })
        .collect()
}

/// `hom_λ(G, H) ≤ ∏_v h_{d_v+1}(λ_v)^{1/(d_v+1)}`.
pub fn check_clique_max(
    g: &Graph,
    m: &Model,
    lambdas: Option<&[VertexConstraint]>,
    cfg: &CompareConfig,
) -> Result<IneqReport> {
    check_constraint_count(g, lambdas)?;
    let lhs = hom(g, m, lambdas)?;
    let mut factors = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let d = g.degree(v);
        let base = hom_clique(d + 1, m, lambdas.map(|l| &l[v]))?;
        factors.push(Expr::power(base, frac(1, d + 1)));
    }
    let report = IneqReport::decide(
        CLIQUE_MAX,
        instance_name(g, m, lambdas.is_some()),
        Expr::rat(lhs),
        Expr::prod(factors),
        cfg,
    )?;
    let flag = if classify_model(m)?.ferromagnetic {
        Flag::ContradictsTheorem
    } else {
        Flag::Finding
    };
    Ok(report.flag_if_violated(flag))
}

/// `hom(G, H)² ≤ hom(G × K₂, H)` for a 2-spin model.
pub fn check_bst(g: &Graph, m: &Model, cfg: &CompareConfig) -> Result<IneqReport> {
    let (_, antiferro) = two_spin_rule(m)?;
    let base = hom(g, m, None)?;
    let lifted = hom(&tensor_with_k2(g), m, None)?;
    let report = IneqReport::decide(
        BST,
        instance_name(g, m, false),
        Expr::rat(&base * &base),
        Expr::rat(lifted),
        cfg,
    )?;
    let flag = if antiferro {
        Flag::ContradictsTheorem
    } else {
        Flag::Finding
    };
    Ok(report.flag_if_violated(flag))
}

/// Outcome of running the swapping injection on every pair of independent
/// sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapInjectionResult {
    pub pairs: u64,
    pub images_distinct: bool,
    pub images_valid: bool,
    /// Independent sets of `G × K₂`.
    pub target_count: u64,
}

/// Independent sets of `g` as vertex masks, in increasing order.
pub fn independent_sets(g: &Graph) -> Vec<u64> {
    let n = g.n();
    (0..1u64 << n)
        .filter(|&s| bits(s).all(|v| g.neighbors(v) & s == 0))
        .collect()
}

/// Edges `uv` with `u ∈ A∖B`, `v ∈ B∖A` (or the reverse).
pub fn unsafe_edges(g: &Graph, a: u64, b: u64) -> Vec<(usize, usize)> {
    let a_only = a & !b;
    let b_only = b & !a;
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            let (ub, vb) = (1u64 << u, 1u64 << v);
            (a_only & ub != 0 && b_only & vb != 0) || (b_only & ub != 0 && a_only & vb != 0)
        })
        .collect()
}

/// Lexicographically first vertex set meeting each edge exactly once, with
/// vertex 0 most significant and absence before presence. `None` when the
/// edges are not bipartite.
pub fn lex_first_transversal(n: usize, edges: &[(usize, usize)]) -> Option<u64> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut t = 0u64;
    for start in 0..n {
        if side[start].is_some() || adj[start].is_empty() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x].expect("visited");
            if sx {
                t |= 1 << x;
            }
            for &y in &adj[x] {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        queue.push_back(y);
                    }
                    Some(sy) if sy == sx => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(t)
}

/// Runs the swap map `(A, B) ↦ (A', B')` on all ordered pairs of independent
/// sets and checks that images are independent in `G × K₂` and distinct.
pub fn swap_injection_check(g: &Graph) -> Result<SwapInjectionResult> {
    if g.n() > MAX_SWAP_VERTICES {
        return Err(Error::LimitExceeded {
            what: format!("swap injection on {} vertices", g.n()),
            limit: MAX_SWAP_VERTICES,
        });
    }
    let sets = independent_sets(g);
    let mut seen = HashSet::with_capacity(sets.len() * sets.len());
    let mut distinct = true;
    let mut valid = true;
    for &a in &sets {
        for &b in &sets {
            let t = lex_first_transversal(g.n(), &unsafe_edges(g, a, b))
                .ok_or_else(|| Error::SelfTest("unsafe edges are not bipartite".into()))?;
            let a2 = (a & !t) | (b & t);
            let b2 = (b & !t) | (a & t);
            // (v,0) for v in A', (u,1) for u in B'; G×K₂ joins (u,0)-(v,1) along edges of G
            if bits(a2).any(|u| g.neighbors(u) & b2 != 0) {
                valid = false;
            }
            if !seen.insert((a2, b2)) {
                distinct = false;
            }
        }
    }
    let target_count = independent_sets(&tensor_with_k2(g)).len() as u64;
    Ok(SwapInjectionResult {
        pairs: (sets.len() * sets.len()) as u64,
        images_distinct: distinct,
        images_valid: valid,
        target_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, GraphFamilySpec};
    use crate::model::{
        model_complete_looped, model_h_eps, model_hard_core, model_two_spin, model_widom_rowlinson,
    };
    use crate::report::Verdict;
    use crate::scalar::{int, rat};

    fn named(s: &str) -> Graph {
        build_named(&GraphFamilySpec::parse(s).unwrap()).unwrap()
    }

    fn cfg() -> CompareConfig {
        CompareConfig::default()
    }

    #[test]
    fn reverse_sidorenko_examples() {
        let r = check_reverse_sidorenko(
            &named("C6"),
            &model_complete_looped(3, 0).unwrap(),
            None,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.lhs, Expr::int(66));
        let r = check_reverse_sidorenko(&named("K2,2"), &model_widom_rowlinson(), None, &cfg())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Equality);
        let r = check_reverse_sidorenko(
            &named("K3"),
            &model_h_eps(&rat(1, 10)).unwrap(),
            None,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.exact);
        assert_eq!(r.lhs, Expr::rat(rat(333, 250)));
        let err =
            check_reverse_sidorenko(&Graph::empty(2).unwrap(), &model_hard_core(), None, &cfg());
        assert!(matches!(err, Err(Error::IsolatedVertex(0))));
    }

    #[test]
    fn h_eps_flag_is_finding() {
        // H_ε is ferromagnetic for ε > 0, so a violation on K_3 is outside every claim
        let r = check_reverse_sidorenko(
            &named("K3"),
            &model_h_eps(&rat(1, 10)).unwrap(),
            None,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.flag, Some(Flag::Finding));
    }

    #[test]
    fn semiproper_detection() {
        assert_eq!(
            semiproper_looped_set(&model_complete_looped(3, 1).unwrap()),
            Some(ColorSet::from_colors(&[0]))
        );
        assert_eq!(semiproper_looped_set(&model_widom_rowlinson()), None);
    }

    #[test]
    fn graphical_bl_rank_one_is_equality() {
        let g = named("P4");
        let gs: Vec<Vec<Rational>> = vec![
            vec![int(1), int(2)],
            vec![rat(1, 2), int(3)],
            vec![int(2), int(1)],
            vec![int(1), rat(1, 3)],
        ];
        let kernels: Vec<EdgeKernel> = g
            .edges()
            .iter()
            .map(|&(u, v)| EdgeKernel::rank_one(&gs[u], &gs[v]).unwrap())
            .collect();
        let r = check_graphical_bl(&g, &kernels, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn kernel_hom_matches_hom() {
        let m = model_widom_rowlinson();
        for s in ["C5", "K4", "P3"] {
            let g = named(s);
            let ks = vec![EdgeKernel::from_model(&m); g.m()];
            assert_eq!(kernel_hom(&g, &ks).unwrap(), hom(&g, &m, None).unwrap());
        }
    }

    #[test]
    fn clique_max_examples() {
        let m = Model::new(
            vec![vec![int(2), int(1)], vec![int(1), int(2)]],
            vec![int(1), int(1)],
            vec![],
        )
        .unwrap();
        let r = check_clique_max(&named("P3"), &m, None, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let r = check_clique_max(&named("K1,4"), &model_widom_rowlinson(), None, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.exact);
        assert_eq!(r.flag, Some(Flag::Finding));
        for d in 1..=3 {
            let r = check_clique_max(
                &named(&format!("K{}", d + 1)),
                &model_widom_rowlinson(),
                None,
                &cfg(),
            )
            .unwrap();
            assert_eq!(r.verdict, Verdict::Equality);
        }
    }

    #[test]
    fn bst_examples() {
        let r = check_bst(&named("K2"), &model_hard_core(), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Equality);
        let r = check_bst(&named("K3"), &model_hard_core(), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!((r.lhs, r.rhs), (Expr::int(16), Expr::int(18)));
        assert!(matches!(
            check_bst(&named("K2"), &model_widom_rowlinson(), &cfg()),
            Err(Error::NotTwoSpin(3))
        ));
        let ferro = model_two_spin(&int(2), &int(1), &int(2), &int(1), &int(1)).unwrap();
        assert!(check_bst(&named("C5"), &ferro, &cfg()).is_ok());
    }

    /// Scans characteristic vectors in lexicographic order.
    fn brute_transversal(n: usize, edges: &[(usize, usize)]) -> Option<u64> {
        (0..1u64 << n)
            .map(|k| {
                (0..n)
                    .filter(|v| k >> (n - 1 - v) & 1 == 1)
                    .fold(0u64, |t, v| t | 1 << v)
            })
            .find(|&t| {
                edges
                    .iter()
                    .all(|&(u, v)| ((t >> u) & 1) + ((t >> v) & 1) == 1)
            })
    }

    #[test]
    fn transversal_matches_brute_force() {
        for g in crate::enumerate::enumerate_graphs(5, Default::default()).unwrap() {
            assert_eq!(
                lex_first_transversal(5, g.edges()),
                brute_transversal(5, g.edges()),
                "{g}"
            );
        }
    }

    #[test]
    fn swap_injection_examples() {
        let r = swap_injection_check(&named("K3")).unwrap();
        assert_eq!(
            (r.pairs, r.images_distinct, r.images_valid),
            (16, true, true)
        );
        let r = swap_injection_check(&named("K2")).unwrap();
        assert_eq!(
            (r.pairs, r.images_distinct, r.images_valid),
            (9, true, true)
        );
        let e3 = Graph::empty(3).unwrap();
        let r = swap_injection_check(&e3).unwrap();
        assert_eq!(r.pairs, 64);
        for a in independent_sets(&e3) {
            for b in independent_sets(&e3) {
                assert!(unsafe_edges(&e3, a, b).is_empty());
            }
        }
        assert!(swap_injection_check(&Graph::empty(8).unwrap()).is_err());
    }
}
