//! Step-by-step list-coloring calculation on the 6-cycle with three colors.
//!
//! Colors are `R = 0`, `G = 1`, `B = 2`. Vertices `v1..v6` are `0..5` in
//! cycle order and `v1` is the vertex whose color is fixed first.

use crate::coloring::{cc, semiproper_count, ColorSet};
use crate::error::Result;
use crate::expr::Expr;
use crate::graph::Graph;
use crate::power::CompareConfig;
use crate::report::{Flag, IneqReport};
use crate::scalar::{natural_to_rational, rat, Rational};

pub const R: usize = 0;
pub const G: usize = 1;
pub const B: usize = 2;

/// Lists of `v1..v6`.
pub fn toy_lists() -> [ColorSet; 6] {
    let s = ColorSet::from_colors;
    [
        s(&[R, B]),
        s(&[R, G]),
        s(&[G, B]),
        s(&[R, G, B]),
        s(&[R, B]),
        s(&[R, G, B]),
    ]
}

const NO_LOOPS: ColorSet = ColorSet::EMPTY;

fn count(n: usize, edges: &[(usize, usize)], lists: &[ColorSet]) -> Result<Rational> {
    let g = Graph::from_edges(n, edges)?;
    Ok(natural_to_rational(&semiproper_count(&g, lists, NO_LOOPS)?))
}

/// List colorings of the 4-cycle `K_{2,2}` with sides listed `a` and `b`.
fn c4(a: ColorSet, b: ColorSet) -> Rational {
    natural_to_rational(&cc(a, b, 2, 2, NO_LOOPS))
}

/// List colorings of the path `leaf - center - leaf`.
fn cherry(center: ColorSet, leaves: ColorSet) -> Rational {
    natural_to_rational(&cc(center, leaves, 1, 2, NO_LOOPS))
}

fn root(x: Rational, d: i64) -> Expr {
    Expr::power(x, rat(1, d))
}

/// Reports for every displayed step, in order.
pub fn reproduce_toy_c6() -> Result<Vec<IneqReport>> {
    reproduce_toy_c6_with(&CompareConfig::default())
}

pub fn reproduce_toy_c6_with(cfg: &CompareConfig) -> Result<Vec<IneqReport>> {
    let l = toy_lists();
    let cycle: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    let path: Vec<(usize, usize)> = (1..5).map(|i| (i, i + 1)).collect();
    let edge_c4: Vec<Rational> = cycle.iter().map(|&(u, v)| c4(l[u], l[v])).collect();
    let all_c4 = || Expr::prod(edge_c4.iter().map(|x| root(x.clone(), 4)));

    let mut out = Vec::new();
    let mut push = |name: &str, instance: &str, lhs: Expr, rhs: Expr| -> Result<()> {
        out.push(
            IneqReport::decide(name, instance, lhs, rhs, cfg)?
                .flag_if_violated(Flag::ContradictsTheorem),
        );
        Ok(())
    };

    let total = count(6, &cycle, &l)?;
    push(
        "toy-c6",
        "C6 lists RB,RG,GB,RGB,RB,RGB",
        Expr::rat(total.clone()),
        all_c4(),
    )?;

    // v1 colored c: its neighbors v2 and v6 lose c
    let mut conditioned = Vec::new();
    for c in [R, B] {
        let gone = ColorSet::singleton(c);
        let mut lists = l;
        lists[0] = gone;
        lists[1] = l[1].minus(gone);
        lists[5] = l[5].minus(gone);
        conditioned.push((c, lists));
    }
    let parts: Vec<Rational> = conditioned
        .iter()
        .map(|(_, lists)| count(6, &path, lists))
        .collect::<Result<_>>()?;
    push(
        "toy-split-v0",
        "v1 in {R, B}",
        Expr::rat(total),
        Expr::rat(parts.iter().sum()),
    )?;

    // induction hypothesis on the path v2..v6
    let mut localized = Vec::new();
    for ((c, lists), part) in conditioned.iter().zip(&parts) {
        let top = cherry(lists[2], lists[1]);
        let bottom = cherry(lists[4], lists[5]);
        let middle = [c4(lists[2], lists[3]), c4(lists[3], lists[4])];
        let rhs = Expr::prod([
            root(top.clone(), 2),
            root(middle[0].clone(), 4),
            root(middle[1].clone(), 4),
            root(bottom.clone(), 2),
        ]);
        let name = if *c == R {
            "toy-induction-red"
        } else {
            "toy-induction-blue"
        };
        push(name, "path v2..v6", Expr::rat(part.clone()), rhs)?;
        localized.push((top, bottom, middle));
    }

    let common = |(_, _, m): &(Rational, Rational, [Rational; 2])| {
        Expr::prod([root(m[0].clone(), 4), root(m[1].clone(), 4)])
    };
    let cancel_lhs = Expr::sum(
        localized
            .iter()
            .map(|t| Expr::prod([root(t.0.clone(), 2), root(t.1.clone(), 2), common(t)])),
    );
    push(
        "toy-cancellation",
        "with shared factors",
        cancel_lhs,
        all_c4(),
    )?;

    let near = Expr::prod([0, 1, 3, 4].map(|i| root(edge_c4[i].clone(), 4)));
    let local_lhs = Expr::sum(
        localized
            .iter()
            .map(|t| Expr::prod([root(t.0.clone(), 2), root(t.1.clone(), 2)])),
    );
    push(
        "toy-localized",
        "edges within two steps of v1",
        local_lhs,
        near,
    )?;

    let tops: Rational = localized.iter().map(|t| t.0.clone()).sum();
    let bottoms: Rational = localized.iter().map(|t| t.1.clone()).sum();
    push(
        "toy-post-cs-top",
        "cherry at v3",
        Expr::rat(tops.clone()),
        Expr::prod([root(edge_c4[0].clone(), 2), root(edge_c4[1].clone(), 2)]),
    )?;
    push(
        "toy-post-cs-bottom",
        "cherry at v5",
        Expr::rat(bottoms),
        Expr::prod([root(edge_c4[4].clone(), 2), root(edge_c4[3].clone(), 2)]),
    )?;

    // 4-cycle a - b1 - c - b2 with a from v1's list, b's from v2's, c from v3's
    let square = count(
        4,
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
        &[l[0], l[1], l[2], l[1]],
    )?;
    push(
        "toy-c4-equal",
        "4-cycle RB,RG,GB,RG",
        Expr::rat(square.clone()),
        Expr::rat(tops),
    )?;
    push(
        "toy-final-c4",
        "4-cycle RB,RG,GB,RG",
        Expr::rat(square),
        Expr::prod([root(c4(l[0], l[1]), 2), root(c4(l[1], l[2]), 2)]),
    )?;
    Ok(out)
}
