use homlab::{
    compare_exprs, hom, random_model, CompareConfig, Error, Expr, Graph, Model, RandomKind,
    Rational,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &b)| b)
                .map(|(&e, _)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn model_strategy() -> impl Strategy<Value = Model> {
    (1usize..=3, 0u64..500)
        .prop_map(|(q, seed)| random_model(q, seed, RandomKind::General).unwrap())
}

fn brute_hom(g: &Graph, m: &Model) -> Rational {
    let (n, q) = (g.n(), m.q());
    let mut total = Rational::zero();
    for code in 0..q.pow(n as u32) {
        let x: Vec<usize> = (0..n).map(|v| code / q.pow(v as u32) % q).collect();
        let mut w = Rational::one();
        for &c in &x {
            w *= &m.vertex_weights()[c];
        }
        for &(u, v) in g.edges() {
            w *= m.edge(x[u], x[v]);
        }
        total += w;
    }
    total
}

fn ratio() -> impl Strategy<Value = Rational> {
    (1i64..40, 1i64..12).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn power_product() -> impl Strategy<Value = Expr> {
    proptest::collection::vec((ratio(), (-6i64..7, 1i64..5)), 1..4).prop_map(|fs| {
        Expr::prod(
            fs.into_iter()
                .map(|(b, (p, q))| Expr::power(b, Rational::new(p.into(), q.into()))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_matches_brute_force(g in graph_strategy(5), m in model_strategy()) {
        prop_assert_eq!(hom(&g, &m, None).unwrap(), brute_hom(&g, &m));
    }

    #[test]
    fn edge_scaling_is_a_power(g in graph_strategy(5), m in model_strategy(), c in ratio()) {
        let scaled = hom(&g, &m.scale_edges(&c), None).unwrap();
        let expected = hom(&g, &m, None).unwrap() * num_traits::pow(c, g.m());
        prop_assert_eq!(scaled, expected);
    }

    #[test]
    fn disjoint_union_multiplies(a in graph_strategy(3), b in graph_strategy(3), m in model_strategy()) {
        let u = a.disjoint_union(&b).unwrap();
        prop_assert_eq!(hom(&u, &m, None).unwrap(), hom(&a, &m, None).unwrap() * hom(&b, &m, None).unwrap());
    }

    #[test]
    fn graph6_round_trip(g in graph_strategy(7)) {
        let back = Graph::parse_graph6(&g.to_graph6()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn comparison_is_antisymmetric(a in power_product(), b in power_product()) {
        let cfg = CompareConfig::default();
        let ab = compare_exprs(&a, &b, &cfg).unwrap().ordering;
        let ba = compare_exprs(&b, &a, &cfg).unwrap().ordering;
        prop_assert_eq!(ab, ba.reverse());
    }

    #[test]
    fn enclosures_agree_with_exact(a in power_product(), b in power_product()) {
        let exact = compare_exprs(&a, &b, &CompareConfig::exact_only()).unwrap();
        prop_assert!(exact.exact);
        let forced = CompareConfig { bitcap: 0, ..CompareConfig::default() };
        match compare_exprs(&a, &b, &forced) {
            Ok(c) => prop_assert_eq!(c.ordering, exact.ordering),
            Err(Error::UndecidedAtPrecisionCap { .. }) => prop_assert_eq!(exact.ordering, std::cmp::Ordering::Equal),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
