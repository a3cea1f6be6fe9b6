//! Small-graph enumeration and canonical labeling.
//!
//! The canonical code of a graph is the lexicographically smallest adjacency
//! bitstring over all vertex orderings, pairs read column by column:
//! `(0,1), (0,2), (1,2), (0,3), ...`, first pair most significant.

use std::collections::HashSet;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_ENUM_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumOptions {
    pub connected: bool,
    pub no_isolated: bool,
    pub triangle_free: bool,
    pub dedup: bool,
}

impl EnumOptions {
    pub fn dedup() -> Self {
        EnumOptions {
            dedup: true,
            ..Self::default()
        }
    }

    pub fn accepts(&self, g: &Graph) -> bool {
        (!self.connected || g.is_connected())
            && (!self.no_isolated || g.isolated_vertex().is_none())
            && (!self.triangle_free || g.is_triangle_free())
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Adjacency code under the identity ordering.
pub fn adjacency_code(g: &Graph) -> u64 {
    let total = pair_count(g.n());
    let mut code = 0u64;
    for &(i, j) in g.edges() {
        code |= 1 << (total - 1 - pair_index(i, j));
    }
    code
}

/// Canonical code and the ordering achieving it: `order[k]` is the original
/// vertex placed at position `k`.
pub fn canonical_form(g: &Graph) -> (u64, Vec<usize>) {
    let n = g.n();
    if n <= 1 {
        return (0, (0..n).collect());
    }
    let total = pair_count(n);
    let mut search = CanonSearch {
        g,
        total,
        best: u64::MAX,
        best_order: Vec::new(),
        order: Vec::with_capacity(n),
    };
    search.dfs(0, 0);
    (search.best, search.best_order)
}

pub fn canonical_code(g: &Graph) -> u64 {
    canonical_form(g).0
}

/// The canonically relabeled copy of `g`.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, order) = canonical_form(g);
    let mut perm = vec![0; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    g.relabel(&perm)
}

struct CanonSearch<'a> {
    g: &'a Graph,
    total: usize,
    best: u64,
    best_order: Vec<usize>,
    order: Vec<usize>,
}

impl CanonSearch<'_> {
    /// `prefix` holds the bits of the first `pair_count(order.len())` pairs.
    fn dfs(&mut self, used: u64, prefix: u64) {
        let k = self.order.len();
        let n = self.g.n();
        if k == n {
            if prefix < self.best {
                self.best = prefix;
                self.best_order = self.order.clone();
            }
            return;
        }
        let known = pair_count(k + 1);
        for v in 0..n {
            if used >> v & 1 == 1 {
                continue;
            }
            let mut next = prefix;
            for i in 0..k {
                next = (next << 1) | self.g.has_edge(self.order[i], v) as u64;
            }
            if self.best != u64::MAX && next > self.best >> (self.total - known) {
                continue;
            }
            self.order.push(v);
            self.dfs(used | 1 << v, next);
            self.order.pop();
        }
    }
}

/// Streams graphs on `n` vertices that pass the filters in `opts`.
///
/// Without dedup every labeled graph is produced, ordered by edge bitmask.
/// With dedup one canonically labeled representative per isomorphism class
/// is produced, ordered by canonical code.
pub fn enumerate_graphs(
    n: usize,
    opts: EnumOptions,
) -> Result<Box<dyn Iterator<Item = Graph> + Send>> {
    if n > MAX_ENUM_VERTICES {
        return Err(Error::LimitExceeded {
            what: format!("enumeration on {n} vertices"),
            limit: MAX_ENUM_VERTICES,
        });
    }
    if opts.dedup {
        let classes = isomorphism_classes(n);
        return Ok(Box::new(
            classes.into_iter().filter(move |g| opts.accepts(g)),
        ));
    }
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let limit = 1u64 << pairs.len();
    Ok(Box::new((0..limit).filter_map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(p, _)| mask >> p & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).expect("pairs are in range");
        opts.accepts(&g).then_some(g)
    })))
}

/// All graphs with `1..=max_n` vertices passing `opts`, smallest first.
pub fn enumerate_up_to(max_n: usize, opts: EnumOptions) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_graphs(n, opts)?);
    }
    Ok(out)
}

fn class_cache() -> &'static Mutex<Vec<Vec<Graph>>> {
    static CACHE: OnceLock<Mutex<Vec<Vec<Graph>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![vec![Graph::empty(0).expect("empty graph")]]))
}

/// Isomorphism classes on `n` vertices, built by adding one vertex with every
/// possible neighborhood to each class on `n - 1` vertices.
fn isomorphism_classes(n: usize) -> Vec<Graph> {
    let mut cache = class_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        let prev = &cache[m - 1];
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in prev {
            for nbhd in 0u64..1 << (m - 1) {
                let mut edges = g.edges().to_vec();
                edges.extend(crate::graph::bits(nbhd).map(|u| (u, m - 1)));
                let h = Graph::from_edges(m, &edges).expect("augmented graph is valid");
                let (code, _) = canonical_form(&h);
                if seen.insert(code) {
                    next.push((code, canonical_graph(&h)));
                }
            }
        }
        next.sort_by_key(|(code, _)| *code);
        cache.push(next.into_iter().map(|(_, g)| g).collect());
    }
    cache[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_canonical(g: &Graph) -> u64 {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        loop {
            best = best.min(adjacency_code(&g.relabel(&perm)));
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        if n <= 1 {
            0
        } else {
            best
        }
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (0..=6)
            .map(|n| enumerate_graphs(n, EnumOptions::dedup()).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        assert_eq!(
            enumerate_graphs(2, EnumOptions::default()).unwrap().count(),
            2
        );
        assert_eq!(
            enumerate_graphs(4, EnumOptions::default()).unwrap().count(),
            64
        );
    }

    #[test]
    fn labeled_classes_by_brute_force() {
        for n in 1..=5 {
            let codes: HashSet<u64> = enumerate_graphs(n, EnumOptions::default())
                .unwrap()
                .map(|g| brute_canonical(&g))
                .collect();
            assert_eq!(
                codes.len(),
                enumerate_graphs(n, EnumOptions::dedup()).unwrap().count()
            );
        }
    }

    #[test]
    fn canonical_matches_brute_force() {
        for g in enumerate_graphs(5, EnumOptions::default()).unwrap() {
            assert_eq!(canonical_code(&g), brute_canonical(&g));
        }
    }

    #[test]
    fn representatives_are_canonical_and_distinct() {
        for n in 1..=5 {
            let reps: Vec<Graph> = enumerate_graphs(n, EnumOptions::dedup()).unwrap().collect();
            let codes: HashSet<u64> = reps.iter().map(brute_canonical).collect();
            assert_eq!(codes.len(), reps.len());
            for g in &reps {
                assert_eq!(adjacency_code(g), canonical_code(g));
            }
        }
    }

    #[test]
    fn filters() {
        let connected = EnumOptions {
            connected: true,
            dedup: true,
            ..Default::default()
        };
        assert_eq!(enumerate_graphs(4, connected).unwrap().count(), 6);
        let tf = EnumOptions {
            triangle_free: true,
            no_isolated: true,
            dedup: true,
            ..Default::default()
        };
        // K2+K2, P4, K1,3, C4
        assert_eq!(enumerate_graphs(4, tf).unwrap().count(), 4);
    }

    #[test]
    fn limit() {
        assert!(matches!(
            enumerate_graphs(9, EnumOptions::default()),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
