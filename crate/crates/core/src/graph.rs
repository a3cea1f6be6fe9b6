//! Simple undirected graphs on at most 64 vertices, stored as neighbor
//! bitsets, plus the named families and transformations the checkers use.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A simple graph with vertices `0..n`. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::LimitExceeded {
                what: format!("vertex count {n}"),
                limit: MAX_VERTICES,
            });
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            edges: Vec::new(),
        })
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![0u64; n];
        if n > MAX_VERTICES {
            return Err(Error::LimitExceeded {
                what: format!("vertex count {n}"),
                limit: MAX_VERTICES,
            });
        }
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidSpec(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidSpec(format!("self-loop at vertex {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self::from_adjacency(adj))
    }

    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        let n = adj.len();
        let mut edges = Vec::new();
        for u in 0..n {
            let mut higher = adj[u] & !mask_upto(u + 1);
            while higher != 0 {
                let v = higher.trailing_zeros() as usize;
                edges.push((u, v));
                higher &= higher - 1;
            }
        }
        Graph { n, adj, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        bits(self.adj[v]).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn isolated_vertex(&self) -> Option<usize> {
        (0..self.n).find(|&v| self.adj[v] == 0)
    }

    pub fn triangle_count(&self) -> usize {
        self.edges
            .iter()
            .map(|&(u, v)| (self.adj[u] & self.adj[v] & !mask_upto(v + 1)).count_ones() as usize)
            .sum()
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| self.adj[u] & self.adj[v] == 0)
    }

    /// Proper 2-coloring by BFS; `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        for root in 0..self.n {
            if side[root] != u8::MAX {
                continue;
            }
            side[root] = 0;
            let mut queue = vec![root];
            while let Some(u) = queue.pop() {
                for v in bits(self.adj[u]) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        queue.push(v);
                    } else if side[v] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == mask_upto(self.n)
    }

    /// Vertex `v` of `self` becomes `perm[v]` in the result.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[perm[u]] |= 1 << perm[v];
            adj[perm[v]] |= 1 << perm[u];
        }
        Graph::from_adjacency(adj)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        Graph::from_edges(n, &edges)
    }

    /// Graph induced on the vertices of `keep`, renumbered in increasing order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![0u64; keep.len()];
        for (i, &v) in keep.iter().enumerate() {
            for u in bits(self.adj[v]) {
                if index[u] != usize::MAX {
                    adj[i] |= 1 << index[u];
                }
            }
        }
        Graph::from_adjacency(adj)
    }

    pub fn stats(&self) -> GraphStats {
        let degrees = self.degrees();
        GraphStats {
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            has_isolated: degrees.contains(&0),
            triangle_free: self.is_triangle_free(),
            degrees,
        }
    }

    /// Edge-list text: `"n m"` then one `"u v"` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let nums = parse_usizes(header)?;
        if nums.len() != 2 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let (n, m) = (nums[0], nums[1]);
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let pair = parse_usizes(line)?;
            if pair.len() != 2 {
                return Err(Error::Parse(format!("bad edge line {line:?}")));
            }
            edges.push((pair[0], pair[1]));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header promised {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }

    /// graph6 encoding (n ≤ 62).
    pub fn to_graph6(&self) -> String {
        let mut out = vec![(self.n as u8) + 63];
        let mut acc = 0u8;
        let mut filled = 0;
        for v in 1..self.n {
            for u in 0..v {
                acc = (acc << 1) | self.has_edge(u, v) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 is ASCII")
    }

    pub fn parse_graph6(s: &str) -> Result<Graph> {
        let bytes = s.trim().trim_start_matches(">>graph6<<").as_bytes();
        let bad = || Error::Parse(format!("bad graph6 string {s:?}"));
        let (&first, rest) = bytes.split_first().ok_or_else(bad)?;
        if !(63..=125).contains(&first) {
            return Err(bad());
        }
        let n = (first - 63) as usize;
        let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if rest.len() != need || rest.iter().any(|b| !(63..=126).contains(b)) {
            return Err(bad());
        }
        let mut bit_iter = rest
            .iter()
            .flat_map(|b| (0..6).rev().map(move |i| (b - 63) >> i & 1 == 1));
        let mut edges = Vec::new();
        for v in 1..n {
            for u in 0..v {
                if bit_iter.next().ok_or_else(bad)? {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_graph6())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub has_isolated: bool,
    pub triangle_free: bool,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    g.stats()
}

/// A named graph family with its size parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphFamilySpec {
    Complete {
        n: usize,
    },
    Biclique {
        a: usize,
        b: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    /// `K_{1,leaves}` with the center numbered 0.
    Star {
        leaves: usize,
    },
    Petersen,
    /// `n` vertices, no edges.
    Empty {
        n: usize,
    },
    EdgeList {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl GraphFamilySpec {
    /// Parses CLI names: `K5`, `K3,3`, `C6`, `P4`, `S4`, `E3`, `petersen`.
    pub fn parse(name: &str) -> Result<Self> {
        let s = name.trim();
        let bad = || Error::InvalidSpec(format!("unknown graph name {name:?}"));
        if s.eq_ignore_ascii_case("petersen") {
            return Ok(GraphFamilySpec::Petersen);
        }
        let (head, tail) = s.split_at(1.min(s.len()));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match head {
            "K" | "k" => {
                if let Some((a, b)) = tail.split_once(',') {
                    Ok(GraphFamilySpec::Biclique {
                        a: num(a)?,
                        b: num(b)?,
                    })
                } else {
                    Ok(GraphFamilySpec::Complete { n: num(tail)? })
                }
            }
            "C" | "c" => Ok(GraphFamilySpec::Cycle { n: num(tail)? }),
            "P" | "p" => Ok(GraphFamilySpec::Path { n: num(tail)? }),
            "S" | "s" => Ok(GraphFamilySpec::Star { leaves: num(tail)? }),
            "E" | "e" => Ok(GraphFamilySpec::Empty { n: num(tail)? }),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GraphFamilySpec::Complete { n } => format!("K{n}"),
            GraphFamilySpec::Biclique { a, b } => format!("K{a},{b}"),
            GraphFamilySpec::Cycle { n } => format!("C{n}"),
            GraphFamilySpec::Path { n } => format!("P{n}"),
            GraphFamilySpec::Star { leaves } => format!("S{leaves}"),
            GraphFamilySpec::Petersen => "petersen".into(),
            GraphFamilySpec::Empty { n } => format!("E{n}"),
            GraphFamilySpec::EdgeList { n, edges } => format!("edges:{n}:{}", edges.len()),
        }
    }
}

pub fn build_named(spec: &GraphFamilySpec) -> Result<Graph> {
    let positive = |k: usize, what: &str| {
        if k == 0 {
            Err(Error::InvalidSpec(format!("{what} must be positive")))
        } else {
            Ok(())
        }
    };
    match *spec {
        GraphFamilySpec::Complete { n } => {
            positive(n, "complete graph size")?;
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            Graph::from_edges(n, &edges)
        }
        GraphFamilySpec::Biclique { a, b } => {
            positive(a, "biclique part A")?;
            positive(b, "biclique part B")?;
            let edges: Vec<_> = (0..a)
                .flat_map(|u| (0..b).map(move |v| (u, a + v)))
                .collect();
            Graph::from_edges(a + b, &edges)
        }
        GraphFamilySpec::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidSpec(format!("cycle needs n >= 3, got {n}")));
            }
            let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
            Graph::from_edges(n, &edges)
        }
        GraphFamilySpec::Path { n } => {
            positive(n, "path size")?;
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::from_edges(n, &edges)
        }
        GraphFamilySpec::Star { leaves } => {
            build_named(&GraphFamilySpec::Biclique { a: 1, b: leaves })
        }
        GraphFamilySpec::Petersen => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_edges(10, &edges)
        }
        GraphFamilySpec::Empty { n } => Graph::empty(n),
        GraphFamilySpec::EdgeList { n, ref edges } => Graph::from_edges(n, edges),
    }
}

/// Bipartite double cover `G × K₂`: vertex `(v, i)` is numbered `v + i·n`.
pub fn tensor_with_k2(g: &Graph) -> Graph {
    let n = g.n();
    let edges: Vec<_> = g
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v + n), (v, u + n)])
        .collect();
    Graph::from_edges(2 * n, &edges).expect("double cover of a valid graph is valid")
}

/// `G•` (count 1) or `G••` (count 2); apexes are numbered after the original
/// vertices and are never adjacent to each other.
pub fn add_apexes(g: &Graph, count: usize) -> Result<Graph> {
    if !(1..=2).contains(&count) {
        return Err(Error::InvalidArgument(format!(
            "apex count must be 1 or 2, got {count}"
        )));
    }
    let n = g.n();
    let mut edges = g.edges().to_vec();
    for apex in n..n + count {
        edges.extend((0..n).map(|v| (v, apex)));
    }
    Graph::from_edges(n + count, &edges)
}

pub fn triangle_count(g: &Graph) -> usize {
    g.triangle_count()
}

pub(crate) fn mask_upto(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Indices of set bits, ascending.
pub fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

fn parse_usizes(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("expected integer, got {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(s: &str) -> Graph {
        build_named(&GraphFamilySpec::parse(s).unwrap()).unwrap()
    }

    /// Brute-force isomorphism test over all vertex permutations.
    fn isomorphic(a: &Graph, b: &Graph) -> bool {
        if a.n() != b.n() || a.m() != b.m() {
            return false;
        }
        let mut perm: Vec<usize> = (0..a.n()).collect();
        loop {
            if a.relabel(&perm) == *b {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn named_sizes() {
        let k22 = named("K2,2");
        assert_eq!((k22.n(), k22.m()), (4, 4));
        assert!(k22.degrees().iter().all(|&d| d == 2));
        let c6 = named("C6");
        assert_eq!((c6.n(), c6.m()), (6, 6));
        assert!(c6.degrees().iter().all(|&d| d == 2));
        let k4 = named("K4");
        assert_eq!((k4.n(), k4.m()), (4, 6));
        let p = named("petersen");
        assert_eq!((p.n(), p.m(), p.max_degree()), (10, 15, 3));
        assert!(p.is_triangle_free());
    }

    #[test]
    fn biclique_part_a_first() {
        let g = named("K2,3");
        assert_eq!(g.degrees(), vec![3, 3, 2, 2, 2]);
    }

    #[test]
    fn zero_sizes_are_rejected() {
        assert!(matches!(
            build_named(&GraphFamilySpec::Biclique { a: 0, b: 2 }),
            Err(Error::InvalidSpec(_))
        ));
        assert!(build_named(&GraphFamilySpec::Complete { n: 0 }).is_err());
        assert!(build_named(&GraphFamilySpec::Cycle { n: 2 }).is_err());
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn tensor_examples() {
        let k2 = tensor_with_k2(&named("K2"));
        assert_eq!((k2.n(), k2.m()), (4, 2));
        assert!(k2.degrees().iter().all(|&d| d == 1));
        assert!(isomorphic(&tensor_with_k2(&named("K3")), &named("C6")));
        let two_c4 = named("C4").disjoint_union(&named("C4")).unwrap();
        assert!(isomorphic(&tensor_with_k2(&named("C4")), &two_c4));
    }

    #[test]
    fn tensor_preserves_degrees_and_is_bipartite() {
        let g = named("petersen");
        let t = tensor_with_k2(&g);
        for v in 0..g.n() {
            assert_eq!(t.degree(v), g.degree(v));
            assert_eq!(t.degree(v + g.n()), g.degree(v));
        }
        assert!(t.is_bipartite());
        assert_eq!(t.triangle_count(), 0);
    }

    #[test]
    fn apex_examples() {
        let k2 = named("K2");
        assert_eq!(add_apexes(&k2, 1).unwrap(), named("K3"));
        let k4_minus = add_apexes(&k2, 2).unwrap();
        assert_eq!((k4_minus.n(), k4_minus.m()), (4, 5));
        assert!(!k4_minus.has_edge(2, 3));
        let e2 = Graph::empty(2).unwrap();
        assert!(isomorphic(&add_apexes(&e2, 2).unwrap(), &named("K2,2")));
        assert!(add_apexes(&k2, 3).is_err());
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(named("K3").triangle_count(), 1);
        assert_eq!(named("C6").triangle_count(), 0);
        assert_eq!(named("K4").triangle_count(), 4);
        // brute force over triples for K5
        let k5 = named("K5");
        let mut brute = 0;
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    if k5.has_edge(a, b) && k5.has_edge(b, c) && k5.has_edge(a, c) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(k5.triangle_count(), brute);
    }

    #[test]
    fn stats_examples() {
        let s = named("C6").stats();
        assert_eq!(s.max_degree, 2);
        assert!(!s.has_isolated && s.triangle_free);
        assert_eq!(named("K1,4").degrees(), vec![4, 1, 1, 1, 1]);
        assert!(Graph::empty(1).unwrap().stats().has_isolated);
    }

    #[test]
    fn edge_list_and_graph6_roundtrip() {
        let g = named("petersen");
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert_eq!(Graph::parse_graph6(&g.to_graph6()).unwrap(), g);
        // reference encodings
        assert_eq!(named("K3").to_graph6(), "Bw");
        assert_eq!(named("C4").to_graph6(), "Cl");
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
    }
}
