//! Weighted target models: a symmetric edge-weight matrix over `q` colors,
//! vertex weights, and the set of looped colors.

use std::path::Path;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, int, parse_rational, rat, serde_rat, Rational, Weight};
use crate::spectrum;

pub const MAX_RANDOM_COLORS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model<W = Rational> {
    q: usize,
    edge_weights: Vec<Vec<W>>,
    vertex_weights: Vec<W>,
    looped_set: Vec<usize>,
}

impl<W: Weight> Model<W> {
    /// Validates dimensions, symmetry and nonnegativity. `looped_set` is
    /// sorted and deduplicated.
    pub fn new(
        edge_weights: Vec<Vec<W>>,
        vertex_weights: Vec<W>,
        mut looped_set: Vec<usize>,
    ) -> Result<Self> {
        let q = edge_weights.len();
        for row in &edge_weights {
            if row.len() != q {
                return Err(Error::DimensionMismatch {
                    expected: q,
                    found: row.len(),
                });
            }
        }
        if vertex_weights.len() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                found: vertex_weights.len(),
            });
        }
        for i in 0..q {
            for j in 0..q {
                if edge_weights[i][j] != edge_weights[j][i] {
                    return Err(Error::NonSymmetric(i, j));
                }
                if edge_weights[i][j] < W::zero() {
                    return Err(Error::NegativeWeight(format!("edge weight ({i}, {j})")));
                }
            }
            if vertex_weights[i] < W::zero() {
                return Err(Error::NegativeWeight(format!("vertex weight {i}")));
            }
        }
        looped_set.sort_unstable();
        looped_set.dedup();
        if let Some(&c) = looped_set.iter().find(|&&c| c >= q) {
            return Err(Error::InvalidArgument(format!(
                "looped color {c} out of range"
            )));
        }
        Ok(Model {
            q,
            edge_weights,
            vertex_weights,
            looped_set,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn edge_weights(&self) -> &[Vec<W>] {
        &self.edge_weights
    }

    pub fn edge(&self, i: usize, j: usize) -> &W {
        &self.edge_weights[i][j]
    }

    pub fn vertex_weights(&self) -> &[W] {
        &self.vertex_weights
    }

    pub fn looped_set(&self) -> &[usize] {
        &self.looped_set
    }

    pub fn is_looped(&self, c: usize) -> bool {
        self.looped_set.binary_search(&c).is_ok()
    }

    /// Same model with every entry mapped through `f`.
    pub fn map<V: Weight>(&self, f: impl Fn(&W) -> V) -> Model<V> {
        Model {
            q: self.q,
            edge_weights: self
                .edge_weights
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
            vertex_weights: self.vertex_weights.iter().map(&f).collect(),
            looped_set: self.looped_set.clone(),
        }
    }

    pub fn with_vertex_weights(&self, vertex_weights: Vec<W>) -> Result<Self> {
        Model::new(
            self.edge_weights.clone(),
            vertex_weights,
            self.looped_set.clone(),
        )
    }

    pub fn scale_edges(&self, c: &W) -> Self {
        Model {
            edge_weights: self
                .edge_weights
                .iter()
                .map(|row| row.iter().map(|x| x.clone() * c.clone()).collect())
                .collect(),
            ..self.clone()
        }
    }
}

/// `K_q` with the first `ell` colors looped.
pub fn model_complete_looped(q: usize, ell: usize) -> Result<Model> {
    if ell > q {
        return Err(Error::InvalidArgument(format!(
            "cannot loop {ell} of {q} colors"
        )));
    }
    let edges = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    if i != j || i < ell {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    Model::new(edges, vec![Rational::one(); q], (0..ell).collect())
}

/// Hard-core model: color 0 is "out" (looped), color 1 is "in".
pub fn model_hard_core() -> Model {
    model_complete_looped(2, 1).expect("valid")
}

/// `H_ε`: two colors, loops `1 + 2ε`, cross edge 1, vertex weights 1/2.
pub fn model_h_eps(eps: &Rational) -> Result<Model> {
    if eps.is_negative() {
        return Err(Error::InvalidArgument("eps must be nonnegative".into()));
    }
    let loop_w = Rational::one() + eps * int(2);
    Model::new(
        vec![
            vec![loop_w.clone(), Rational::one()],
            vec![Rational::one(), loop_w],
        ],
        vec![rat(1, 2), rat(1, 2)],
        vec![0, 1],
    )
}

/// Widom–Rowlinson with colors ordered `(A, 0, B)`; every color looped and
/// only `A`–`B` missing.
pub fn model_widom_rowlinson() -> Model {
    let e = |i: usize, j: usize| {
        if i + j == 2 && i != j {
            Rational::zero()
        } else {
            Rational::one()
        }
    };
    Model::new(
        (0..3).map(|i| (0..3).map(|j| e(i, j)).collect()).collect(),
        vec![Rational::one(); 3],
        vec![0, 1, 2],
    )
    .expect("valid")
}

pub fn model_two_spin(
    w00: &Rational,
    w01: &Rational,
    w11: &Rational,
    v0: &Rational,
    v1: &Rational,
) -> Result<Model> {
    for (name, w) in [
        ("w00", w00),
        ("w01", w01),
        ("w11", w11),
        ("v0", v0),
        ("v1", v1),
    ] {
        if w.is_negative() {
            return Err(Error::NegativeWeight(name.into()));
        }
    }
    let looped = [(0, w00), (1, w11)]
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(c, _)| *c)
        .collect();
    Model::new(
        vec![
            vec![w00.clone(), w01.clone()],
            vec![w01.clone(), w11.clone()],
        ],
        vec![v0.clone(), v1.clone()],
        looped,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub ferromagnetic: bool,
    pub antiferromagnetic: bool,
    pub positive_eigen_count: usize,
    pub zero_eigen_count: usize,
    pub negative_eigen_count: usize,
}

/// Exact eigenvalue sign counts of the edge-weight matrix; vertex weights
/// play no part.
pub fn classify_matrix(a: &[Vec<Rational>]) -> Result<Classification> {
    for i in 0..a.len() {
        if a[i].len() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: a[i].len(),
            });
        }
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(Error::NonSymmetric(i, j));
            }
        }
    }
    let (pos, zero, neg) = spectrum::inertia(a);
    Ok(Classification {
        ferromagnetic: neg == 0,
        antiferromagnetic: pos <= 1,
        positive_eigen_count: pos,
        zero_eigen_count: zero,
        negative_eigen_count: neg,
    })
}

pub fn classify_model(m: &Model) -> Result<Classification> {
    classify_matrix(m.edge_weights())
}

/// Determinant rule for 2-spin models: `(ferromagnetic, antiferromagnetic)`.
pub fn two_spin_rule(m: &Model) -> Result<(bool, bool)> {
    if m.q() != 2 {
        return Err(Error::NotTwoSpin(m.q()));
    }
    let det = m.edge(0, 0) * m.edge(1, 1) - m.edge(0, 1) * m.edge(0, 1);
    Ok((!det.is_negative(), !det.is_positive()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomKind {
    General,
    Psd,
    Antiferro2spin,
}

impl RandomKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "general" => Ok(RandomKind::General),
            "psd" => Ok(RandomKind::Psd),
            "antiferro-2spin" | "antiferro" => Ok(RandomKind::Antiferro2spin),
            other => Err(Error::InvalidArgument(format!(
                "unknown random model kind {other:?}"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RandomKind::General => "general",
            RandomKind::Psd => "psd",
            RandomKind::Antiferro2spin => "antiferro-2spin",
        }
    }

    fn stream(self) -> u64 {
        match self {
            RandomKind::General => 1,
            RandomKind::Psd => 2,
            RandomKind::Antiferro2spin => 3,
        }
    }
}

/// `p/d` with `p ∈ [lo, max_num]`, `d ∈ [1, max_den]`.
pub(crate) fn small_rational(rng: &mut impl Rng, lo: i64, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(lo..=max_num), rng.gen_range(1..=max_den))
}

/// Deterministic in `(q, seed, kind)`.
///
/// `general` draws a symmetric matrix with entries `p/d`, `p, d ≤ 16`.
/// `psd` returns `BᵀB` for a `q×q` matrix `B` with entries `p/d`, `p ≤ 3`,
/// `d ≤ 2`. `antiferro-2spin` rejection-samples `w00·w11 ≤ w01²` and needs
/// `q = 2`. Vertex weights are positive `p/d` with `p, d ≤ 16` in all kinds.
pub fn random_model(q: usize, seed: u64, kind: RandomKind) -> Result<Model> {
    if q == 0 || q > MAX_RANDOM_COLORS {
        return Err(Error::LimitExceeded {
            what: format!("random model with {q} colors"),
            limit: MAX_RANDOM_COLORS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind.stream());
    let edges = match kind {
        RandomKind::General => {
            let mut a = vec![vec![Rational::zero(); q]; q];
            for i in 0..q {
                for j in i..q {
                    let w = small_rational(&mut rng, 0, 16, 16);
                    a[i][j] = w.clone();
                    a[j][i] = w;
                }
            }
            a
        }
        RandomKind::Psd => {
            let b: Vec<Vec<Rational>> = (0..q)
                .map(|_| (0..q).map(|_| small_rational(&mut rng, 0, 3, 2)).collect())
                .collect();
            (0..q)
                .map(|i| {
                    (0..q)
                        .map(|j| (0..q).map(|k| &b[k][i] * &b[k][j]).sum())
                        .collect()
                })
                .collect()
        }
        RandomKind::Antiferro2spin => {
            if q != 2 {
                return Err(Error::NotTwoSpin(q));
            }
            loop {
                let w00 = small_rational(&mut rng, 0, 16, 16);
                let w01 = small_rational(&mut rng, 0, 16, 16);
                let w11 = small_rational(&mut rng, 0, 16, 16);
                if &w00 * &w11 <= &w01 * &w01 {
                    break vec![vec![w00, w01.clone()], vec![w01, w11]];
                }
            }
        }
    };
    let vertex = (0..q)
        .map(|_| small_rational(&mut rng, 1, 16, 16))
        .collect();
    let looped = (0..q).filter(|&i| !edges[i][i].is_zero()).collect();
    Model::new(edges, vertex, looped)
}

/// On-disk model: rationals as `"p/q"` strings.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    q: usize,
    #[serde(with = "serde_rat::mat")]
    edge_weights: Vec<Vec<Rational>>,
    #[serde(with = "serde_rat::vec")]
    vertex_weights: Vec<Rational>,
    #[serde(default)]
    looped_set: Vec<usize>,
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModelFile {
            q: self.q,
            edge_weights: self.edge_weights.clone(),
            vertex_weights: self.vertex_weights.clone(),
            looped_set: self.looped_set.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = ModelFile::deserialize(d)?;
        if f.edge_weights.len() != f.q {
            return Err(serde::de::Error::custom(format!(
                "q = {} but edge_weights has {} rows",
                f.q,
                f.edge_weights.len()
            )));
        }
        Model::new(f.edge_weights, f.vertex_weights, f.looped_set).map_err(serde::de::Error::custom)
    }
}

/// Parses a CLI model name or, failing that, a JSON model file path.
///
/// Names: `Kq:3`, `Kq-looped:5,2`, `hardcore`, `wr`, `heps:1/10`,
/// `ising:w00,w01,w11`, `random:q,seed,kind`.
pub fn parse_model_spec(spec: &str) -> Result<Model> {
    let s = spec.trim();
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let ints = |a: &str| -> Result<Vec<usize>> {
        a.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("expected integer in {spec:?}")))
            })
            .collect()
    };
    match head.to_ascii_lowercase().as_str() {
        "kq" => {
            let v = ints(arg)?;
            match v[..] {
                [q] => model_complete_looped(q, 0),
                _ => Err(Error::Parse(format!("expected Kq:<q>, got {spec:?}"))),
            }
        }
        "kq-looped" => {
            let v = ints(arg)?;
            match v[..] {
                [q, ell] => model_complete_looped(q, ell),
                _ => Err(Error::Parse(format!(
                    "expected Kq-looped:<q>,<ell>, got {spec:?}"
                ))),
            }
        }
        "hardcore" | "hard-core" => Ok(model_hard_core()),
        "wr" | "widom-rowlinson" => Ok(model_widom_rowlinson()),
        "heps" => model_h_eps(&parse_rational(arg)?),
        "ising" => {
            let w: Vec<Rational> = arg.split(',').map(parse_rational).collect::<Result<_>>()?;
            if w.len() != 3 {
                return Err(Error::Parse(format!(
                    "expected ising:w00,w01,w11, got {spec:?}"
                )));
            }
            model_two_spin(&w[0], &w[1], &w[2], &Rational::one(), &Rational::one())
        }
        "random" => {
            let parts: Vec<&str> = arg.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!(
                    "expected random:q,seed,kind, got {spec:?}"
                )));
            }
            let q = ints(parts[0])?[0];
            let seed = parts[1]
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad seed in {spec:?}")))?;
            random_model(q, seed, RandomKind::parse(parts[2])?)
        }
        _ if Path::new(s).is_file() => load_model(Path::new(s)),
        _ => Err(Error::InvalidArgument(format!("unknown model {spec:?}"))),
    }
}

pub fn load_model(path: &Path) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Short human-readable description used in reports.
pub fn describe_model(m: &Model) -> String {
    let rows: Vec<String> = m
        .edge_weights()
        .iter()
        .map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>().join(","))
        .collect();
    let vw: Vec<String> = m.vertex_weights().iter().map(fmt_rational).collect();
    format!("[[{}]] vw=[{}]", rows.join("],["), vw.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_looped_shape() {
        let m = model_complete_looped(3, 1).unwrap();
        assert_eq!(m.edge(0, 0), &int(1));
        assert_eq!(m.edge(1, 1), &int(0));
        assert_eq!(m.edge(1, 2), &int(1));
        assert_eq!(m.looped_set(), &[0]);
        assert!(model_complete_looped(2, 3).is_err());
    }

    #[test]
    fn h_eps_loops() {
        assert_eq!(model_h_eps(&rat(1, 10)).unwrap().edge(0, 0), &rat(6, 5));
        assert_eq!(model_h_eps(&rat(1, 2)).unwrap().edge(1, 1), &int(2));
        assert_eq!(model_h_eps(&int(0)).unwrap().edge(0, 1), &int(1));
    }

    #[test]
    fn validation() {
        let r = Model::new(
            vec![vec![int(1), int(2)], vec![int(1), int(1)]],
            vec![int(1); 2],
            vec![],
        );
        assert!(matches!(r, Err(Error::NonSymmetric(..))));
        let r = Model::new(vec![vec![int(-1)]], vec![int(1)], vec![]);
        assert!(matches!(r, Err(Error::NegativeWeight(_))));
        assert!(matches!(
            model_two_spin(&int(1), &int(-1), &int(1), &int(1), &int(1)),
            Err(Error::NegativeWeight(_))
        ));
    }

    #[test]
    fn classification_examples() {
        let c =
            classify_model(&model_two_spin(&int(2), &int(1), &int(2), &int(1), &int(1)).unwrap())
                .unwrap();
        assert!(c.ferromagnetic && !c.antiferromagnetic);
        let c = classify_model(&model_complete_looped(3, 0).unwrap()).unwrap();
        assert!(c.antiferromagnetic && !c.ferromagnetic);
        assert_eq!((c.positive_eigen_count, c.negative_eigen_count), (1, 2));
        let m = vec![
            vec![int(1), int(1), int(1)],
            vec![int(1), int(1), int(0)],
            vec![int(1), int(0), int(0)],
        ];
        let c = classify_matrix(&m).unwrap();
        assert!(!c.antiferromagnetic && !c.ferromagnetic);
        assert_eq!(c.positive_eigen_count, 2);
        let c =
            classify_model(&model_two_spin(&int(1), &int(1), &int(1), &int(1), &int(1)).unwrap())
                .unwrap();
        assert!(c.ferromagnetic && c.antiferromagnetic);
        assert_eq!(two_spin_rule(&model_hard_core()).unwrap(), (false, true));
    }

    #[test]
    fn random_models_are_deterministic() {
        for kind in [
            RandomKind::General,
            RandomKind::Psd,
            RandomKind::Antiferro2spin,
        ] {
            assert_eq!(
                random_model(2, 11, kind).unwrap(),
                random_model(2, 11, kind).unwrap()
            );
        }
        assert_ne!(
            random_model(3, 1, RandomKind::General).unwrap(),
            random_model(3, 2, RandomKind::General).unwrap()
        );
        assert!(random_model(3, 1, RandomKind::Antiferro2spin).is_err());
    }

    #[test]
    fn random_kinds_classify() {
        for seed in 0..100 {
            assert!(
                classify_model(&random_model(3, seed, RandomKind::Psd).unwrap())
                    .unwrap()
                    .ferromagnetic
            );
            let af = random_model(2, seed, RandomKind::Antiferro2spin).unwrap();
            assert!(classify_model(&af).unwrap().antiferromagnetic);
        }
    }

    #[test]
    fn named_parsing_and_json_roundtrip() {
        assert_eq!(
            parse_model_spec("Kq:3").unwrap(),
            model_complete_looped(3, 0).unwrap()
        );
        assert_eq!(
            parse_model_spec("Kq-looped:5,2").unwrap(),
            model_complete_looped(5, 2).unwrap()
        );
        assert_eq!(parse_model_spec("hardcore").unwrap(), model_hard_core());
        assert_eq!(parse_model_spec("wr").unwrap(), model_widom_rowlinson());
        assert_eq!(
            parse_model_spec("heps:1/10").unwrap(),
            model_h_eps(&rat(1, 10)).unwrap()
        );
        let ising = parse_model_spec("ising:2,1,3").unwrap();
        assert_eq!(ising.edge(1, 1), &int(3));
        assert!(parse_model_spec("nonsense").is_err());
        let m = random_model(3, 5, RandomKind::General).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains('"'));
        let back: Model = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
