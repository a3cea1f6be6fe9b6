//! Color sets and semiproper coloring counts.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

pub const MAX_COLORS: usize = 64;

/// A subset of the colors `0..64`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ColorSet(pub u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// `{0, ..., q-1}`.
    pub fn full(q: usize) -> Self {
        ColorSet(crate::graph::mask_upto(q))
    }

    pub fn from_colors(colors: &[usize]) -> Self {
        ColorSet(colors.iter().fold(0, |acc, &c| acc | 1 << c))
    }

    pub fn singleton(c: usize) -> Self {
        ColorSet(1 << c)
    }

    pub fn contains(self, c: usize) -> bool {
        c < MAX_COLORS && self.0 >> c & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersect(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn minus(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = ColorSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ColorSet(cur))
        })
    }

    /// The largest color plus one.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `A ⊖ B = A \ (B \ Ω∘)`: drop from `A` the non-looped colors of `B`.
pub fn ominus(a: ColorSet, b: ColorSet, looped: ColorSet) -> ColorSet {
    a.minus(b.minus(looped))
}

/// `A ⊖ {x₁, ..., x_k}` for a color vector.
pub fn ominus_vec(a: ColorSet, x: &[usize], looped: ColorSet) -> ColorSet {
    ominus(a, ColorSet::from_colors(x), looped)
}

/// Number of maps from an `a`-set onto an `s`-set.
pub fn surjections(a: usize, s: usize) -> BigUint {
    // inclusion–exclusion: Σ (-1)^j C(s,j) (s-j)^a
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    let mut binom = BigUint::one();
    for j in 0..=s {
        let term = &binom * num_traits::pow(BigUint::from(s - j), a);
        if j % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
        binom = binom * BigUint::from(s - j) / BigUint::from(j + 1);
    }
    pos - neg
}

/// Semiproper colorings of `K_{a,b}` with side lists `A`, `B`:
/// `Σ_{x∈A^a} |B ⊖ x|^b`, grouped by the set of colors `x` uses.
pub fn cc(a_set: ColorSet, b_set: ColorSet, a: usize, b: usize, looped: ColorSet) -> BigUint {
    let mut total = BigUint::zero();
    for s in a_set.subsets() {
        if s.len() > a {
            continue;
        }
        let onto = surjections(a, s.len());
        if onto.is_zero() {
            continue;
        }
        total += onto * num_traits::pow(BigUint::from(ominus(b_set, s, looped).len()), b);
    }
    total
}

/// Semiproper colorings of `g` where vertex `v` takes colors from `lists[v]`.
pub fn semiproper_count(g: &Graph, lists: &[ColorSet], looped: ColorSet) -> Result<BigUint> {
    if lists.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: lists.len(),
        });
    }
    let back: Vec<u64> = (0..g.n())
        .map(|v| g.neighbors(v) & crate::graph::mask_upto(v))
        .collect();
    let mut colors = vec![0usize; g.n()];
    let mut total = BigUint::zero();
    let mut leaf_count: u64 = 0;
    count_rec(
        0,
        lists,
        looped,
        &back,
        &mut colors,
        &mut leaf_count,
        &mut total,
    );
    Ok(total + BigUint::from(leaf_count))
}

fn count_rec(
    k: usize,
    lists: &[ColorSet],
    looped: ColorSet,
    back: &[u64],
    colors: &mut [usize],
    leaves: &mut u64,
    total: &mut BigUint,
) {
    let mut allowed = lists[k];
    for u in bits(back[k]) {
        if !looped.contains(colors[u]) {
            allowed = allowed.minus(ColorSet::singleton(colors[u]));
        }
    }
    if k + 1 == lists.len() {
        *leaves += allowed.len() as u64;
        if *leaves > u64::MAX / 2 {
            *total += BigUint::from(*leaves);
            *leaves = 0;
        }
        return;
    }
    for c in allowed.iter() {
        colors[k] = c;
        count_rec(k + 1, lists, looped, back, colors, leaves, total);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, GraphFamilySpec};

    fn set(cs: &[usize]) -> ColorSet {
        ColorSet::from_colors(cs)
    }

    /// Direct count of semiproper colorings of `K_{a,b}` with side lists.
    fn brute_cc(a_set: ColorSet, b_set: ColorSet, a: usize, b: usize, looped: ColorSet) -> u64 {
        let a_colors: Vec<usize> = a_set.iter().collect();
        let b_colors: Vec<usize> = b_set.iter().collect();
        let mut count = 0;
        let total_a = a_colors.len().pow(a as u32);
        let total_b = b_colors.len().pow(b as u32);
        for ia in 0..total_a {
            let xs: Vec<usize> = (0..a)
                .map(|i| a_colors[ia / a_colors.len().pow(i as u32) % a_colors.len()])
                .collect();
            for ib in 0..total_b {
                let ys: Vec<usize> = (0..b)
                    .map(|j| b_colors[ib / b_colors.len().pow(j as u32) % b_colors.len()])
                    .collect();
                let ok = xs
                    .iter()
                    .all(|x| ys.iter().all(|y| x != y || looped.contains(*x)));
                count += ok as u64;
            }
        }
        count
    }

    #[test]
    fn ominus_examples() {
        assert_eq!(
            ominus(set(&[1, 2, 3]), set(&[2]), ColorSet::EMPTY),
            set(&[1, 3])
        );
        assert_eq!(
            ominus(set(&[1, 2, 3]), set(&[2]), set(&[2])),
            set(&[1, 2, 3])
        );
        assert_eq!(ominus(set(&[1, 2]), set(&[1, 2, 3]), set(&[1])), set(&[1]));
    }

    #[test]
    fn cc_examples() {
        let e = ColorSet::EMPTY;
        assert_eq!(
            cc(set(&[1, 2, 3]), set(&[1, 2, 3]), 1, 1, e),
            BigUint::from(6u32)
        );
        assert_eq!(cc(set(&[1, 2]), set(&[1, 2]), 2, 2, e), BigUint::from(2u32));
        assert_eq!(
            cc(set(&[1, 2]), set(&[0, 1, 2]), 0, 3, e),
            BigUint::from(27u32)
        );
    }

    #[test]
    fn cc_matches_brute_force_and_is_symmetric() {
        let all = ColorSet::full(3);
        for a_set in all.subsets() {
            for b_set in all.subsets() {
                for looped in all.subsets() {
                    for a in 0..=3 {
                        for b in 0..=3 {
                            let v = cc(a_set, b_set, a, b, looped);
                            assert_eq!(v, BigUint::from(brute_cc(a_set, b_set, a, b, looped)));
                            assert_eq!(v, cc(b_set, a_set, b, a, looped));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn surjection_values() {
        assert_eq!(surjections(0, 0), BigUint::one());
        assert_eq!(surjections(3, 2), BigUint::from(6u32));
        assert_eq!(surjections(4, 3), BigUint::from(36u32));
        assert_eq!(surjections(2, 3), BigUint::zero());
    }

    #[test]
    fn semiproper_examples() {
        let c6 = build_named(&GraphFamilySpec::Cycle { n: 6 }).unwrap();
        let full = vec![ColorSet::full(3); 6];
        assert_eq!(
            semiproper_count(&c6, &full, ColorSet::EMPTY).unwrap(),
            BigUint::from(66u32)
        );
        assert_eq!(
            semiproper_count(&c6, &full, ColorSet::full(3)).unwrap(),
            BigUint::from(729u32)
        );
        let r = semiproper_count(&c6, &full[..5], ColorSet::EMPTY);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(
            set(&[0, 2]).subsets().collect::<Vec<_>>(),
            vec![set(&[]), set(&[0]), set(&[2]), set(&[0, 2])]
        );
        assert_eq!(ColorSet::EMPTY.subsets().count(), 1);
    }
}
