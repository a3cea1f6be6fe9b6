//! Monotonicity of averaged monomial sums over sequences with a fixed number
//! of distinct entries.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::coloring::surjections;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::bits;
use crate::power::CompareConfig;
use crate::report::{Flag, IneqReport};
use crate::scalar::{fmt_rational, natural_to_rational, Rational};

pub const SYM_MONOTONE: &str = "sym-monotone";
pub const SYM_COROLLARY: &str = "sym-corollary";

/// Largest `n^k` for which the direct-enumeration self-test runs.
pub const SELF_TEST_LIMIT: usize = 1 << 12;
pub const MAX_SYM_N: usize = 16;

/// `f_{k,S}` for every `k ≤ k_max` and `S ⊆ [n]`, from
/// `f_{k,S} = Σ_{x∈S} α_x (f_{k-1,S} + f_{k-1,S∖x})`.
/// Indexed as `table[k][mask]`.
pub fn f_table(alphas: &[Rational], k_max: usize) -> Vec<Vec<Rational>> {
    let n = alphas.len();
    let size = 1usize << n;
    let mut table = vec![vec![Rational::zero(); size]; k_max + 1];
    table[0][0] = Rational::one();
    for k in 1..=k_max {
        for mask in 1..size {
            if (mask as u64).count_ones() as usize > k {
                continue;
            }
            let mut acc = Rational::zero();
            for x in bits(mask as u64) {
                let s = &table[k - 1][mask] + &table[k - 1][mask & !(1 << x)];
                if !s.is_zero() {
                    acc += &alphas[x] * s;
                }
            }
            table[k][mask] = acc;
        }
    }
    table
}

/// `Σ_{|x|=ℓ} ∏ α_{x_i}` for `ℓ = 0..=k` by direct enumeration of `[n]^k`.
pub fn direct_level_sums(alphas: &[Rational], k: usize) -> Vec<Rational> {
    let n = alphas.len();
    let mut sums = vec![Rational::zero(); k + 1];
    let mut seq = vec![0usize; k];
    loop {
        let mut mask = 0u64;
        let mut prod = Rational::one();
        for &x in &seq {
            mask |= 1 << x;
            prod *= &alphas[x];
        }
        sums[mask.count_ones() as usize] += prod;
        // odometer
        let mut i = 0;
        while i < k {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    sums
}

/// Number of sequences in `[n]^k` with exactly `ℓ` distinct entries.
pub fn level_count(n: usize, k: usize, l: usize) -> BigUint {
    binomial(n, l) * surjections(k, l)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Per-level sums and averages.
#[derive(Clone, Debug, PartialEq)]
pub struct SymLevels {
    /// `sums[ℓ]` for `ℓ = 0..=k`.
    pub sums: Vec<Rational>,
    /// `m_ℓ` for `ℓ = 1..=min(n, k)`, stored at index `ℓ - 1`.
    pub averages: Vec<Rational>,
}

pub fn sym_levels(alphas: &[Rational], k: usize) -> Result<SymLevels> {
    let n = alphas.len();
    if n == 0 || n > MAX_SYM_N {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n <= {MAX_SYM_N}, got {n}"
        )));
    }
    if alphas.iter().any(|a| a < &Rational::zero()) {
        return Err(Error::NegativeWeight("alpha".into()));
    }
    let table = f_table(alphas, k);
    let mut sums = vec![Rational::zero(); k + 1];
    for (mask, f) in table[k].iter().enumerate() {
        let l = (mask as u64).count_ones() as usize;
        if l <= k {
            sums[l] += f;
        }
    }
    let averages = (1..=n.min(k))
        .map(|l| &sums[l] / natural_to_rational(&level_count(n, k, l)))
        .collect();
    Ok(SymLevels { sums, averages })
}

fn describe(alphas: &[Rational], k: usize) -> String {
    let a: Vec<String> = alphas.iter().map(fmt_rational).collect();
    format!("alpha=({}) k={k}", a.join(","))
}

/// `m_1 ≥ m_2 ≥ … ≥ m_{min(n,k)}`, reported through the adjacent pair with
/// the smallest gap. Cross-checks the recursion against direct enumeration
/// when `n^k` is small and the corollary at `τ(j) = 1/(j+1)`.
pub fn check_sym_monotone(
    alphas: &[Rational],
    k: usize,
    cfg: &CompareConfig,
) -> Result<IneqReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let levels = sym_levels(alphas, k)?;
    let n = alphas.len();
    if (n as f64).powi(k as i32) <= SELF_TEST_LIMIT as f64 {
        let direct = direct_level_sums(alphas, k);
        if direct != levels.sums {
            return Err(Error::SelfTest(format!(
                "recursion disagrees with enumeration at {}",
                describe(alphas, k)
            )));
        }
    }
    let tau: Vec<Rational> = (0..=k)
        .map(|j| Rational::new(1.into(), (j as i64 + 1).into()))
        .collect();
    let corollary = check_sym_corollary(alphas, k, &tau, cfg)?;
    if !corollary.is_ok() {
        return Err(Error::SelfTest(format!(
            "corollary fails at {}",
            describe(alphas, k)
        )));
    }
    let m = &levels.averages;
    let (lhs, rhs) = if m.len() == 1 {
        (m[0].clone(), m[0].clone())
    } else {
        let worst = (0..m.len() - 1)
            .min_by(|&i, &j| (&m[i] - &m[i + 1]).cmp(&(&m[j] - &m[j + 1])))
            .expect("at least one pair");
        (m[worst + 1].clone(), m[worst].clone())
    };
    let averages: Vec<String> = m.iter().map(fmt_rational).collect();
    let report = IneqReport::decide(
        SYM_MONOTONE,
        describe(alphas, k),
        Expr::rat(lhs),
        Expr::rat(rhs),
        cfg,
    )?
    .with_note(format!("m=({})", averages.join(", ")));
    Ok(report.flag_if_violated(Flag::ContradictsTheorem))
}

/// `E[τ(|x|)]·E[∏α] ≤ E[τ(|x|)∏α]` over `x ∈ D^k`; `tau[j]` is `τ(j)` and
/// must be nonincreasing.
pub fn check_sym_corollary(
    alphas: &[Rational],
    k: usize,
    tau: &[Rational],
    cfg: &CompareConfig,
) -> Result<IneqReport> {
    let n = alphas.len();
    let top = n.min(k);
    if tau.len() <= top {
        return Err(Error::DimensionMismatch {
            expected: top + 1,
            found: tau.len(),
        });
    }
    if tau.windows(2).any(|w| w[1] > w[0]) || tau.iter().any(|t| t < &Rational::zero()) {
        return Err(Error::PreconditionViolated(
            "tau must be nonnegative and nonincreasing".into(),
        ));
    }
    let levels = sym_levels(alphas, k)?;
    let total = natural_to_rational(&num_traits::pow(BigUint::from(n), k));
    let mut e_tau = Rational::zero();
    let mut e_prod = Rational::zero();
    let mut e_both = Rational::zero();
    for l in 1..=top {
        let count = natural_to_rational(&level_count(n, k, l));
        e_tau += &tau[l] * count;
        e_prod += &levels.sums[l];
        e_both += &tau[l] * &levels.sums[l];
    }
    let lhs = e_tau * e_prod / (&total * &total);
    let rhs = e_both / total;
    let report = IneqReport::decide(
        SYM_COROLLARY,
        describe(alphas, k),
        Expr::rat(lhs),
        Expr::rat(rhs),
        cfg,
    )?;
    Ok(report.flag_if_violated(Flag::ContradictsTheorem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::scalar::{int, rat};
    use std::collections::HashMap;

    /// Exponent vectors of the monomials of `f_{k,S}` with multiplicities.
    fn monomials(n: usize, k: usize, mask: u64) -> HashMap<Vec<usize>, u64> {
        let mut out = HashMap::new();
        let mut seq = vec![0usize; k];
        if n == 0 {
            return out;
        }
        loop {
            let used = seq.iter().fold(0u64, |m, &x| m | 1 << x);
            if used == mask {
                let mut exps = vec![0usize; n];
                for &x in &seq {
                    exps[x] += 1;
                }
                *out.entry(exps).or_insert(0) += 1;
            }
            let mut i = 0;
            while i < k {
                seq[i] += 1;
                if seq[i] < n {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }

    #[test]
    fn displayed_example() {
        let l = sym_levels(&[int(2), int(1), int(0)], 4).unwrap();
        assert_eq!(l.averages, vec![rat(17, 3), rat(32, 21), int(0)]);
        let l = sym_levels(&[int(1), int(1), int(1)], 4).unwrap();
        assert_eq!(l.averages, vec![int(1), int(1), int(1)]);
        let r = check_sym_monotone(&vec![int(1); 3], 4, &CompareConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Equality);
        let r =
            check_sym_monotone(&[int(2), int(1), int(0)], 4, &CompareConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn f5_expansion() {
        // f_{5,{1,2,3}} has coefficients 20 on a³bc and 30 on a²b²c
        let m = monomials(3, 5, 0b111);
        assert_eq!(m[&vec![3, 1, 1]], 20);
        assert_eq!(m[&vec![2, 2, 1]], 30);
        assert_eq!(m.len(), 6);
    }

    #[test]
    fn recursion_matches_enumeration() {
        let alphas = [rat(1, 2), int(3), rat(2, 3), int(1)];
        for k in 0..=5 {
            let table = f_table(&alphas, k);
            let mut sums = vec![Rational::zero(); k + 1];
            for (mask, f) in table[k].iter().enumerate() {
                let l = (mask as u64).count_ones() as usize;
                if l <= k {
                    sums[l] += f;
                }
            }
            if k > 0 {
                assert_eq!(sums, direct_level_sums(&alphas, k));
            }
        }
    }

    #[test]
    fn single_value_is_vacuous() {
        let r = check_sym_monotone(&[rat(5, 2)], 3, &CompareConfig::default()).unwrap();
        assert!(r.is_ok());
    }

    #[test]
    fn level_counts_partition() {
        for n in 1..=4usize {
            for k in 1..=5usize {
                let total: BigUint = (0..=k).map(|l| level_count(n, k, l)).sum();
                assert_eq!(total, num_traits::pow(BigUint::from(n), k));
            }
        }
    }

    #[test]
    fn corollary_rejects_increasing_tau() {
        let r = check_sym_corollary(
            &[int(1), int(2)],
            2,
            &[int(0), int(1), int(2)],
            &CompareConfig::default(),
        );
        assert!(matches!(r, Err(Error::PreconditionViolated(_))));
    }
}
