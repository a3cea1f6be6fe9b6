//! Exact eigenvalue sign counts of rational symmetric matrices.
//!
//! The characteristic polynomial comes from Faddeev–LeVerrier; positive roots
//! are counted with multiplicity by splitting the polynomial into square-free
//! factors and running a Sturm sequence on each.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        let lead = self.lead();
        if lead.is_zero() {
            return self.clone();
        }
        Poly(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        let zero = Rational::zero();
        Poly::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dd = divisor.degree();
        let lead = divisor.lead();
        if rem.len() < divisor.0.len() {
            return (Poly(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn sign_at_zero(&self) -> i32 {
        self.0.first().map_or(0, sign)
    }

    pub fn sign_at_infinity(&self) -> i32 {
        sign(&self.lead())
    }

    /// Multiplicity of the root 0 and the cofactor.
    pub fn strip_zero_roots(&self) -> (usize, Poly) {
        let z = self.0.iter().take_while(|c| c.is_zero()).count();
        (z, Poly(self.0[z.min(self.0.len())..].to_vec()))
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// `det(xI - A)` via Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &[Vec<Rational>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let trace: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / Rational::from_integer(k.into());
    }
    Poly::new(coeffs)
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Square-free factors `a_1, a_2, ...` with `p = c·∏ a_i^i` (Yun).
pub fn square_free_decomposition(p: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    let dp = p.derivative();
    let b = p.gcd(&dp);
    let mut c = p.div_rem(&b).0;
    let mut d = dp.div_rem(&b).0.sub(&c.derivative());
    while c.degree() > 0 {
        let a = c.gcd(&d);
        c = c.div_rem(&a).0;
        d = d.div_rem(&a).0.sub(&c.derivative());
        out.push(a);
    }
    out
}

/// Distinct roots in `(0, ∞)` of a square-free polynomial with `p(0) ≠ 0`.
fn sturm_positive_roots(p: &Poly) -> usize {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq[seq.len() - 1].is_zero() {
        let k = seq.len();
        let r = seq[k - 2].div_rem(&seq[k - 1]).1.neg();
        seq.push(r);
    }
    seq.pop();
    let changes = |signs: Vec<i32>| {
        let nz: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let at_zero = changes(seq.iter().map(Poly::sign_at_zero).collect());
    let at_inf = changes(seq.iter().map(Poly::sign_at_infinity).collect());
    at_zero - at_inf
}

/// Positive roots of `p` counted with multiplicity. Exact for any nonzero
/// polynomial; callers pass real-rooted ones.
pub fn positive_root_count(p: &Poly) -> usize {
    let (_, p) = p.strip_zero_roots();
    square_free_decomposition(&p)
        .iter()
        .enumerate()
        .map(|(i, a)| (i + 1) * sturm_positive_roots(a))
        .sum()
}

/// Eigenvalue sign counts `(positive, zero, negative)` of a symmetric
/// rational matrix.
pub fn inertia(a: &[Vec<Rational>]) -> (usize, usize, usize) {
    let p = characteristic_polynomial(a);
    let (zero, rest) = p.strip_zero_roots();
    (
        positive_root_count(&rest),
        zero,
        positive_root_count(&rest.reflect()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    /// Descartes' rule of signs; exact on real-rooted polynomials.
    fn descartes(p: &Poly) -> usize {
        let signs: Vec<i32> = p.0.iter().map(sign).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(
            characteristic_polynomial(&m(&[&[2, 1], &[1, 2]])),
            poly(&[3, -4, 1])
        );
        // x^3 - 2x^2 - x + 1
        assert_eq!(
            characteristic_polynomial(&m(&[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]])),
            poly(&[1, -1, -2, 1])
        );
        // K3: (x-2)(x+1)^2 = x^3 - 3x - 2
        assert_eq!(
            characteristic_polynomial(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])),
            poly(&[-2, -3, 0, 1])
        );
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&m(&[&[2, 1], &[1, 2]])), (2, 0, 0));
        assert_eq!(
            inertia(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])),
            (1, 0, 2)
        );
        assert_eq!(
            inertia(&m(&[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]])),
            (2, 0, 1)
        );
        assert_eq!(inertia(&m(&[&[1, 1], &[1, 1]])), (1, 1, 0));
        assert_eq!(inertia(&m(&[&[0, 0], &[0, 0]])), (0, 2, 0));
        assert_eq!(inertia(&[]), (0, 0, 0));
    }

    #[test]
    fn repeated_roots() {
        // (x-1)^3 (x+2)^2 x
        let expanded = {
            let mut acc = Poly::one();
            for r in [1, 1, 1, -2, -2, 0] {
                acc = mul(&acc, &poly(&[-r, 1]));
            }
            acc
        };
        assert_eq!(positive_root_count(&expanded), 3);
        assert_eq!(positive_root_count(&expanded.reflect()), 2);
        let sf = square_free_decomposition(&expanded.strip_zero_roots().1);
        assert_eq!(sf.len(), 3);
    }

    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![Rational::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly::new(out)
    }

    #[test]
    fn sturm_agrees_with_descartes_on_symmetric_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let q = rng.gen_range(1..=5);
            let mut a = vec![vec![Rational::zero(); q]; q];
            for i in 0..q {
                for j in i..q {
                    let v = int(rng.gen_range(-3..=3));
                    a[i][j] = v.clone();
                    a[j][i] = v;
                }
            }
            let p = characteristic_polynomial(&a);
            let (z, rest) = p.strip_zero_roots();
            let (pos, zero, neg) = inertia(&a);
            assert_eq!(zero, z);
            assert_eq!(pos, descartes(&rest));
            assert_eq!(neg, descartes(&rest.reflect()));
            assert_eq!(pos + zero + neg, q);
        }
    }
}
