//! Bernoulli numbers, Eisenstein series and quasimodular recognition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::RecognitionError;
use crate::linalg::{solve, Solution};
use crate::rational::{factorial, Rational};
use crate::series::QSeries;

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2` (Akiyama–Tanigawa).
pub fn bernoulli_table(n: u32) -> Vec<Rational> {
    let n = n as usize;
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let d = &a[j - 1] - &a[j];
            a[j - 1] = d * Rational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

pub fn bernoulli(k: u32) -> Rational {
    bernoulli_table(k).pop().expect("non-empty table")
}

/// `sigma_p(n)` for `0 <= n <= n_max`, by a divisor sieve (entry 0 is zero).
pub fn divisor_sums(p: u32, n_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_max + 1];
    for d in 1..=n_max {
        let dp: BigInt = Pow::pow(BigInt::from(d), p);
        for m in (d..=n_max).step_by(d) {
            out[m] += &dp;
        }
    }
    out
}

/// `G_k` to order `N`: zero for odd `k`, otherwise
/// `-B_k/(2 k!) + 1/(k-1)! * sum sigma_{k-1}(n) q^n`.
pub fn eisenstein_qexp(k: u32, order: usize) -> QSeries {
    if k == 0 || k % 2 == 1 {
        return QSeries::zero(order);
    }
    let f = Rational::from_integer(factorial(k - 1));
    let mut coeffs: Vec<Rational> = divisor_sums(k - 1, order).into_iter().map(|s| Rational::from_integer(s) / &f).collect();
    coeffs[0] = -bernoulli(k) / Rational::from_integer(2 * factorial(k));
    QSeries::from_coeffs(coeffs)
}

/// `(q d/dq)^m G_k`.
pub fn derived_eisenstein(k: u32, m: u32, order: usize) -> QSeries {
    eisenstein_qexp(k, order).qderive_n(m)
}

/// Exponent triple `(a, b, c)` of `G2^a G4^b G6^c`.
pub type QmMonomial = (u32, u32, u32);

/// The monomials `G2^a G4^b G6^c` of one weight with their expansions.
#[derive(Clone, Debug)]
pub struct QuasimodularBasis {
    weight: u32,
    monomials: Vec<QmMonomial>,
    expansions: Vec<QSeries>,
}

impl QuasimodularBasis {
    pub fn new(weight: u32, order: usize) -> Self {
        let mut monomials = Vec::new();
        if weight % 2 == 0 {
            for a in 0..=weight / 2 {
                for b in 0..=(weight - 2 * a) / 4 {
                    let rest = weight - 2 * a - 4 * b;
                    if rest % 6 == 0 {
                        monomials.push((a, b, rest / 6));
                    }
                }
            }
        }
        let g = [eisenstein_qexp(2, order), eisenstein_qexp(4, order), eisenstein_qexp(6, order)];
        let expansions =
            monomials.iter().map(|&(a, b, c)| g[0].pow(a).mul(&g[1].pow(b)).mul(&g[2].pow(c))).collect();
        QuasimodularBasis { weight, monomials, expansions }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn monomials(&self) -> &[QmMonomial] {
        &self.monomials
    }

    pub fn expansions(&self) -> &[QSeries] {
        &self.expansions
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The series of a coefficient map in this basis.
    pub fn evaluate(&self, coeffs: &BTreeMap<QmMonomial, Rational>) -> QSeries {
        let order = self.expansions.first().map_or(0, QSeries::order);
        let mut out = QSeries::zero(order);
        for (m, e) in self.monomials.iter().zip(&self.expansions) {
            if let Some(c) = coeffs.get(m) {
                out = &out + &e.scale(c);
            }
        }
        out
    }
}

/// Extra q-coefficients used beyond the basis size when solving.
pub const RECOGNITION_MARGIN: usize = 10;

/// Writes `s` in the `G2^a G4^b G6^c` basis of weight `K`, checking all available coefficients.
pub fn recognize_quasimodular(s: &QSeries, weight: u32) -> Result<BTreeMap<QmMonomial, Rational>, RecognitionError> {
    let order = s.order();
    let basis = QuasimodularBasis::new(weight, order);
    let m = basis.len();
    let needed = m + RECOGNITION_MARGIN + 1;
    if order + 1 < needed {
        return Err(RecognitionError::Underdetermined { needed, available: order + 1 });
    }
    let system = |upto: usize| -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let a = (0..=upto).map(|n| basis.expansions().iter().map(|e| e.coeff(n).clone()).collect()).collect();
        let b = (0..=upto).map(|n| s.coeff(n).clone()).collect();
        (a, b)
    };
    let coeffs = if m == 0 {
        Vec::new()
    } else {
        let (a, b) = system(needed - 1);
        match solve(&a, &b) {
            Solution::Unique(x) => x,
            Solution::Underdetermined { .. } => {
                return Err(RecognitionError::Underdetermined { needed, available: order + 1 })
            }
            Solution::Inconsistent => {
                let first = (0..needed)
                    .find(|&n| {
                        let (a, b) = system(n);
                        solve(&a, &b) == Solution::Inconsistent
                    })
                    .unwrap_or(needed - 1);
                return Err(RecognitionError::NoSolution { weight, first_mismatch: first });
            }
        }
    };
    let result: BTreeMap<QmMonomial, Rational> =
        basis.monomials().iter().copied().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect();
    let fitted = basis.evaluate(&result);
    if let Some(n) = fitted.first_difference(s) {
        return Err(RecognitionError::NoSolution { weight, first_mismatch: n });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, int, rat};
    use proptest::prelude::*;

    /// Independent oracle: `sum_{j<=n} C(n+1, j) B_j = 0`.
    fn bernoulli_by_recurrence(n: u32) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![Rational::one()];
        for m in 1..=n as i64 {
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += Rational::from_integer(binomial(m + 1, j as i64)) * bj;
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli_table(30), bernoulli_by_recurrence(30));
        for k in (3..30).step_by(2) {
            assert!(bernoulli(k).is_zero());
        }
    }

    #[test]
    fn eisenstein_examples() {
        assert!(eisenstein_qexp(3, 5).is_zero());
        assert_eq!(eisenstein_qexp(2, 4).to_string(), "-1/24 + q + 3*q^2 + 4*q^3 + 7*q^4 + O(q^5)");
        assert_eq!(eisenstein_qexp(4, 2).to_string(), "1/1440 + 1/6*q + 3/2*q^2 + O(q^3)");
        assert_eq!(derived_eisenstein(2, 1, 2).to_string(), "q + 6*q^2 + O(q^3)");
        assert_eq!(derived_eisenstein(2, 0, 6), eisenstein_qexp(2, 6));
        let s = divisor_sums(3, 6);
        assert_eq!(s[6], &s[2] * &s[3]);
    }

    #[test]
    fn divisor_sums_are_integral() {
        for k in [2u32, 4, 6, 8, 10, 12] {
            let g = eisenstein_qexp(k, 40);
            let f = Rational::from_integer(factorial(k - 1));
            let sums = divisor_sums(k - 1, 40);
            for n in 1..=40 {
                let c = g.coeff(n) * &f;
                assert!(c.is_integer() && c >= Rational::zero());
                assert_eq!(c, Rational::from_integer(sums[n].clone()));
            }
        }
    }

    #[test]
    fn recognition() {
        let g4 = eisenstein_qexp(4, 30);
        assert_eq!(recognize_quasimodular(&g4, 4).unwrap(), BTreeMap::from([((0, 1, 0), int(1))]));
        let g8 = eisenstein_qexp(8, 30);
        assert_eq!(recognize_quasimodular(&g8, 8).unwrap(), BTreeMap::from([((0, 2, 0), rat(6, 7))]));
        let mut coeffs = eisenstein_qexp(2, 50).coeffs().to_vec();
        coeffs[50] += int(1);
        let perturbed = QSeries::from_coeffs(coeffs);
        assert_eq!(
            recognize_quasimodular(&perturbed, 2),
            Err(RecognitionError::NoSolution { weight: 2, first_mismatch: 50 })
        );
        assert!(matches!(
            recognize_quasimodular(&eisenstein_qexp(2, 5), 2),
            Err(RecognitionError::Underdetermined { .. })
        ));
    }

    #[test]
    fn products_of_basic_series_are_recognized() {
        let g = |k| eisenstein_qexp(k, 30);
        for (i, k1) in [2u32, 4, 6].into_iter().enumerate() {
            for (j, k2) in [2u32, 4, 6].into_iter().enumerate() {
                let mut e = [0u32; 3];
                e[i] += 1;
                e[j] += 1;
                let got = recognize_quasimodular(&g(k1).mul(&g(k2)), k1 + k2).unwrap();
                assert_eq!(got, BTreeMap::from([((e[0], e[1], e[2]), int(1))]));
            }
        }
    }

    proptest! {
        #[test]
        fn basis_is_complete(w in 0u32..30) {
            let basis = QuasimodularBasis::new(w, 1);
            let expected = (0..=w / 2).flat_map(|a| (0..=w / 4).flat_map(move |b| (0..=w / 6).map(move |c| (a, b, c))))
                .filter(|(a, b, c)| 2 * a + 4 * b + 6 * c == w)
                .count();
            prop_assert_eq!(basis.len(), expected);
            prop_assert!(basis.monomials().windows(2).all(|p| p[0] < p[1]));
        }
    }
}
