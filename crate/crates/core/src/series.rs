//! Truncated power series in `q` with rational coefficients.
//!
//! A series of truncation order `N` stores the coefficients of `q^0 ..= q^N`.
//! Binary operations keep the smaller of the two orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::coeff::{Coeff, CoeffRing};
use crate::error::ParseError;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// Builds a series from `q^0 ..` coefficients; the truncation order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series stores at least the constant term");
        QSeries { coeffs }
    }

    /// `c * q^n`, or zero when `n` exceeds the order.
    pub fn monomial(c: Rational, n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    /// Index of the last stored coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        QSeries { coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSeries::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `q d/dq`: the coefficient of `q^n` is multiplied by `n`.
    pub fn qderive(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * Rational::from_integer(n.into()))
            .collect();
        QSeries { coeffs }
    }

    pub fn qderive_n(&self, times: u32) -> Self {
        (0..times).fold(self.clone(), |s, _| s.qderive())
    }

    /// Index of the first coefficient where the two series differ, up to the common order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }
}

/// Coefficientwise equality up to the common truncation order.
impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl Coeff for QSeries {
    fn is_zero_coeff(&self) -> bool {
        QSeries::is_zero(self)
    }

    fn scaled(&self, k: &Rational) -> Self {
        self.scale(k)
    }

    fn add_scaled(&mut self, other: &Self, k: &Rational) {
        if other.order() < self.order() {
            self.coeffs.truncate(other.order() + 1);
        }
        let unit = k.is_one();
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if b.is_zero() {
                continue;
            }
            if unit {
                *a += b;
            } else {
                *a += b * k;
            }
        }
    }
}

impl CoeffRing for QSeries {
    fn mul(&self, other: &Self) -> Self {
        QSeries::mul(self, other)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// `a0 + a1*q + a2*q^2 + ... + O(q^{N+1})`; zero coefficients are omitted,
/// unit coefficients are written without `1*`.
impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let var = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            if n == 0 {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", format_rational(&abs))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl FromStr for QSeries {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let big_o = compact
            .rfind("O(q")
            .ok_or_else(|| ParseError::new(text.len(), "missing O(q^n) term"))?;
        let tail = &compact[big_o + 3..];
        let tail = tail
            .strip_suffix(')')
            .ok_or_else(|| ParseError::new(big_o, "unterminated O(...) term"))?;
        let bound: usize = match tail.strip_prefix('^') {
            Some(e) => e.trim_matches(|c| c == '{' || c == '}').parse().map_err(|_| ParseError::new(big_o, "bad O-term exponent"))?,
            None if tail.is_empty() => 1,
            None => return Err(ParseError::new(big_o, "bad O-term")),
        };
        if bound == 0 {
            return Err(ParseError::new(big_o, "O(q^0) leaves no coefficients"));
        }
        let mut series = QSeries::zero(bound - 1);
        let body = compact[..big_o].strip_suffix('+').unwrap_or(&compact[..big_o]);
        // split into signed terms
        let mut terms: Vec<(bool, &str, usize)> = Vec::new();
        let mut start = 0;
        let bytes = body.as_bytes();
        let mut negative = false;
        let mut i = 0;
        if bytes.first() == Some(&b'-') || bytes.first() == Some(&b'+') {
            negative = bytes[0] == b'-';
            start = 1;
            i = 1;
        }
        while i < bytes.len() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && i > start {
                terms.push((negative, &body[start..i], start));
                negative = b == b'-';
                start = i + 1;
            }
            i += 1;
        }
        if start < body.len() {
            terms.push((negative, &body[start..], start));
        } else if !body.is_empty() {
            return Err(ParseError::new(start, "dangling sign"));
        }
        for (neg, term, pos) in terms {
            let (coef_text, exp) = if let Some(idx) = term.find('q') {
                let exp = match &term[idx + 1..] {
                    "" => 1,
                    e => e
                        .strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| ParseError::new(pos, format!("bad exponent in `{term}`")))?,
                };
                let c = term[..idx].strip_suffix('*').unwrap_or(&term[..idx]);
                (c, exp)
            } else {
                (term, 0)
            };
            let mut c = if coef_text.is_empty() {
                Rational::one()
            } else {
                parse_rational(coef_text).map_err(|e| ParseError::new(pos, e.message))?
            };
            if neg {
                c = -c;
            }
            if exp > series.order() {
                return Err(ParseError::new(pos, format!("term q^{exp} beyond the O-term")));
            }
            series.coeffs[exp] += c;
        }
        Ok(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn qs(v: &[(i64, i64)]) -> QSeries {
        QSeries::from_coeffs(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let a = qs(&[(1, 1), (1, 1), (0, 1)]);
        let b = qs(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.mul(&b), qs(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn annihilator_and_square() {
        let g2 = qs(&[(-1, 24), (1, 1), (3, 1)]);
        assert!(g2.mul(&QSeries::zero(2)).is_zero());
        // (-1/24 + q + 3q^2)^2 = 1/576 - q/12 + (1 - 1/4) q^2
        assert_eq!(g2.mul(&g2), qs(&[(1, 576), (-1, 12), (3, 4)]));
    }

    #[test]
    fn product_truncates_at_smaller_order() {
        let a = QSeries::one(5);
        let b = QSeries::one(2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
    }

    #[test]
    fn qderive_rule() {
        assert!(QSeries::constant(int(5), 4).qderive().is_zero());
        assert_eq!(qs(&[(0, 1), (1, 1), (3, 1)]).qderive(), qs(&[(0, 1), (1, 1), (6, 1)]));
    }

    #[test]
    fn display_format() {
        let s = qs(&[(-1, 24), (1, 1), (3, 2), (0, 1), (-7, 1)]);
        assert_eq!(s.to_string(), "-1/24 + q + 3/2*q^2 - 7*q^4 + O(q^5)");
        assert_eq!(QSeries::zero(3).to_string(), "0 + O(q^4)");
        assert_eq!(qs(&[(0, 1), (-1, 1)]).to_string(), "-q + O(q^2)");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1 + q".parse::<QSeries>().is_err());
        assert!("1 + q^3 + O(q^2)".parse::<QSeries>().is_err());
        assert!("1 + x*q + O(q^2)".parse::<QSeries>().is_err());
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((-20i64..20, 1i64..6), n + 1)
                .prop_map(|v| QSeries::from_coeffs(v.into_iter().map(|(a, b)| rat(a, b)).collect()))
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(s in arb_series()) {
            let back: QSeries = s.to_string().parse().unwrap();
            prop_assert_eq!(back.order(), s.order());
            prop_assert_eq!(back, s);
        }

        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        }

        #[test]
        fn qderive_is_a_derivation(a in arb_series(), b in arb_series()) {
            let lhs = a.mul(&b).qderive();
            let rhs = &a.qderive().mul(&b) + &a.mul(&b.qderive());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
