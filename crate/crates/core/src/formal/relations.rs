//! Generators and defining relations of the two formal spaces.

use num_traits::{One, Zero};

use super::{FormalElement, GenId, Space};
use crate::rational::{binomial, factorial, Rational};

/// Index tuples `(k1, k2, d1, d2)` of weight `K`, lexicographic in `(k1, d1, k2, d2)`.
pub fn depth_two_indices(weight: u32) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for k1 in 1..weight {
        for d1 in 0..=(weight - k1) {
            for k2 in 1..=(weight - k1 - d1) {
                let d2 = weight - k1 - d1 - k2;
                out.push((k1, k2, d1, d2));
            }
        }
    }
    out
}

/// All generators of one weight in basis order.
pub fn enumerate_generators(space: Space, weight: u32) -> Vec<GenId> {
    let mut out = Vec::new();
    match space {
        Space::Eisenstein => {
            for d in 0..weight {
                out.push(GenId::g1(weight - d, d));
            }
            let idx = depth_two_indices(weight);
            out.extend(idx.iter().map(|&(k1, k2, d1, d2)| GenId::g2(k1, k2, d1, d2)));
            out.extend(idx.iter().map(|&(k1, k2, d1, d2)| GenId::p(k1, k2, d1, d2)));
        }
        Space::Zeta => {
            if weight >= 1 {
                out.push(GenId::z1(weight));
            }
            out.extend((1..weight).map(|k1| GenId::z2(k1, weight - k1)));
            out.extend((1..weight).map(|k1| GenId::zp(k1, weight - k1)));
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

fn q(n: impl Into<num_bigint::BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `G(k1,k2;d1,d2) + G(k2,k1;d2,d1) + G(k1+k2;d1+d2)`, the first expression for `P`.
pub fn stuffle_expansion(k1: u32, k2: u32, d1: u32, d2: u32) -> FormalElement {
    let mut e = FormalElement::zero(Space::Eisenstein, k1 + k2 + d1 + d2);
    e.push(GenId::g2(k1, k2, d1, d2), Rational::one());
    e.push(GenId::g2(k2, k1, d2, d1), Rational::one());
    e.push(GenId::g1(k1 + k2, d1 + d2), Rational::one());
    e
}

/// The shuffle-side expression for `P(k1,k2;d1,d2)`.
pub fn shuffle_expansion(k1: u32, k2: u32, d1: u32, d2: u32) -> FormalElement {
    let (k, d) = (k1 + k2, d1 + d2);
    let mut e = FormalElement::zero(Space::Eisenstein, k + d);
    let (k1i, k2i, d1i, d2i) = (k1 as i64, k2 as i64, d1 as i64, d2 as i64);
    for l1 in 1..k {
        let l2 = k - l1;
        for e1 in 0..=d {
            let e2 = d - e1;
            let (l1i, e1i) = (l1 as i64, e1 as i64);
            let mut c = binomial(l1i - 1, k1i - 1) * binomial(d1i, e1i);
            if (d1i - e1i).rem_euclid(2) == 1 {
                c = -c;
            }
            let mut c2 = binomial(l1i - 1, k2i - 1) * binomial(d2i, e1i);
            if (d2i - e1i).rem_euclid(2) == 1 {
                c2 = -c2;
            }
            e.push(GenId::g2(l1, l2, e1, e2), q(c + c2));
        }
    }
    let tail = Rational::new(factorial(d1) * factorial(d2), factorial(d + 1)) * q(binomial(k as i64 - 2, k1i - 1));
    e.push(GenId::g1(k - 1, d + 1), tail);
    e
}

fn p_minus(p: GenId, expansion: FormalElement) -> FormalElement {
    let mut row = expansion.scale(&-Rational::one());
    row.push(p, Rational::one());
    row
}

/// Two rows per `(k1,k2,d1,d2)` in basis order, stuffle row first.
pub fn eisenstein_relations(weight: u32) -> Vec<FormalElement> {
    let mut rows = Vec::new();
    for (k1, k2, d1, d2) in depth_two_indices(weight) {
        let p = GenId::p(k1, k2, d1, d2);
        rows.push(p_minus(p, stuffle_expansion(k1, k2, d1, d2)));
        rows.push(p_minus(p, shuffle_expansion(k1, k2, d1, d2)));
    }
    rows
}

/// `Z(k1,k2) + Z(k2,k1) + Z(k)`.
pub fn zeta_stuffle_expansion(k1: u32, k2: u32) -> FormalElement {
    let mut e = FormalElement::zero(Space::Zeta, k1 + k2);
    e.push(GenId::z2(k1, k2), Rational::one());
    e.push(GenId::z2(k2, k1), Rational::one());
    e.push(GenId::z1(k1 + k2), Rational::one());
    e
}

pub fn zeta_shuffle_expansion(k1: u32, k2: u32) -> FormalElement {
    let k = k1 + k2;
    let mut e = FormalElement::zero(Space::Zeta, k);
    for j in 1..k {
        let c = binomial(j as i64 - 1, k1 as i64 - 1) + binomial(j as i64 - 1, k2 as i64 - 1);
        if !c.is_zero() {
            e.push(GenId::z2(j, k - j), q(c));
        }
    }
    e
}

/// Two rows per `(k1,k2)`, stuffle row first.
pub fn zeta_relations(weight: u32) -> Vec<FormalElement> {
    let mut rows = Vec::new();
    for k1 in 1..weight {
        let k2 = weight - k1;
        let p = GenId::zp(k1, k2);
        rows.push(p_minus(p, zeta_stuffle_expansion(k1, k2)));
        rows.push(p_minus(p, zeta_shuffle_expansion(k1, k2)));
    }
    rows
}

pub fn relations(space: Space, weight: u32) -> Vec<FormalElement> {
    match space {
        Space::Eisenstein => eisenstein_relations(weight),
        Space::Zeta => zeta_relations(weight),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    fn expr(s: &str) -> FormalElement {
        parse_expression(s).unwrap().element
    }

    #[test]
    fn generator_counts() {
        assert_eq!(enumerate_generators(Space::Eisenstein, 1), vec![GenId::g1(1, 0)]);
        assert_eq!(
            enumerate_generators(Space::Eisenstein, 2),
            vec![GenId::g1(2, 0), GenId::g1(1, 1), GenId::g2(1, 1, 0, 0), GenId::p(1, 1, 0, 0)]
        );
        assert_eq!(
            enumerate_generators(Space::Zeta, 3),
            vec![GenId::z1(3), GenId::z2(1, 2), GenId::z2(2, 1), GenId::zp(1, 2), GenId::zp(2, 1)]
        );
        for k in 1..=12u32 {
            let c3 = (k + 1) * k * (k - 1) / 6;
            assert_eq!(enumerate_generators(Space::Eisenstein, k).len() as u32, k + 2 * c3);
            assert_eq!(eisenstein_relations(k).len() as u32, 2 * c3);
        }
    }

    #[test]
    fn weight_two_rows() {
        let rows = eisenstein_relations(2);
        assert_eq!(rows[0], expr("P(1,1;0,0) - 2*G(1,1;0,0) - G(2;0)"));
        assert_eq!(rows[1], expr("P(1,1;0,0) - 2*G(1,1;0,0) - G(1;1)"));
        assert_eq!(rows[1].sub(&rows[0]).unwrap(), expr("G(2;0) - G(1;1)"));
        assert_eq!(zeta_relations(2)[0], expr("ZP(1,1) - 2*Z(1,1) - Z(2)"));
        assert_eq!(zeta_relations(2)[1], expr("ZP(1,1) - 2*Z(1,1)"));
    }

    #[test]
    fn shuffle_tail_coefficient() {
        // d1! d2! / (d1+d2+1)! * C(k1+k2-2, k1-1) at (2,1,1,1): 1/6 * 1
        let e = shuffle_expansion(2, 1, 1, 1);
        assert_eq!(e.coeff(&GenId::g1(2, 3)), crate::rational::rat(1, 6));
    }
}
