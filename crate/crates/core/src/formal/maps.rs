//! The linear maps between the formal spaces, defined on generators.

use num_traits::One;

use super::relations::stuffle_expansion;
use super::{FormalElement, GenId, Space};
use crate::error::{Error, Result};
use crate::rational::{factorial, factorial_q, int, rat, Rational};

fn require(e: &FormalElement, space: Space) -> Result<()> {
    if e.space() != space {
        return Err(Error::WrongSpace { expected: space, found: e.space() });
    }
    Ok(())
}

fn linear(e: &FormalElement, target: Space, weight: u32, f: impl Fn(GenId, &mut FormalElement)) -> FormalElement {
    let mut out = FormalElement::zero(target, weight);
    for (g, c) in e.terms() {
        let mut img = FormalElement::zero(target, weight);
        f(*g, &mut img);
        for (h, v) in img.terms() {
            out.push(*h, v * c);
        }
    }
    out
}

fn pi_gen(g: GenId, out: &mut FormalElement) {
    match g {
        GenId::E1 { k, d } => {
            if d == 0 {
                out.push(GenId::z1(k), Rational::one());
            }
            if k == 1 {
                out.push(GenId::z1(d + 1), factorial_q(d));
            }
        }
        GenId::E2 { k1, k2, d1, d2 } => {
            if d1 == 0 && d2 == 0 {
                out.push(GenId::z2(k1, k2), Rational::one());
            }
            if k1 == 1 && k2 == 1 {
                let n = d1 + d2 + 2;
                for a in (d2 + 1)..n {
                    let c = factorial(d1) * factorial(a - 1) / factorial(a - 1 - d2);
                    out.push(GenId::z2(a, n - a), Rational::from_integer(c));
                }
            }
        }
        GenId::EP { k1, k2, d1, d2 } => {
            for (h, c) in stuffle_expansion(k1, k2, d1, d2).terms() {
                let mut img = FormalElement::zero(Space::Zeta, out.weight());
                pi_gen(*h, &mut img);
                for (z, v) in img.terms() {
                    out.push(*z, v * c);
                }
            }
        }
        _ => unreachable!("zeta generator in an Eisenstein element"),
    }
}

/// Projection to the formal double zeta space of the same weight.
///
/// Product symbols `P` are first rewritten through their stuffle expansion.
pub fn map_pi(e: &FormalElement) -> Result<FormalElement> {
    require(e, Space::Eisenstein)?;
    Ok(linear(e, Space::Zeta, e.weight(), pi_gen))
}

fn sigma_gen(g: GenId, out: &mut FormalElement) {
    let half = rat(1, 2);
    match g {
        GenId::Z1 { k } => {
            if k != 2 {
                out.push(GenId::g1(k, 0), Rational::one());
            }
        }
        GenId::Z2 { k1, k2 } => {
            out.push(GenId::g2(k1, k2, 0, 0), Rational::one());
            if k2 == 1 {
                out.push(GenId::g1(k1, 1), half.clone());
            }
            if k1 == 1 {
                out.push(GenId::g1(k2, 1), -half.clone());
            }
            if k1 == 2 {
                out.push(GenId::g1(k2 + 1, 1), half);
            }
        }
        GenId::ZP { k1, k2 } => {
            out.push(GenId::p(k1, k2, 0, 0), Rational::one());
            if k1 == 2 {
                out.push(GenId::g1(k2 + 1, 1), half.clone());
            }
            if k2 == 2 {
                out.push(GenId::g1(k1 + 1, 1), half);
            }
            if k1 * k2 == 1 {
                out.push(GenId::g1(2, 0), int(-1));
            }
        }
        _ => unreachable!("Eisenstein generator in a zeta element"),
    }
}

/// Section from the formal double zeta space back to the Eisenstein space.
pub fn map_sigma(e: &FormalElement) -> Result<FormalElement> {
    require(e, Space::Zeta)?;
    Ok(linear(e, Space::Eisenstein, e.weight(), sigma_gen))
}

fn partial_gen(g: GenId, out: &mut FormalElement) {
    match g {
        GenId::E1 { k, d } => out.push(GenId::g1(k + 1, d + 1), int(k as i64)),
        GenId::E2 { k1, k2, d1, d2 } => {
            out.push(GenId::g2(k1 + 1, k2, d1 + 1, d2), int(k1 as i64));
            out.push(GenId::g2(k1, k2 + 1, d1, d2 + 1), int(k2 as i64));
        }
        GenId::EP { k1, k2, d1, d2 } => {
            for (h, c) in stuffle_expansion(k1, k2, d1, d2).terms() {
                let mut img = FormalElement::zero(Space::Eisenstein, out.weight());
                partial_gen(*h, &mut img);
                for (z, v) in img.terms() {
                    out.push(*z, v * c);
                }
            }
        }
        _ => unreachable!("zeta generator in an Eisenstein element"),
    }
}

/// Weight-raising derivation, weight `K` to `K + 2`.
pub fn map_partial(e: &FormalElement) -> Result<FormalElement> {
    require(e, Space::Eisenstein)?;
    Ok(linear(e, Space::Eisenstein, e.weight() + 2, partial_gen))
}
