use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{GenId, Space};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// A sparse rational combination of generators of unrestricted weight.
///
/// Serves as the coefficient type of formal generating series, where every
/// coefficient of a fixed monomial is homogeneous but different monomials
/// carry different weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb(pub BTreeMap<GenId, Rational>);

impl LinComb {
    pub fn gen(g: GenId) -> Self {
        Self::term(g, Rational::one())
    }

    pub fn term(g: GenId, c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(g, c);
        }
        LinComb(m)
    }

    pub fn add_term(&mut self, g: GenId, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(g).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&g);
        }
    }
}

impl Coeff for LinComb {
    fn is_zero_coeff(&self) -> bool {
        self.0.is_empty()
    }

    fn scaled(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return LinComb::default();
        }
        LinComb(self.0.iter().map(|(g, c)| (*g, c * k)).collect())
    }

    fn add_scaled(&mut self, other: &Self, k: &Rational) {
        for (g, c) in &other.0 {
            self.add_term(*g, &(c * k));
        }
    }
}

/// A homogeneous element of one formal space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalElement {
    space: Space,
    weight: u32,
    terms: BTreeMap<GenId, Rational>,
}

impl FormalElement {
    pub fn zero(space: Space, weight: u32) -> Self {
        FormalElement { space, weight, terms: BTreeMap::new() }
    }

    pub fn from_gen(g: GenId) -> Self {
        let mut e = Self::zero(g.space(), g.weight());
        e.push(g, Rational::one());
        e
    }

    /// Builds an element, rejecting terms of mixed space or weight.
    pub fn from_terms(space: Space, weight: u32, terms: impl IntoIterator<Item = (GenId, Rational)>) -> Result<Self> {
        let mut e = Self::zero(space, weight);
        for (g, c) in terms {
            e.add_term(g, c)?;
        }
        Ok(e)
    }

    /// Infers space and weight from the first term. `None` for an empty combination.
    pub fn from_lincomb(l: &LinComb) -> Option<Result<Self>> {
        let first = *l.0.keys().next()?;
        Some(Self::from_terms(first.space(), first.weight(), l.0.iter().map(|(g, c)| (*g, c.clone()))))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn terms(&self) -> &BTreeMap<GenId, Rational> {
        &self.terms
    }

    pub fn coeff(&self, g: &GenId) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn to_lincomb(&self) -> LinComb {
        LinComb(self.terms.clone())
    }

    pub fn add_term(&mut self, g: GenId, c: Rational) -> Result<()> {
        if g.space() != self.space {
            return Err(Error::MixedSpace);
        }
        if g.weight() != self.weight {
            return Err(Error::MixedWeight { first: self.weight, second: g.weight() });
        }
        if !g.is_valid() {
            return Err(Error::InvalidArgument(format!("generator {g} has an index k = 0")));
        }
        self.push(g, c);
        Ok(())
    }

    /// Unchecked insertion for internally generated terms.
    pub(crate) fn push(&mut self, g: GenId, c: Rational) {
        debug_assert!(g.space() == self.space && g.weight() == self.weight && g.is_valid(), "{g}");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::MixedSpace);
        }
        if self.weight != other.weight && !other.is_empty() && !self.is_empty() {
            return Err(Error::MixedWeight { first: self.weight, second: other.weight });
        }
        Ok(())
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &Self, k: &Rational) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = if self.is_empty() { Self::zero(other.space, other.weight) } else { self.clone() };
        for (g, c) in &other.terms {
            out.push(*g, c * k);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.space, self.weight);
        for (g, c) in &self.terms {
            out.push(*g, c * k);
        }
        out
    }
}

impl fmt::Display for FormalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{}*{g}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}
