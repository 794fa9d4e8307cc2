//! Coefficient domains for the multivariate series types.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// A Q-vector space that can sit in a [`MultiPoly`](crate::poly::MultiPoly) slot.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync {
    fn is_zero_coeff(&self) -> bool;
    fn scaled(&self, k: &Rational) -> Self;
    /// `self += k * other`.
    fn add_scaled(&mut self, other: &Self, k: &Rational);

    fn add_assign_ref(&mut self, other: &Self) {
        self.add_scaled(other, &Rational::one());
    }
}

/// A coefficient domain that is also a commutative ring.
pub trait CoeffRing: Coeff {
    fn mul(&self, other: &Self) -> Self;
}

impl Coeff for Rational {
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }

    fn scaled(&self, k: &Rational) -> Self {
        self * k
    }

    fn add_scaled(&mut self, other: &Self, k: &Rational) {
        if k.is_one() {
            *self += other;
        } else {
            *self += other * k;
        }
    }
}

impl CoeffRing for Rational {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}
