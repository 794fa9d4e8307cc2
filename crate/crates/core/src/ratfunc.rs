//! Quotients of truncated four-variable series by products of linear forms.
//!
//! These carry the polar objects (`1/X1`, `1/(X1 - X2)`, ...) that cannot live
//! in a power-series ring. Identities between them are tested by
//! cross-multiplying to a common denominator, never by inverting a series.

use std::collections::BTreeMap;

use num_traits::One;

use crate::coeff::{Coeff, CoeffRing};
use crate::error::{Error, Result};
use crate::poly::{LinearForm, MultiPoly};
use crate::rational::Rational;
use crate::series::QSeries;

/// `numerator / prod(form^exponent)`. Denominator forms are stored sign-normalized.
///
/// The numerator's cap is its exactness bound; the function itself is exact
/// through homogeneous degree [`precision`](Self::precision).
#[derive(Clone, Debug)]
pub struct RationalFunction4<C = QSeries> {
    numerator: MultiPoly<C>,
    denominator: BTreeMap<LinearForm, u32>,
}

impl<C: Coeff> RationalFunction4<C> {
    pub fn from_poly(p: MultiPoly<C>) -> Self {
        RationalFunction4 { numerator: p, denominator: BTreeMap::new() }
    }

    /// `numerator / prod(forms)`; repeated forms raise the exponent.
    pub fn new(numerator: MultiPoly<C>, forms: &[LinearForm]) -> Result<Self> {
        let mut f = Self::from_poly(numerator);
        for form in forms {
            f.push_denominator(*form)?;
        }
        Ok(f)
    }

    fn push_denominator(&mut self, form: LinearForm) -> Result<()> {
        if form.is_zero() {
            return Err(Error::DegenerateForm(form.to_string()));
        }
        let (sign, normal) = form.normalized();
        if sign < 0 {
            self.numerator = self.numerator.neg();
        }
        *self.denominator.entry(normal).or_insert(0) += 1;
        Ok(())
    }

    pub fn numerator(&self) -> &MultiPoly<C> {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.denominator
    }

    pub fn denominator_degree(&self) -> u32 {
        self.denominator.values().sum()
    }

    /// Homogeneous degree through which the function is known exactly.
    pub fn precision(&self) -> i64 {
        self.numerator.max_degree() as i64 - self.denominator_degree() as i64
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RationalFunction4 { numerator: self.numerator.scale(k), denominator: self.denominator.clone() }
    }

    /// Rewrites over a denominator that the current one divides.
    fn lift_to(&self, target: &BTreeMap<LinearForm, u32>) -> MultiPoly<C> {
        let mut num = self.numerator.clone();
        for (form, &e) in target {
            let have = self.denominator.get(form).copied().unwrap_or(0);
            for _ in have..e {
                num = num.mul_form(form);
            }
        }
        num
    }

    fn lcm(&self, other: &Self) -> BTreeMap<LinearForm, u32> {
        let mut den = self.denominator.clone();
        for (form, &e) in &other.denominator {
            let slot = den.entry(*form).or_insert(0);
            *slot = (*slot).max(e);
        }
        den
    }

    /// `self + k * other` over the least common denominator.
    pub fn add_scaled(&self, other: &Self, k: &Rational) -> Self {
        let den = self.lcm(other);
        let mut num = self.lift_to(&den);
        num.add_scaled(&other.lift_to(&den), k);
        RationalFunction4 { numerator: num, denominator: den }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Rational::one())
    }

    /// Substitutes into the numerator and into each denominator form separately.
    pub fn substitute(&self, images: &[LinearForm; 4]) -> Result<Self> {
        let mut out = RationalFunction4 { numerator: self.numerator.substitute(images), denominator: BTreeMap::new() };
        for (form, &e) in &self.denominator {
            let image = form.compose(images);
            for _ in 0..e {
                out.push_denominator(image)?;
            }
        }
        Ok(out)
    }

    /// Identically zero through its precision (numerator vanishes after clearing).
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Zero through homogeneous degree `degree` (clamped to the precision).
    pub fn is_zero_through(&self, degree: i64) -> bool {
        let bound = degree.min(self.precision()) + self.denominator_degree() as i64;
        if bound < 0 {
            return true;
        }
        self.numerator.iter().all(|(m, c)| m.degree() as i64 > bound || c.is_zero_coeff())
    }

    /// Cancels denominator forms that divide the numerator; a zero numerator
    /// leaves denominator one.
    pub fn normalize(&self) -> Self {
        if self.numerator.is_zero() {
            let cap = self.precision().max(0) as u32;
            return RationalFunction4 { numerator: MultiPoly::new(cap), denominator: BTreeMap::new() };
        }
        let mut num = self.numerator.clone();
        let mut den = BTreeMap::new();
        for (form, &e) in &self.denominator {
            let mut left = e;
            while left > 0 {
                match num.div_form(form) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert(*form, left);
            }
        }
        RationalFunction4 { numerator: num, denominator: den }
    }
}

impl<C: CoeffRing> RationalFunction4<C> {
    /// Product with the numerator capped at `cap`.
    pub fn mul_capped(&self, other: &Self, cap: u32) -> Self {
        let mut den = self.denominator.clone();
        for (form, &e) in &other.denominator {
            *den.entry(*form).or_insert(0) += e;
        }
        RationalFunction4 { numerator: self.numerator.mul_capped(&other.numerator, cap), denominator: den }
    }

    /// Product whose numerator keeps every degree that is determined by the
    /// factors: a factor known through degree `a` with lowest degree `l`
    /// contributes exactly through `a + l'` against a partner of lowest degree `l'`.
    pub fn mul_exact(&self, other: &Self) -> Self {
        let (a, b) = (&self.numerator, &other.numerator);
        let cap = match (a.low_degree(), b.low_degree()) {
            (Some(la), Some(lb)) => (a.max_degree() + lb).min(b.max_degree() + la),
            _ => a.max_degree() + b.max_degree(),
        };
        self.mul_capped(other, cap)
    }
}

impl RationalFunction4<QSeries> {
    pub fn truncate_q(&self, order: usize) -> Self {
        RationalFunction4 { numerator: self.numerator.truncate_q(order), denominator: self.denominator.clone() }
    }
}

impl<C: Coeff> PartialEq for RationalFunction4<C> {
    /// Equal after cross-multiplication, through the common precision.
    fn eq(&self, other: &Self) -> bool {
        let p = self.precision().min(other.precision());
        self.sub(other).is_zero_through(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::rational::{int, rat};

    fn rpoly(cap: u32, terms: &[([u32; 4], Rational)]) -> MultiPoly<Rational> {
        MultiPoly::from_terms(cap, terms.iter().map(|(e, c)| (Monomial(*e), c.clone())))
    }

    #[test]
    fn cancels_common_factor() {
        let num = rpoly(6, &[([2, 0, 0, 0], int(1)), ([0, 2, 0, 0], int(-1))]);
        let f = RationalFunction4::new(num, &[LinearForm::new(1, -1, 0, 0)]).unwrap();
        let n = f.normalize();
        assert!(n.denominator().is_empty());
        assert_eq!(n.numerator(), &rpoly(5, &[([1, 0, 0, 0], int(1)), ([0, 1, 0, 0], int(1))]));
    }

    #[test]
    fn zero_numerator_drops_denominator() {
        let f = RationalFunction4::new(MultiPoly::<Rational>::new(4), &[LinearForm::X1, LinearForm::Y1]).unwrap();
        let n = f.normalize();
        assert!(n.is_zero());
        assert!(n.denominator().is_empty());
    }

    /// F(u; v) = -1/2 (1/u + 1/v) = -(u + v) / (2 u v)
    fn polar(u: LinearForm, v: LinearForm) -> RationalFunction4<Rational> {
        let num = u.add(&v).to_poly(&rat(-1, 2), 8);
        RationalFunction4::new(num, &[u, v]).unwrap()
    }

    #[test]
    fn polar_fay_combination_vanishes() {
        let (x1, x2, y1, y2) = (LinearForm::X1, LinearForm::X2, LinearForm::Y1, LinearForm::Y2);
        let t1 = polar(x1, y1).mul_capped(&polar(x2, y2), 8);
        let t2 = polar(x1.sub(&x2), y2.neg()).mul_capped(&polar(x1, y1.add(&y2)), 8);
        let t3 = polar(x2.neg(), y1.add(&y2).neg()).mul_capped(&polar(x1.sub(&x2), y1), 8);
        let sum = t1.add(&t2).add(&t3);
        assert!(sum.normalize().is_zero());
        // the cleared denominator is X1 X2 (X1-X2) Y1 Y2 (Y1+Y2)
        assert_eq!(sum.denominator_degree(), 6);
    }

    #[test]
    fn sign_normalized_denominators() {
        let one = rpoly(3, &[([0, 0, 0, 0], int(1))]);
        let a = RationalFunction4::new(one.clone(), &[LinearForm::new(-1, 1, 0, 0)]).unwrap();
        let b = RationalFunction4::new(one.neg(), &[LinearForm::new(1, -1, 0, 0)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_denominator_rejected() {
        let one = rpoly(3, &[([0, 0, 0, 0], int(1))]);
        let f = RationalFunction4::new(one, &[LinearForm::X1]).unwrap();
        let collapse = [LinearForm::ZERO, LinearForm::X2, LinearForm::Y1, LinearForm::Y2];
        assert!(matches!(f.substitute(&collapse), Err(Error::DegenerateForm(_))));
    }
}
