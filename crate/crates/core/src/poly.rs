//! Truncated series in `X1, X2, Y1, Y2` (and two-variable series in `X, Y`)
//! with coefficients in any [`Coeff`] domain.
//!
//! Storage is sparse in the variables. Every object carries a `max_degree`:
//! terms of larger total degree are never stored, and all coefficients up to
//! that degree are exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::{Coeff, CoeffRing};
use crate::rational::{binomial, Rational};
use crate::series::QSeries;

/// Exponents of `(X1, X2, Y1, Y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(x1: u32, x2: u32, y1: u32, y2: u32) -> Self {
        Monomial([x1, x2, y1, y2])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }
}

const VAR_NAMES: [&str; 4] = ["X1", "X2", "Y1", "Y2"];

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (name, &e) in VAR_NAMES.iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if any {
                write!(f, "*")?;
            }
            any = true;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if !any {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Homogeneous linear form `a X1 + b X2 + c Y1 + d Y2` with integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(pub [i64; 4]);

impl LinearForm {
    pub const ZERO: LinearForm = LinearForm([0; 4]);
    pub const X1: LinearForm = LinearForm([1, 0, 0, 0]);
    pub const X2: LinearForm = LinearForm([0, 1, 0, 0]);
    pub const Y1: LinearForm = LinearForm([0, 0, 1, 0]);
    pub const Y2: LinearForm = LinearForm([0, 0, 0, 1]);

    pub fn new(x1: i64, x2: i64, y1: i64, y2: i64) -> Self {
        LinearForm([x1, x2, y1, y2])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        LinearForm(self.0.map(|c| -c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(other.0) {
            *a += b;
        }
        LinearForm(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The form obtained by replacing each variable with the matching image.
    pub fn compose(&self, images: &[LinearForm; 4]) -> LinearForm {
        let mut out = [0i64; 4];
        for (c, img) in self.0.iter().zip(images) {
            for (o, x) in out.iter_mut().zip(img.0) {
                *o += c * x;
            }
        }
        LinearForm(out)
    }

    /// Splits off the sign so that the first nonzero coefficient is positive.
    pub fn normalized(&self) -> (i64, LinearForm) {
        match self.0.iter().find(|&&c| c != 0) {
            Some(&c) if c < 0 => (-1, self.neg()),
            _ => (1, *self),
        }
    }

    pub fn to_poly<C: Coeff>(&self, one: &C, max_degree: u32) -> MultiPoly<C> {
        let mut p = MultiPoly::new(max_degree);
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                let mut e = [0; 4];
                e[i] = 1;
                p.add_term(Monomial(e), one.scaled(&Rational::from_integer(c.into())));
            }
        }
        p
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, &c) in VAR_NAMES.iter().zip(&self.0) {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer-coefficient polynomial used while expanding substitutions.
type IntPoly = Vec<(Monomial, i128)>;

fn int_poly_mul(a: &IntPoly, b: &IntPoly, max_degree: u32) -> IntPoly {
    let mut acc: BTreeMap<Monomial, i128> = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(mb);
            if m.degree() <= max_degree {
                *acc.entry(m).or_insert(0) += ca * cb;
            }
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Expands monomials under a fixed linear substitution, memoizing variable powers.
struct Expander {
    max_degree: u32,
    powers: [Vec<IntPoly>; 4],
}

impl Expander {
    fn new(images: &[LinearForm; 4], max_degree: u32) -> Self {
        let powers = std::array::from_fn(|i| {
            let base: IntPoly = images[i]
                .0
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| {
                    let mut e = [0; 4];
                    e[j] = 1;
                    (Monomial(e), c as i128)
                })
                .collect();
            let mut pw = vec![vec![(Monomial::ONE, 1i128)]];
            for _ in 0..max_degree {
                let next = int_poly_mul(pw.last().unwrap(), &base, max_degree);
                pw.push(next);
            }
            pw
        });
        Expander { max_degree, powers }
    }

    fn expand(&self, m: &Monomial) -> IntPoly {
        let mut acc: IntPoly = vec![(Monomial::ONE, 1)];
        for i in 0..4 {
            let e = m.0[i] as usize;
            if e > 0 {
                acc = int_poly_mul(&acc, &self.powers[i][e], self.max_degree);
            }
        }
        acc
    }
}

/// Truncated series in `X1, X2, Y1, Y2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<C = QSeries> {
    terms: BTreeMap<Monomial, C>,
    max_degree: u32,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn new(max_degree: u32) -> Self {
        MultiPoly { terms: BTreeMap::new(), max_degree }
    }

    pub fn from_terms(max_degree: u32, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::new(max_degree);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Adds `c * m`; terms above `max_degree` are dropped.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        self.add_scaled_term(m, &c, &Rational::one());
    }

    /// Adds `k * c * m`.
    pub fn add_scaled_term(&mut self, m: Monomial, c: &C, k: &Rational) {
        if m.degree() > self.max_degree || k.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                slot.add_scaled(c, k);
                if slot.is_zero_coeff() {
                    self.terms.remove(&m);
                }
            }
            None => {
                let v = c.scaled(k);
                if !v.is_zero_coeff() {
                    self.terms.insert(m, v);
                }
            }
        }
    }

    pub fn get(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All stored coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero_coeff())
    }

    /// Smallest degree with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn truncated(&self, max_degree: u32) -> Self {
        let max_degree = max_degree.min(self.max_degree);
        MultiPoly {
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= max_degree).map(|(m, c)| (*m, c.clone())).collect(),
            max_degree,
        }
    }

    /// Same terms with a different cap; the caller vouches for exactness.
    pub fn with_max_degree(mut self, max_degree: u32) -> Self {
        self.terms.retain(|m, _| m.degree() <= max_degree);
        self.max_degree = max_degree;
        self
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        MultiPoly {
            terms: self.terms.iter().filter(|(m, _)| m.degree() == degree).map(|(m, c)| (*m, c.clone())).collect(),
            max_degree: self.max_degree,
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(self.max_degree, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// `self += k * other`; the cap drops to the smaller of the two.
    pub fn add_scaled(&mut self, other: &Self, k: &Rational) {
        if other.max_degree < self.max_degree {
            self.max_degree = other.max_degree;
            self.terms.retain(|m, _| m.degree() <= other.max_degree);
        }
        for (m, c) in &other.terms {
            self.add_scaled_term(*m, c, k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::new(self.max_degree);
        for (m, c) in &self.terms {
            out.add_scaled_term(*m, c, k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Replaces `X1, X2, Y1, Y2` by the four linear forms and re-truncates.
    pub fn substitute(&self, images: &[LinearForm; 4]) -> Self {
        let expander = Expander::new(images, self.max_degree);
        let mut out = Self::new(self.max_degree);
        let mut scratch: HashMap<i128, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            for (target, k) in expander.expand(m) {
                let k = scratch.entry(k).or_insert_with(|| Rational::from_integer(k.into()));
                out.add_scaled_term(target, c, k);
            }
        }
        out
    }

    /// Multiplies by a linear form; the cap rises by one, as exactness does.
    pub fn mul_form(&self, form: &LinearForm) -> Self {
        let mut out = Self::new(self.max_degree + 1);
        for (m, c) in &self.terms {
            for (i, &a) in form.0.iter().enumerate() {
                if a != 0 {
                    let mut e = m.0;
                    e[i] += 1;
                    out.add_scaled_term(Monomial(e), c, &Rational::from_integer(a.into()));
                }
            }
        }
        out
    }

    /// Exact division by a nonzero linear form, homogeneous component by component.
    /// Returns `None` if some component is not divisible. The cap drops by one.
    pub fn div_form(&self, form: &LinearForm) -> Option<Self> {
        let pivot = form.0.iter().position(|&c| c != 0)?;
        let lead = Rational::from_integer(form.0[pivot].into());
        let new_cap = self.max_degree.checked_sub(1)?;
        let mut quotient = Self::new(new_cap);
        if self.terms.keys().any(|m| m.degree() == 0) {
            return None;
        }
        // Leading-term division in the pivot variable; each step lowers the pivot exponent.
        let mut remainder = self.clone();
        remainder.max_degree = self.max_degree;
        loop {
            let Some((m, c)) = remainder
                .terms
                .iter()
                .filter(|(m, _)| m.0[pivot] > 0)
                .max_by_key(|(m, _)| (m.0[pivot], **m))
                .map(|(m, c)| (*m, c.clone()))
            else {
                break;
            };
            let mut qm = m;
            qm.0[pivot] -= 1;
            let qc = c.scaled(&(Rational::one() / &lead));
            quotient.add_term(qm, qc.clone());
            // remainder -= qc * qm * form
            for (i, &a) in form.0.iter().enumerate() {
                if a != 0 {
                    let mut e = qm.0;
                    e[i] += 1;
                    remainder.add_scaled_term(Monomial(e), &qc, &Rational::from_integer((-a).into()));
                }
            }
        }
        if remainder.is_zero() {
            Some(quotient)
        } else {
            None
        }
    }

    /// `(d/dX1 d/dY1 + d/dX2 d/dY2) p`; the cap drops by two.
    pub fn mixed_laplacian(&self) -> Self {
        let mut out = Self::new(self.max_degree.saturating_sub(2));
        for (m, c) in &self.terms {
            let [x1, x2, y1, y2] = m.0;
            if x1 > 0 && y1 > 0 {
                out.add_scaled_term(Monomial([x1 - 1, x2, y1 - 1, y2]), c, &Rational::from_integer((x1 * y1).into()));
            }
            if x2 > 0 && y2 > 0 {
                out.add_scaled_term(Monomial([x1, x2 - 1, y1, y2 - 1]), c, &Rational::from_integer((x2 * y2).into()));
            }
        }
        out
    }
}

impl<C: CoeffRing> MultiPoly<C> {
    /// Product with the symmetric cap `min(max_degree)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, self.max_degree.min(other.max_degree))
    }

    /// Product keeping terms up to `cap`; the caller vouches for exactness at that cap.
    pub fn mul_capped(&self, other: &Self, cap: u32) -> Self {
        let mut out = Self::new(cap);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > cap {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > cap {
                    continue;
                }
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }
}

impl MultiPoly<QSeries> {
    pub fn truncate_q(&self, order: usize) -> Self {
        self.map_coeffs(|c| c.truncate(order))
    }

    /// Every coefficient as a q-series of the given order.
    pub fn from_rational(p: &MultiPoly<Rational>, order: usize) -> Self {
        p.map_coeffs(|c| QSeries::constant(c.clone(), order))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

/// Which divided difference to form from a two-variable series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DividedDifference {
    /// `(T(X1; Y1+Y2) - T(X2; Y1+Y2)) / (X1 - X2)`
    Star,
    /// `(T(X1+X2; Y1) - T(X1+X2; Y2)) / (Y1 - Y2)`
    Shuffle,
}

/// Truncated series in `X, Y`; the key `(r, s)` is the exponent pair of `X^r Y^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C = QSeries> {
    terms: BTreeMap<(u32, u32), C>,
    max_degree: u32,
}

impl<C: Coeff> BiSeries<C> {
    pub fn new(max_degree: u32) -> Self {
        BiSeries { terms: BTreeMap::new(), max_degree }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn add_term(&mut self, r: u32, s: u32, c: C) {
        if r + s > self.max_degree || c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&(r, s)) {
            Some(slot) => {
                slot.add_assign_ref(&c);
                if slot.is_zero_coeff() {
                    self.terms.remove(&(r, s));
                }
            }
            None => {
                self.terms.insert((r, s), c);
            }
        }
    }

    pub fn get(&self, r: u32, s: u32) -> Option<&C> {
        self.terms.get(&(r, s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero_coeff())
    }

    /// First nonzero entry with even `r + s`, if any.
    pub fn parity_violation(&self) -> Option<(u32, u32)> {
        self.terms.iter().find(|((r, s), c)| (r + s) % 2 == 0 && !c.is_zero_coeff()).map(|(k, _)| *k)
    }

    /// `T(x_image; y_image)` as a four-variable series.
    pub fn embed(&self, x_image: LinearForm, y_image: LinearForm) -> MultiPoly<C> {
        let mut p = MultiPoly::new(self.max_degree);
        for (&(r, s), c) in &self.terms {
            let mut e = [0u32; 4];
            let mut ok = true;
            for (img, exp) in [(x_image, r), (y_image, s)] {
                if exp == 0 {
                    continue;
                }
                // only plain variables are placed directly; general forms go through substitute
                match img.0.iter().enumerate().filter(|(_, &c)| c != 0).collect::<Vec<_>>().as_slice() {
                    [(i, 1)] => e[*i] += exp,
                    _ => ok = false,
                }
            }
            if ok {
                p.add_term(Monomial(e), c.clone());
            } else {
                let base = {
                    let mut e = [0u32; 4];
                    e[0] = r;
                    e[2] = s;
                    MultiPoly::from_terms(self.max_degree, [(Monomial(e), c.clone())])
                };
                let images = [x_image, LinearForm::ZERO, y_image, LinearForm::ZERO];
                p.add_scaled(&base.substitute(&images), &Rational::one());
            }
        }
        p
    }

    /// Divided difference; exact via `(X1^a - X2^a)/(X1 - X2) = sum X1^i X2^(a-1-i)`.
    /// The result has cap `max_degree - 1`.
    pub fn divided_difference(&self, mode: DividedDifference) -> MultiPoly<C> {
        let cap = self.max_degree.saturating_sub(1);
        let mut out = MultiPoly::new(cap);
        for (&(r, s), c) in &self.terms {
            // (divided variable exponent, binomially expanded exponent)
            let (a, b) = match mode {
                DividedDifference::Star => (r, s),
                DividedDifference::Shuffle => (s, r),
            };
            if a == 0 {
                continue;
            }
            for i in 0..a {
                let j = a - 1 - i;
                for t in 0..=b {
                    let k = Rational::from_integer(binomial(b as i64, t as i64));
                    let m = match mode {
                        DividedDifference::Star => Monomial([i, j, t, b - t]),
                        DividedDifference::Shuffle => Monomial([t, b - t, i, j]),
                    };
                    out.add_scaled_term(m, c, &k);
                }
            }
        }
        out
    }

    /// `d/dX d/dY`.
    pub fn mixed_derivative(&self) -> Self {
        let mut out = Self::new(self.max_degree.saturating_sub(2));
        for (&(r, s), c) in &self.terms {
            if r > 0 && s > 0 {
                out.add_term(r - 1, s - 1, c.scaled(&Rational::from_integer((r * s).into())));
            }
        }
        out
    }
}

impl<C: CoeffRing> BiSeries<C> {
    /// `self(X1; Y1) * other(X2; Y2)`, capped at `cap`.
    pub fn tensor(&self, other: &Self, cap: u32) -> MultiPoly<C> {
        let mut p = MultiPoly::new(cap);
        for (&(r1, s1), c1) in &self.terms {
            for (&(r2, s2), c2) in &other.terms {
                if r1 + s1 + r2 + s2 <= cap {
                    p.add_term(Monomial([r1, r2, s1, s2]), c1.mul(c2));
                }
            }
        }
        p
    }
}

impl BiSeries<QSeries> {
    pub fn truncate_q(&self, order: usize) -> Self {
        BiSeries { terms: self.terms.iter().map(|(k, c)| (*k, c.truncate(order))).collect(), max_degree: self.max_degree }
    }
}
