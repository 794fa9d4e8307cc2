//! The Kronecker function, the depth-two series built from it, and the
//! realization of the formal Eisenstein space in quasimodular q-series.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::action::{act_group_ring, GroupRingElem};
use crate::coeff::{Coeff, CoeffRing};
use crate::eisenstein::{derived_eisenstein, eisenstein_qexp};
use crate::error::{Error, Result};
use crate::formal::{enumerate_generators, map_partial, FormalElement, GenId, Space};
use crate::poly::{BiSeries, DividedDifference, LinearForm, Monomial, MultiPoly};
use crate::ratfunc::RationalFunction4;
use crate::rational::{binomial_q, factorial, factorial_q, int, rat, sign_pow, Rational};
use crate::series::QSeries;

/// Regular part of the Kronecker function through total degree `D`, q-order `N`.
#[derive(Clone, Debug)]
pub struct KroneckerTable {
    b1: BiSeries<QSeries>,
    max_degree: u32,
    order: usize,
}

/// `|r-s|!/r! (q d/dq)^min(r,s) G_{|r-s|+1}` for odd `r + s`, zero otherwise.
fn b1_entry(r: u32, s: u32, order: usize) -> QSeries {
    if (r + s) % 2 == 0 {
        return QSeries::zero(order);
    }
    let diff = r.abs_diff(s);
    let c = Rational::new(factorial(diff), factorial(r));
    derived_eisenstein(diff + 1, r.min(s), order).scale(&c)
}

pub fn kronecker_b1(max_degree: u32, order: usize) -> KroneckerTable {
    let mut b1 = BiSeries::new(max_degree);
    for t in (1..=max_degree).step_by(2) {
        for r in 0..=t {
            let s = t - r;
            // the series carries Y^s / s!
            b1.add_term(r, s, b1_entry(r, s, order).scale(&(Rational::one() / factorial_q(s))));
        }
    }
    KroneckerTable { b1, max_degree, order }
}

impl KroneckerTable {
    /// The table entry at `(r, s)`, i.e. the coefficient of `X^r Y^s / s!`.
    pub fn entry(&self, r: u32, s: u32) -> QSeries {
        match self.b1.get(r, s) {
            Some(c) => c.scale(&factorial_q(s)),
            None => QSeries::zero(self.order),
        }
    }

    /// Raw coefficients of `X^r Y^s`.
    pub fn b1(&self) -> &BiSeries<QSeries> {
        &self.b1
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Numerator `N` with `F(X; Y) = N(X, Y) / (XY)`:
/// `N = XY * B`, plus `-(X + Y)/2` when the standard pole is present.
fn fay_numerator<C: Coeff>(pole: bool, regular: &BiSeries<C>, one: &C) -> MultiPoly<C> {
    let b = regular.embed(LinearForm::X1, LinearForm::Y1);
    let mut n = b.mul_form(&LinearForm::X1).mul_form(&LinearForm::Y1);
    if pole {
        let half = rat(-1, 2);
        n.add_scaled_term(Monomial::new(1, 0, 0, 0), one, &half);
        n.add_scaled_term(Monomial::new(0, 0, 1, 0), one, &half);
    }
    n
}

fn at<C: Coeff>(n: &MultiPoly<C>, u: LinearForm, v: LinearForm) -> MultiPoly<C> {
    n.substitute(&[u, LinearForm::ZERO, v, LinearForm::ZERO])
}

/// Checks the three-term Fay identity for `F = [pole] * -(1/X + 1/Y)/2 + regular`
/// after clearing the denominator `X1 X2 (X1 - X2) Y1 Y2 (Y1 + Y2)`.
///
/// With the regular part known through total degree `D`, the cleared identity is
/// checked in every degree that this data determines, i.e. through `F`-degree
/// `D - 1` with the pole and `D` without it.
pub fn fay_check_generic<C: CoeffRing>(pole: bool, regular: &BiSeries<C>, one: &C) -> bool {
    use LinearForm as L;
    let n = fay_numerator(pole, regular, one);
    let Some(low) = n.low_degree() else {
        return true;
    };
    let cap = n.max_degree() + low;
    let x12 = L::X1.sub(&L::X2);
    let y12 = L::Y1.add(&L::Y2);
    let product = |a: MultiPoly<C>, b: MultiPoly<C>, f: L, g: L| {
        a.mul_capped(&b, cap).mul_form(&f).mul_form(&g)
    };
    let t1 = product(at(&n, L::X1, L::Y1), at(&n, L::X2, L::Y2), x12, y12);
    let t2 = product(at(&n, x12, L::Y2.neg()), at(&n, L::X1, y12), L::X2, L::Y1);
    let t3 = product(at(&n, L::X2.neg(), y12.neg()), at(&n, x12, L::Y1), L::X1, L::Y2);
    t1.sub(&t2).add(&t3).is_zero()
}

/// Fay check for q-series coefficients at q-order `order` and total degree `max_degree`.
pub fn fay_check(pole: bool, regular: &BiSeries<QSeries>, max_degree: u32, order: usize) -> bool {
    let mut b = BiSeries::new(max_degree.min(regular.max_degree()));
    for (&(r, s), c) in regular.iter() {
        b.add_term(r, s, c.truncate(order));
    }
    fay_check_generic(pole, &b, &QSeries::one(order))
}

/// `F(X1; Y1) F(X2; Y2)` as a rational function.
pub fn fay_product<C: CoeffRing>(pole: bool, regular: &BiSeries<C>, one: &C) -> RationalFunction4<C> {
    let n = fay_numerator(pole, regular, one);
    let forms: &[LinearForm] = if pole { &[LinearForm::X1, LinearForm::Y1] } else { &[] };
    let f1 = RationalFunction4::new(n.clone(), forms).expect("nonzero forms").normalize();
    let f2 = f1.substitute(&[LinearForm::X2, LinearForm::ZERO, LinearForm::Y2, LinearForm::ZERO]).expect("nonzero forms");
    f1.mul_exact(&f2)
}

/// `-1/2 ((1/X2 + 1/Y2) B(X1; Y1) + (1/X1 + 1/Y1) B(X2; Y2))`.
pub fn polar_part<C: Coeff>(b1: &BiSeries<C>) -> RationalFunction4<C> {
    use LinearForm as L;
    let half = rat(-1, 2);
    let side = |b: MultiPoly<C>, x: L, y: L| {
        let num = b.mul_form(&x.add(&y)).scale(&half);
        RationalFunction4::new(num, &[x, y]).expect("nonzero forms")
    };
    side(b1.embed(L::X1, L::Y1), L::X2, L::Y2).add(&side(b1.embed(L::X2, L::Y2), L::X1, L::Y1))
}

fn gr(s: &str) -> GroupRingElem {
    GroupRingElem::from_str(s).expect("well-formed group ring element")
}

fn check_parity<C: Coeff>(b1: &BiSeries<C>) -> Result<()> {
    match b1.parity_violation() {
        Some((r, s)) => Err(Error::ParityViolation { r, s }),
        None => Ok(()),
    }
}

/// `1/4 R*|(5 - 3U + U eps) + 1/4 R'|(T^-1 (5 - 3 eps + U))`, capped one below `b1`.
pub fn beta<C: Coeff>(b1: &BiSeries<C>) -> Result<MultiPoly<C>> {
    check_parity(b1)?;
    let star = b1.divided_difference(DividedDifference::Star);
    let sh = b1.divided_difference(DividedDifference::Shuffle);
    let mut out = act_group_ring(&gr("5-3*U+U*epsilon"), &star);
    out.add_scaled(&act_group_ring(&gr("T^-1(5-3*epsilon+U)"), &sh), &Rational::one());
    Ok(out.scale(&rat(1, 4)))
}

/// `1/3 P|(1 + T^-1) - 1/3 beta` with `P = B(X1;Y1) B(X2;Y2)`, capped one below `b1`.
pub fn build_b2<C: CoeffRing>(b1: &BiSeries<C>) -> Result<MultiPoly<C>> {
    let b = beta(b1)?;
    let cap = b1.max_degree().saturating_sub(1);
    let p = b1.tensor(b1, cap);
    let mut out = act_group_ring(&gr("1+T^-1"), &p).scale(&rat(1, 3));
    out.add_scaled(&b, &rat(-1, 3));
    Ok(out)
}

/// All realization data needed through a given weight and q-order.
#[derive(Debug)]
pub struct KroneckerRealization {
    max_weight: u32,
    order: usize,
    table: KroneckerTable,
    b2: MultiPoly<QSeries>,
}

type ContextCache = Mutex<HashMap<(u32, usize), Arc<KroneckerRealization>>>;

fn contexts() -> &'static ContextCache {
    static CACHE: OnceLock<ContextCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl KroneckerRealization {
    pub fn new(max_weight: u32, order: usize) -> Result<Self> {
        let table = kronecker_b1(max_weight.saturating_sub(1), order);
        let b2 = build_b2(table.b1())?;
        Ok(KroneckerRealization { max_weight, order, table, b2 })
    }

    /// A process-wide context covering at least `max_weight` and exactly `order`.
    pub fn shared(max_weight: u32, order: usize) -> Result<Arc<Self>> {
        let mut cache = contexts().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(ctx) = cache.iter().filter(|((w, n), _)| *w >= max_weight && *n == order).map(|(_, c)| c).next() {
            return Ok(Arc::clone(ctx));
        }
        let ctx = Arc::new(Self::new(max_weight, order)?);
        cache.insert((max_weight, order), Arc::clone(&ctx));
        Ok(ctx)
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &KroneckerTable {
        &self.table
    }

    pub fn b2(&self) -> &MultiPoly<QSeries> {
        &self.b2
    }

    fn depth_one(&self, k: u32, d: u32) -> QSeries {
        self.table.entry(k - 1, d)
    }

    pub fn value(&self, g: &GenId) -> Result<QSeries> {
        if g.space() != Space::Eisenstein {
            return Err(Error::WrongSpace { expected: Space::Eisenstein, found: g.space() });
        }
        if g.weight() > self.max_weight {
            return Err(Error::InvalidArgument(format!(
                "{g} has weight {} above the prepared weight {}",
                g.weight(),
                self.max_weight
            )));
        }
        Ok(match *g {
            GenId::E1 { k, d } => self.depth_one(k, d),
            GenId::E2 { k1, k2, d1, d2 } => {
                let m = Monomial::new(k1 - 1, k2 - 1, d1, d2);
                match self.b2.get(&m) {
                    Some(c) => c.scale(&(factorial_q(d1) * factorial_q(d2))),
                    None => QSeries::zero(self.order),
                }
            }
            GenId::EP { k1, k2, d1, d2 } => self.depth_one(k1, d1).mul(&self.depth_one(k2, d2)),
            _ => unreachable!("checked space"),
        })
    }

    pub fn realize(&self, e: &FormalElement) -> Result<QSeries> {
        let mut out = QSeries::zero(self.order);
        for (g, c) in e.terms() {
            out.add_scaled(&self.value(g)?, c);
        }
        Ok(out)
    }
}

/// The Kronecker realization of one generator.
pub fn realize_kronecker(g: &GenId, order: usize) -> Result<QSeries> {
    KroneckerRealization::shared(g.weight(), order)?.value(g)
}

pub fn realize_element(e: &FormalElement, order: usize) -> Result<QSeries> {
    if e.space() != Space::Eisenstein {
        return Err(Error::WrongSpace { expected: Space::Eisenstein, found: e.space() });
    }
    KroneckerRealization::shared(e.weight(), order)?.realize(e)
}

/// Constant term of the Kronecker realization.
pub fn realize_bernoulli(g: &GenId) -> Result<Rational> {
    Ok(realize_kronecker(g, 0)?.constant_term().clone())
}

pub fn realize_bernoulli_element(e: &FormalElement) -> Result<Rational> {
    Ok(realize_element(e, 0)?.constant_term().clone())
}

/// `G'_m / m` with `G'_m = q d/dq G_m`; both `m = 1` and `m = 0` read as `G_2`.
fn gprime_over(m: u32, order: usize) -> QSeries {
    match m {
        0 | 1 => eisenstein_qexp(2, order),
        _ => derived_eisenstein(m, 1, order).scale(&Rational::new(1.into(), m.into())),
    }
}

/// The closed quasimodular formula for `G(k1,k2;0,0)`.
pub fn closed_form_depth2(k1: u32, k2: u32, order: usize) -> Result<QSeries> {
    if k1 == 0 || k2 == 0 || (k1 + k2) % 2 == 1 {
        return Err(Error::InvalidArgument(format!("closed form needs k1, k2 >= 1 with k1 + k2 even, got ({k1}, {k2})")));
    }
    let k = k1 + k2;
    let g = |w: u32| eisenstein_qexp(w, order);
    let (k1i, k2i, ki) = (k1 as i64, k2 as i64, k as i64);
    let mut out = g(k1).mul(&g(k2)).scale(&rat(1, 3));
    let mut sum = QSeries::zero(order);
    for l1 in (2..k - 1).step_by(2) {
        let l2 = k - l1;
        sum.add_scaled(&g(l1).mul(&g(l2)), &binomial_q(l2 as i64 - 1, k1i - 1));
    }
    out.add_scaled(&sum, &(sign_pow(k1i) / int(3)));
    let c = int(5) + int(3) * sign_pow(k1i) * binomial_q(ki - 1, k1i - 1) - sign_pow(k1i) * binomial_q(ki - 1, k1i);
    out.add_scaled(&g(k), &(-c / int(12)));
    if k2 == 1 {
        out.add_scaled(&gprime_over(k1 - 1, order), &rat(-5, 12));
    }
    if k1 == 1 {
        out.add_scaled(&gprime_over(k2 - 1, order), &rat(1, 4));
    }
    out.add_scaled(&gprime_over(k - 2, order), &(sign_pow(k2i) * binomial_q(ki - 2, k1i - 1) / int(12)));
    Ok(out)
}

/// Whether `q d/dq` of every weight-`K` value equals the value of its derivation image.
pub fn check_derivation_diagram(weight: u32, order: usize) -> Result<bool> {
    let ctx = KroneckerRealization::shared(weight + 2, order)?;
    for g in enumerate_generators(Space::Eisenstein, weight) {
        let lhs = ctx.value(&g)?.qderive();
        let rhs = ctx.realize(&map_partial(&FormalElement::from_gen(g))?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    SeriesExtraction,
    ClosedForm,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::SeriesExtraction => "series-extraction",
            Provenance::ClosedForm => "closed-form",
        })
    }
}

/// Realization values of one weight.
///
/// A closed-form table carries depth one, products and `G(k1,k2;0,0)` only,
/// the generators the closed formulas cover.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationTable {
    pub weight: u32,
    pub order: usize,
    pub values: BTreeMap<GenId, QSeries>,
    pub provenance: Provenance,
}

impl RealizationTable {
    pub fn build(weight: u32, order: usize, provenance: Provenance) -> Result<Self> {
        let ctx = KroneckerRealization::shared(weight, order)?;
        let mut values = BTreeMap::new();
        for g in enumerate_generators(Space::Eisenstein, weight) {
            let v = match (provenance, g) {
                (Provenance::SeriesExtraction, _) => ctx.value(&g)?,
                (Provenance::ClosedForm, GenId::E2 { k1, k2, d1: 0, d2: 0 }) if weight % 2 == 0 => {
                    closed_form_depth2(k1, k2, order)?
                }
                (Provenance::ClosedForm, GenId::E2 { .. }) => continue,
                (Provenance::ClosedForm, _) => ctx.value(&g)?,
            };
            values.insert(g, v);
        }
        Ok(RealizationTable { weight, order, values, provenance })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::wplus_check;
    use num_traits::Zero;
    use crate::formal::relations;
    use proptest::prelude::*;

    fn g(k: u32) -> QSeries {
        eisenstein_qexp(k, 12)
    }

    #[test]
    fn table_entries() {
        let t = kronecker_b1(7, 12);
        assert_eq!(t.entry(1, 0), g(2));
        assert_eq!(t.entry(2, 1), g(2).qderive().scale(&rat(1, 2)));
        assert!(t.entry(1, 1).is_zero());
        for k in 1..=8u32 {
            for d in (0..k).filter(|d| k - 1 + d <= 7) {
                let expected = derived_eisenstein(k - d, d, 12).scale(&Rational::new(factorial(k - d - 1), factorial(k - 1)));
                assert_eq!(t.entry(k - 1, d), expected, "({k},{d})");
            }
        }
    }

    #[test]
    fn fay_examples() {
        let one = int(1);
        let empty: BiSeries<Rational> = BiSeries::new(6);
        assert!(fay_check_generic(true, &empty, &one));
        let mut x = BiSeries::new(6);
        x.add_term(1, 0, int(1));
        assert!(!fay_check_generic(true, &x, &one));
        let t = kronecker_b1(8, 20);
        assert!(fay_check(true, t.b1(), 8, 20));
        // K(X;Y) + X fails
        let mut broken = t.b1().clone();
        broken.add_term(1, 0, QSeries::one(20));
        assert!(!fay_check(true, &broken, 8, 20));
    }

    #[test]
    fn kronecker_product_is_in_wplus() {
        let t = kronecker_b1(6, 6);
        let p = fay_product(true, t.b1(), &QSeries::one(6));
        assert!(wplus_check(&p, &MultiPoly::new(p.numerator().max_degree()), 3));
    }

    #[test]
    fn b2_solves_double_shuffle() {
        let t = kronecker_b1(9, 10);
        let b1 = t.b1();
        let b2 = build_b2(b1).unwrap();
        let cap = b2.max_degree();
        let p = b1.tensor(b1, cap);
        let star = b1.divided_difference(DividedDifference::Star);
        let sh = b1.divided_difference(DividedDifference::Shuffle);
        let lhs1 = act_group_ring(&gr("1+epsilon"), &b2).add(&star);
        let lhs2 = act_group_ring(&gr("T(1+epsilon)"), &b2).add(&sh);
        assert!(p.sub(&lhs1).is_zero());
        assert!(p.sub(&lhs2).is_zero());
    }

    #[test]
    fn beta_identities() {
        assert!(check_beta(kronecker_b1(7, 6).b1()));
    }

    #[test]
    fn parity_is_enforced() {
        let mut b: BiSeries<Rational> = BiSeries::new(4);
        b.add_term(1, 1, int(1));
        assert!(matches!(build_b2(&b), Err(Error::ParityViolation { r: 1, s: 1 })));
        let zero: BiSeries<Rational> = BiSeries::new(5);
        assert!(build_b2(&zero).unwrap().is_zero());
    }

    #[test]
    fn realization_examples() {
        assert_eq!(realize_kronecker(&GenId::g1(2, 0), 12).unwrap(), g(2));
        assert_eq!(realize_kronecker(&GenId::p(4, 4, 0, 0), 12).unwrap(), g(4).mul(&g(4)));
        assert!(realize_kronecker(&GenId::g1(1, 0), 12).unwrap().is_zero());
        assert_eq!(realize_bernoulli(&GenId::g1(2, 0)).unwrap(), rat(-1, 24));
        assert!(realize_bernoulli(&GenId::g1(3, 0)).unwrap().is_zero());
        assert_eq!(realize_bernoulli(&GenId::p(4, 4, 0, 0)).unwrap(), rat(1, 1440 * 1440));
        assert!(matches!(realize_kronecker(&GenId::z1(2), 4), Err(Error::WrongSpace { .. })));
        for k in (3..=9).step_by(2) {
            for d in 0..k {
                assert!(realize_kronecker(&GenId::g1(k - d, d), 8).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn closed_form_matches_extraction() {
        let ord = 10;
        let ctx = KroneckerRealization::shared(12, ord).unwrap();
        for k in (2..=12).step_by(2) {
            for k1 in 1..k {
                let via_series = ctx.value(&GenId::g2(k1, k - k1, 0, 0)).unwrap();
                assert_eq!(closed_form_depth2(k1, k - k1, ord).unwrap(), via_series, "({k1},{})", k - k1);
            }
        }
        assert_eq!(closed_form_depth2(1, 1, ord).unwrap(), eisenstein_qexp(2, ord).scale(&rat(-1, 2)));
        let g2 = eisenstein_qexp(2, ord);
        let g4 = eisenstein_qexp(4, ord);
        assert_eq!(closed_form_depth2(2, 2, ord).unwrap(), (&g2.mul(&g2) - &g4).scale(&rat(1, 2)));
        assert!(closed_form_depth2(1, 2, ord).is_err());
    }

    #[test]
    fn relations_realize_to_zero() {
        let ctx = KroneckerRealization::shared(12, 8).unwrap();
        for k in 2..=12 {
            for r in relations(Space::Eisenstein, k) {
                assert!(ctx.realize(&r).unwrap().is_zero(), "weight {k}: {r}");
            }
        }
    }

    #[test]
    fn derivation_diagram() {
        for k in 1..=6 {
            assert!(check_derivation_diagram(k, 10).unwrap(), "weight {k}");
        }
        let lhs = realize_kronecker(&GenId::g1(2, 0), 10).unwrap().qderive();
        assert_eq!(lhs, realize_kronecker(&GenId::g1(3, 1), 10).unwrap().scale(&int(2)));
    }

    #[test]
    fn tables() {
        let a = RealizationTable::build(6, 6, Provenance::SeriesExtraction).unwrap();
        let b = RealizationTable::build(6, 6, Provenance::ClosedForm).unwrap();
        assert_eq!(a.values.len(), enumerate_generators(Space::Eisenstein, 6).len());
        for (gen, v) in &b.values {
            assert_eq!(&a.values[gen], v);
            assert_eq!(v.order(), 6);
        }
    }

    fn check_beta<C: CoeffRing>(b1: &BiSeries<C>) -> bool {
        let top = b1.max_degree() as i64 - 2;
        let b = RationalFunction4::from_poly(beta(b1).unwrap());
        let pol = polar_part(b1);
        let star = RationalFunction4::from_poly(b1.divided_difference(DividedDifference::Star));
        let sh = RationalFunction4::from_poly(b1.divided_difference(DividedDifference::Shuffle));
        let first = act_group_ring(&gr("1+epsilon"), &b)
            .sub(&star.scale(&int(3)).add(&act_group_ring(&gr("1-T^-1-T^-1*epsilon"), &pol)));
        let second =
            act_group_ring(&gr("T(1+epsilon)"), &b).sub(&sh.scale(&int(3)).add(&act_group_ring(&gr("1-T-T*epsilon"), &pol)));
        first.is_zero_through(top) && second.is_zero_through(top)
    }

    proptest! {
        #[test]
        fn beta_identities_for_any_odd_series(coeffs in proptest::collection::vec(-6i64..6, 12)) {
            let mut b: BiSeries<Rational> = BiSeries::new(5);
            let odd = [(1, 0), (0, 1), (3, 0), (2, 1), (1, 2), (0, 3), (5, 0), (4, 1), (3, 2), (2, 3), (1, 4), (0, 5)];
            for ((r, s), c) in odd.into_iter().zip(coeffs) {
                b.add_term(r, s, int(c));
            }
            prop_assert!(check_beta(&b));
        }
    }
}
