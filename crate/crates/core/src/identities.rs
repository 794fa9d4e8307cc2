//! Families of identities in the formal double Eisenstein space.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::action::{act_group_ring, GroupRingElem};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::formal::{FormalElement, GenId, LinComb, RelationSystem, Space};
use crate::kronecker::KroneckerRealization;
use crate::poly::{BiSeries, DividedDifference, Monomial, MultiPoly};
use crate::rational::{binomial_q, factorial_q, format_rational, int, rat, sign_pow, Rational};
use crate::series::QSeries;

fn element(weight: u32, terms: impl IntoIterator<Item = (GenId, Rational)>) -> FormalElement {
    FormalElement::from_terms(Space::Eisenstein, weight, terms).expect("homogeneous Eisenstein terms")
}

fn combine(parts: &[(Rational, &FormalElement)]) -> FormalElement {
    let weight = parts[0].1.weight();
    let mut out = FormalElement::zero(Space::Eisenstein, weight);
    for (c, e) in parts {
        out = out.add_scaled(e, c).expect("same weight");
    }
    out
}

/// Rewrites `P(k1,k2;d1,d2)` with `(k1,d1) > (k2,d2)` as `P(k2,k1;d2,d1)`, which is
/// the same class: both have the same stuffle expansion.
pub fn fold_p_symmetry(e: &FormalElement) -> FormalElement {
    let mut out = FormalElement::zero(e.space(), e.weight());
    for (g, c) in e.terms() {
        let g = match *g {
            GenId::EP { k1, k2, d1, d2 } if (k1, d1) > (k2, d2) => GenId::p(k2, k1, d2, d1),
            other => other,
        };
        out.push(g, c.clone());
    }
    out
}

/// `sum (-1)^d2 C(d,d2) G(k1,k2;d1,d2) - G(k;d) + G(k-1;d+1)/(d+1)` over
/// `k1 + k2 = k`, `d1 + d2 = d`, `(k1, d2) != (1, 0)`.
pub fn sum_formula(k: u32, d: u32) -> Result<FormalElement> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("sum formula needs k >= 2, got {k}")));
    }
    let mut terms = Vec::new();
    for k1 in 1..k {
        for d2 in 0..=d {
            if (k1, d2) == (1, 0) {
                continue;
            }
            terms.push((GenId::g2(k1, k - k1, d - d2, d2), sign_pow(d2.into()) * binomial_q(d.into(), d2.into())));
        }
    }
    terms.push((GenId::g1(k, d), -Rational::one()));
    terms.push((GenId::g1(k - 1, d + 1), rat(1, (d + 1).into())));
    Ok(element(k + d, terms))
}

/// Formal generating series of one weight: `(G1, G2, P)` with `Y^d/d!` attached.
pub fn generating_series(weight: u32) -> (BiSeries<LinComb>, MultiPoly<LinComb>, MultiPoly<LinComb>) {
    let top = weight.saturating_sub(1);
    let mut g1 = BiSeries::new(top);
    for k in 1..=weight {
        let d = weight - k;
        g1.add_term(k - 1, d, LinComb::term(GenId::g1(k, d), Rational::one() / factorial_q(d)));
    }
    let cap = weight.saturating_sub(2);
    let mut g2 = MultiPoly::new(cap);
    let mut p = MultiPoly::new(cap);
    for k1 in 1..weight {
        for k2 in 1..=weight - k1 {
            for d1 in 0..=weight - k1 - k2 {
                let d2 = weight - k1 - k2 - d1;
                let m = Monomial::new(k1 - 1, k2 - 1, d1, d2);
                let c = Rational::one() / (factorial_q(d1) * factorial_q(d2));
                g2.add_term(m, LinComb::term(GenId::g2(k1, k2, d1, d2), c.clone()));
                p.add_term(m, LinComb::term(GenId::p(k1, k2, d1, d2), c));
            }
        }
    }
    (g1, g2, p)
}

fn gr(s: &str) -> GroupRingElem {
    s.parse().expect("well-formed group ring element")
}

/// Sign of the `R'|T^-1 eps` term in the parity lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParitySign {
    /// `-(R* - R'|T^-1 eps)`, as obtained by iterating `G2|A = G2 + K`.
    Minus,
    /// `-(R* + R'|T^-1 eps)`, which does not give relations.
    Plus,
}

/// Right-hand side of `G2|(1 - sigma) = P|(1-delta)(1+A-SA^2) - (R* -+ R'|T^-1 eps)|(1+A+A^2)`
/// in one weight.
pub fn parity_lemma_rhs(weight: u32, sign: ParitySign) -> MultiPoly<LinComb> {
    let (g1, _, p) = generating_series(weight);
    let star = g1.divided_difference(DividedDifference::Star);
    let sh = act_group_ring(&gr("T^-1*epsilon"), &g1.divided_difference(DividedDifference::Shuffle));
    let s = match sign {
        ParitySign::Minus => -Rational::one(),
        ParitySign::Plus => Rational::one(),
    };
    let mut r = star;
    r.add_scaled(&sh, &s);
    let mut out = act_group_ring(&gr("(1-delta)(1+A-S*A^2)"), &p);
    out.add_scaled(&act_group_ring(&gr("1+A+A^2"), &r), &-Rational::one());
    out
}

/// Coefficients `(k1,k2,d1,d2) -> d1! d2! [X1^(k1-1) X2^(k2-1) Y1^d1 Y2^d2] rhs`, so that the
/// lemma reads `(1 - (-1)^K) G(k1,k2;d1,d2) = coefficient`.
pub fn parity_lemma_coefficients(weight: u32, sign: ParitySign) -> BTreeMap<GenId, FormalElement> {
    let rhs = parity_lemma_rhs(weight, sign);
    let (_, g2, _) = generating_series(weight);
    let mut out = BTreeMap::new();
    for (m, c) in g2.iter() {
        let g = *c.0.keys().next().expect("one generator per monomial");
        let [_, _, d1, d2] = m.0;
        let l = rhs.get(m).cloned().unwrap_or_default().scaled(&(factorial_q(d1) * factorial_q(d2)));
        out.insert(g, element(weight, l.0));
    }
    out
}

fn parity_from(g: GenId, coefficient: &FormalElement) -> FormalElement {
    let mut e = coefficient.scale(&rat(-1, 2));
    e.push(g, Rational::one());
    e
}

/// `G(k1,k2;d1,d2) - (combination of depth-one and product generators)` for odd weight.
pub fn parity_expression(k1: u32, k2: u32, d1: u32, d2: u32) -> Result<FormalElement> {
    parity_expression_signed(k1, k2, d1, d2, ParitySign::Minus)
}

pub fn parity_expression_signed(k1: u32, k2: u32, d1: u32, d2: u32, sign: ParitySign) -> Result<FormalElement> {
    let g = GenId::g2(k1, k2, d1, d2);
    let weight = g.weight();
    if weight % 2 == 0 || weight < 3 {
        return Err(Error::InvalidArgument(format!("parity needs an odd weight >= 3, got {weight}")));
    }
    if !g.is_valid() {
        return Err(Error::InvalidArgument(format!("{g} is not a generator")));
    }
    let coeffs = parity_lemma_coefficients(weight, sign);
    Ok(parity_from(g, &coeffs[&g]))
}

/// Parity expressions for every depth-two generator of one odd weight.
pub fn parity_expressions(weight: u32) -> Result<Vec<(GenId, FormalElement)>> {
    if weight % 2 == 0 || weight < 3 {
        return Err(Error::InvalidArgument(format!("parity needs an odd weight >= 3, got {weight}")));
    }
    Ok(parity_lemma_coefficients(weight, ParitySign::Minus).into_iter().map(|(g, c)| (g, parity_from(g, &c))).collect())
}

/// Left minus right side of the relation between products and `G(k;0)`, `G(k-1;1)`.
pub fn relprodandg(k1: u32, k2: u32) -> Result<FormalElement> {
    let k = k1 + k2;
    if k1 == 0 || k2 == 0 || k < 4 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("needs k1, k2 >= 1 with k1 + k2 >= 4 even, got ({k1}, {k2})")));
    }
    let (k1i, k2i, ki) = (k1 as i64, k2 as i64, k as i64);
    let delta = |a: i64, b: i64| if a == b { Rational::one() } else { Rational::zero() };
    let mut terms = vec![(GenId::g1(k, 0), (binomial_q(ki, k2i) - sign_pow(k1i)) / int(2))];
    for j in (2..=k - 2).step_by(2) {
        let ji = j as i64;
        let c = binomial_q(ki - ji - 1, k1i - 1) + binomial_q(ki - ji - 1, k2i - 1) - delta(ji, k1i);
        terms.push((GenId::p(j, k - j, 0, 0), -c));
    }
    let c = (binomial_q(ki - 3, k1i - 1) + binomial_q(ki - 3, k2i - 1) + delta(k1i, 1) + delta(k2i, 1)) / int(2);
    terms.push((GenId::g1(k - 1, 1), -c));
    Ok(element(k, terms))
}

fn check_even(k: u32, min: u32) -> Result<()> {
    if k < min || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("needs an even k >= {min}, got {k}")));
    }
    Ok(())
}

/// `G(k-1;1) - (k+1)/2 G(k;0) + sum P(k1,k2;0,0)` over even `k1, k2 >= 2`: the `k1 = 1` case
/// of [`relprodandg`], negated and with products folded.
pub fn mfprod_i(k: u32) -> Result<FormalElement> {
    check_even(k, 4)?;
    Ok(fold_p_symmetry(&relprodandg(1, k - 1)?.scale(&-Rational::one())))
}

/// The variant with `+ sum P`, which does not hold.
pub fn mfprod_i_plus_sum(k: u32) -> Result<FormalElement> {
    check_even(k, 4)?;
    let mut terms = vec![(GenId::g1(k - 1, 1), Rational::one()), (GenId::g1(k, 0), -rat((k + 1).into(), 2))];
    for k1 in (2..=k - 2).step_by(2) {
        terms.push((GenId::p(k1, k - k1, 0, 0), -Rational::one()));
    }
    Ok(fold_p_symmetry(&element(k, terms)))
}

/// `(k-3)` times the `(k-2, 2)` case minus twice the `(k-3, 3)` case, products folded.
pub fn mfprod_ii(k: u32) -> Result<FormalElement> {
    check_even(k, 6)?;
    let a = relprodandg(k - 2, 2)?;
    let b = relprodandg(k - 3, 3)?;
    Ok(fold_p_symmetry(&combine(&[(int((k - 3).into()), &a), (int(-2), &b)])))
}

/// `(k+1)(k-1)(k-6)/12 G(k;0) - sum (k1-1)(k2-1) P(k1,k2;0,0)` over even `k1, k2 >= 4`, folded.
pub fn mfprod_ii_closed(k: u32) -> Result<FormalElement> {
    check_even(k, 6)?;
    let ki = k as i64;
    let mut terms = vec![(GenId::g1(k, 0), rat((ki + 1) * (ki - 1) * (ki - 6), 12))];
    for k1 in (4..=k.saturating_sub(4)).step_by(2) {
        let k2 = k - k1;
        terms.push((GenId::p(k1, k2, 0, 0), -int((k1 as i64 - 1) * (k2 as i64 - 1))));
    }
    Ok(fold_p_symmetry(&element(k, terms)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ramanujan {
    G2,
    G4,
    G6,
}

impl std::str::FromStr for Ramanujan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G2" => Ok(Ramanujan::G2),
            "G4" => Ok(Ramanujan::G4),
            "G6" => Ok(Ramanujan::G6),
            _ => Err(Error::InvalidArgument(format!("unknown Ramanujan equation '{s}', expected G2, G4 or G6"))),
        }
    }
}

/// Formal analogue of `q d/dq G_k` in terms of products, as an element asserting zero:
/// `2G(3;1) - 5G(4;0) + 2P(2,2)`, `4G(5;1) - 14G(6;0) + 8P(2,4)`, `6G(7;1) - 120/7 P(4,4) + 12P(2,6)`.
pub fn ramanujan(which: Ramanujan) -> FormalElement {
    match which {
        Ramanujan::G2 => mfprod_i(4).expect("valid").scale(&int(2)),
        Ramanujan::G4 => mfprod_i(6).expect("valid").scale(&int(4)),
        Ramanujan::G6 => {
            let i = mfprod_i(8).expect("valid");
            let ii = mfprod_ii(8).expect("valid");
            // cancel G(8;0): 6 * 9/2 against 21/2
            combine(&[(int(6), &i), (rat(18, 7), &ii)])
        }
    }
}

/// The realized equation, which should be the zero series.
pub fn ramanujan_realized(which: Ramanujan, order: usize) -> Result<QSeries> {
    let e = ramanujan(which);
    KroneckerRealization::shared(e.weight(), order)?.realize(&e)
}

/// `4G(5;1) - 8G(6;0) + 14P(2,4;0,0)`, the coefficient-swapped variant, which does not hold.
pub fn ramanujan_g4_swapped() -> FormalElement {
    element(6, [(GenId::g1(5, 1), int(4)), (GenId::g1(6, 0), int(-8)), (GenId::p(2, 4, 0, 0), int(14))])
}

/// A named identity instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub name: &'static str,
    pub params: Vec<u32>,
    pub element: FormalElement,
}

/// Every catalogued instance with weight at most `max_weight`.
pub fn catalog(max_weight: u32) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut push = |name, params: Vec<u32>, element: FormalElement| out.push(Identity { name, params, element });
    for k in 2..=max_weight {
        for d in 0..=max_weight - k {
            push("sum_formula", vec![k, d], sum_formula(k, d).expect("k >= 2"));
        }
    }
    for w in (3..=max_weight).step_by(2) {
        for (g, e) in parity_expressions(w).expect("odd weight") {
            let GenId::E2 { k1, k2, d1, d2 } = g else { unreachable!() };
            push("parity", vec![k1, k2, d1, d2], e);
        }
    }
    for k in (4..=max_weight).step_by(2) {
        for k1 in 1..k {
            push("relprodandg", vec![k1, k - k1], relprodandg(k1, k - k1).expect("valid"));
        }
        push("mfprod_i", vec![k], mfprod_i(k).expect("valid"));
        if k >= 6 {
            push("mfprod_ii", vec![k], mfprod_ii(k).expect("valid"));
        }
    }
    for (i, w) in [Ramanujan::G2, Ramanujan::G4, Ramanujan::G6].into_iter().enumerate() {
        let e = ramanujan(w);
        if e.weight() <= max_weight {
            push("ramanujan", vec![2 * i as u32 + 2], e);
        }
    }
    out
}

/// Verification outcome of one identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub params: Vec<u32>,
    /// `(coefficient, generator)` pairs.
    pub element: Vec<(String, String)>,
    pub reduced_to_zero: bool,
    /// The q-order through which the realization vanishes, if it does.
    pub realized_zero_to_order: Option<usize>,
}

impl IdentityReport {
    pub fn check(identity: &Identity, system: &RelationSystem, order: usize) -> Result<Self> {
        let e = &identity.element;
        let reduced_to_zero = system.is_zero(e)?;
        let realized = KroneckerRealization::shared(e.weight(), order)?.realize(e)?;
        Ok(IdentityReport {
            name: identity.name.to_string(),
            params: identity.params.clone(),
            element: e.terms().iter().map(|(g, c)| (format_rational(c), g.to_string())).collect(),
            reduced_to_zero,
            realized_zero_to_order: realized.is_zero().then_some(order),
        })
    }

    pub fn passed(&self) -> bool {
        self.reduced_to_zero && self.realized_zero_to_order.is_some()
    }
}
