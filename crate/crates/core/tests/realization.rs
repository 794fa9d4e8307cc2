use fdes::formal::{enumerate_generators, relations};
use fdes::identities::parity_expressions;
use fdes::kronecker::{realize_kronecker, KroneckerRealization};
use fdes::rational::{int, rat};
use fdes::{FormalElement, GenId, QSeries, Rational, RelationSystem, Space};
use num_traits::{One, Zero};
use proptest::prelude::*;

const ORDER: usize = 12;

fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut binom = Rational::one();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += &binom * bj;
            binom = binom * int((m + 1 - j) as i64) / int(j as i64 + 1);
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |a, i| a * int(i as i64))
}

/// `G_m` by trial division, zero for odd `m`.
fn g(m: u32, order: usize) -> QSeries {
    if m % 2 == 1 {
        return QSeries::zero(order);
    }
    let b = bernoulli(m as usize);
    let mut v = vec![-b[m as usize].clone() / (int(2) * factorial(m))];
    for n in 1..=order {
        let s: Rational = (1..=n).filter(|d| n % d == 0).map(|d| int(d as i64).pow(m as i32 - 1)).sum();
        v.push(s / factorial(m - 1));
    }
    QSeries::from_coeffs(v)
}

fn qderive(s: &QSeries, times: u32) -> QSeries {
    let v = s.coeffs().iter().enumerate().map(|(n, c)| c * int(n as i64).pow(times as i32)).collect();
    QSeries::from_coeffs(v)
}

fn depth_one(k: u32, d: u32, order: usize) -> QSeries {
    let (r, s) = (k - 1, d);
    let (lo, diff) = (r.min(s), r.abs_diff(s));
    qderive(&g(diff + 1, order), lo).scale(&(factorial(diff) / factorial(r)))
}

#[test]
fn depth_one_values_are_derived_eisenstein_series() {
    let ctx = KroneckerRealization::shared(12, ORDER).unwrap();
    for w in 1..=12 {
        for k in 1..=w {
            let d = w - k;
            let got = ctx.value(&GenId::g1(k, d)).unwrap();
            if w % 2 == 1 {
                assert!(got.is_zero(), "G({k};{d})");
            } else {
                assert_eq!(got, depth_one(k, d, ORDER), "G({k};{d})");
            }
        }
    }
}

#[test]
fn products_realize_to_products() {
    let ctx = KroneckerRealization::shared(10, ORDER).unwrap();
    for w in 2..=10 {
        for gen in enumerate_generators(Space::Eisenstein, w) {
            if let GenId::EP { k1, k2, d1, d2 } = gen {
                let want = depth_one(k1, d1, ORDER).mul(&depth_one(k2, d2, ORDER));
                let want = if (k1 + d1) % 2 == 1 { QSeries::zero(ORDER) } else { want };
                assert_eq!(ctx.value(&gen).unwrap(), want, "{gen}");
            }
        }
    }
}

#[test]
fn values_have_requested_order() {
    for gen in ["G(3;1)", "G(2,2;0,0)", "P(1,3;0,0)"] {
        let g = fdes::parse::parse_genid(gen).unwrap();
        assert_eq!(realize_kronecker(&g, 7).unwrap().order(), 7);
    }
}

#[test]
fn parity_rewrites_every_depth_two_generator() {
    for w in [3u32, 5, 7, 9] {
        let sys = RelationSystem::build(Space::Eisenstein, w).unwrap();
        let exprs = parity_expressions(w).unwrap();
        for gen in enumerate_generators(Space::Eisenstein, w) {
            if !matches!(gen, GenId::E2 { .. }) {
                continue;
            }
            let (_, e) = exprs.iter().find(|(g, _)| *g == gen).expect("covered");
            assert!(sys.is_zero(e).unwrap());
            let c = e.coeff(&gen);
            assert!(!c.is_zero());
            let rest = e.sub(&FormalElement::from_gen(gen).scale(&c)).unwrap();
            assert!(rest.terms().keys().all(|h| !matches!(h, GenId::E2 { .. })), "{gen}: {e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn realization_is_linear_and_kills_relations(
        half in 1u32..=5,
        coeffs in proptest::collection::vec((0usize..1000, -30i64..30, 1i64..7), 1..6),
    ) {
        let w = 2 * half;
        let ctx = KroneckerRealization::shared(10, ORDER).unwrap();
        let rows = relations(Space::Eisenstein, w);
        let gens = enumerate_generators(Space::Eisenstein, w);
        let mut rel = FormalElement::zero(Space::Eisenstein, w);
        let mut e = FormalElement::zero(Space::Eisenstein, w);
        let mut by_hand = QSeries::zero(ORDER);
        for &(i, n, d) in &coeffs {
            rel = rel.add_scaled(&rows[i % rows.len()], &rat(n, d)).unwrap();
            let g = gens[i % gens.len()];
            e.add_term(g, rat(n, d)).unwrap();
            by_hand = &by_hand + &ctx.value(&g).unwrap().scale(&rat(n, d));
        }
        prop_assert!(ctx.realize(&rel).unwrap().is_zero());
        prop_assert_eq!(ctx.realize(&e).unwrap(), by_hand);
    }
}
