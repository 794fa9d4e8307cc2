//! Text syntax for generators and linear combinations.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := [rational '*'] gen
//! rational := int ['/' posint]
//! gen      := 'G(' ints ';' ints ')' | 'P(' ints ';' ints ')' | 'Z(' ints ')' | 'ZP(' ints ')'
//! ```
//! Whitespace is ignored between tokens.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, ParseError, Result};
use crate::formal::{FormalElement, GenId};
use crate::rational::Rational;

/// A parsed combination together with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    pub source: String,
    pub element: FormalElement,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.err(format!("expected '{c}', found '{found}'"))),
                None => Err(self.err(format!("expected '{c}', found end of input"))),
            }
        }
    }

    fn digits(&mut self) -> std::result::Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected a digit"));
        }
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn small_int(&mut self) -> std::result::Result<u32, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| ParseError::new(start, format!("index '{d}' is too large")))
    }

    fn int_list(&mut self) -> std::result::Result<Vec<u32>, ParseError> {
        let mut out = vec![self.small_int()?];
        while self.eat(',') {
            out.push(self.small_int()?);
        }
        Ok(out)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn gen(cur: &mut Cursor<'_>) -> std::result::Result<GenId, ParseError> {
    let start = {
        cur.skip_ws();
        cur.pos
    };
    let rest = &cur.text[start..];
    let head = if rest.starts_with("ZP") {
        "ZP"
    } else if let Some(c) = rest.chars().next().filter(|c| matches!(c, 'G' | 'P' | 'Z')) {
        &rest[..c.len_utf8()]
    } else {
        return Err(cur.err("expected a generator G(..), P(..), Z(..) or ZP(..)"));
    };
    cur.pos += head.len();
    cur.expect('(')?;
    let first = cur.int_list()?;
    let second = if head == "G" || head == "P" {
        cur.expect(';')?;
        Some(cur.int_list()?)
    } else {
        None
    };
    cur.expect(')')?;
    let bad = |msg: &str| ParseError::new(start, msg.to_string());
    let g = match (head, first.as_slice(), second.as_deref()) {
        ("G", [k], Some([d])) => GenId::g1(*k, *d),
        ("G", [k1, k2], Some([d1, d2])) => GenId::g2(*k1, *k2, *d1, *d2),
        ("P", [k1, k2], Some([d1, d2])) => GenId::p(*k1, *k2, *d1, *d2),
        ("Z", [k], None) => GenId::z1(*k),
        ("Z", [k1, k2], None) => GenId::z2(*k1, *k2),
        ("ZP", [k1, k2], None) => GenId::zp(*k1, *k2),
        ("G", ..) => return Err(bad("G takes (k;d) or (k1,k2;d1,d2)")),
        ("P", ..) => return Err(bad("P takes (k1,k2;d1,d2)")),
        ("Z", ..) => return Err(bad("Z takes (k) or (k1,k2)")),
        _ => return Err(bad("ZP takes (k1,k2)")),
    };
    if !g.is_valid() {
        return Err(bad("generator indices k must be at least 1"));
    }
    Ok(g)
}

fn coefficient(cur: &mut Cursor<'_>) -> std::result::Result<Option<Rational>, ParseError> {
    if !cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        return Ok(None);
    }
    let start = cur.pos;
    let num: BigInt = cur.digits()?.parse().expect("digits");
    let den: BigInt = if cur.eat('/') {
        let d: BigInt = cur.digits()?.parse().expect("digits");
        if d.is_zero() {
            return Err(ParseError::new(start, "zero denominator"));
        }
        d
    } else {
        BigInt::one()
    };
    cur.expect('*')?;
    Ok(Some(Rational::new(num, den)))
}

/// Parses a single generator symbol such as `G(4,4;0,0)`.
pub fn parse_genid(text: &str) -> std::result::Result<GenId, ParseError> {
    let mut cur = Cursor::new(text);
    let g = gen(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.err("trailing input after generator"));
    }
    Ok(g)
}

/// Parses a linear combination; rejects mixed spaces and mixed weights.
pub fn parse_expression(text: &str) -> Result<Expression> {
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(GenId, Rational)> = Vec::new();
    let mut negative = cur.eat('-');
    loop {
        let c = coefficient(&mut cur)?.unwrap_or_else(Rational::one);
        let g = gen(&mut cur)?;
        terms.push((g, if negative { -c } else { c }));
        if cur.at_end() {
            break;
        }
        negative = if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            return Err(cur.err("expected '+' or '-'").into());
        };
    }
    let (first, _) = terms[0];
    for (g, _) in &terms[1..] {
        if g.space() != first.space() {
            return Err(Error::MixedSpace);
        }
        if g.weight() != first.weight() {
            return Err(Error::MixedWeight { first: first.weight(), second: g.weight() });
        }
    }
    let element = FormalElement::from_terms(first.space(), first.weight(), terms)?;
    Ok(Expression { source: text.to_string(), element })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::Space;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn basic_expressions() {
        let e = parse_expression("G(2;0) - G(1;1)").unwrap().element;
        assert_eq!((e.space(), e.weight(), e.len()), (Space::Eisenstein, 2, 2));
        let e = parse_expression(" 5/2 * G(4;0) - P(2,2;0,0) - G(3;1) ").unwrap().element;
        assert_eq!(e.coeff(&GenId::g1(4, 0)), rat(5, 2));
        assert_eq!(e.coeff(&GenId::g1(3, 1)), rat(-1, 1));
        assert!(matches!(parse_expression("G(2;0) + Z(2)"), Err(Error::MixedSpace)));
        assert!(matches!(parse_expression("G(2;0) + G(3;0)"), Err(Error::MixedWeight { first: 2, second: 3 })));
        let e = parse_expression("-ZP(1,2) + 3*Z(3)").unwrap().element;
        assert_eq!(e.coeff(&GenId::zp(1, 2)), rat(-1, 1));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let Err(Error::Parse(p)) = parse_expression("G(2;0) * G(1;1)") else { panic!() };
        assert_eq!(p.position, 7);
        let Err(Error::Parse(p)) = parse_expression("G(2,0)") else { panic!() };
        assert_eq!(p.position, 5);
        assert!(parse_expression("").is_err());
        assert!(parse_expression("1/0*G(1;0)").is_err());
        assert!(parse_genid("G(0;2)").is_err());
        assert!(parse_genid("Q(1)").is_err());
    }

    fn arb_gen(weight: u32) -> impl Strategy<Value = GenId> {
        let basis = crate::formal::enumerate_generators(Space::Eisenstein, weight);
        proptest::sample::select(basis)
    }

    proptest! {
        #[test]
        fn display_round_trips(
            gens in proptest::collection::vec(arb_gen(6), 1..6),
            coeffs in proptest::collection::vec((-20i64..20, 1i64..7), 6)
        ) {
            let terms = gens.iter().zip(&coeffs).map(|(g, (n, d))| (*g, rat(*n, *d)));
            let e = FormalElement::from_terms(Space::Eisenstein, 6, terms).unwrap();
            prop_assume!(!e.is_empty());
            let back = parse_expression(&e.to_string()).unwrap().element;
            prop_assert_eq!(back, e);
        }
    }
}
