//! The right action of `Z[GL2(Z)]` on four-variable series.
//!
//! For `g = [[a, b], [c, d]]`,
//! `R|g (X1, X2; Y1, Y2) = R(aX1 + bX2, cX1 + dX2; det(g)(dY1 - cY2), det(g)(-bY1 + aY2))`,
//! so that `(R|g)|h = R|(gh)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::coeff::Coeff;
use crate::error::{Error, ParseError, Result};
use crate::poly::{LinearForm, MultiPoly};
use crate::ratfunc::RationalFunction4;
use crate::rational::int;

/// A 2x2 integer matrix of determinant `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl IntMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = IntMatrix2 { a, b, c, d };
        match m.det() {
            1 | -1 => Ok(m),
            det => Err(Error::InvalidArgument(format!("matrix {m} has determinant {det}, not in GL2(Z)"))),
        }
    }

    const fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub const IDENTITY: IntMatrix2 = IntMatrix2::raw(1, 0, 0, 1);
    pub const SIGMA: IntMatrix2 = IntMatrix2::raw(-1, 0, 0, -1);
    pub const EPSILON: IntMatrix2 = IntMatrix2::raw(0, 1, 1, 0);
    pub const DELTA: IntMatrix2 = IntMatrix2::raw(-1, 0, 0, 1);
    pub const T: IntMatrix2 = IntMatrix2::raw(1, 1, 0, 1);
    pub const S: IntMatrix2 = IntMatrix2::raw(0, -1, 1, 0);
    pub const U: IntMatrix2 = IntMatrix2::raw(1, -1, 1, 0);
    /// `A = epsilon U epsilon`.
    pub const A: IntMatrix2 = IntMatrix2::raw(0, 1, -1, 1);

    /// Looks up `sigma`, `epsilon`, `delta`, `T`, `S`, `U`, `A` (and `1`/`I` for the identity).
    pub fn named(name: &str) -> Option<Self> {
        Some(match name {
            "1" | "I" | "id" => Self::IDENTITY,
            "sigma" => Self::SIGMA,
            "epsilon" | "eps" => Self::EPSILON,
            "delta" => Self::DELTA,
            "T" => Self::T,
            "S" => Self::S,
            "U" => Self::U,
            "A" => Self::A,
            _ => return None,
        })
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        IntMatrix2::raw(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        IntMatrix2::raw(det * self.d, -det * self.b, -det * self.c, det * self.a)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        (0..e.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc.mul(&base))
    }

    /// Images of `X1, X2, Y1, Y2` under the substitution defining `R|self`.
    pub fn images(&self) -> [LinearForm; 4] {
        let IntMatrix2 { a, b, c, d } = *self;
        let det = self.det();
        [
            LinearForm::new(a, b, 0, 0),
            LinearForm::new(c, d, 0, 0),
            LinearForm::new(0, 0, det * d, -det * c),
            LinearForm::new(0, 0, -det * b, det * a),
        ]
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// An integral combination of matrices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElem {
    terms: BTreeMap<IntMatrix2, i64>,
}

impl GroupRingElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_matrix(IntMatrix2::IDENTITY)
    }

    pub fn from_matrix(m: IntMatrix2) -> Self {
        Self::from_terms([(1, m)])
    }

    pub fn scalar(n: i64) -> Self {
        Self::from_terms([(n, IntMatrix2::IDENTITY)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, IntMatrix2)>) -> Self {
        let mut out = Self::zero();
        for (c, m) in terms {
            out.add_term(c, m);
        }
        out
    }

    fn add_term(&mut self, c: i64, m: IntMatrix2) {
        let slot = self.terms.entry(m).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &IntMatrix2)> {
        self.terms.iter().map(|(m, c)| (*c, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*c, *m);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (c * k, *m)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Product in the group ring; acting by `g * h` is acting by `g`, then by `h`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl FromStr for GroupRingElem {
    type Err = ParseError;

    /// Grammar: sums and differences of products of integers, matrix names
    /// (optionally `^n` with `n` possibly negative) and parenthesized groups.
    /// Juxtaposition multiplies, as in `T^-1(5-3*epsilon+U)`.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut p = GrParser { s, pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos < s.len() {
            return Err(ParseError::new(p.pos, "unexpected trailing input"));
        }
        Ok(e)
    }
}

struct GrParser<'a> {
    s: &'a str,
    pos: usize,
}

impl GrParser<'_> {
    fn ws(&mut self) {
        while let Some(c) = self.s[self.pos..].chars().next().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.as_bytes().get(self.pos).copied()
    }

    fn expr(&mut self) -> std::result::Result<GroupRingElem, ParseError> {
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let mut acc = self.product()?.scale(sign);
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> std::result::Result<GroupRingElem, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn integer(&mut self, allow_sign: bool) -> std::result::Result<i64, ParseError> {
        self.ws();
        let start = self.pos;
        let mut end = start;
        let bytes = self.s.as_bytes();
        if allow_sign && end < bytes.len() && bytes[end] == b'-' {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        self.s[start..end].parse().map(|n| {
            self.pos = end;
            n
        })
        .map_err(|_| ParseError::new(start, "expected an integer"))
    }

    fn exponent(&mut self) -> std::result::Result<Option<i64>, ParseError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            Ok(Some(self.integer(true)?))
        } else {
            Ok(None)
        }
    }

    fn factor(&mut self) -> std::result::Result<GroupRingElem, ParseError> {
        let start = {
            self.ws();
            self.pos
        };
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::new(self.pos, "expected ')'"));
                }
                self.pos += 1;
                match self.exponent()? {
                    None => Ok(inner),
                    Some(e) if e >= 0 => Ok(inner.pow(e as u32)),
                    Some(_) => Err(ParseError::new(start, "negative powers apply to single matrices only")),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer(false)?;
                Ok(GroupRingElem::scalar(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let len = self.s[self.pos..].bytes().take_while(u8::is_ascii_alphabetic).count();
                let name = &self.s[self.pos..self.pos + len];
                let m = IntMatrix2::named(name)
                    .ok_or_else(|| ParseError::new(start, format!("unknown matrix '{name}'")))?;
                self.pos += len;
                let e = self.exponent()?.unwrap_or(1);
                Ok(GroupRingElem::from_matrix(m.pow(e)))
            }
            _ => Err(ParseError::new(start, "expected a matrix name, integer or '('")),
        }
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Objects the group ring acts on.
pub trait Act: Sized {
    fn act(&self, m: &IntMatrix2) -> Self;
    /// `self + k * other`.
    fn add_scaled_int(&self, other: &Self, k: i64) -> Self;
    fn zero_like(&self) -> Self;
}

impl<C: Coeff> Act for MultiPoly<C> {
    fn act(&self, m: &IntMatrix2) -> Self {
        self.substitute(&m.images())
    }

    fn add_scaled_int(&self, other: &Self, k: i64) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &int(k));
        out
    }

    fn zero_like(&self) -> Self {
        MultiPoly::new(self.max_degree())
    }
}

impl<C: Coeff> Act for RationalFunction4<C> {
    /// Substitutes numerator and denominator forms, then cancels common forms.
    fn act(&self, m: &IntMatrix2) -> Self {
        self.substitute(&m.images()).expect("an invertible substitution keeps every form nonzero").normalize()
    }

    fn add_scaled_int(&self, other: &Self, k: i64) -> Self {
        self.add_scaled(other, &int(k))
    }

    fn zero_like(&self) -> Self {
        RationalFunction4::from_poly(MultiPoly::new(self.numerator().max_degree()))
    }
}

pub fn act<T: Act>(m: &IntMatrix2, p: &T) -> T {
    p.act(m)
}

/// `sum c * (p | m)`.
pub fn act_group_ring<T: Act>(g: &GroupRingElem, p: &T) -> T {
    let mut out = p.zero_like();
    for (c, m) in g.terms() {
        out = out.add_scaled_int(&p.act(m), c);
    }
    out
}

/// The three annihilators `1 + U + U^2`, `1 + S`, `1 - epsilon`.
pub fn wplus_annihilators() -> [GroupRingElem; 3] {
    let one = GroupRingElem::one();
    let u = GroupRingElem::from_matrix(IntMatrix2::U);
    [
        one.add(&u).add(&u.pow(2)),
        one.add(&GroupRingElem::from_matrix(IntMatrix2::S)),
        one.sub(&GroupRingElem::from_matrix(IntMatrix2::EPSILON)),
    ]
}

/// Whether `ppol + preg` is killed by all three annihilators through total degree `degree`,
/// after cross-multiplying to a common denominator.
pub fn wplus_check<C: Coeff>(ppol: &RationalFunction4<C>, preg: &MultiPoly<C>, degree: i64) -> bool {
    let candidate = ppol.add(&RationalFunction4::from_poly(preg.clone()));
    wplus_annihilators().iter().all(|g| act_group_ring(g, &candidate).is_zero_through(degree))
}
