//! Exact rational scalars and the combinatorial helpers built on them.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` reduced. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn factorial_q(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_q(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial(n, k))
}

/// `(-1)^e` as a rational.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `int` or `int/posint` (optional leading sign, surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let t = text.trim();
    let bad = || ParseError::new(0, format!("invalid rational `{t}`"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = match den {
        Some(b) => {
            if b.starts_with(['-', '+']) {
                return Err(bad());
            }
            BigInt::from_str(b).map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if d.is_zero() || d.is_negative() {
        return Err(ParseError::new(0, format!("zero or negative denominator in `{t}`")));
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(10, -1), BigInt::zero());
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("8/4").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
    }
}
