use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Which presentation a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    /// The formal double Eisenstein space.
    Eisenstein,
    /// The formal double zeta space.
    Zeta,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Eisenstein => write!(f, "Eisenstein"),
            Space::Zeta => write!(f, "Zeta"),
        }
    }
}

impl FromStr for Space {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "e" | "eisenstein" => Ok(Space::Eisenstein),
            "d" | "z" | "zeta" => Ok(Space::Zeta),
            other => Err(format!("unknown space '{other}' (expected E or D)")),
        }
    }
}

/// A generator symbol. All indices are `k >= 1`, `d >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenId {
    /// `G(k;d)`
    E1 { k: u32, d: u32 },
    /// `G(k1,k2;d1,d2)`
    E2 { k1: u32, k2: u32, d1: u32, d2: u32 },
    /// `P(k1,k2;d1,d2)`
    EP { k1: u32, k2: u32, d1: u32, d2: u32 },
    /// `Z(k)`
    Z1 { k: u32 },
    /// `Z(k1,k2)`
    Z2 { k1: u32, k2: u32 },
    /// `ZP(k1,k2)`
    ZP { k1: u32, k2: u32 },
}

impl GenId {
    pub fn g1(k: u32, d: u32) -> Self {
        GenId::E1 { k, d }
    }

    pub fn g2(k1: u32, k2: u32, d1: u32, d2: u32) -> Self {
        GenId::E2 { k1, k2, d1, d2 }
    }

    pub fn p(k1: u32, k2: u32, d1: u32, d2: u32) -> Self {
        GenId::EP { k1, k2, d1, d2 }
    }

    pub fn z1(k: u32) -> Self {
        GenId::Z1 { k }
    }

    pub fn z2(k1: u32, k2: u32) -> Self {
        GenId::Z2 { k1, k2 }
    }

    pub fn zp(k1: u32, k2: u32) -> Self {
        GenId::ZP { k1, k2 }
    }

    pub fn weight(&self) -> u32 {
        match *self {
            GenId::E1 { k, d } => k + d,
            GenId::E2 { k1, k2, d1, d2 } | GenId::EP { k1, k2, d1, d2 } => k1 + k2 + d1 + d2,
            GenId::Z1 { k } => k,
            GenId::Z2 { k1, k2 } | GenId::ZP { k1, k2 } => k1 + k2,
        }
    }

    pub fn space(&self) -> Space {
        match self {
            GenId::E1 { .. } | GenId::E2 { .. } | GenId::EP { .. } => Space::Eisenstein,
            _ => Space::Zeta,
        }
    }

    /// 1 for `G(k;d)` and `Z(k)`, 2 otherwise.
    pub fn depth(&self) -> u32 {
        match self {
            GenId::E1 { .. } | GenId::Z1 { .. } => 1,
            _ => 2,
        }
    }

    /// Checks the index ranges (`k >= 1`).
    pub fn is_valid(&self) -> bool {
        match *self {
            GenId::E1 { k, .. } | GenId::Z1 { k } => k >= 1,
            GenId::E2 { k1, k2, .. } | GenId::EP { k1, k2, .. } | GenId::Z2 { k1, k2 } | GenId::ZP { k1, k2 } => {
                k1 >= 1 && k2 >= 1
            }
        }
    }

    fn sort_key(&self) -> (Space, u32, u8, [u32; 4]) {
        let (variant, fields) = match *self {
            GenId::E1 { d, .. } => (0, [d, 0, 0, 0]),
            GenId::E2 { k1, k2, d1, d2 } => (1, [k1, d1, k2, d2]),
            GenId::EP { k1, k2, d1, d2 } => (2, [k1, d1, k2, d2]),
            GenId::Z1 { .. } => (0, [0; 4]),
            GenId::Z2 { k1, .. } => (1, [k1, 0, 0, 0]),
            GenId::ZP { k1, .. } => (2, [k1, 0, 0, 0]),
        };
        (self.space(), self.weight(), variant, fields)
    }
}

/// Basis order: space, weight, then depth one, depth two, products, with
/// `G(k;d)` by increasing `d` and depth-two symbols lexicographic in `(k1,d1,k2,d2)`.
impl Ord for GenId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for GenId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenId::E1 { k, d } => write!(f, "G({k};{d})"),
            GenId::E2 { k1, k2, d1, d2 } => write!(f, "G({k1},{k2};{d1},{d2})"),
            GenId::EP { k1, k2, d1, d2 } => write!(f, "P({k1},{k2};{d1},{d2})"),
            GenId::Z1 { k } => write!(f, "Z({k})"),
            GenId::Z2 { k1, k2 } => write!(f, "Z({k1},{k2})"),
            GenId::ZP { k1, k2 } => write!(f, "ZP({k1},{k2})"),
        }
    }
}

impl FromStr for GenId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        crate::parse::parse_genid(s)
    }
}

impl Serialize for GenId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GenId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_display() {
        assert_eq!(GenId::g2(1, 2, 3, 4).weight(), 10);
        assert_eq!(GenId::zp(2, 3).to_string(), "ZP(2,3)");
        assert_eq!(GenId::g1(4, 0).to_string(), "G(4;0)");
        assert_eq!("P(2,2;0,0)".parse::<GenId>().unwrap(), GenId::p(2, 2, 0, 0));
    }

    #[test]
    fn basis_order_within_weight() {
        let mut v = vec![GenId::p(1, 1, 0, 0), GenId::g2(1, 1, 0, 0), GenId::g1(1, 1), GenId::g1(2, 0)];
        v.sort();
        assert_eq!(v, vec![GenId::g1(2, 0), GenId::g1(1, 1), GenId::g2(1, 1, 0, 0), GenId::p(1, 1, 0, 0)]);
    }
}
