use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Serialize, Serializer};

/// `Z ⊔ {-inf}`, the value domain of `eps_i` and `phi_i`.
///
/// `NegInf` is absorbing under addition and compares below every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
}

pub use ExtInt::{Fin, NegInf};

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Fin(n) => Some(n),
            NegInf => None,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) => Ordering::Equal,
            (NegInf, Fin(_)) => Ordering::Less,
            (Fin(_), NegInf) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl Add<i64> for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: i64) -> ExtInt {
        match self {
            Fin(a) => Fin(a + rhs),
            NegInf => NegInf,
        }
    }
}

impl Sub<i64> for ExtInt {
    type Output = ExtInt;
    fn sub(self, rhs: i64) -> ExtInt {
        self + (-rhs)
    }
}

impl From<i64> for ExtInt {
    fn from(n: i64) -> Self {
        Fin(n)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(n) => s.serialize_i64(*n),
            NegInf => s.serialize_str("-inf"),
        }
    }
}
