//! Exact arithmetic over `K = Q(zeta_N)`, polynomials and rational functions over `K`.

pub mod basis;
pub mod cyclotomic;
pub mod linalg;
pub mod local;
mod modgcd;
pub mod poly;
pub mod rational;
pub mod ratfun;

pub use basis::coprime_basis;
pub use cyclotomic::{Field, FieldElem};
pub use local::{digit_match, local_expansion, valuation_at_class, LocalExpansion};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use rational::Rational;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// Integer extended by `+inf` and `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtInt::*;
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtInt {
    type Output = ExtInt;
    fn add(self, o: ExtInt) -> ExtInt {
        use ExtInt::*;
        match (self, o) {
            (Fin(a), Fin(b)) => Fin(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => panic!("undefined sum +inf + -inf"),
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

impl serde::Serialize for ExtInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}
