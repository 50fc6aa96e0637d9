use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant coefficients for cochains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
    IntegersMod(u64),
}

/// The principal ideal domain all arithmetic is carried out in.
///
/// Rational coefficients are handled over the integers and tensored with the
/// rationals at the end (torsion is discarded), which is exact because every
/// matrix in play has integer entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Integers,
    Field(u64),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientRing {
    /// Parses `Z`, `Q`, `F<p>` (p prime) and `Z/<m>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("unknown coefficient ring `{s}`"));
        match s {
            "Z" => Ok(Self::Integers),
            "Q" => Ok(Self::Rationals),
            _ => {
                if let Some(p) = s.strip_prefix('F') {
                    let p: u64 = p.parse().map_err(|_| bad())?;
                    Self::prime_field(p)
                } else if let Some(m) = s.strip_prefix("Z/") {
                    let m: u64 = m.parse().map_err(|_| bad())?;
                    if m < 2 {
                        return Err(bad());
                    }
                    Ok(Self::IntegersMod(m))
                } else {
                    Err(bad())
                }
            }
        }
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!("F{p}: modulus must be a prime below 2^32")));
        }
        Ok(Self::PrimeField(p))
    }

    pub fn domain(&self) -> Domain {
        match self {
            Self::PrimeField(p) => Domain::Field(*p),
            _ => Domain::Integers,
        }
    }

    /// Modulus of the relations imposed on free cochain groups (`Z/m` only).
    pub fn modulus(&self) -> Option<u64> {
        match self {
            Self::IntegersMod(m) => Some(*m),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Self::Rationals | Self::PrimeField(_))
    }

    pub(crate) fn drops_torsion(&self) -> bool {
        matches!(self, Self::Rationals)
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "Z"),
            Self::Rationals => write!(f, "Q"),
            Self::PrimeField(p) => write!(f, "F{p}"),
            Self::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}

impl Domain {
    #[inline]
    pub fn reduce(&self, x: BigInt) -> BigInt {
        match self {
            Domain::Integers => x,
            Domain::Field(p) => x.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn is_zero(&self, x: &BigInt) -> bool {
        match self {
            Domain::Integers => x.is_zero(),
            Domain::Field(p) => (x % BigInt::from(*p)).is_zero(),
        }
    }

    pub fn is_unit(&self, x: &BigInt) -> bool {
        match self {
            Domain::Integers => x.abs().is_one(),
            Domain::Field(_) => !self.is_zero(x),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Domain::Field(_))
    }
}
