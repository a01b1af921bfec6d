//! Exact rational scalars and parity bookkeeping.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number; `BigRational` keeps it reduced with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_scalar(q: &Scalar) -> String {
    q.to_string()
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t.as_str(), "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad numerator in `{text}`")))?;
    let d = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad denominator in `{text}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Scalar::new(n, d))
}

/// Converts an integral scalar to `i64`, if it is one and fits.
pub fn to_i64(q: &Scalar) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.to_integer()).ok()
}

pub fn abs(q: &Scalar) -> Scalar {
    q.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of a product.
    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.is_odd() ^ other.is_odd())
    }

    /// Sign `(-1)^{|self||other|}`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    /// Sign entering a supertrace, `(-1)^{|self|}`.
    pub fn sign(self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Parse(format!("unknown parity `{other}`"))),
        }
    }
}
