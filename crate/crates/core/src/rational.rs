//! Exact rational helpers shared by every module that reports measures or
//! distances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
    BigRational::new(numer.into(), denom.into())
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(value.into())
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Always `p/q`, also for integers.
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a rational: `{text}`"));
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serialized form used in CLI output: exact string plus a float.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub approx: f64,
}

impl From<&Rational> for Exact {
    fn from(value: &Rational) -> Self {
        Exact {
            exact: format(value),
            approx: to_f64(value),
        }
    }
}

/// serde adapter for `p/q` strings.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        format(value).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}
