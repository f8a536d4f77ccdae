//! Scalar abstractions.
//!
//! Transforms and norms are generic over [`Real`] (`f32` or `f64`). The
//! closed-form exponent formulas are generic over [`ExactScalar`], which is
//! implemented both for `f64` and for arbitrary-precision rationals so that
//! thresholds can be reproduced exactly.

use std::fmt::{self, Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floating point scalar used for dense spectral computations.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only on types that cannot hold it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Tolerance for "sums to one" style checks at this precision.
    fn unit_tolerance() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(1024.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Scalar used by the exponent formulas: exact rationals or plain floats.
pub trait ExactScalar:
    Clone + PartialOrd + Num + Signed + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
    /// Nearest representable value; exact for rationals.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// `true` when arithmetic on this type is exact.
    fn is_exact() -> bool;
    /// Canonical textual form: `num/den` for rationals.
    fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

impl ExactScalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
    fn to_exact_string(&self) -> String {
        format!("{:.16e}", self)
    }
}

impl ExactScalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_exact() -> bool {
        true
    }
    fn to_exact_string(&self) -> String {
        if self.denom().is_one() {
            format!("{}/1", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Parses `"a/b"`, `"a"` or a decimal literal into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(n));
    }
    // Decimal literal: scale by a power of ten so "0.125" stays exact.
    let (int, frac) = s.split_once('.').ok_or_else(err)?;
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(&digits).map_err(|_| err())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, den))
}

/// An integrability exponent in `[1, ∞]`.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T> Exponent<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Exponent::Finite(t) => Some(t),
            Exponent::Infinity => None,
        }
    }

    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Exponent<U> {
        match self {
            Exponent::Finite(t) => Exponent::Finite(f(t)),
            Exponent::Infinity => Exponent::Infinity,
        }
    }
}

impl<T: Real> Exponent<T> {
    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(t) => t.to_f64().unwrap_or(f64::NAN),
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Rejects exponents below `min`.
    pub fn require_at_least(&self, min: f64) -> Result<()> {
        match self {
            Exponent::Finite(t) if !(t.to_f64().unwrap_or(f64::NAN) >= min) => {
                Err(Error::ExponentTooSmall {
                    min,
                    got: t.to_f64().unwrap_or(f64::NAN),
                })
            }
            _ => Ok(()),
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(T::lit(x))
        }
    }
}

impl<T: Display> Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(t) => write!(f, "{t}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

fn is_infinity_token(s: &str) -> bool {
    matches!(
        s.trim().to_ascii_lowercase().as_str(),
        "inf" | "infinity" | "∞" | "+inf"
    )
}

impl FromStr for Exponent<f64> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if is_infinity_token(s) {
            return Ok(Exponent::Infinity);
        }
        let x = if s.contains('/') {
            ExactScalar::to_f64(&parse_rational(s)?)
        } else {
            s.trim().parse::<f64>().map_err(|_| Error::Parse {
                what: "exponent",
                input: s.to_string(),
            })?
        };
        Ok(Exponent::from_f64(x))
    }
}

impl FromStr for Exponent<BigRational> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if is_infinity_token(s) {
            return Ok(Exponent::Infinity);
        }
        Ok(Exponent::Finite(parse_rational(s)?))
    }
}

/// Converts an exact exponent to its floating point counterpart.
pub fn exponent_to_real<E: ExactScalar, T: Real>(e: &Exponent<E>) -> Exponent<T> {
    e.map(|v| T::lit(v.to_f64()))
}
