//! Dual-backend scalars: exact rationals (the default) or binary floats.
//!
//! A whole polynomial, vector or measure is uniformly one backend. Exact
//! arithmetic is closed and lossless; the float backend exists for randomized
//! determinantal instance generation where whitening needs square roots.
//! Mixing backends in one operation is a contract violation: public entry
//! points return [`Error::BackendMismatch`](crate::error::Error), the scalar
//! ops themselves panic because the caller has already validated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

/// One coefficient or coordinate. Rational values are kept canonical
/// (lowest terms, positive denominator) by `num-rational`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::zero()),
            Backend::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::one()),
            Backend::Float => Scalar::Float(1.0),
        }
    }

    pub fn from_int(n: i64, backend: Backend) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Backend::Float => Scalar::Float(n as f64),
        }
    }

    /// Exact rational `n/d`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_positive(),
            Scalar::Float(f) => *f > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(f) => *f < 0.0,
        }
    }

    pub fn as_rational(&self) -> Result<&BigRational> {
        match self {
            Scalar::Rational(r) => Ok(r),
            Scalar::Float(_) => Err(Error::RationalRequired),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => rational_to_f64(r),
            Scalar::Float(f) => *f,
        }
    }

    pub fn to_float_backend(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            Scalar::Float(f) => Scalar::Float(f.abs()),
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("reciprocal of zero".into()));
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Float(f) => Scalar::Float(1.0 / f),
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut acc = Scalar::one(self.backend());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Total order within one backend. Panics on backend mix.
    pub fn cmp_same(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => {
                a.partial_cmp(b).expect("NaN in float scalar")
            }
            _ => panic!("backend mismatch in scalar comparison"),
        }
    }

    /// Parse "p", "p/q" or a decimal float literal, choosing the backend
    /// from the shape of the input.
    pub fn parse(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Scalar::Rational(BigRational::new(p, q)));
        }
        if let Ok(p) = s.parse::<BigInt>() {
            return Ok(Scalar::Rational(BigRational::from_integer(p)));
        }
        s.parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| Error::Parse(format!("unreadable scalar {s:?}")))
    }

    /// Parse with a required backend; integers and fractions convert to
    /// floats when asked to.
    pub fn parse_as(s: &str, backend: Backend) -> Result<Scalar> {
        let v = Scalar::parse(s)?;
        match (v, backend) {
            (v @ Scalar::Rational(_), Backend::Rational) => Ok(v),
            (v @ Scalar::Float(_), Backend::Float) => Ok(v),
            (v @ Scalar::Rational(_), Backend::Float) => Ok(v.to_float_backend()),
            (Scalar::Float(_), Backend::Rational) => Err(Error::Parse(
                "float literal where an exact rational is required".into(),
            )),
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a scaled quotient when the parts overflow.
        let num = r.numer().to_f64().unwrap_or(f64::MAX);
        let den = r.denom().to_f64().unwrap_or(f64::MAX);
        num / den
    })
}

pub fn rational_from_f64(f: f64) -> Result<BigRational> {
    BigRational::from_float(f).ok_or_else(|| Error::Parse(format!("non-finite float {f}")))
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => panic!("backend mismatch in scalar arithmetic"),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", rational_to_string(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => serializer.serialize_str(&rational_to_string(r)),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        match v {
            serde_json::Value::String(s) => Scalar::parse(&s).map_err(D::Error::custom),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::from_int(i, Backend::Rational))
                } else {
                    Ok(Scalar::Float(n.as_f64().ok_or_else(|| {
                        D::Error::custom("unrepresentable number")
                    })?))
                }
            }
            other => Err(D::Error::custom(format!("expected scalar, got {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        assert_eq!(&a + &b, Scalar::ratio(1, 2));
        assert_eq!(&a * &b, Scalar::ratio(1, 18));
        assert_eq!(&a - &a, Scalar::zero(Backend::Rational));
    }

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["3", "-7/2", "0"] {
            let v = Scalar::parse(s).unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!(Scalar::parse("4/2").unwrap().to_string(), "2");
        assert!(matches!(Scalar::parse("1.5").unwrap(), Scalar::Float(_)));
    }

    #[test]
    #[should_panic(expected = "backend mismatch")]
    fn mixing_backends_panics() {
        let _ = &Scalar::ratio(1, 2) + &Scalar::Float(0.5);
    }
}
