//! Exact arithmetic in a real quadratic extension `a + b*sqrt(r)`.
//!
//! Root bounds of the form `(c + sqrt(R))^2` live here so that comparisons
//! against Sturm root brackets are decided symbolically, never by decimal
//! rounding. Zero-margin boundary cases must not flap.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, rational_to_string};

/// `a + b*sqrt(r)` with `r >= 0`. Construction folds perfect-square
/// radicands into the rational part, so a stored `r > 0` is irrational
/// and representations are canonical up to square factors of `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    r: BigRational,
}

fn rational_sqrt_exact(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(
            BigInt::from(sn),
            BigInt::from(sd),
        ))
    } else {
        None
    }
}

/// `(lo, hi)` rational bounds with `lo <= sqrt(x) <= hi` and
/// `hi - lo <= 2^-bits * max(1, sqrt(x))`.
pub fn sqrt_bounds(x: &BigRational, bits: u32) -> Result<(BigRational, BigRational)> {
    if x.is_negative() {
        return Err(Error::NegativeRadicand(x.to_string()));
    }
    if x.is_zero() {
        return Ok((BigRational::zero(), BigRational::zero()));
    }
    // sqrt(p/q) = sqrt(p*q)/q; scale by 4^bits for the requested precision.
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    let scale = BigUint::one() << (2 * bits);
    let s = (p * q * scale).sqrt();
    let den = BigInt::from(q.clone()) << bits;
    let lo = BigRational::new(BigInt::from(s.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(s + BigUint::one()), den);
    Ok((lo, hi))
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeRadicand(r.to_string()));
        }
        if b.is_zero() || r.is_zero() {
            return Ok(QuadExt {
                a,
                b: BigRational::zero(),
                r: BigRational::zero(),
            });
        }
        if let Some(s) = rational_sqrt_exact(&r) {
            return Ok(QuadExt {
                a: a + b * s,
                b: BigRational::zero(),
                r: BigRational::zero(),
            });
        }
        Ok(QuadExt { a, b, r })
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: BigRational::zero(),
            r: BigRational::zero(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn radicand(&self) -> &BigRational {
        &self.r
    }

    /// Same-field addition; radicands must agree (or one side be rational).
    pub fn add(&self, other: &QuadExt) -> QuadExt {
        let r = self.join_radicand(other);
        QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            r,
        }
    }

    pub fn mul(&self, other: &QuadExt) -> QuadExt {
        let r = self.join_radicand(other);
        QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * &r,
            b: &self.a * &other.b + &self.b * &other.a,
            r,
        }
    }

    fn join_radicand(&self, other: &QuadExt) -> BigRational {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.r.clone(),
            (false, true) => self.r.clone(),
            (false, false) => {
                assert_eq!(self.r, other.r, "mixed radicands in quadratic arithmetic");
                self.r.clone()
            }
        }
    }

    pub fn scale(&self, s: &BigRational) -> QuadExt {
        QuadExt {
            a: &self.a * s,
            b: &self.b * s,
            r: self.r.clone(),
        }
    }

    pub fn add_rational(&self, s: &BigRational) -> QuadExt {
        QuadExt {
            a: &self.a + s,
            b: self.b.clone(),
            r: self.r.clone(),
        }
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            r: self.r.clone(),
        }
    }

    /// Exact sign. Decidable because a canonical nonzero `b` has an
    /// irrational `sqrt(r)`.
    pub fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.cmp(&BigRational::zero());
        }
        let a_sign = self.a.cmp(&BigRational::zero());
        let b_sign = self.b.cmp(&BigRational::zero());
        match (a_sign, b_sign) {
            (Ordering::Equal, s) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => {
                // a > 0 > b*sqrt(r): sign of a^2 - b^2 r.
                (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.r))
            }
            (Ordering::Less, Ordering::Greater) => {
                (&self.b * &self.b * &self.r).cmp(&(&self.a * &self.a))
            }
            _ => unreachable!(),
        }
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        self.add_rational(&-q).sign()
    }

    /// Exact comparison, radicands may differ.
    pub fn cmp_exact(&self, other: &QuadExt) -> Ordering {
        if self.eq_exact(other) {
            return Ordering::Equal;
        }
        // Unequal: interval refinement must separate the two values.
        let mut bits = 32;
        loop {
            let (lo1, hi1) = self.to_interval(bits).expect("nonnegative radicand");
            let (lo2, hi2) = other.to_interval(bits).expect("nonnegative radicand");
            if hi1 < lo2 {
                return Ordering::Less;
            }
            if hi2 < lo1 {
                return Ordering::Greater;
            }
            bits *= 2;
            assert!(bits <= 1 << 16, "quadratic comparison failed to separate");
        }
    }

    /// Equality across possibly different radicands.
    pub fn eq_exact(&self, other: &QuadExt) -> bool {
        let c = &other.a - &self.a;
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => c.is_zero(),
            (true, false) | (false, true) => false,
            (false, false) => {
                // b1*sqrt(r1) = c + b2*sqrt(r2) forces c = 0 because the
                // radicands are canonical (irrational square roots).
                if !c.is_zero() {
                    return false;
                }
                self.b.is_positive() == other.b.is_positive()
                    && &self.b * &self.b * &self.r == &other.b * &other.b * &other.r
            }
        }
    }

    pub fn to_interval(&self, bits: u32) -> Result<(BigRational, BigRational)> {
        if self.b.is_zero() {
            return Ok((self.a.clone(), self.a.clone()));
        }
        let (slo, shi) = sqrt_bounds(&self.r, bits)?;
        let (t1, t2) = (&self.b * &slo, &self.b * &shi);
        let (blo, bhi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        Ok((&self.a + blo, &self.a + bhi))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * rational_to_f64(&self.r).sqrt()
    }

    /// Deterministic text form, e.g. `"11/8 + 3/8*sqrt(13)"`.
    pub fn to_text(&self) -> String {
        if self.b.is_zero() {
            return rational_to_string(&self.a);
        }
        format!(
            "{} + {}*sqrt({})",
            rational_to_string(&self.a),
            rational_to_string(&self.b),
            rational_to_string(&self.r)
        )
    }
}

impl QuadExt {
    /// Inverse of [`QuadExt::to_text`].
    pub fn parse_text(s: &str) -> Result<QuadExt> {
        let parse_rat = |t: &str| -> Result<BigRational> {
            match crate::scalar::Scalar::parse(t.trim())? {
                crate::scalar::Scalar::Rational(r) => Ok(r),
                _ => Err(Error::Parse(format!("expected rational, got {t:?}"))),
            }
        };
        match s.split_once(" + ") {
            None => Ok(QuadExt::from_rational(parse_rat(s)?)),
            Some((a, rest)) => {
                let rest = rest.trim();
                let (b, r) = rest
                    .strip_suffix(')')
                    .and_then(|r| r.split_once("*sqrt("))
                    .ok_or_else(|| Error::Parse(format!("unreadable quadratic {s:?}")))?;
                QuadExt::new(parse_rat(a)?, parse_rat(b)?, parse_rat(r)?)
            }
        }
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("QuadExt", 2)?;
        st.serialize_field("exact", &self.to_text())?;
        st.serialize_field("decimal", &self.to_f64())?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for QuadExt {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(serde::Deserialize)]
        struct Repr {
            exact: String,
        }
        let repr = Repr::deserialize(deserializer)?;
        QuadExt::parse_text(&repr.exact).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn perfect_squares_fold_to_rationals() {
        let v = QuadExt::new(q(1, 2), q(3, 2), q(9, 4)).unwrap();
        assert_eq!(v.as_rational(), Some(&q(11, 4)));
    }

    #[test]
    fn sign_cases() {
        // 1 - sqrt(2) < 0 < 2 - sqrt(2)
        let m = QuadExt::new(q(1, 1), q(-1, 1), q(2, 1)).unwrap();
        assert_eq!(m.sign(), Ordering::Less);
        let p = QuadExt::new(q(2, 1), q(-1, 1), q(2, 1)).unwrap();
        assert_eq!(p.sign(), Ordering::Greater);
        // -2 + sqrt(3) < 0
        let n = QuadExt::new(q(-2, 1), q(1, 1), q(3, 1)).unwrap();
        assert_eq!(n.sign(), Ordering::Less);
    }

    #[test]
    fn cross_radicand_compare() {
        // sqrt(2) < sqrt(3), and 2*sqrt(2) = sqrt(8).
        let s2 = QuadExt::new(q(0, 1), q(1, 1), q(2, 1)).unwrap();
        let s3 = QuadExt::new(q(0, 1), q(1, 1), q(3, 1)).unwrap();
        assert_eq!(s2.cmp_exact(&s3), Ordering::Less);
        let s8 = QuadExt::new(q(0, 1), q(1, 1), q(8, 1)).unwrap();
        let two_s2 = QuadExt::new(q(0, 1), q(2, 1), q(2, 1)).unwrap();
        assert!(s8.eq_exact(&two_s2));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let (lo, hi) = sqrt_bounds(&q(2, 1), 40).unwrap();
        assert!(&lo * &lo <= q(2, 1));
        assert!(&hi * &hi >= q(2, 1));
        assert!(&hi - &lo <= q(1, 1 << 30));
    }
}
