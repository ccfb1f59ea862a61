//! Hyperbolicity certification and the spectral calculus it unlocks:
//! eigenvalues, trace, rank, seminorm, and cone membership with respect
//! to a direction.
//!
//! Deciding hyperbolicity exactly in general is out of scope. The
//! structural strategy recognizes the built-in families; the sampled
//! strategy Sturm-tests seeded lattice restrictions and records its
//! evidence so downstream results can cite it.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipoly::{sym_index, MultiPoly, Vector};
use crate::quad::QuadExt;
use crate::scalar::{Backend, Scalar};
use crate::unipoly::UniPoly;

/// Float queries closer than this to a boundary are refused, not guessed.
pub const FLOAT_BOUNDARY_TOL: f64 = 1e-9;

/// Default bisection tolerance for reported eigenvalues.
pub fn default_root_tol() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(10u64.pow(12)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    CoordinateProduct,
    ElementarySymmetric { n: usize, d: usize },
    SymmetricDeterminant { d: usize },
    LorentzForm,
}

#[derive(Debug, Clone, Copy)]
pub enum CertStrategy {
    Structural,
    Sampled { samples: usize, seed: u64 },
}

/// How a context came to be trusted; serialized into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum CertEvidence {
    Structural {
        family: Family,
    },
    Sampled {
        samples: usize,
        seed: u64,
        box_halfwidth: i64,
    },
    /// Product over disjoint variable blocks of certified factors.
    DirectSum {
        parts: Vec<CertEvidence>,
    },
    /// Derivative-operator image of a certified context.
    OperatorImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeMode {
    Open,
    Closed,
}

/// A certified pair `(h, e)`: `h` homogeneous, `h(e) != 0`, and every
/// restriction `t -> h(te - x)` real-rooted per the recorded evidence.
#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicContext {
    h: MultiPoly,
    e: Vector,
    h_at_e: Scalar,
    degree: u32,
    certification: CertEvidence,
}

// Loading re-validates the structural invariants; the recorded evidence
// itself is trusted as provenance, matching how reports cite it.
impl<'de> serde::Deserialize<'de> for HyperbolicContext {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(serde::Deserialize)]
        struct Repr {
            h: MultiPoly,
            e: Vector,
            certification: CertEvidence,
        }
        let repr = Repr::deserialize(deserializer)?;
        HyperbolicContext::from_parts(repr.h, repr.e, repr.certification)
            .map_err(D::Error::custom)
    }
}

/// Eigenvalues sorted descending; count equals the degree.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Scalar>,
    /// `None` for exact-bracketed rational values, `Some(tol)` for float.
    pub tolerance: Option<f64>,
}

impl Spectrum {
    pub fn lambda_max(&self) -> &Scalar {
        &self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> &Scalar {
        self.eigenvalues.last().unwrap()
    }

    pub fn sum(&self) -> Scalar {
        let backend = self.eigenvalues[0].backend();
        self.eigenvalues
            .iter()
            .fold(Scalar::zero(backend), |acc, v| &acc + v)
    }
}

impl HyperbolicContext {
    /// Certify `(h, e)` under the requested strategy.
    pub fn certify(h: MultiPoly, e: Vector, strategy: CertStrategy) -> Result<Self> {
        let evidence = match strategy {
            CertStrategy::Structural => {
                let family = match_family(&h, &e).ok_or_else(|| {
                    Error::Precondition(
                        "no structural rule matches this (polynomial, direction) pair; \
                         use the sampled strategy"
                            .into(),
                    )
                })?;
                CertEvidence::Structural { family }
            }
            CertStrategy::Sampled { samples, seed } => {
                sample_certify(&h, &e, samples, seed)?
            }
        };
        Self::from_parts(h, e, evidence)
    }

    /// Build a context whose hyperbolicity follows from how it was
    /// constructed; validates the basic invariants.
    pub(crate) fn from_parts(h: MultiPoly, e: Vector, evidence: CertEvidence) -> Result<Self> {
        if h.is_zero() || !h.is_homogeneous() {
            return Err(Error::Inhomogeneous);
        }
        if e.dim() != h.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "direction of dim {} against {} variables",
                e.dim(),
                h.nvars()
            )));
        }
        let h_at_e = h.evaluate(&e)?;
        if h_at_e.is_zero() {
            return Err(Error::VanishesAtDirection);
        }
        let degree = h.degree();
        Ok(HyperbolicContext {
            h,
            e,
            h_at_e,
            degree,
            certification: evidence,
        })
    }

    pub fn h(&self) -> &MultiPoly {
        &self.h
    }

    pub fn e(&self) -> &Vector {
        &self.e
    }

    pub fn h_at_e(&self) -> &Scalar {
        &self.h_at_e
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn nvars(&self) -> usize {
        self.h.nvars()
    }

    pub fn backend(&self) -> Backend {
        self.h.backend()
    }

    pub fn certification(&self) -> &CertEvidence {
        &self.certification
    }

    /// The characteristic restriction `t -> h(te - x)`.
    pub fn restriction(&self, x: &Vector) -> Result<UniPoly> {
        self.h.restrict_to_line(&x.neg(), &self.e)
    }

    /// Eigenvalues of `x` with multiplicity, sorted descending.
    pub fn spectrum(&self, x: &Vector) -> Result<Spectrum> {
        let f = self.restriction(x)?;
        match self.backend() {
            Backend::Rational => {
                if !f.is_real_rooted()? {
                    return Err(Error::NotRealRooted(
                        "restriction of a certified context; the certification is bad".into(),
                    ));
                }
                let tol = default_root_tol();
                let mut eigs = Vec::with_capacity(self.degree());
                for (value, mult) in f.roots_approx(&tol)? {
                    for _ in 0..mult {
                        eigs.push(Scalar::Rational(value.clone()));
                    }
                }
                eigs.reverse();
                Ok(Spectrum {
                    eigenvalues: eigs,
                    tolerance: None,
                })
            }
            Backend::Float => {
                let mut roots = f.float_roots()?;
                roots.reverse();
                Ok(Spectrum {
                    eigenvalues: roots.into_iter().map(Scalar::Float).collect(),
                    tolerance: Some(FLOAT_BOUNDARY_TOL),
                })
            }
        }
    }

    /// `tr(v) = D_v h(e) / h(e)`; linear in `v` and exact on the rational
    /// backend.
    pub fn trace(&self, v: &Vector) -> Result<Scalar> {
        let dv = self.h.directional_derivative(v)?;
        Ok(&dv.evaluate(&self.e)? / &self.h_at_e)
    }

    /// Number of nonzero eigenvalues; read off as the degree in `t` of
    /// `h(e - tv)`.
    pub fn rank(&self, v: &Vector) -> Result<usize> {
        let f = self.h.restrict_to_line(&self.e, &v.neg())?;
        Ok(f.degree_with_tolerance(FLOAT_BOUNDARY_TOL).unwrap_or(0))
    }

    /// `max(lambda_max(x), -lambda_min(x))`, within the reporting
    /// tolerance; exactly zero iff all eigenvalues vanish.
    pub fn seminorm(&self, x: &Vector) -> Result<Scalar> {
        if self.rank(x)? == 0 {
            return Ok(Scalar::zero(self.backend()));
        }
        let up = self.restriction(x)?;
        let down = self.restriction(&x.neg())?;
        match self.backend() {
            Backend::Rational => {
                let tol = Scalar::Rational(default_root_tol());
                let a = up.largest_root(&tol)?;
                let b = down.largest_root(&tol)?;
                Ok(if a.cmp_same(&b) == Ordering::Less { b } else { a })
            }
            Backend::Float => {
                let a = up.float_largest_root()?;
                let b = down.float_largest_root()?;
                Ok(Scalar::Float(a.max(b)))
            }
        }
    }

    /// `lambda_min(x) > 0` (open) or `>= 0` (closed), decided by Sturm
    /// sign counting at zero on the exact backend.
    pub fn cone_membership(&self, x: &Vector, mode: ConeMode) -> Result<bool> {
        let f = self.restriction(x)?;
        match self.backend() {
            Backend::Rational => {
                let zero = BigRational::from_integer(BigInt::from(0));
                Ok(match mode {
                    ConeMode::Open => f.count_roots_le(&zero)? == 0,
                    ConeMode::Closed => f.count_roots_lt(&zero)? == 0,
                })
            }
            Backend::Float => {
                let roots = f.float_roots()?;
                let min = roots.first().copied().unwrap_or(0.0);
                if min.abs() < FLOAT_BOUNDARY_TOL {
                    return Err(Error::BoundaryUndecided);
                }
                Ok(min > 0.0)
            }
        }
    }

    /// Exact position of `lambda_max(x)` against a quadratic-extension
    /// bound; the workhorse for certificate verification.
    pub fn max_eig_vs_quad(&self, x: &Vector, bound: &QuadExt) -> Result<Ordering> {
        self.restriction(x)?.largest_root_vs_quad(bound)
    }
}

fn scalar_ratio(h: &MultiPoly, reference: &MultiPoly) -> Option<Scalar> {
    // h == c * reference for some nonzero scalar c?
    if h.num_terms() != reference.num_terms() || h.is_zero() {
        return None;
    }
    let reference = match h.backend() {
        Backend::Rational => reference.clone(),
        Backend::Float => reference.to_float_backend(),
    };
    let (m0, c0) = h.terms().next()?;
    let r0 = reference.coeff(m0);
    if r0.is_zero() {
        return None;
    }
    let ratio = c0 / &r0;
    (reference.scale(&ratio) == *h).then_some(ratio)
}

fn positive_multiple_of(e: &Vector, pattern: &Vector) -> bool {
    // e == s * pattern with s > 0.
    let mut scale: Option<Scalar> = None;
    for (a, b) in e.coords().iter().zip(pattern.coords()) {
        if b.is_zero() {
            if !a.is_zero() {
                return false;
            }
            continue;
        }
        let s = a / b;
        match &scale {
            None => {
                if !s.is_positive() {
                    return false;
                }
                scale = Some(s);
            }
            Some(prev) => {
                if *prev != s {
                    return false;
                }
            }
        }
    }
    scale.is_some()
}

/// Structural recognition of the built-in hyperbolic families, up to a
/// nonzero scalar on the polynomial and a positive scalar on the
/// direction.
fn match_family(h: &MultiPoly, e: &Vector) -> Option<Family> {
    let n = h.nvars();
    let backend = h.backend();

    // Coordinate product: one term, all exponents 1, strictly positive e.
    if h.num_terms() == 1 {
        let (m, _) = h.terms().next().unwrap();
        if m.0.iter().all(|&x| x == 1) && e.coords().iter().all(Scalar::is_positive) {
            return Some(Family::CoordinateProduct);
        }
    }

    // Elementary symmetric e_d at the all-ones direction.
    let d = h.degree() as usize;
    if d >= 1 && d <= n {
        if let Ok(ed) = MultiPoly::elementary_symmetric(n, d) {
            if scalar_ratio(h, &ed).is_some()
                && positive_multiple_of(e, &Vector::all_ones(n, e.backend()))
            {
                return Some(Family::ElementarySymmetric { n, d });
            }
        }
    }

    // Symmetric determinant at the flattened identity.
    for dd in 1..=5usize {
        if dd * (dd + 1) / 2 == n {
            if let Ok(det) = MultiPoly::symmetric_determinant(dd) {
                let mut id = Vector::zero(n, e.backend());
                for i in 0..dd {
                    id.set_coord(sym_index(dd, i, i), Scalar::one(e.backend()));
                }
                if scalar_ratio(h, &det).is_some() && positive_multiple_of(e, &id) {
                    return Some(Family::SymmetricDeterminant { d: dd });
                }
            }
        }
    }

    // Lorentz form x1^2 - x2^2 - ... - xn^2 at (1, 0, ..., 0).
    if n >= 2 && d == 2 {
        let mut lorentz = MultiPoly::zero(n, Backend::Rational);
        for i in 0..n {
            let v = MultiPoly::var(n, i, Backend::Rational);
            let sq = v.mul(&v).ok()?;
            lorentz = if i == 0 {
                lorentz.add(&sq).ok()?
            } else {
                lorentz.sub(&sq).ok()?
            };
        }
        if scalar_ratio(h, &lorentz).is_some()
            && positive_multiple_of(e, &Vector::basis(n, 0, e.backend()))
        {
            return Some(Family::LorentzForm);
        }
    }
    let _ = backend;
    None
}

/// Sturm-test `t -> h(te - x)` on seeded integer lattice points and
/// record the evidence; a failure reports the witness.
fn sample_certify(h: &MultiPoly, e: &Vector, samples: usize, seed: u64) -> Result<CertEvidence> {
    if h.backend() != Backend::Rational {
        return Err(Error::RationalRequired);
    }
    const BOX: i64 = 9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.nvars();
    for _ in 0..samples {
        let coords: Vec<i64> = (0..n).map(|_| rng.random_range(-BOX..=BOX)).collect();
        let x = Vector::from_ints(&coords, Backend::Rational);
        let f = h.restrict_to_line(&x.neg(), e)?;
        if f.is_zero() {
            continue;
        }
        if !f.is_real_rooted()? {
            return Err(Error::NotHyperbolic(x.to_string()));
        }
    }
    Ok(CertEvidence::Sampled {
        samples,
        seed,
        box_halfwidth: BOX,
    })
}

/// Convenience constructors for the built-in families.
pub mod families {
    use super::*;

    pub fn coordinate_product(n: usize) -> Result<HyperbolicContext> {
        let mut h = MultiPoly::constant(n, Scalar::one(Backend::Rational));
        for i in 0..n {
            h = h.mul(&MultiPoly::var(n, i, Backend::Rational))?;
        }
        HyperbolicContext::certify(
            h,
            Vector::all_ones(n, Backend::Rational),
            CertStrategy::Structural,
        )
    }

    pub fn elementary_symmetric(n: usize, d: usize) -> Result<HyperbolicContext> {
        HyperbolicContext::certify(
            MultiPoly::elementary_symmetric(n, d)?,
            Vector::all_ones(n, Backend::Rational),
            CertStrategy::Structural,
        )
    }

    pub fn symmetric_determinant(d: usize) -> Result<HyperbolicContext> {
        let n = d * (d + 1) / 2;
        let mut e = Vector::zero(n, Backend::Rational);
        for i in 0..d {
            e.set_coord(sym_index(d, i, i), Scalar::one(Backend::Rational));
        }
        HyperbolicContext::certify(
            MultiPoly::symmetric_determinant(d)?,
            e,
            CertStrategy::Structural,
        )
    }

    pub fn lorentz(n: usize) -> Result<HyperbolicContext> {
        let mut h = MultiPoly::zero(n, Backend::Rational);
        for i in 0..n {
            let v = MultiPoly::var(n, i, Backend::Rational);
            let sq = v.mul(&v)?;
            h = if i == 0 { h.add(&sq)? } else { h.sub(&sq)? };
        }
        HyperbolicContext::certify(
            h,
            Vector::basis(n, 0, Backend::Rational),
            CertStrategy::Structural,
        )
    }
}
