//! Exact univariate real-root machinery: Sturm sequences, root isolation
//! and counting, largest-root brackets, interleaving, convex-mixture
//! probing, and Jacobi polynomials by exact recurrence.
//!
//! Real-rootedness is decided exactly on the rational backend via Sturm
//! counts on the square-free part. Float-backend polynomials go through a
//! documented-tolerance root finder and are excluded from exact identities.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quad::QuadExt;
use crate::scalar::{Backend, Scalar};

/// Coefficients ascending by degree; the zero polynomial stores no
/// coefficients and the leading coefficient is always nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    backend: Backend,
    coeffs: Vec<Scalar>,
}

/// Isolating interval `(lo, hi]` for one distinct root, together with its
/// multiplicity in the original polynomial.
#[derive(Debug, Clone)]
pub struct RootBracket {
    pub lo: BigRational,
    pub hi: BigRational,
    pub multiplicity: usize,
}

impl Serialize for RootBracket {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RootBracket", 3)?;
        st.serialize_field("lo", &crate::scalar::rational_to_string(&self.lo))?;
        st.serialize_field("hi", &crate::scalar::rational_to_string(&self.hi))?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

/// Outcome of sampling convex combinations for real-rootedness.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MixtureVerdict {
    NoCounterexample { trials: usize },
    Counterexample { weights: Vec<Scalar>, mixture: UniPoly },
}

impl UniPoly {
    pub fn from_coeffs(backend: Backend, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map(Scalar::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { backend, coeffs }
    }

    pub fn zero(backend: Backend) -> Self {
        UniPoly {
            backend,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        let backend = c.backend();
        Self::from_coeffs(backend, vec![c])
    }

    pub fn from_roots(backend: Backend, roots: &[Scalar]) -> Self {
        let mut p = Self::from_coeffs(backend, vec![Scalar::one(backend)]);
        for r in roots {
            let factor = Self::from_coeffs(backend, vec![-r, Scalar::one(backend)]);
            p = p.mul(&factor);
        }
        p
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.backend))
    }

    pub fn coeffs_vec(&self) -> Vec<Scalar> {
        self.coeffs.clone()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.backend);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        assert_eq!(self.backend, other.backend, "backend mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        Self::from_coeffs(self.backend, out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        if s.is_zero() {
            return Self::zero(self.backend);
        }
        UniPoly {
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        assert_eq!(self.backend, other.backend, "backend mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.backend);
        }
        let mut out = vec![Scalar::zero(self.backend); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(self.backend, out)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.backend);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Scalar::from_int(i as i64, self.backend))
            .collect();
        Self::from_coeffs(self.backend, out)
    }

    /// `p(a*t + b)` by Horner composition.
    pub fn compose_linear(&self, a: &Scalar, b: &Scalar) -> UniPoly {
        let lin = Self::from_coeffs(self.backend, vec![b.clone(), a.clone()]);
        let mut acc = Self::zero(self.backend);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn to_float_backend(&self) -> UniPoly {
        UniPoly::from_coeffs(
            Backend::Float,
            self.coeffs.iter().map(Scalar::to_float_backend).collect(),
        )
    }

    fn rational_coeffs(&self) -> Result<Vec<BigRational>> {
        if self.backend != Backend::Rational {
            return Err(Error::RationalRequired);
        }
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect()
    }

    /// Exact number of real roots in `(lo, hi]`, counted with multiplicity.
    pub fn real_root_count(&self, lo: &Scalar, hi: &Scalar) -> Result<usize> {
        let f = self.nonzero_rational()?;
        let lo = lo.as_rational()?;
        let hi = hi.as_rational()?;
        if lo >= hi {
            return Err(Error::Precondition("need lo < hi".into()));
        }
        let mut total = 0;
        for (factor, mult) in yun_squarefree(&f) {
            let chain = sturm_chain(&factor);
            total += mult * count_interval(&chain, Bound::At(lo), Bound::At(hi));
        }
        Ok(total)
    }

    /// Exact number of real roots over the whole line, with multiplicity.
    pub fn real_root_count_all(&self) -> Result<usize> {
        let f = self.nonzero_rational()?;
        let mut total = 0;
        for (factor, mult) in yun_squarefree(&f) {
            let chain = sturm_chain(&factor);
            total += mult * count_interval(&chain, Bound::NegInf, Bound::PosInf);
        }
        Ok(total)
    }

    /// Passing the whole line through the Sturm count decides
    /// real-rootedness exactly.
    pub fn is_real_rooted(&self) -> Result<bool> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Ok(true);
        }
        Ok(self.real_root_count_all()? == deg)
    }

    fn nonzero_rational(&self) -> Result<Vec<BigRational>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        self.rational_coeffs()
    }

    /// Isolating brackets for every distinct real root, ascending, each
    /// tagged with its multiplicity.
    pub fn isolate_roots(&self) -> Result<Vec<RootBracket>> {
        let f = self.nonzero_rational()?;
        Ok(isolated_with_factors(&f)?
            .into_iter()
            .map(|r| RootBracket {
                lo: r.lo,
                hi: r.hi,
                multiplicity: r.mult,
            })
            .collect())
    }

    /// All distinct roots refined to brackets of width below `2*tol`,
    /// returned as `(midpoint, multiplicity)` ascending.
    pub fn roots_approx(&self, tol: &BigRational) -> Result<Vec<(BigRational, usize)>> {
        if !tol.is_positive() {
            return Err(Error::Precondition("tolerance must be positive".into()));
        }
        let f = self.nonzero_rational()?;
        let width = tol + tol;
        let two = BigRational::from_integer(BigInt::from(2));
        let mut out = Vec::new();
        for mut r in isolated_with_factors(&f)? {
            while &r.hi - &r.lo >= width {
                let (lo, hi) = refine_once(&r.chain, &r.lo, &r.hi);
                r.lo = lo;
                r.hi = hi;
            }
            out.push(((&r.lo + &r.hi) / &two, r.mult));
        }
        Ok(out)
    }

    /// Distinct real roots in `(-inf, x]`.
    pub fn count_roots_le(&self, x: &BigRational) -> Result<usize> {
        let f = self.nonzero_rational()?;
        if poly_degree(&f) == 0 {
            return Ok(0);
        }
        let chain = sturm_chain(&squarefree_part(&f));
        Ok(count_interval(&chain, Bound::NegInf, Bound::At(x)))
    }

    /// Distinct real roots in `(-inf, x)`.
    pub fn count_roots_lt(&self, x: &BigRational) -> Result<usize> {
        let le = self.count_roots_le(x)?;
        let f = self.nonzero_rational()?;
        let at = if poly_eval(&f, x).is_zero() { 1 } else { 0 };
        Ok(le - at)
    }

    /// Degree after discarding float coefficients below `rel_eps` times
    /// the largest magnitude; exact degree on the rational backend.
    pub fn degree_with_tolerance(&self, rel_eps: f64) -> Option<usize> {
        match self.backend {
            Backend::Rational => self.degree(),
            Backend::Float => {
                let max = self
                    .coeffs
                    .iter()
                    .map(|c| c.to_f64().abs())
                    .fold(0.0f64, f64::max);
                let cutoff = max * rel_eps;
                self.coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.to_f64().abs() > cutoff)
                    .map(|(i, _)| i)
                    .max()
            }
        }
    }

    /// Bracket `(lo, hi]` of width below `width` holding the largest real
    /// root; deterministic bisection.
    pub fn largest_root_bracket(&self, width: &BigRational) -> Result<(BigRational, BigRational)> {
        let f = self.nonzero_rational()?;
        if poly_degree(&f) == 0 {
            return Err(Error::Precondition(
                "constant polynomial has no largest root".into(),
            ));
        }
        let sf = squarefree_part(&f);
        let chain = sturm_chain(&sf);
        let bound = cauchy_bound(&sf);
        let mut lo = -&bound;
        let mut hi = bound.clone();
        if count_interval(&chain, Bound::At(&lo), Bound::At(&hi)) == 0 {
            return Err(Error::NotRealRooted("no real roots".into()));
        }
        while &hi - &lo >= *width {
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if count_interval(&chain, Bound::At(&mid), Bound::At(&bound)) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo, hi))
    }

    /// Value within `tol` of the maximum real root.
    pub fn largest_root(&self, tol: &Scalar) -> Result<Scalar> {
        match self.backend {
            Backend::Rational => {
                let tol = tol.as_rational()?;
                if !tol.is_positive() {
                    return Err(Error::Precondition("tolerance must be positive".into()));
                }
                let (lo, hi) = self.largest_root_bracket(&(tol + tol))?;
                let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                Ok(Scalar::Rational(mid))
            }
            Backend::Float => Ok(Scalar::Float(self.float_largest_root()?)),
        }
    }

    /// Distinct roots strictly greater than an exact quadratic value.
    pub fn count_roots_above_quad(&self, q: &QuadExt) -> Result<usize> {
        let f = self.nonzero_rational()?;
        if poly_degree(&f) == 0 {
            return Ok(0);
        }
        let sf = squarefree_part(&f);
        let chain = sturm_chain(&sf);
        let v_at = variations(chain.iter().map(|p| eval_quad(p, q).sign()));
        let v_inf = variations(chain.iter().map(|p| sign_at_pos_inf(p)));
        Ok(v_at - v_inf)
    }

    /// Exact position of the largest root relative to `q`:
    /// `Less`/`Equal`/`Greater` stand for root < q, root = q, root > q.
    pub fn largest_root_vs_quad(&self, q: &QuadExt) -> Result<Ordering> {
        if self.count_roots_above_quad(q)? > 0 {
            return Ok(Ordering::Greater);
        }
        let f = self.nonzero_rational()?;
        let sf = squarefree_part(&f);
        if eval_quad(&sf, q).sign() == Ordering::Equal {
            Ok(Ordering::Equal)
        } else {
            Ok(Ordering::Less)
        }
    }

    pub fn eval_quad(&self, q: &QuadExt) -> Result<QuadExt> {
        Ok(eval_quad(&self.rational_coeffs()?, q))
    }

    /// Exact comparison of the largest roots of two polynomials.
    pub fn compare_largest_roots(&self, other: &UniPoly) -> Result<Ordering> {
        let fa = squarefree_part(&self.nonzero_rational()?);
        let fb = squarefree_part(&other.nonzero_rational()?);
        let ca = sturm_chain(&fa);
        let cb = sturm_chain(&fb);
        let start = BigRational::new(BigInt::one(), BigInt::from(1024));
        let (mut a_lo, mut a_hi) = self.largest_root_bracket(&start)?;
        let (mut b_lo, mut b_hi) = other.largest_root_bracket(&start)?;
        for round in 0.. {
            if a_hi <= b_lo {
                return Ok(Ordering::Less);
            }
            if b_hi <= a_lo {
                return Ok(Ordering::Greater);
            }
            // Overlap: check for a shared root once the brackets isolate.
            let i_lo = a_lo.clone().max(b_lo.clone());
            let i_hi = a_hi.clone().min(b_hi.clone());
            let na = count_interval(&ca, Bound::At(&i_lo), Bound::At(&i_hi));
            let nb = count_interval(&cb, Bound::At(&i_lo), Bound::At(&i_hi));
            if na == 1 && nb == 1 {
                let g = poly_gcd(&fa, &fb);
                if poly_degree(&g) > 0 {
                    let cg = sturm_chain(&g);
                    if count_interval(&cg, Bound::At(&i_lo), Bound::At(&i_hi)) >= 1 {
                        return Ok(Ordering::Equal);
                    }
                }
            }
            let (nlo, nhi) = refine_once(&ca, &a_lo, &a_hi);
            a_lo = nlo;
            a_hi = nhi;
            let (nlo, nhi) = refine_once(&cb, &b_lo, &b_hi);
            b_lo = nlo;
            b_hi = nhi;
            if round > 512 {
                return Err(Error::Precondition(
                    "largest-root comparison failed to separate".into(),
                ));
            }
        }
        unreachable!()
    }

    /// Interlacing check: with `deg f = deg g - 1` and zeros
    /// `a_1 <= ... <= a_{n-1}` of `f`, `b_1 <= ... <= b_n` of `g`, decides
    /// `b_1 <= a_1 <= b_2 <= ... <= a_{n-1} <= b_n` exactly.
    pub fn interleaves(&self, g: &UniPoly) -> Result<bool> {
        let df = self.degree().ok_or(Error::ZeroPolynomial)?;
        let dg = g.degree().ok_or(Error::ZeroPolynomial)?;
        if df + 1 != dg {
            return Err(Error::DegreeMismatch(format!(
                "interleaver must have degree {} against {}",
                dg.saturating_sub(1),
                dg
            )));
        }
        if !self.leading().map(Scalar::is_positive).unwrap_or(false)
            || !g.leading().map(Scalar::is_positive).unwrap_or(false)
        {
            return Err(Error::Precondition(
                "interlacing requires positive leading coefficients".into(),
            ));
        }
        if !self.is_real_rooted()? || !g.is_real_rooted()? {
            return Err(Error::NotRealRooted("interlacing inputs".into()));
        }
        let fr = self.nonzero_rational()?;
        let gr = g.nonzero_rational()?;
        let mut froots = isolated_with_factors(&fr)?;
        let mut groots = isolated_with_factors(&gr)?;
        // All pairwise orders between an f-root and a g-root, memoized.
        let mut order = vec![vec![None; groots.len()]; froots.len()];
        for i in 0..froots.len() {
            for j in 0..groots.len() {
                order[i][j] = Some(compare_isolated(&mut froots[i], &mut groots[j]));
            }
        }
        let alphas = expand_mult(&froots);
        let betas = expand_mult(&groots);
        let le_fg = |i: usize, j: usize| order[i][j].unwrap() != Ordering::Greater;
        let le_gf = |j: usize, i: usize| order[i][j].unwrap() != Ordering::Less;
        for t in 0..alphas.len() {
            if !le_gf(betas[t], alphas[t]) {
                return Ok(false);
            }
            if !le_fg(alphas[t], betas[t + 1]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sample seeded convex combinations `p_1 f_1 + ... + p_m f_m` and
    /// Sturm-test each; returns the first combination that fails.
    pub fn mixture_probe(fs: &[UniPoly], trials: usize, seed: u64) -> Result<MixtureVerdict> {
        if fs.is_empty() {
            return Err(Error::Precondition("empty polynomial list".into()));
        }
        let deg = fs[0].degree().ok_or(Error::ZeroPolynomial)?;
        for f in fs {
            if f.backend() != Backend::Rational {
                return Err(Error::RationalRequired);
            }
            if f.degree() != Some(deg) {
                return Err(Error::DegreeMismatch(
                    "mixture inputs must share one degree".into(),
                ));
            }
            if !f.leading().map(Scalar::is_positive).unwrap_or(false) {
                return Err(Error::Precondition(
                    "mixture inputs need positive leading coefficients".into(),
                ));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mut weights: Vec<i64> = (0..fs.len()).map(|_| rng.random_range(0..=100)).collect();
            if weights.iter().all(|&w| w == 0) {
                weights[0] = 1;
            }
            let total: i64 = weights.iter().sum();
            let ps: Vec<Scalar> = weights.iter().map(|&w| Scalar::ratio(w, total)).collect();
            let mut mix = UniPoly::zero(Backend::Rational);
            for (f, p) in fs.iter().zip(&ps) {
                mix = mix.add(&f.scale(p));
            }
            if !mix.is_real_rooted()? {
                return Ok(MixtureVerdict::Counterexample {
                    weights: ps,
                    mixture: mix,
                });
            }
        }
        Ok(MixtureVerdict::NoCounterexample { trials })
    }

    /// Classical Jacobi polynomial `P_d^{(alpha,beta)}` by the three-term
    /// recurrence, exact; normalized so `P_d(1) = C(d+alpha, d)`.
    pub fn jacobi(d: usize, alpha: &BigRational, beta: &BigRational) -> UniPoly {
        let one = BigRational::one();
        let two = BigRational::from_integer(BigInt::from(2));
        let p0 = UniPoly::from_coeffs(Backend::Rational, vec![Scalar::Rational(one.clone())]);
        if d == 0 {
            return p0;
        }
        // P_1(x) = ((alpha+beta+2) x + (alpha-beta)) / 2
        let p1 = UniPoly::from_coeffs(
            Backend::Rational,
            vec![
                Scalar::Rational((alpha - beta) / &two),
                Scalar::Rational((alpha + beta + &two) / &two),
            ],
        );
        if d == 1 {
            return p1;
        }
        let mut prev = p0;
        let mut cur = p1;
        for j in 2..=d {
            let jq = BigRational::from_integer(BigInt::from(j as i64));
            let a2j = &two * &jq + alpha + beta;
            let div = &two * &jq * (&jq + alpha + beta) * (&a2j - &two);
            let ax = (&a2j - &one) * &a2j * (&a2j - &two);
            let b = (&a2j - &one) * (alpha * alpha - beta * beta);
            let c = &two * (&jq + alpha - &one) * (&jq + beta - &one) * &a2j;
            // P_j = ((ax*x + b) P_{j-1} - c P_{j-2}) / div
            let lin = UniPoly::from_coeffs(
                Backend::Rational,
                vec![Scalar::Rational(b), Scalar::Rational(ax)],
            );
            let num = lin.mul(&cur).sub(&prev.scale(&Scalar::Rational(c)));
            let next = num.scale(&Scalar::Rational(div.recip()));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// All real roots of a float-backend polynomial under the documented
    /// tolerance, ascending, repeated with multiplicity. The input is
    /// assumed real-rooted up to roundoff.
    pub fn float_roots(&self) -> Result<Vec<f64>> {
        if self.backend != Backend::Float {
            return Err(Error::Precondition("float backend required".into()));
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let coeffs: Vec<f64> = self.coeffs.iter().map(Scalar::to_f64).collect();
        let mut roots = float_roots_rec(&coeffs);
        let deg = coeffs.len() - 1;
        if roots.len() < deg {
            return Err(Error::NotRealRooted(format!(
                "recovered {} of {} float roots",
                roots.len(),
                deg
            )));
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(roots)
    }

    pub fn float_largest_root(&self) -> Result<f64> {
        Ok(*self
            .float_roots()?
            .last()
            .ok_or(Error::Precondition("constant polynomial".into()))?)
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct UniRepr {
    backend: Backend,
    coeffs: Vec<Scalar>,
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        UniRepr {
            backend: self.backend,
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = UniRepr::deserialize(deserializer)?;
        let coeffs: Vec<Scalar> = repr
            .coeffs
            .into_iter()
            .map(|c| match repr.backend {
                Backend::Float => Ok(c.to_float_backend()),
                Backend::Rational => {
                    if c.backend() != Backend::Rational {
                        Err(D::Error::custom("float coefficient in rational polynomial"))
                    } else {
                        Ok(c)
                    }
                }
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(UniPoly::from_coeffs(repr.backend, coeffs))
    }
}

// ---- rational polynomial internals (ascending Vec<BigRational>) ----

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_degree(p: &[BigRational]) -> usize {
    p.len().saturating_sub(1)
}

fn poly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_quad(p: &[BigRational], q: &QuadExt) -> QuadExt {
    let mut acc = QuadExt::from_rational(BigRational::zero());
    for c in p.iter().rev() {
        acc = acc.mul(q).add(&QuadExt::from_rational(c.clone()));
    }
    acc
}

fn poly_derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64)))
        .collect()
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let db = poly_degree(b);
    let lb = &b[db];
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let dr = rem.len() - 1;
        let c = rem[dr].clone() / lb.clone();
        let shift = dr - db;
        quot[shift] = c.clone();
        for i in 0..=db {
            let v = &rem[shift + i] - &(&b[i] * &c);
            rem[shift + i] = v;
        }
        poly_trim(&mut rem);
        if rem.len() <= shift {
            // Remainder degree dropped below the current shift; continue.
        }
        if rem.len() < b.len() {
            break;
        }
        if poly_degree(&rem) < shift + db {
            continue;
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// Scale by a positive rational to primitive integer coefficients;
/// positive scaling preserves every sign pattern the chain relies on.
fn poly_primitive(p: &[BigRational]) -> Vec<BigRational> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut den_lcm = BigInt::one();
    for c in p {
        den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
    }
    let mut num_gcd = BigInt::zero();
    for c in p {
        let scaled = c.numer() * (&den_lcm / c.denom());
        num_gcd = num_integer::gcd(num_gcd, scaled);
    }
    if num_gcd.is_zero() {
        return p.to_vec();
    }
    let factor = BigRational::new(den_lcm, num_gcd);
    p.iter().map(|c| c * &factor).collect()
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = poly_primitive(&r);
    }
    // Monic normalization.
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

/// Yun square-free decomposition: returns pairwise-coprime factors with
/// their multiplicities, product of `factor^mult` = input up to scale.
fn yun_squarefree(f: &[BigRational]) -> Vec<(Vec<BigRational>, usize)> {
    let mut f = f.to_vec();
    poly_trim(&mut f);
    if poly_degree(&f) == 0 {
        return Vec::new();
    }
    let df = poly_derivative(&f);
    let a0 = poly_gcd(&f, &df);
    let (mut b, _) = poly_divrem(&f, &a0);
    let (c0, _) = poly_divrem(&df, &a0);
    let mut c = c0;
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        let bp = poly_derivative(&b);
        let mut d: Vec<BigRational> = Vec::new();
        let n = c.len().max(bp.len());
        for k in 0..n {
            let cv = c.get(k).cloned().unwrap_or_else(BigRational::zero);
            let bv = bp.get(k).cloned().unwrap_or_else(BigRational::zero);
            d.push(cv - bv);
        }
        poly_trim(&mut d);
        if poly_degree(&b) == 0 {
            break;
        }
        let ai = poly_gcd(&b, &d);
        if poly_degree(&ai) > 0 {
            out.push((poly_primitive(&ai), i));
        }
        let (bn, _) = poly_divrem(&b, &ai);
        let (cn, _) = poly_divrem(&d, &ai);
        b = bn;
        c = cn;
        i += 1;
    }
    out
}

fn squarefree_part(f: &[BigRational]) -> Vec<BigRational> {
    let mut f = f.to_vec();
    poly_trim(&mut f);
    if poly_degree(&f) == 0 {
        return f;
    }
    let g = poly_gcd(&f, &poly_derivative(&f));
    if poly_degree(&g) == 0 {
        return poly_primitive(&f);
    }
    let (q, _) = poly_divrem(&f, &g);
    poly_primitive(&q)
}

/// Sturm chain of a square-free polynomial, each member primitive.
fn sturm_chain(f: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut chain = Vec::new();
    let p0 = poly_primitive(f);
    if p0.is_empty() {
        return chain;
    }
    chain.push(p0.clone());
    let p1 = poly_primitive(&poly_derivative(&p0));
    if p1.is_empty() {
        return chain;
    }
    chain.push(p1);
    loop {
        let n = chain.len();
        let (_, r) = poly_divrem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        let neg: Vec<BigRational> = r.iter().map(|c| -c).collect();
        chain.push(poly_primitive(&neg));
        if poly_degree(chain.last().unwrap()) == 0 {
            break;
        }
    }
    chain
}

fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
    let mut count = 0;
    let mut last: Option<Ordering> = None;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

fn sign_at(p: &[BigRational], x: &BigRational) -> Ordering {
    poly_eval(p, x).cmp(&BigRational::zero())
}

fn sign_at_pos_inf(p: &[BigRational]) -> Ordering {
    p.last()
        .map(|c| c.cmp(&BigRational::zero()))
        .unwrap_or(Ordering::Equal)
}

fn sign_at_neg_inf(p: &[BigRational]) -> Ordering {
    match p.last() {
        None => Ordering::Equal,
        Some(c) => {
            let s = c.cmp(&BigRational::zero());
            if poly_degree(p) % 2 == 0 {
                s
            } else {
                s.reverse()
            }
        }
    }
}

enum Bound<'a> {
    NegInf,
    PosInf,
    At(&'a BigRational),
}

/// Distinct roots of the chain's square-free head in `(lo, hi]`.
fn count_interval(chain: &[Vec<BigRational>], lo: Bound, hi: Bound) -> usize {
    let v = |b: &Bound| match b {
        Bound::NegInf => variations(chain.iter().map(|p| sign_at_neg_inf(p))),
        Bound::PosInf => variations(chain.iter().map(|p| sign_at_pos_inf(p))),
        Bound::At(x) => variations(chain.iter().map(|p| sign_at(p, x))),
    };
    v(&lo).saturating_sub(v(&hi))
}

/// Open bound with every real root strictly inside `(-B, B)`.
fn cauchy_bound(f: &[BigRational]) -> BigRational {
    let lead = f.last().expect("nonzero polynomial").clone();
    let mut max = BigRational::zero();
    for c in &f[..f.len() - 1] {
        let m = (c / &lead).abs();
        if m > max {
            max = m;
        }
    }
    max + BigRational::one() + BigRational::one()
}

/// Bisect `(lo, hi]` into isolating intervals, one distinct root each.
fn isolate_squarefree(chain: &[Vec<BigRational>]) -> Vec<(BigRational, BigRational)> {
    let f = &chain[0];
    if poly_degree(f) == 0 {
        return Vec::new();
    }
    let bound = cauchy_bound(f);
    let mut stack = vec![(-&bound, bound.clone())];
    let mut out = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        match count_interval(chain, Bound::At(&lo), Bound::At(&hi)) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Halve an isolating bracket, keeping its single root.
fn refine_once(
    chain: &[Vec<BigRational>],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
    if count_interval(chain, Bound::At(&mid), Bound::At(hi)) >= 1 {
        (mid, hi.clone())
    } else {
        (lo.clone(), mid)
    }
}

struct IsolatedRoot {
    factor: Vec<BigRational>,
    chain: Vec<Vec<BigRational>>,
    lo: BigRational,
    hi: BigRational,
    mult: usize,
}

/// Every distinct root isolated, brackets pairwise disjoint across
/// square-free factors, sorted by value.
fn isolated_with_factors(f: &[BigRational]) -> Result<Vec<IsolatedRoot>> {
    let mut out = Vec::new();
    for (factor, mult) in yun_squarefree(f) {
        let chain = sturm_chain(&factor);
        for (lo, hi) in isolate_squarefree(&chain) {
            out.push(IsolatedRoot {
                factor: factor.clone(),
                chain: chain.clone(),
                lo,
                hi,
                mult,
            });
        }
    }
    // Brackets from different factors can overlap even though the roots
    // are distinct (Yun factors are coprime); refine until disjoint, then
    // endpoint order is value order.
    loop {
        out.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
        let mut overlapped = false;
        for i in 1..out.len() {
            if out[i].lo < out[i - 1].hi {
                for j in [i - 1, i] {
                    let (lo, hi) = refine_once(&out[j].chain, &out[j].lo, &out[j].hi);
                    out[j].lo = lo;
                    out[j].hi = hi;
                }
                overlapped = true;
            }
        }
        if !overlapped {
            break;
        }
    }
    Ok(out)
}

fn expand_mult(roots: &[IsolatedRoot]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        for _ in 0..r.mult {
            out.push(i);
        }
    }
    out
}

/// Exact order of two isolated roots of possibly different polynomials.
fn compare_isolated(a: &mut IsolatedRoot, b: &mut IsolatedRoot) -> Ordering {
    for _ in 0..512 {
        if a.hi <= b.lo {
            return Ordering::Less;
        }
        if b.hi <= a.lo {
            return Ordering::Greater;
        }
        let i_lo = a.lo.clone().max(b.lo.clone());
        let i_hi = a.hi.clone().min(b.hi.clone());
        let na = count_interval(&a.chain, Bound::At(&i_lo), Bound::At(&i_hi));
        let nb = count_interval(&b.chain, Bound::At(&i_lo), Bound::At(&i_hi));
        if na == 1 && nb == 1 {
            let g = poly_gcd(&a.factor, &b.factor);
            if poly_degree(&g) > 0 {
                let cg = sturm_chain(&g);
                if count_interval(&cg, Bound::At(&i_lo), Bound::At(&i_hi)) >= 1 {
                    return Ordering::Equal;
                }
            }
        }
        let (lo, hi) = refine_once(&a.chain, &a.lo, &a.hi);
        a.lo = lo;
        a.hi = hi;
        let (lo, hi) = refine_once(&b.chain, &b.lo, &b.hi);
        b.lo = lo;
        b.hi = hi;
    }
    panic!("root comparison failed to separate");
}

// ---- float root finding ----

const FLOAT_ROOT_EPS: f64 = 1e-9;

fn float_eval(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for v in c.iter().rev() {
        acc = acc * x + v;
    }
    acc
}

fn float_bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = float_eval(c, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = float_eval(c, mid);
        if fm == 0.0 || (hi - lo) < f64::EPSILON * (1.0 + mid.abs()) {
            return mid;
        }
        if (flo < 0.0) != (fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Recursive subdivision at the critical points of the derivative;
/// reliable for (near-)real-rooted inputs at desk scale.
fn float_roots_rec(coeffs: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().map(|v| *v == 0.0).unwrap_or(false) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-c[0] / c[1]];
    }
    if deg == 2 {
        let (a, b, cc) = (c[2], c[1], c[0]);
        let disc = (b * b - 4.0 * a * cc).max(0.0);
        let sq = disc.sqrt();
        let r1 = (-b - sq) / (2.0 * a);
        let r2 = (-b + sq) / (2.0 * a);
        return vec![r1.min(r2), r1.max(r2)];
    }
    let deriv: Vec<f64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| v * i as f64)
        .collect();
    let mut crits = float_roots_rec(&deriv);
    crits.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lead = *c.last().unwrap();
    let bound = 1.0
        + c[..c.len() - 1]
            .iter()
            .map(|v| (v / lead).abs())
            .fold(0.0f64, f64::max);
    let mut points = vec![-bound];
    points.extend(crits.iter().copied());
    points.push(bound);
    let scale = c.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    let mut roots = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (fa, fb) = (float_eval(&c, a), float_eval(&c, b));
        if (fa < 0.0) != (fb < 0.0) || fa == 0.0 {
            roots.push(float_bisect(&c, a, b));
        }
    }
    // Multiple roots sit at critical points where |f| is tiny.
    if roots.len() < deg {
        for &x in &crits {
            if roots.len() >= deg {
                break;
            }
            if float_eval(&c, x).abs() <= FLOAT_ROOT_EPS * scale.max(1.0) {
                while roots.len() < deg && !roots.iter().any(|r| (r - x).abs() < 1e-7) {
                    roots.push(x);
                    roots.push(x);
                }
            }
        }
        roots.truncate(deg.max(roots.len().saturating_sub(1)));
    }
    roots.truncate(deg);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(
            Backend::Rational,
            coeffs
                .iter()
                .map(|&c| Scalar::from_int(c, Backend::Rational))
                .collect(),
        )
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn root_count_examples() {
        let full = (Scalar::from_int(-1000, Backend::Rational), Scalar::from_int(1000, Backend::Rational));
        assert_eq!(rp(&[-1, 0, 1]).real_root_count(&full.0, &full.1).unwrap(), 2);
        assert_eq!(rp(&[1, 0, 1]).real_root_count(&full.0, &full.1).unwrap(), 0);
        assert_eq!(rp(&[1, -6, 6]).real_root_count_all().unwrap(), 2);
        // Multiplicity: (t-1)^2 (t+2) has three roots with multiplicity.
        let p = rp(&[1, -1]).mul(&rp(&[1, -1])).mul(&rp(&[-2, -1])).neg();
        assert_eq!(p.real_root_count_all().unwrap(), 3);
        assert!(rp(&[]).real_root_count_all().is_err());
    }

    #[test]
    fn real_rootedness() {
        assert!(rp(&[-1, 0, 1]).is_real_rooted().unwrap());
        assert!(!rp(&[1, 0, 1]).is_real_rooted().unwrap());
        assert!(rp(&[2, 0, 0, 1]).is_real_rooted().unwrap() == false);
        assert!(rp(&[5]).is_real_rooted().unwrap());
    }

    #[test]
    fn largest_root_examples() {
        let tol = Scalar::ratio(1, 1_000_000_000_000);
        let r = rp(&[-1, 0, 1]).largest_root(&tol).unwrap();
        assert!((r.to_f64() - 1.0).abs() < 1e-12);

        // 6t^2 - 6t + 1: largest root (3 + sqrt(3))/6.
        let r = rp(&[1, -6, 6]).largest_root(&tol).unwrap();
        assert!((r.to_f64() - (3.0 + 3.0f64.sqrt()) / 6.0).abs() < 1e-12);

        // (t - 4) t^3: largest root 4.
        let p = rp(&[0, 0, 0, -4, 1]);
        let r = p.largest_root(&tol).unwrap();
        assert!((r.to_f64() - 4.0).abs() < 1e-12);

        assert!(rp(&[1, 0, 1]).largest_root(&tol).is_err());
        assert!(rp(&[7]).largest_root(&tol).is_err());
    }

    #[test]
    fn largest_root_shift_monotone() {
        // largest_root(f(t - c)) = largest_root(f) + c for rational c.
        let f = rp(&[-2, -1, 1]);
        let tol = Scalar::ratio(1, 1_000_000_000_000);
        let base = f.largest_root(&tol).unwrap().to_f64();
        let shifted = f.compose_linear(
            &Scalar::one(Backend::Rational),
            &Scalar::from_int(-3, Backend::Rational),
        );
        let moved = shifted.largest_root(&tol).unwrap().to_f64();
        assert!((moved - (base + 3.0)).abs() < 1e-9);
    }

    #[test]
    fn quad_comparisons() {
        // Largest root of 6t^2 - 6t + 1 equals (1/2) + (1/6) sqrt(3).
        let p = rp(&[1, -6, 6]);
        let exact = QuadExt::new(q(1, 2), q(1, 6), q(3, 1)).unwrap();
        assert_eq!(p.largest_root_vs_quad(&exact).unwrap(), Ordering::Equal);
        let above = exact.add_rational(&q(1, 1000));
        assert_eq!(p.largest_root_vs_quad(&above).unwrap(), Ordering::Less);
        let below = exact.add_rational(&q(-1, 1000));
        assert_eq!(p.largest_root_vs_quad(&below).unwrap(), Ordering::Greater);
        assert_eq!(p.count_roots_above_quad(&below).unwrap(), 1);
    }

    #[test]
    fn compare_largest_roots_cases() {
        let a = rp(&[-1, 0, 1]); // roots ±1
        let b = rp(&[-4, 0, 1]); // roots ±2
        assert_eq!(a.compare_largest_roots(&b).unwrap(), Ordering::Less);
        assert_eq!(b.compare_largest_roots(&a).unwrap(), Ordering::Greater);
        // Shared largest root via different polynomials.
        let c = rp(&[2, -3, 1]); // (t-1)(t-2)
        let d = rp(&[-2, -1, 1]); // (t-2)(t+1)
        assert_eq!(c.compare_largest_roots(&d).unwrap(), Ordering::Equal);
    }

    #[test]
    fn interleaves_examples() {
        let f = rp(&[0, 1]); // t
        let g = rp(&[-1, 0, 1]); // t^2 - 1
        assert!(f.interleaves(&g).unwrap());
        let f2 = rp(&[-2, 1]); // t - 2
        assert!(!f2.interleaves(&g).unwrap());
        assert!(rp(&[1, 1, 1]).interleaves(&g).is_err());
    }

    #[test]
    fn derivative_interleaves_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let deg = rng.random_range(2..=6);
            let roots: Vec<Scalar> = (0..deg)
                .map(|_| Scalar::ratio(rng.random_range(-12..=12), rng.random_range(1..=4)))
                .collect();
            let g = UniPoly::from_roots(Backend::Rational, &roots);
            let f = g.derivative();
            assert!(f.interleaves(&g).unwrap(), "Rolle violated for {g}");
        }
    }

    #[test]
    fn sturm_count_matches_constructed_products() {
        // Products of linear factors are real-rooted with count == degree.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let deg = rng.random_range(1..=7);
            let roots: Vec<Scalar> = (0..deg)
                .map(|_| Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=3)))
                .collect();
            let g = UniPoly::from_roots(Backend::Rational, &roots);
            assert_eq!(g.real_root_count_all().unwrap(), deg);
            assert!(g.is_real_rooted().unwrap());
        }
    }

    #[test]
    fn mixture_probe_examples() {
        let fs = vec![rp(&[-1, 0, 1]), rp(&[-4, 0, 1])];
        match UniPoly::mixture_probe(&fs, 40, 3).unwrap() {
            MixtureVerdict::NoCounterexample { trials } => assert_eq!(trials, 40),
            _ => panic!("even quadratics mix to real-rooted"),
        }

        // (t-1)(t-2) and (t+1)(t+2): the midpoint mixture is t^2 + 2.
        let fs = vec![rp(&[2, -3, 1]), rp(&[2, 3, 1])];
        match UniPoly::mixture_probe(&fs, 200, 1).unwrap() {
            MixtureVerdict::Counterexample { mixture, .. } => {
                assert!(!mixture.is_real_rooted().unwrap());
            }
            _ => panic!("expected a counterexample"),
        }

        let single = vec![rp(&[-1, 0, 1])];
        assert!(matches!(
            UniPoly::mixture_probe(&single, 10, 0).unwrap(),
            MixtureVerdict::NoCounterexample { .. }
        ));
    }

    #[test]
    fn jacobi_examples() {
        let zero = BigRational::zero();
        let p0 = UniPoly::jacobi(0, &q(2, 1), &q(3, 1));
        assert_eq!(p0, rp(&[1]));

        // Legendre P_2(u) = (3u^2 - 1)/2.
        let p2 = UniPoly::jacobi(2, &zero, &zero);
        assert_eq!(
            p2.coeffs_vec(),
            vec![Scalar::ratio(-1, 2), Scalar::ratio(0, 1), Scalar::ratio(3, 2)]
        );

        // P_2(2t - 1) = 6t^2 - 6t + 1.
        let shifted = p2.compose_linear(
            &Scalar::from_int(2, Backend::Rational),
            &Scalar::from_int(-1, Backend::Rational),
        );
        assert_eq!(shifted, rp(&[1, -6, 6]));

        // Normalization P_d(1) = C(d + alpha, d).
        let p3 = UniPoly::jacobi(3, &q(2, 1), &q(1, 2));
        let at_one = p3.eval(&Scalar::one(Backend::Rational));
        assert_eq!(at_one, Scalar::ratio(10, 1)); // C(5,3)
    }

    #[test]
    fn isolate_roots_with_multiplicity() {
        // (t-1)^2 (t+3)
        let p = rp(&[1, -1]).mul(&rp(&[1, -1])).mul(&rp(&[3, 1]));
        let roots = p.isolate_roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity, 1);
        assert_eq!(roots[1].multiplicity, 2);
        assert!(roots[0].hi <= roots[1].lo);
    }

    #[test]
    fn float_roots_work() {
        let p = UniPoly::from_roots(
            Backend::Float,
            &[Scalar::Float(-1.5), Scalar::Float(0.25), Scalar::Float(3.0)],
        );
        let roots = p.float_roots().unwrap();
        assert_eq!(roots.len(), 3);
        assert!((roots[0] + 1.5).abs() < 1e-9);
        assert!((roots[2] - 3.0).abs() < 1e-9);
        assert!((p.float_largest_root().unwrap() - 3.0).abs() < 1e-9);
    }
}

