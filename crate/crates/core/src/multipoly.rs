//! Sparse multivariate polynomial arithmetic with exact coefficients,
//! including the directional-derivative operator the hyperbolic machinery
//! is built on.
//!
//! Terms are kept in a map from exponent vector to nonzero coefficient,
//! ordered graded-lexicographically so serialized output is byte-stable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};
use crate::unipoly::UniPoly;

/// Exponent vector; one entry per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

// Graded lexicographic: total degree first, then lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Hard limits on operator-product growth. Operations that enlarge a
/// polynomial check these and fail loudly instead of blowing up.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub max_vars: usize,
    pub max_degree: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vars: 24,
            max_degree: 16,
        }
    }
}

impl Caps {
    pub fn check(&self, nvars: usize, degree: u32) -> Result<()> {
        if nvars > self.max_vars {
            return Err(Error::CapsExceeded(format!(
                "{nvars} variables exceeds cap {}",
                self.max_vars
            )));
        }
        if degree > self.max_degree {
            return Err(Error::CapsExceeded(format!(
                "degree {degree} exceeds cap {}",
                self.max_degree
            )));
        }
        Ok(())
    }
}

/// A point or direction; length matches the polynomial it is used with.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let backend = coords.first().map(Scalar::backend);
        if let Some(b) = backend {
            if coords.iter().any(|c| c.backend() != b) {
                return Err(Error::BackendMismatch);
            }
        }
        Ok(Vector { coords })
    }

    pub fn zero(n: usize, backend: Backend) -> Self {
        Vector {
            coords: vec![Scalar::zero(backend); n],
        }
    }

    pub fn basis(n: usize, i: usize, backend: Backend) -> Self {
        let mut v = Self::zero(n, backend);
        v.coords[i] = Scalar::one(backend);
        v
    }

    pub fn all_ones(n: usize, backend: Backend) -> Self {
        Vector {
            coords: vec![Scalar::one(backend); n],
        }
    }

    pub fn from_ints(vals: &[i64], backend: Backend) -> Self {
        Vector {
            coords: vals.iter().map(|&v| Scalar::from_int(v, backend)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn backend(&self) -> Backend {
        self.coords
            .first()
            .map(Scalar::backend)
            .unwrap_or(Backend::Rational)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn set_coord(&mut self, i: usize, v: Scalar) {
        self.coords[i] = v;
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_compatible(other)?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_compatible(other)?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn to_float_backend(&self) -> Vector {
        Vector {
            coords: self.coords.iter().map(Scalar::to_float_backend).collect(),
        }
    }

    /// Concatenate into a larger space.
    pub fn concat(&self, other: &Vector) -> Result<Vector> {
        if !self.coords.is_empty() && !other.coords.is_empty() && self.backend() != other.backend()
        {
            return Err(Error::BackendMismatch);
        }
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        Ok(Vector { coords })
    }

    /// Embed into `total` coordinates starting at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Vector {
        let mut coords = vec![Scalar::zero(self.backend()); total];
        for (i, c) in self.coords.iter().enumerate() {
            coords[offset + i] = c.clone();
        }
        Vector { coords }
    }

    fn check_compatible(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector dims {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        if self.dim() > 0 && self.backend() != other.backend() {
            return Err(Error::BackendMismatch);
        }
        Ok(())
    }

    /// Parse "a,b,c" with rational or float entries.
    pub fn parse(s: &str, backend: Backend) -> Result<Vector> {
        let coords = s
            .split(',')
            .map(|t| Scalar::parse_as(t, backend))
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector { coords })
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<Scalar>::deserialize(deserializer)?;
        Vector::new(coords).map_err(D::Error::custom)
    }
}

/// Sparse multivariate polynomial; no zero coefficients are stored and
/// all coefficients share one backend.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    backend: Backend,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, backend: Backend) -> Self {
        MultiPoly {
            nvars,
            backend,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let backend = c.backend();
        let mut p = Self::zero(nvars, backend);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize, backend: Backend) -> Self {
        let mut p = Self::zero(nvars, backend);
        p.terms
            .insert(Monomial::var(nvars, i), Scalar::one(backend));
        p
    }

    pub fn from_terms<I>(nvars: usize, backend: Backend, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Self::zero(nvars, backend);
        for (m, c) in terms {
            if m.0.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in a {}-variable polynomial",
                    m.0.len(),
                    nvars
                )));
            }
            if c.backend() != backend {
                return Err(Error::BackendMismatch);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.backend))
    }

    fn check_same_space(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.backend != other.backend {
            return Err(Error::BackendMismatch);
        }
        Ok(())
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of dim {} against {} variables",
                x.dim(),
                self.nvars
            )));
        }
        if !self.terms.is_empty() && x.dim() > 0 && x.backend() != self.backend {
            return Err(Error::BackendMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(self.nvars, self.backend);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.mul_with_caps(other, &Caps::default())
    }

    pub fn mul_with_caps(&self, other: &MultiPoly, caps: &Caps) -> Result<MultiPoly> {
        self.check_same_space(other)?;
        if !self.is_zero() && !other.is_zero() {
            caps.check(self.nvars, self.degree() + other.degree())?;
        }
        let mut out = Self::zero(self.nvars, self.backend);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Scalar> {
        self.check_point(x)?;
        let mut acc = Scalar::zero(self.backend);
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &x.coord(i).pow(e);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars, self.backend);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(
                Monomial(exps),
                c * &Scalar::from_int(e as i64, self.backend),
            );
        }
        out
    }

    /// `D_v p = sum_i v_i * dp/dx_i`. Degree drops by exactly one on
    /// homogeneous nonzero output.
    pub fn directional_derivative(&self, v: &Vector) -> Result<MultiPoly> {
        self.check_point(v)?;
        let mut out = Self::zero(self.nvars, self.backend);
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 || v.coord(i).is_zero() {
                    continue;
                }
                let mut exps = m.0.clone();
                exps[i] -= 1;
                out.add_term(
                    Monomial(exps),
                    &(c * v.coord(i)) * &Scalar::from_int(e as i64, self.backend),
                );
            }
        }
        Ok(out)
    }

    /// Univariate restriction `t -> p(base + t*dir)`.
    pub fn restrict_to_line(&self, base: &Vector, dir: &Vector) -> Result<UniPoly> {
        self.check_point(base)?;
        self.check_point(dir)?;
        let deg = self.degree() as usize;
        let mut acc = vec![Scalar::zero(self.backend); deg + 1];
        for (m, c) in &self.terms {
            // Expand prod_i (base_i + t*dir_i)^{e_i} into a dense vector.
            let mut term = vec![Scalar::zero(self.backend); 1];
            term[0] = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = mul_linear(&term, base.coord(i), dir.coord(i), self.backend);
                    if term.is_empty() {
                        break;
                    }
                }
                if term.is_empty() {
                    break;
                }
            }
            for (k, v) in term.into_iter().enumerate() {
                acc[k] = &acc[k] + &v;
            }
        }
        Ok(UniPoly::from_coeffs(self.backend, acc))
    }

    /// Substitution `x -> x - v`. Homogeneity is not preserved.
    pub fn shift(&self, v: &Vector) -> Result<MultiPoly> {
        self.check_point(v)?;
        let mut out = Self::zero(self.nvars, self.backend);
        for (m, c) in &self.terms {
            // prod_i (x_i - v_i)^{e_i}, expanded variable by variable.
            let mut partial: Vec<(Monomial, Scalar)> =
                vec![(Monomial::constant(self.nvars), c.clone())];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if v.coord(i).is_zero() {
                    for (mono, _) in partial.iter_mut() {
                        mono.0[i] += e;
                    }
                    continue;
                }
                for _ in 0..e {
                    let mut next: BTreeMap<Monomial, Scalar> = BTreeMap::new();
                    for (mono, coef) in &partial {
                        let mut up = mono.clone();
                        up.0[i] += 1;
                        merge_term(&mut next, up, coef.clone());
                        merge_term(&mut next, mono.clone(), &(-v.coord(i)) * coef);
                    }
                    partial = next.into_iter().collect();
                }
            }
            for (mono, coef) in partial {
                out.add_term(mono, coef);
            }
        }
        Ok(out)
    }

    /// `g(y) = p(x^1) p(x^2) ... p(x^k)` on `k` disjoint variable blocks;
    /// block `i` uses coordinates `[(i-1)n, in)`.
    pub fn block_product(&self, k: usize) -> Result<MultiPoly> {
        self.block_product_with_caps(k, &Caps::default())
    }

    pub fn block_product_with_caps(&self, k: usize, caps: &Caps) -> Result<MultiPoly> {
        if k < 1 {
            return Err(Error::Precondition("block count must be >= 1".into()));
        }
        let total = self.nvars * k;
        caps.check(total, self.degree() * k as u32)?;
        let mut out = MultiPoly::constant(total, Scalar::one(self.backend));
        for block in 0..k {
            let shifted = self.embed(total, block * self.nvars);
            out = out.mul_with_caps(&shifted, caps)?;
        }
        Ok(out)
    }

    /// Re-index into a larger variable space at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(total, self.backend);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; total];
            exps[offset..offset + self.nvars].copy_from_slice(&m.0);
            out.terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Compose with linear forms: `p(f_0, ..., f_{n-1})` where each `f_i`
    /// lives in a common target space.
    pub fn substitute_linear(&self, forms: &[MultiPoly], caps: &Caps) -> Result<MultiPoly> {
        if forms.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} substitution forms for {} variables",
                forms.len(),
                self.nvars
            )));
        }
        let target = forms
            .first()
            .map(MultiPoly::nvars)
            .ok_or_else(|| Error::Precondition("empty substitution".into()))?;
        for f in forms {
            if f.nvars() != target || f.backend() != self.backend {
                return Err(Error::DimensionMismatch(
                    "substitution forms must share one space and backend".into(),
                ));
            }
        }
        caps.check(target, self.degree())?;
        let mut out = MultiPoly::zero(target, self.backend);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul_with_caps(&forms[i], caps)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Sum over all `d`-subsets of `n` variables, coefficients one.
    pub fn elementary_symmetric(n: usize, d: usize) -> Result<MultiPoly> {
        if d > n {
            return Err(Error::Precondition(format!(
                "elementary symmetric degree {d} exceeds {n} variables"
            )));
        }
        let mut out = MultiPoly::zero(n, Backend::Rational);
        let mut subset = vec![0usize; d];
        fn rec(
            out: &mut MultiPoly,
            subset: &mut Vec<usize>,
            pos: usize,
            start: usize,
            n: usize,
            d: usize,
        ) {
            if pos == d {
                let mut exps = vec![0u32; n];
                for &i in subset.iter() {
                    exps[i] = 1;
                }
                out.terms
                    .insert(Monomial(exps), Scalar::one(Backend::Rational));
                return;
            }
            for i in start..=(n - (d - pos)) {
                subset[pos] = i;
                rec(out, subset, pos + 1, i + 1, n, d);
            }
        }
        rec(&mut out, &mut subset, 0, 0, n, d);
        Ok(out)
    }

    /// Determinant of a `d x d` symmetric matrix of `d(d+1)/2` variables.
    /// Variable order is row-major on the upper triangle.
    pub fn symmetric_determinant(d: usize) -> Result<MultiPoly> {
        if d == 0 || d > 5 {
            return Err(Error::Precondition(format!(
                "symmetric determinant supported for 1 <= d <= 5, got {d}"
            )));
        }
        let nvars = d * (d + 1) / 2;
        let mut out = MultiPoly::zero(nvars, Backend::Rational);
        let mut perm: Vec<usize> = (0..d).collect();
        permute(&mut perm, 0, &mut |perm, sign| {
            let mut exps = vec![0u32; nvars];
            for (i, &j) in perm.iter().enumerate() {
                exps[sym_index(d, i, j)] += 1;
            }
            out.add_term(Monomial(exps), Scalar::from_int(sign, Backend::Rational));
        });
        Ok(out)
    }

    pub fn to_float_backend(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars, Backend::Float);
        for (m, c) in &self.terms {
            let f = c.to_f64();
            if f != 0.0 {
                out.terms.insert(m.clone(), Scalar::Float(f));
            }
        }
        out
    }

    /// Drop float terms below `rel_eps` times the largest magnitude.
    pub fn float_cleaned(&self, rel_eps: f64) -> MultiPoly {
        if self.backend != Backend::Float {
            return self.clone();
        }
        let max = self
            .terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0f64, f64::max);
        let cutoff = max * rel_eps;
        let mut out = MultiPoly::zero(self.nvars, Backend::Float);
        for (m, c) in &self.terms {
            if c.to_f64().abs() > cutoff {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }
}

/// Flattened index of entry `(i, j)` of a `d x d` symmetric matrix.
pub fn sym_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * d - i + 1) / 2 + (j - i)
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], i64)) {
    // Recursive permutation generation tracking parity via swaps.
    fn rec(perm: &mut Vec<usize>, k: usize, sign: i64, visit: &mut impl FnMut(&[usize], i64)) {
        if k == perm.len() {
            visit(perm, sign);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            let s = if i == k { sign } else { -sign };
            rec(perm, k + 1, s, visit);
            perm.swap(k, i);
        }
    }
    rec(perm, k, 1, visit);
}

fn merge_term(map: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

// (a + b t) * poly, dense ascending coefficients.
fn mul_linear(poly: &[Scalar], a: &Scalar, b: &Scalar, backend: Backend) -> Vec<Scalar> {
    if a.is_zero() && b.is_zero() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(backend); poly.len() + 1];
    for (i, c) in poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !a.is_zero() {
            out[i] = &out[i] + &(c * a);
        }
        if !b.is_zero() {
            out[i + 1] = &out[i + 1] + &(c * b);
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: Scalar,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    backend: Backend,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            nvars: self.nvars,
            backend: self.backend,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exp: m.0.clone(),
                    coef: c.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let terms = repr.terms.into_iter().map(|t| {
            let coef = match (repr.backend, t.coef) {
                (Backend::Float, c) => c.to_float_backend(),
                (Backend::Rational, c) => c,
            };
            (Monomial(t.exp), coef)
        });
        MultiPoly::from_terms(repr.nvars, repr.backend, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product_poly(n: usize) -> MultiPoly {
        let mut p = MultiPoly::constant(n, Scalar::one(Backend::Rational));
        for i in 0..n {
            p = p.mul(&MultiPoly::var(n, i, Backend::Rational)).unwrap();
        }
        p
    }

    fn lorentz(n: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(n, Backend::Rational);
        let sq = |i: usize| {
            let v = MultiPoly::var(n, i, Backend::Rational);
            v.mul(&v).unwrap()
        };
        p = p.add(&sq(0)).unwrap();
        for i in 1..n {
            p = p.sub(&sq(i)).unwrap();
        }
        p
    }

    #[test]
    fn evaluate_examples() {
        let n = 4;
        let p = product_poly(n);
        assert_eq!(
            p.evaluate(&Vector::all_ones(n, Backend::Rational)).unwrap(),
            Scalar::from_int(1, Backend::Rational)
        );

        let l = lorentz(3);
        assert_eq!(
            l.evaluate(&Vector::from_ints(&[1, 0, 0], Backend::Rational))
                .unwrap(),
            Scalar::from_int(1, Backend::Rational)
        );

        let e2 = MultiPoly::elementary_symmetric(4, 2).unwrap();
        assert_eq!(
            e2.evaluate(&Vector::all_ones(4, Backend::Rational)).unwrap(),
            Scalar::from_int(6, Backend::Rational)
        );
    }

    #[test]
    fn directional_derivative_examples() {
        let p = product_poly(2);
        let d = p
            .directional_derivative(&Vector::from_ints(&[1, 1], Backend::Rational))
            .unwrap();
        let expected = MultiPoly::var(2, 0, Backend::Rational)
            .add(&MultiPoly::var(2, 1, Backend::Rational))
            .unwrap();
        assert_eq!(d, expected);

        let d1 = p
            .directional_derivative(&Vector::basis(2, 0, Backend::Rational))
            .unwrap();
        assert_eq!(d1, MultiPoly::var(2, 1, Backend::Rational));

        // Two applications of D_v on x1 x2 for v = (a, b) give the constant 2ab.
        let v = Vector::new(vec![Scalar::ratio(2, 3), Scalar::ratio(5, 7)]).unwrap();
        let dd = p
            .directional_derivative(&v)
            .unwrap()
            .directional_derivative(&v)
            .unwrap();
        assert_eq!(dd, MultiPoly::constant(2, Scalar::ratio(2 * 2 * 5, 3 * 7)));
    }

    #[test]
    fn restriction_examples() {
        // x1 x2 along -x + t(1,1) is (t - x1)(t - x2); at x = (3, 5).
        let p = product_poly(2);
        let base = Vector::from_ints(&[-3, -5], Backend::Rational);
        let dir = Vector::all_ones(2, Backend::Rational);
        let r = p.restrict_to_line(&base, &dir).unwrap();
        // (t-3)(t-5) = 15 - 8t + t^2
        assert_eq!(
            r.coeffs_vec(),
            vec![
                Scalar::from_int(15, Backend::Rational),
                Scalar::from_int(-8, Backend::Rational),
                Scalar::from_int(1, Backend::Rational)
            ]
        );

        let l = lorentz(2);
        let r = l
            .restrict_to_line(
                &Vector::zero(2, Backend::Rational),
                &Vector::basis(2, 0, Backend::Rational),
            )
            .unwrap();
        assert_eq!(r.degree(), Some(2));
        assert!(r.coeff(0).is_zero() && r.coeff(1).is_zero());

        // e2 on 4 vars, base -e1-e2, dir all-ones: 6t^2 - 6t + 1.
        let e2 = MultiPoly::elementary_symmetric(4, 2).unwrap();
        let base = Vector::from_ints(&[-1, -1, 0, 0], Backend::Rational);
        let r = e2
            .restrict_to_line(&base, &Vector::all_ones(4, Backend::Rational))
            .unwrap();
        assert_eq!(
            r.coeffs_vec(),
            vec![
                Scalar::from_int(1, Backend::Rational),
                Scalar::from_int(-6, Backend::Rational),
                Scalar::from_int(6, Backend::Rational)
            ]
        );
    }

    #[test]
    fn shift_examples() {
        let p = product_poly(2);
        assert_eq!(p.shift(&Vector::zero(2, Backend::Rational)).unwrap(), p);

        let s = p.shift(&Vector::basis(2, 0, Backend::Rational)).unwrap();
        // (x1 - 1) x2 = x1 x2 - x2
        let expected = p.sub(&MultiPoly::var(2, 1, Backend::Rational)).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn block_product_examples() {
        let x1 = MultiPoly::var(1, 0, Backend::Rational);
        assert_eq!(x1.block_product(2).unwrap(), product_poly(2));
        let p = product_poly(2);
        assert_eq!(p.block_product(2).unwrap(), product_poly(4));
    }

    #[test]
    fn elementary_symmetric_shapes() {
        let e1 = MultiPoly::elementary_symmetric(2, 1).unwrap();
        assert_eq!(e1.num_terms(), 2);
        let e2 = MultiPoly::elementary_symmetric(4, 2).unwrap();
        assert_eq!(e2.num_terms(), 6);
        assert!(e2.is_homogeneous() && e2.degree() == 2);
        let e0 = MultiPoly::elementary_symmetric(3, 0).unwrap();
        assert_eq!(e0, MultiPoly::constant(3, Scalar::one(Backend::Rational)));
        assert!(MultiPoly::elementary_symmetric(2, 3).is_err());
    }

    #[test]
    fn symmetric_determinant_examples() {
        let d1 = MultiPoly::symmetric_determinant(1).unwrap();
        assert_eq!(d1, MultiPoly::var(1, 0, Backend::Rational));

        // d = 2: x11 x22 - x12^2 with variable order (x11, x12, x22).
        let d2 = MultiPoly::symmetric_determinant(2).unwrap();
        let mut expected = MultiPoly::zero(3, Backend::Rational);
        expected = expected
            .add(
                &MultiPoly::var(3, 0, Backend::Rational)
                    .mul(&MultiPoly::var(3, 2, Backend::Rational))
                    .unwrap(),
            )
            .unwrap();
        expected = expected
            .sub(
                &MultiPoly::var(3, 1, Backend::Rational)
                    .mul(&MultiPoly::var(3, 1, Backend::Rational))
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(d2, expected);

        // Identity evaluates to 1 for d = 3.
        let d3 = MultiPoly::symmetric_determinant(3).unwrap();
        let mut id = Vector::zero(6, Backend::Rational);
        for i in 0..3 {
            id.set_coord(sym_index(3, i, i), Scalar::one(Backend::Rational));
        }
        assert_eq!(
            d3.evaluate(&id).unwrap(),
            Scalar::one(Backend::Rational)
        );
        assert!(MultiPoly::symmetric_determinant(6).is_err());
    }

    #[test]
    fn caps_fail_loudly() {
        let p = product_poly(3);
        assert!(matches!(
            p.block_product(9),
            Err(Error::CapsExceeded(_))
        ));
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let e2 = MultiPoly::elementary_symmetric(3, 2).unwrap();
        let s1 = serde_json::to_string(&e2).unwrap();
        let back: MultiPoly = serde_json::from_str(&s1).unwrap();
        assert_eq!(back, e2);
        let s2 = serde_json::to_string(&back).unwrap();
        assert_eq!(s1, s2);
    }
}
