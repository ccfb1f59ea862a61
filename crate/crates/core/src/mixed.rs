//! Mixed hyperbolic polynomials and root-bound machinery: the operator
//! product over derivative factors, mixed characteristic polynomials, the
//! partition root bound, the xi ratios, the univariate transfer operator,
//! and a seeded explorer for the extremal-root question.
//!
//! All operations here require the exact rational backend.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{ConeMode, HyperbolicContext};
use crate::multipoly::{Caps, MultiPoly, Vector};
use crate::quad::QuadExt;
use crate::scalar::{rational_to_f64, Backend, Scalar};
use crate::unipoly::UniPoly;

/// The operator image `prod_j (1 - y_j D_{v_j}) h` in variables
/// `x_1..x_n, y_1..y_m`, kept with its construction data.
///
/// When every `v_j` has rank at most one this polynomial also equals the
/// substitution `h(x - y_1 v_1 - ... - y_m v_m)`, which is checked as a
/// cross-oracle in the tests.
#[derive(Debug, Clone, Serialize)]
pub struct MixedPoly {
    poly: MultiPoly,
    n: usize,
    m: usize,
    vectors: Vec<Vector>,
    rank_one: Vec<bool>,
    direction: Vector,
}

impl MixedPoly {
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn num_x(&self) -> usize {
        self.n
    }

    pub fn num_y(&self) -> usize {
        self.m
    }

    pub fn rank_one_flags(&self) -> &[bool] {
        &self.rank_one
    }

    /// Closed-cone membership for a point in the joint `(x, y)` space,
    /// decided on the ray toward the interior point `(e, -1, ..., -1)`.
    pub fn gamma_contains(&self, point: &Vector) -> Result<bool> {
        if point.dim() != self.n + self.m {
            return Err(Error::DimensionMismatch(format!(
                "point of dim {} in a {}+{} variable cone",
                point.dim(),
                self.n,
                self.m
            )));
        }
        let q = self
            .direction
            .concat(&Vector::from_ints(&vec![-1; self.m], Backend::Rational))?;
        // Roots of t -> H(tq - p) are the eigenvalues of p; membership in
        // the closed cone means none is negative.
        let f = self.poly.restrict_to_line(&point.neg(), &q)?;
        if f.is_zero() {
            return Err(Error::Precondition(
                "restriction vanished; interior ray degenerate".into(),
            ));
        }
        if !f.is_real_rooted()? {
            return Err(Error::NotRealRooted("mixed-cone restriction".into()));
        }
        Ok(f.count_roots_lt(&BigRational::zero())? == 0)
    }
}

fn require_rational(ctx: &HyperbolicContext) -> Result<()> {
    if ctx.backend() != Backend::Rational {
        return Err(Error::RationalRequired);
    }
    Ok(())
}

fn check_in_closed_cone(ctx: &HyperbolicContext, vs: &[Vector]) -> Result<()> {
    for (j, v) in vs.iter().enumerate() {
        if !ctx.cone_membership(v, ConeMode::Closed)? {
            return Err(Error::OutsideCone(format!(
                "vector {} = {} is not in the closed cone",
                j + 1,
                v
            )));
        }
    }
    Ok(())
}

/// `prod_j (1 - y_j D_{v_j}) h` as a polynomial in `n + m` variables.
pub fn mixed_operator_poly(
    ctx: &HyperbolicContext,
    vs: &[Vector],
    caps: &Caps,
) -> Result<MixedPoly> {
    require_rational(ctx)?;
    if vs.is_empty() {
        return Err(Error::Precondition("need at least one vector".into()));
    }
    check_in_closed_cone(ctx, vs)?;
    let n = ctx.nvars();
    let m = vs.len();
    let total = n + m;
    caps.check(total, ctx.h().degree())?;
    let mut acc = ctx.h().embed(total, 0);
    let mut rank_one = Vec::with_capacity(m);
    for (j, v) in vs.iter().enumerate() {
        rank_one.push(ctx.rank(v)? <= 1);
        let v_embedded = v.embed(total, 0);
        let dv = acc.directional_derivative(&v_embedded)?;
        let yj = MultiPoly::var(total, n + j, Backend::Rational);
        acc = acc.sub(&yj.mul_with_caps(&dv, caps)?)?;
    }
    Ok(MixedPoly {
        poly: acc,
        n,
        m,
        vectors: vs.to_vec(),
        rank_one,
        direction: ctx.e().clone(),
    })
}

/// The substitution route `h(x - y_1 v_1 - ... - y_m v_m)`; valid as a
/// construction of the operator image only for rank-one vectors, kept as
/// an independent code path for exactly that cross-check.
pub fn substitution_poly(ctx: &HyperbolicContext, vs: &[Vector], caps: &Caps) -> Result<MultiPoly> {
    require_rational(ctx)?;
    let n = ctx.nvars();
    let m = vs.len();
    let total = n + m;
    caps.check(total, ctx.h().degree())?;
    let forms: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let mut f = MultiPoly::var(total, i, Backend::Rational);
            for (j, v) in vs.iter().enumerate() {
                let c = v.coord(i);
                if !c.is_zero() {
                    let yj = MultiPoly::var(total, n + j, Backend::Rational);
                    f = f.sub(&yj.scale(c))?;
                }
            }
            Ok(f)
        })
        .collect::<Result<_>>()?;
    ctx.h().substitute_linear(&forms, caps)
}

/// Mixed characteristic polynomial: the operator image restricted to
/// `x = te` with every `y_j = 1`. Computed without materializing the
/// `y` variables, which commutes with the definition.
pub fn mixed_char_poly(ctx: &HyperbolicContext, vs: &[Vector]) -> Result<UniPoly> {
    require_rational(ctx)?;
    check_in_closed_cone(ctx, vs)?;
    mixed_char_poly_unchecked(ctx, vs)
}

pub(crate) fn mixed_char_poly_unchecked(
    ctx: &HyperbolicContext,
    vs: &[Vector],
) -> Result<UniPoly> {
    let mut p = ctx.h().clone();
    for v in vs {
        p = p.sub(&p.directional_derivative(v)?)?;
    }
    let f = p.restrict_to_line(&Vector::zero(ctx.nvars(), Backend::Rational), ctx.e())?;
    if !f.is_real_rooted()? {
        return Err(Error::NotRealRooted(
            "mixed characteristic polynomial; inputs violate the cone preconditions".into(),
        ));
    }
    Ok(f)
}

/// The partition root bound
/// `delta(alpha, m) = (1 - 1/m + sqrt(alpha - (1/m)(1 - 1/m)))^2`,
/// kept exact for boundary-tight comparisons.
pub fn delta_bound(alpha: &BigRational, m: usize) -> Result<QuadExt> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let one = BigRational::one();
    let inv_m = BigRational::new(BigInt::one(), BigInt::from(m as u64));
    let c = &one - &inv_m;
    let radicand = alpha - &(&inv_m * &c);
    if radicand.is_negative() {
        return Err(Error::NegativeRadicand(format!(
            "alpha = {alpha} below (1/m)(1-1/m) for m = {m}"
        )));
    }
    // (c + sqrt(R))^2 = c^2 + R + 2c sqrt(R)
    QuadExt::new(&(&c * &c) + &radicand, &c + &c, radicand)
}

/// Pass/fail report for the root bound on one mixed characteristic
/// polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct RootBoundReport {
    pub m: usize,
    pub eps: Scalar,
    pub traces: Vec<Scalar>,
    pub largest_root: f64,
    pub bound: QuadExt,
    pub margin: f64,
    pub tight: bool,
    pub pass: bool,
}

/// Check the largest zero of the mixed characteristic polynomial of
/// `vs` (which must resolve the direction: sum = e, traces <= eps)
/// against `delta(eps, m)`, exactly.
pub fn root_bound_check(
    ctx: &HyperbolicContext,
    vs: &[Vector],
    eps: &BigRational,
) -> Result<RootBoundReport> {
    require_rational(ctx)?;
    check_in_closed_cone(ctx, vs)?;
    let mut sum = Vector::zero(ctx.nvars(), Backend::Rational);
    for v in vs {
        sum = sum.add(v)?;
    }
    if sum != *ctx.e() {
        return Err(Error::Precondition(format!(
            "vectors sum to {sum}, not the direction {}",
            ctx.e()
        )));
    }
    let mut traces = Vec::with_capacity(vs.len());
    for v in vs {
        let tr = ctx.trace(v)?;
        if tr.as_rational()? > eps {
            return Err(Error::Precondition(format!(
                "trace {tr} exceeds eps = {eps}"
            )));
        }
        traces.push(tr);
    }
    let m = vs.len();
    let chi = mixed_char_poly_unchecked(ctx, vs)?;
    let bound = delta_bound(eps, m)?;
    let vs_bound = chi.largest_root_vs_quad(&bound)?;
    let pass = vs_bound != Ordering::Greater;
    let tight = vs_bound == Ordering::Equal;
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)));
    let (lo, hi) = chi.largest_root_bracket(&tol)?;
    let largest = (rational_to_f64(&lo) + rational_to_f64(&hi)) / 2.0;
    Ok(RootBoundReport {
        m,
        eps: Scalar::Rational(eps.clone()),
        traces,
        largest_root: largest,
        margin: bound.to_f64() - largest,
        bound,
        tight,
        pass,
    })
}

/// `xi = g / (D_v g)` at a point; division by zero is the boundary
/// signal, reported as an error.
pub fn xi(g: &MultiPoly, v: &Vector, point: &Vector) -> Result<Scalar> {
    let num = g.evaluate(point)?;
    let den = g.directional_derivative(v)?.evaluate(point)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero(
            "directional derivative vanishes at the point (cone boundary)".into(),
        ));
    }
    Ok(&num / &den)
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// The linear operator tying the k-part extremal-root problem to
/// univariate `[0, 1/k]`-rooted polynomials:
///
/// `T(sum a_j t^j) = -sum_{j=0}^{d} ((j+1)/(k+1) a_{j+1} + (d-1-j) a_j)
///                    (d-j)! C(k+1, d-j) t^j`.
pub fn transfer_operator(k: usize, d: usize, f: &UniPoly) -> Result<UniPoly> {
    if f.backend() != Backend::Rational {
        return Err(Error::RationalRequired);
    }
    if let Some(deg) = f.degree() {
        if deg > d + 1 {
            return Err(Error::DegreeMismatch(format!(
                "input degree {deg} exceeds d + 1 = {}",
                d + 1
            )));
        }
    }
    let kq = BigRational::from_integer(BigInt::from(k as i64 + 1));
    let mut out = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let a_j1 = f.coeff(j + 1).as_rational()?.clone();
        let a_j = f.coeff(j).as_rational()?.clone();
        let jq = BigRational::from_integer(BigInt::from(j as i64 + 1));
        let lin = BigRational::from_integer(BigInt::from(d as i64 - 1 - j as i64));
        let inner = &jq / &kq * a_j1 + lin * a_j;
        let weight = BigRational::from_integer(
            factorial((d - j) as i64) * binom(k as i64 + 1, (d - j) as i64),
        );
        out.push(Scalar::Rational(-(inner * weight)));
    }
    Ok(UniPoly::from_coeffs(Backend::Rational, out))
}

/// `(1 - D_v)^k (1 - D_e + k D_v) h` restricted to `te`: the candidate
/// polynomial of the concentrated configuration `v, ..., v, e - kv`.
pub fn candidate_poly(ctx: &HyperbolicContext, v: &Vector, k: usize) -> Result<UniPoly> {
    require_rational(ctx)?;
    if !ctx.cone_membership(v, ConeMode::Open)? {
        return Err(Error::OutsideCone("v must be in the open cone".into()));
    }
    let residual = ctx
        .e()
        .sub(&v.scale(&Scalar::from_int(k as i64, Backend::Rational)))?;
    if !ctx.cone_membership(&residual, ConeMode::Open)? {
        return Err(Error::OutsideCone(
            "e - k v must be in the open cone".into(),
        ));
    }
    let h = ctx.h();
    let de = h.directional_derivative(ctx.e())?;
    let dv = h.directional_derivative(v)?;
    let mut p = h
        .sub(&de)?
        .add(&dv.scale(&Scalar::from_int(k as i64, Backend::Rational)))?;
    for _ in 0..k {
        p = p.sub(&p.directional_derivative(v)?)?;
    }
    p.restrict_to_line(&Vector::zero(ctx.nvars(), Backend::Rational), ctx.e())
}

/// Mixed characteristic polynomial when every vector is a rational
/// multiple of the direction: closed form through powers of `D_e`.
pub fn char_poly_of_direction_multiples(
    ctx: &HyperbolicContext,
    cs: &[BigRational],
) -> Result<UniPoly> {
    require_rational(ctx)?;
    let d = ctx.degree();
    let h_e = ctx.h_at_e().as_rational()?.clone();
    // prod_i (1 - c_i D_e) h (te) = h(e) sum_s (-1)^s e_s(c) d!/(d-s)! t^{d-s}
    let mut esym = vec![BigRational::zero(); d + 1];
    esym[0] = BigRational::one();
    let mut top = 0usize;
    for c in cs {
        top = (top + 1).min(d);
        for s in (1..=top).rev() {
            let add = &esym[s - 1] * c;
            esym[s] = &esym[s] + &add;
        }
    }
    let mut coeffs = vec![Scalar::zero(Backend::Rational); d + 1];
    for s in 0..=d {
        let falling = BigRational::from_integer(
            factorial(d as i64) / factorial(d as i64 - s as i64),
        );
        let sign = if s % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        coeffs[d - s] = Scalar::Rational(&h_e * &(sign * &esym[s] * falling));
    }
    Ok(UniPoly::from_coeffs(Backend::Rational, coeffs))
}

/// Seeded heuristic search report; the tool makes no optimality claim.
#[derive(Debug, Clone, Serialize)]
pub struct ExploreReport {
    pub m: usize,
    pub eps: Scalar,
    pub seed: u64,
    pub evaluations: usize,
    pub accepted_moves: usize,
    pub best_vectors: Vec<Vector>,
    pub best_root: f64,
    pub concentrated_candidate_root: f64,
    pub delta_ceiling: QuadExt,
    /// Expected `false`; `true` would contradict the conjectured extremal
    /// configuration and is worth reporting.
    pub best_exceeds_candidate: bool,
    /// Expected `true`; the theorem ceiling must never be crossed.
    pub best_within_delta: bool,
}

/// Heuristic maximization of the largest root of the mixed
/// characteristic polynomial over `v_i` in the closed cone with
/// `sum v_i = e` and `tr(v_i) <= eps`.
pub fn explore(
    ctx: &HyperbolicContext,
    eps: &BigRational,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<ExploreReport> {
    require_rational(ctx)?;
    let d = ctx.degree();
    let m_eps = BigRational::from_integer(BigInt::from(m as i64)) * eps;
    if m_eps < BigRational::from_integer(BigInt::from(d as i64)) {
        return Err(Error::Infeasible(format!(
            "m * eps = {m_eps} below the degree {d}; traces cannot sum to tr(e)"
        )));
    }

    // Concentrated comparison configuration: floor(d/eps) copies of
    // (eps/d) e, one remainder multiple of e, zeros elsewhere.
    let dq = BigRational::from_integer(BigInt::from(d as i64));
    let kfloor = (&dq / eps).floor();
    let kf = kfloor
        .numer()
        .try_into()
        .map_err(|_| Error::Infeasible("floor(d/eps) out of range".into()))?;
    let kf: usize = kf;
    let mut cs = vec![eps / &dq; kf.min(m)];
    let used = BigRational::from_integer(BigInt::from(kf.min(m) as i64)) * eps / &dq;
    let rest = BigRational::one() - used;
    if rest.is_positive() {
        cs.push(rest);
    }
    let candidate = char_poly_of_direction_multiples(ctx, &cs)?;
    let tolw = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10)));
    let cand_bracket = candidate.largest_root_bracket(&tolw)?;
    let candidate_root =
        (rational_to_f64(&cand_bracket.0) + rational_to_f64(&cand_bracket.1)) / 2.0;

    let inv_m = BigRational::new(BigInt::one(), BigInt::from(m as u64));
    let start = ctx.e().scale(&Scalar::Rational(inv_m));
    let mut vs = vec![start; m];
    let mut best = mixed_char_poly_unchecked(ctx, &vs)?;
    let mut best_vs = vs.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0usize;
    let mut evaluations = 1usize;

    for _ in 0..budget {
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m);
        while j == i {
            j = rng.random_range(0..m);
        }
        let denom = 1i64 << rng.random_range(1..=6);
        let eta = Scalar::ratio(1, denom);
        let mut trial = vs.clone();
        if rng.random_range(0..2) == 0 {
            // Proportional mass transfer keeps both inside the cone.
            let moved = trial[j].scale(&eta);
            trial[i] = trial[i].add(&moved)?;
            trial[j] = trial[j].sub(&moved)?;
        } else {
            // Coordinate nudge; cone membership re-checked below.
            let c = rng.random_range(0..ctx.nvars());
            let step = Vector::basis(ctx.nvars(), c, Backend::Rational).scale(&eta);
            trial[i] = trial[i].add(&step)?;
            trial[j] = trial[j].sub(&step)?;
            if !ctx.cone_membership(&trial[i], ConeMode::Closed)?
                || !ctx.cone_membership(&trial[j], ConeMode::Closed)?
            {
                continue;
            }
        }
        let tr_i = ctx.trace(&trial[i])?;
        let tr_j = ctx.trace(&trial[j])?;
        if tr_i.as_rational()? > eps || tr_j.as_rational()? > eps {
            continue;
        }
        let chi = match mixed_char_poly_unchecked(ctx, &trial) {
            Ok(p) => p,
            Err(_) => continue,
        };
        evaluations += 1;
        if chi.compare_largest_roots(&best)? == Ordering::Greater {
            best = chi;
            best_vs = trial.clone();
            vs = trial;
            accepted += 1;
        }
    }

    let bracket = best.largest_root_bracket(&tolw)?;
    let best_root = (rational_to_f64(&bracket.0) + rational_to_f64(&bracket.1)) / 2.0;
    let ceiling = delta_bound(eps, m)?;
    let best_exceeds_candidate = best.compare_largest_roots(&candidate)? == Ordering::Greater;
    let best_within_delta = best.largest_root_vs_quad(&ceiling)? != Ordering::Greater;
    Ok(ExploreReport {
        m,
        eps: Scalar::Rational(eps.clone()),
        seed,
        evaluations,
        accepted_moves: accepted,
        best_vectors: best_vs,
        best_root,
        concentrated_candidate_root: candidate_root,
        delta_ceiling: ceiling,
        best_exceeds_candidate,
        best_within_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::families;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn operator_poly_small_cases() {
        let ctx = families::coordinate_product(2).unwrap();
        // One application: x1 x2 - y1 x2.
        let mp = mixed_operator_poly(&ctx, &[Vector::basis(2, 0, Backend::Rational)], &caps())
            .unwrap();
        let expected = substitution_poly(&ctx, &[Vector::basis(2, 0, Backend::Rational)], &caps())
            .unwrap();
        assert_eq!(*mp.poly(), expected);
        assert_eq!(mp.poly().nvars(), 3);

        // Two applications expand to x1x2 - y1 x2 - y2 x1 + y1 y2.
        let vs = [
            Vector::basis(2, 0, Backend::Rational),
            Vector::basis(2, 1, Backend::Rational),
        ];
        let mp = mixed_operator_poly(&ctx, &vs, &caps()).unwrap();
        let sub = substitution_poly(&ctx, &vs, &caps()).unwrap();
        assert_eq!(*mp.poly(), sub);
        assert_eq!(mp.poly().num_terms(), 4);
    }

    #[test]
    fn operator_rejects_outside_cone() {
        let ctx = families::coordinate_product(2).unwrap();
        let v = Vector::from_ints(&[1, -1], Backend::Rational);
        assert!(matches!(
            mixed_operator_poly(&ctx, &[v], &caps()),
            Err(Error::OutsideCone(_))
        ));
    }

    #[test]
    fn char_poly_examples() {
        // m = 1, v = e: chi(t) = h(e)(t^d - d t^{d-1}), largest root d.
        let ctx = families::elementary_symmetric(4, 2).unwrap();
        let chi = mixed_char_poly(&ctx, &[ctx.e().clone()]).unwrap();
        let tol = Scalar::Rational(BigRational::new(BigInt::one(), BigInt::from(1u64 << 40)));
        let r = chi.largest_root(&tol).unwrap();
        assert!((r.to_f64() - 2.0).abs() < 1e-9);

        // Product with v_i = e_i gives (t - 1)^d.
        let prod = families::coordinate_product(3).unwrap();
        let vs: Vec<Vector> = (0..3).map(|i| Vector::basis(3, i, Backend::Rational)).collect();
        let chi = mixed_char_poly(&prod, &vs).unwrap();
        let expected = UniPoly::from_roots(
            Backend::Rational,
            &vec![Scalar::one(Backend::Rational); 3],
        );
        assert_eq!(chi, expected);

        // Zero vectors only: h(e) t^d.
        let chi = mixed_char_poly(&prod, &[Vector::zero(3, Backend::Rational)]).unwrap();
        assert_eq!(chi.degree(), Some(3));
        assert!(chi.coeff(0).is_zero() && chi.coeff(1).is_zero() && chi.coeff(2).is_zero());
    }

    #[test]
    fn delta_examples() {
        let one = BigRational::one();
        // delta(alpha, 1) = alpha.
        let d = delta_bound(&one, 1).unwrap();
        assert_eq!(d.as_rational(), Some(&one));

        // delta(1, 2) = 1 + sqrt(3)/2 ~ 1.866025.
        let d = delta_bound(&one, 2).unwrap();
        assert!((d.to_f64() - 1.8660254).abs() < 1e-6);

        // Large m approaches (1 + sqrt(alpha))^2.
        let d = delta_bound(&one, 1_000_000).unwrap();
        assert!((d.to_f64() - 4.0).abs() < 1e-5);

        assert!(matches!(
            delta_bound(&BigRational::new(BigInt::one(), BigInt::from(100)), 2),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn root_bound_pass_and_boundary() {
        // Product, v_i = e_i, eps = 1, m = d: largest root 1 <= delta(1, d).
        let prod = families::coordinate_product(4).unwrap();
        let vs: Vec<Vector> = (0..4).map(|i| Vector::basis(4, i, Backend::Rational)).collect();
        let report = root_bound_check(&prod, &vs, &BigRational::one()).unwrap();
        assert!(report.pass && !report.tight);

        // m = 1, v = e, eps = d: zero margin, still a pass.
        let d4 = BigRational::from_integer(BigInt::from(4));
        let report = root_bound_check(&prod, &[prod.e().clone()], &d4).unwrap();
        assert!(report.pass && report.tight);
        assert!(report.margin.abs() < 1e-9);

        // Traces above eps violate the precondition.
        let small = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(matches!(
            root_bound_check(&prod, &[prod.e().clone()], &small),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn xi_examples() {
        let prod = families::coordinate_product(2).unwrap();
        let point = Vector::all_ones(2, Backend::Rational);
        let v = Vector::basis(2, 0, Backend::Rational);
        assert_eq!(
            xi(prod.h(), &v, &point).unwrap(),
            Scalar::one(Backend::Rational)
        );

        // Degree-one homogeneity: xi(2 point) = 2 xi(point).
        let p2 = point.scale(&Scalar::from_int(2, Backend::Rational));
        assert_eq!(
            xi(prod.h(), &v, &p2).unwrap(),
            Scalar::from_int(2, Backend::Rational)
        );

        let zero = Vector::zero(2, Backend::Rational);
        assert!(matches!(
            xi(prod.h(), &v, &zero),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn transfer_operator_matches_hand_expansion() {
        // h = x1 x2, v = (a, b), k = 1: T applied to (t-a)(t-b) equals
        // t^2 - 2t + (a+b) - 2ab (expanded by hand).
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 5);
        let f = UniPoly::from_roots(Backend::Rational, &[a.clone(), b.clone()]);
        let img = transfer_operator(1, 2, &f).unwrap();
        let expected = UniPoly::from_coeffs(
            Backend::Rational,
            vec![
                &(&a + &b) - &(&(&a * &b) + &(&a * &b)),
                Scalar::from_int(-2, Backend::Rational),
                Scalar::one(Backend::Rational),
            ],
        );
        assert_eq!(img, expected);
    }

    #[test]
    fn transfer_operator_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                UniPoly::from_coeffs(
                    Backend::Rational,
                    (0..5)
                        .map(|_| Scalar::ratio(rng.random_range(-6..=6), rng.random_range(1..=3)))
                        .collect(),
                )
            };
            let f = mk(&mut rng);
            let g = mk(&mut rng);
            let lhs = transfer_operator(2, 4, &f.add(&g)).unwrap();
            let rhs = transfer_operator(2, 4, &f)
                .unwrap()
                .add(&transfer_operator(2, 4, &g).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn candidate_poly_agrees_with_operator_routes() {
        let ctx = families::coordinate_product(2).unwrap();
        let v = Vector::new(vec![Scalar::ratio(1, 3), Scalar::ratio(1, 4)]).unwrap();
        let k = 2;
        let gv = candidate_poly(&ctx, &v, k).unwrap();

        // Route 1: chi with k copies of v plus the residual e - kv.
        let resid = ctx
            .e()
            .sub(&v.scale(&Scalar::from_int(k as i64, Backend::Rational)))
            .unwrap();
        let mut vs = vec![v.clone(); k];
        vs.push(resid);
        let chi = mixed_char_poly(&ctx, &vs).unwrap();
        assert_eq!(gv, chi);

        // Route 2: transfer operator applied to h(te - v).
        let f = ctx.restriction(&v).unwrap();
        let img = transfer_operator(k, ctx.degree(), &f).unwrap();
        assert_eq!(gv, img);
    }

    #[test]
    fn transfer_operator_preserves_real_rootedness_on_box_rooted() {
        // (t - 1/(2k))^d stays real-rooted under the operator.
        let k = 2;
        let d = 3;
        let root = Scalar::ratio(1, 2 * k as i64);
        let f = UniPoly::from_roots(Backend::Rational, &vec![root; d]);
        let img = transfer_operator(k, d, &f).unwrap();
        assert!(img.is_real_rooted().unwrap());
    }

    #[test]
    fn explore_m1_degenerate() {
        // h = x1 x2, eps = 2, m = 1: only v = e is feasible; the largest
        // root is d = delta(2, 1) = 2.
        let ctx = families::coordinate_product(2).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        let report = explore(&ctx, &two, 1, 0, 7).unwrap();
        assert!((report.best_root - 2.0).abs() < 1e-6);
        assert!(report.best_within_delta);
        assert!(!report.best_exceeds_candidate);
    }

    #[test]
    fn explore_respects_ceiling_and_candidate() {
        let ctx = families::elementary_symmetric(4, 2).unwrap();
        let eps = BigRational::new(BigInt::from(3), BigInt::from(4));
        let report = explore(&ctx, &eps, 4, 60, 11).unwrap();
        assert!(report.best_within_delta);
        assert!(!report.best_exceeds_candidate);

        let tiny = BigRational::new(BigInt::from(1), BigInt::from(4));
        assert!(matches!(
            explore(&ctx, &tiny, 4, 10, 3),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn gamma_membership_by_ray() {
        let ctx = families::coordinate_product(2).unwrap();
        let vs = [
            Vector::basis(2, 0, Backend::Rational),
            Vector::basis(2, 1, Backend::Rational),
        ];
        let mp = mixed_operator_poly(&ctx, &vs, &caps()).unwrap();
        // (e, 0, 0) sits inside; (e, large positive y) does not.
        let inside = ctx
            .e()
            .concat(&Vector::zero(2, Backend::Rational))
            .unwrap();
        assert!(mp.gamma_contains(&inside).unwrap());
        let outside = ctx
            .e()
            .concat(&Vector::from_ints(&[5, 5], Backend::Rational))
            .unwrap();
        assert!(!mp.gamma_contains(&outside).unwrap());
    }
}
