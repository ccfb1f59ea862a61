//! Sharpness experiments: exact block restrictions of elementary
//! symmetric polynomials, their identification with shifted Jacobi
//! polynomials, the limiting largest zero, and convergence tables that
//! pit the lower bound against the partition bound.
//!
//! High-degree largest zeros are isolated through the exact three-term
//! recurrence evaluated as a Sturm-type value chain (valid for
//! parameters above -1), instead of a generic square-free Sturm chain
//! whose remainders would be ruinous at degree 200. The two routes are
//! cross-checked at small degree in the tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::QuadExt;
use crate::scalar::{rational_to_f64, Backend, Scalar};
use crate::unipoly::UniPoly;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binom(n: i64, k: i64) -> BigRational {
    if k < 0 || k > n {
        return BigRational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// Exact expansion of the first-block restriction of the degree-d
/// elementary symmetric polynomial on `m*k` variables:
/// `sum_j C(m(k-1), j) C(m, d-j) (t-1)^{d-j} t^j`.
pub fn block_restriction_poly(m: usize, k: usize, d: usize) -> Result<UniPoly> {
    if m < 1 || k < 1 || d > m * k {
        return Err(Error::Infeasible(format!(
            "need m, k >= 1 and d <= m*k; got m = {m}, k = {k}, d = {d}"
        )));
    }
    let mut acc = UniPoly::zero(Backend::Rational);
    let t = UniPoly::from_coeffs(
        Backend::Rational,
        vec![Scalar::ratio(0, 1), Scalar::ratio(1, 1)],
    );
    let t_minus_1 = UniPoly::from_coeffs(
        Backend::Rational,
        vec![Scalar::ratio(-1, 1), Scalar::ratio(1, 1)],
    );
    for j in 0..=d {
        let c = binom((m * (k - 1)) as i64, j as i64) * binom(m as i64, (d - j) as i64);
        if c.is_zero() {
            continue;
        }
        let mut term = UniPoly::constant(Scalar::Rational(c));
        for _ in 0..(d - j) {
            term = term.mul(&t_minus_1);
        }
        for _ in 0..j {
            term = term.mul(&t);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Outcome of the coefficientwise comparison between the block
/// restriction and the shifted Jacobi polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityVerdict {
    pub m: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: i64,
    pub beta: i64,
    pub equal: bool,
    pub lhs: UniPoly,
    pub rhs: UniPoly,
}

/// Check `e_d`-block restriction against `P_d^{(mk-m-d, m-d)}(2t-1)`
/// under the one normalization fixed globally (`P_d(1) = C(d+alpha, d)`).
/// Reports both sides on a mismatch.
pub fn jacobi_identity_check(m: usize, k: usize, d: usize) -> Result<IdentityVerdict> {
    let alpha = (m * k) as i64 - m as i64 - d as i64;
    let beta = m as i64 - d as i64;
    if alpha <= -1 || beta <= -1 {
        return Err(Error::Infeasible(format!(
            "classical recurrence needs alpha, beta > -1; got ({alpha}, {beta})"
        )));
    }
    let lhs = block_restriction_poly(m, k, d)?;
    let jac = UniPoly::jacobi(d, &big(alpha), &big(beta));
    let rhs = jac.compose_linear(
        &Scalar::from_int(2, Backend::Rational),
        &Scalar::from_int(-1, Backend::Rational),
    );
    Ok(IdentityVerdict {
        m,
        k,
        d,
        alpha,
        beta,
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Limiting largest zero for Jacobi parameters growing linearly with the
/// degree, in the classical variable and in the shifted `t = (1+x)/2`
/// variable.
#[derive(Debug, Clone, Serialize)]
pub struct LimitValue {
    pub x_form: QuadExt,
    pub t_form: QuadExt,
}

/// `b^2 - a^2 + sqrt((a^2 + b^2 - 1)^2 - 4 a^2 b^2)` with the shifted
/// form alongside.
pub fn asymptotic_limit(a: &BigRational, b: &BigRational) -> Result<LimitValue> {
    let a2 = a * a;
    let b2 = b * b;
    let inner = &a2 + &b2 - BigRational::one();
    let radicand = &inner * &inner - big(4) * &a2 * &b2;
    if radicand.is_negative() {
        return Err(Error::NegativeRadicand(format!(
            "(a^2+b^2-1)^2 - 4a^2b^2 = {radicand}"
        )));
    }
    let x_form = QuadExt::new(&b2 - &a2, BigRational::one(), radicand)?;
    let t_form = x_form
        .add_rational(&BigRational::one())
        .scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    Ok(LimitValue { x_form, t_form })
}

/// The same limit expressed directly in `(k, eps)`:
/// `1/k + eps (k-2)/k + (2/k) sqrt((k-1)(eps - eps^2))`.
pub fn closed_form_limit(k: usize, eps: &BigRational) -> Result<QuadExt> {
    if k < 1 {
        return Err(Error::Precondition("need k >= 1".into()));
    }
    let kq = big(k as i64);
    let a = BigRational::one() / &kq + eps * (&kq - big(2)) / &kq;
    let b = big(2) / &kq;
    let r = (&kq - BigRational::one()) * (eps - &(eps * eps));
    QuadExt::new(a, b, r)
}

/// Limit through both routes with the agreement asserted exactly.
pub fn limit_for(k: usize, eps: &BigRational) -> Result<LimitValue> {
    let one = BigRational::one();
    let a = &one - &(&one / big(k as i64)) - eps;
    let b = &one / big(k as i64) - eps;
    let lim = asymptotic_limit(&a, &b)?;
    let closed = closed_form_limit(k, eps)?;
    if !lim.t_form.eq_exact(&closed) {
        return Err(Error::Precondition(format!(
            "limit routes disagree: {} vs {}",
            lim.t_form.to_text(),
            closed.to_text()
        )));
    }
    Ok(lim)
}

/// Large-m partition bound `1/k + eps + 2 sqrt(eps/k)` the lower bound
/// is compared against.
pub fn large_m_upper_bound(k: usize, eps: &BigRational) -> Result<QuadExt> {
    let kq = big(k as i64);
    QuadExt::new(BigRational::one() / &kq + eps, big(2), eps / &kq)
}

// ---- exact extreme-zero isolation via the recurrence value chain ----

/// Signs of `P_0(x), ..., P_d(x)` at `x = 2t - 1`, evaluated through the
/// exact recurrence. For `alpha, beta > -1` the recurrence coefficients
/// are positive, making this a Sturm-type chain: the variation count
/// equals the number of zeros of `P_d` above `x`.
fn shifted_jacobi_variations(
    d: usize,
    alpha: &BigRational,
    beta: &BigRational,
    t: &BigRational,
) -> (usize, bool) {
    let x = big(2) * t - BigRational::one();
    let two = big(2);
    let mut prev = BigRational::one();
    let mut signs: Vec<i8> = vec![1];
    if d == 0 {
        return (0, false);
    }
    let mut cur = ((alpha + beta + &two) * &x + (alpha - beta)) / &two;
    signs.push(sign_of(&cur));
    for j in 2..=d {
        let jq = big(j as i64);
        let a2j = &two * &jq + alpha + beta;
        let div = &two * &jq * (&jq + alpha + beta) * (&a2j - &two);
        let ax = (&a2j - BigRational::one()) * &a2j * (&a2j - &two);
        let b = (&a2j - BigRational::one()) * (alpha * alpha - beta * beta);
        let c = &two * (&jq + alpha - BigRational::one()) * (&jq + beta - BigRational::one()) * &a2j;
        let next = ((ax * &x + b) * &cur - c * &prev) / div;
        signs.push(sign_of(&next));
        prev = cur;
        cur = next;
    }
    let head_is_zero = *signs.last().unwrap() == 0;
    let mut count = 0;
    let mut last = 0i8;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    (count, head_is_zero)
}

fn sign_of(v: &BigRational) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Bracket `(lo, hi]` of width below `width` for the largest zero of
/// `P_d^{(alpha,beta)}(2t - 1)`; all zeros lie in `(0, 1)` for
/// parameters above -1.
pub fn shifted_jacobi_largest_zero(
    d: usize,
    alpha: &BigRational,
    beta: &BigRational,
    width: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if d == 0 {
        return Err(Error::Precondition("degree zero has no zeros".into()));
    }
    if alpha <= &big(-1) || beta <= &big(-1) {
        return Err(Error::Infeasible(
            "recurrence chain requires alpha, beta > -1".into(),
        ));
    }
    let count_above = |t: &BigRational| -> usize {
        let (mut count, mut hit) = shifted_jacobi_variations(d, alpha, beta, t);
        let mut nudge = BigRational::new(BigInt::one(), BigInt::from(u64::MAX));
        while hit {
            // Landed exactly on a zero of P_d; step just below it.
            let shifted = t - &nudge;
            let (c, h) = shifted_jacobi_variations(d, alpha, beta, &shifted);
            count = c.saturating_sub(1);
            hit = h;
            nudge = &nudge / big(2);
        }
        count
    };
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    debug_assert!(count_above(&lo) >= 1);
    while &hi - &lo >= *width {
        let mid = (&lo + &hi) / big(2);
        if count_above(&mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// One row of the convergence experiment.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessRow {
    pub d: usize,
    pub m: usize,
    pub alpha: i64,
    pub beta: i64,
    pub largest_zero: f64,
    pub limit: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

/// Largest zeros of the block-restriction family for fixed `(k, eps)`
/// with `m = ceil(d / (eps k))`, next to the limiting value, the
/// no-better-bound threshold, and the large-m partition bound.
pub fn convergence_table(k: usize, eps: &BigRational, ds: &[usize]) -> Result<Vec<SharpnessRow>> {
    if k < 2 {
        return Err(Error::Precondition("need k >= 2".into()));
    }
    let one = BigRational::one();
    if eps > &(&one - &(&one / big(k as i64))) {
        return Err(Error::Infeasible(format!(
            "regime requires eps <= 1 - 1/k; got eps = {eps}"
        )));
    }
    if !eps.is_positive() {
        return Err(Error::Infeasible("eps must be positive".into()));
    }
    let lim = limit_for(k, eps)?;
    let upper = large_m_upper_bound(k, eps)?;
    let limit_f = lim.t_form.to_f64();
    let width = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)));
    let mut rows = Vec::with_capacity(ds.len());
    for &d in ds {
        if d == 0 {
            return Err(Error::Infeasible("degree zero row".into()));
        }
        let m_ratio = (big(d as i64) / (eps * big(k as i64))).ceil();
        let m: i64 = m_ratio
            .numer()
            .try_into()
            .map_err(|_| Error::Infeasible("m out of range".into()))?;
        let m = m as usize;
        let alpha = (m * k) as i64 - m as i64 - d as i64;
        let beta = m as i64 - d as i64;
        if alpha <= -1 || beta <= -1 {
            return Err(Error::Infeasible(format!(
                "row d = {d} leaves the classical parameter regime"
            )));
        }
        let (lo, hi) = shifted_jacobi_largest_zero(d, &big(alpha), &big(beta), &width)?;
        rows.push(SharpnessRow {
            d,
            m,
            alpha,
            beta,
            largest_zero: (rational_to_f64(&lo) + rational_to_f64(&hi)) / 2.0,
            limit: limit_f,
            lower_bound: limit_f,
            upper_bound: upper.to_f64(),
        });
    }
    Ok(rows)
}

/// Render rows as the fixed-column CSV table.
pub fn table_to_csv(rows: &[SharpnessRow]) -> String {
    let mut out = String::from("d,m,alpha,beta,largest_zero,limit,lower_bound,upper_bound\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.12},{:.12},{:.12},{:.12}\n",
            r.d, r.m, r.alpha, r.beta, r.largest_zero, r.limit, r.lower_bound, r.upper_bound
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{MultiPoly, Vector};

    #[test]
    fn block_restriction_examples() {
        // m = 2, k = 2, d = 2 gives 6t^2 - 6t + 1.
        let p = block_restriction_poly(2, 2, 2).unwrap();
        assert_eq!(
            p.coeffs_vec(),
            vec![Scalar::ratio(1, 1), Scalar::ratio(-6, 1), Scalar::ratio(6, 1)]
        );
        // d = 0 is the constant 1.
        let p = block_restriction_poly(3, 2, 0).unwrap();
        assert_eq!(p, UniPoly::constant(Scalar::ratio(1, 1)));
        // m = 1, k = 2, d = 1 gives 2t - 1.
        let p = block_restriction_poly(1, 2, 1).unwrap();
        assert_eq!(p.coeffs_vec(), vec![Scalar::ratio(-1, 1), Scalar::ratio(2, 1)]);
    }

    #[test]
    fn block_restriction_matches_multivariate_route() {
        // Independent code path: restrict e_d on mk variables along
        // t*1 - e_{S_1} directly.
        for (m, k, d) in [(2usize, 2usize, 2usize), (3, 2, 3), (2, 3, 4), (4, 2, 1)] {
            let formula = block_restriction_poly(m, k, d).unwrap();
            let n = m * k;
            let ed = MultiPoly::elementary_symmetric(n, d).unwrap();
            let mut base = Vector::zero(n, Backend::Rational);
            for i in 0..m {
                base.set_coord(i, Scalar::ratio(-1, 1));
            }
            let direct = ed
                .restrict_to_line(&base, &Vector::all_ones(n, Backend::Rational))
                .unwrap();
            assert_eq!(formula, direct, "mismatch at ({m}, {k}, {d})");
        }
    }

    #[test]
    fn jacobi_identity_examples() {
        let v = jacobi_identity_check(2, 2, 2).unwrap();
        assert!(v.equal && v.alpha == 0 && v.beta == 0);
        let v = jacobi_identity_check(1, 2, 1).unwrap();
        assert!(v.equal);
        // Out of the classical regime: beta <= -1.
        assert!(jacobi_identity_check(1, 3, 2).is_err());
    }

    #[test]
    fn asymptotic_limit_examples() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        // a = b = 1/4: x-form sqrt(3)/2, t-form (1 + sqrt(3)/2)/2.
        let lim = asymptotic_limit(&q(1, 4), &q(1, 4)).unwrap();
        assert!((lim.x_form.to_f64() - 0.8660254037844386).abs() < 1e-12);
        assert!((lim.t_form.to_f64() - 0.9330127018922193).abs() < 1e-12);

        // Degenerate a = b = 0 gives 1 in both forms.
        let lim = asymptotic_limit(&q(0, 1), &q(0, 1)).unwrap();
        assert_eq!(lim.x_form.as_rational(), Some(&BigRational::one()));
        assert_eq!(lim.t_form.as_rational(), Some(&BigRational::one()));

        // Closed form for k = 2, eps = 1/4 agrees exactly.
        let lim = limit_for(2, &q(1, 4)).unwrap();
        let closed = closed_form_limit(2, &q(1, 4)).unwrap();
        assert!(lim.t_form.eq_exact(&closed));
        assert!((closed.to_f64() - 0.9330127018922193).abs() < 1e-12);
    }

    #[test]
    fn closed_form_agreement_on_grid() {
        for k in 2..=4usize {
            for (n, dnm) in [(1i64, 8i64), (1, 4), (3, 8), (1, 2)] {
                let eps = BigRational::new(BigInt::from(n), BigInt::from(dnm));
                let kb = BigRational::from_integer(BigInt::from(k as i64));
                if eps > BigRational::one() - BigRational::one() / kb {
                    continue;
                }
                let lim = limit_for(k, &eps).unwrap();
                let closed = closed_form_limit(k, &eps).unwrap();
                assert!(lim.t_form.eq_exact(&closed), "k = {k}, eps = {eps}");
            }
        }
    }

    #[test]
    fn recurrence_chain_matches_generic_sturm_at_small_degree() {
        let width = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
        for (d, alpha, beta) in [(2usize, 0i64, 0i64), (4, 2, 1), (6, 6, 6), (5, 3, 0)] {
            let (lo, hi) =
                shifted_jacobi_largest_zero(d, &big(alpha), &big(beta), &width).unwrap();
            let poly = UniPoly::jacobi(d, &big(alpha), &big(beta)).compose_linear(
                &Scalar::from_int(2, Backend::Rational),
                &Scalar::from_int(-1, Backend::Rational),
            );
            let (glo, ghi) = poly.largest_root_bracket(&width).unwrap();
            // Brackets for the same zero must overlap.
            assert!(lo <= ghi && glo <= hi, "disjoint brackets at d = {d}");
        }
    }

    #[test]
    fn table_roots_stay_in_unit_interval() {
        let q = BigRational::new(BigInt::one(), BigInt::from(4));
        let rows = convergence_table(2, &q, &[2, 6, 12]).unwrap();
        for r in &rows {
            assert!(r.largest_zero > 0.0 && r.largest_zero < 1.0);
            // Shifted Jacobi polynomials here are real-rooted with all
            // roots in (0,1); cross-check with the generic machinery.
            let poly = UniPoly::jacobi(r.d, &big(r.alpha), &big(r.beta)).compose_linear(
                &Scalar::from_int(2, Backend::Rational),
                &Scalar::from_int(-1, Backend::Rational),
            );
            assert!(poly.is_real_rooted().unwrap());
            assert_eq!(poly.count_roots_le(&BigRational::zero()).unwrap(), 0);
        }
    }

    #[test]
    fn convergence_table_shape() {
        let q = BigRational::new(BigInt::one(), BigInt::from(4));
        let rows = convergence_table(2, &q, &[2, 20]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].m, 4);
        assert_eq!((rows[0].alpha, rows[0].beta), (2, 2));
        assert_eq!(rows[1].m, 40);
        assert!((rows[0].limit - 0.9330127).abs() < 1e-6);
        // Lower bound sits strictly below the large-m partition bound.
        assert!(rows[0].lower_bound < rows[0].upper_bound);
        let csv = table_to_csv(&rows);
        assert!(csv.starts_with("d,m,alpha,beta,"));
        assert_eq!(csv.lines().count(), 3);

        // Infeasible eps rejected.
        let big_eps = BigRational::new(BigInt::from(3), BigInt::from(4));
        assert!(convergence_table(2, &big_eps, &[2]).is_err());
    }
}
