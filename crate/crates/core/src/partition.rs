//! The derandomized partition engine: rank-one instances, conditional
//! expectations over the k-fold block product, the greedy walk that
//! realizes the existence bound, an exhaustive ground-truth oracle, and
//! certificate verification.
//!
//! The conditional expectation is never materialized as a polynomial in
//! all `k * n` block variables. Assigned vectors are rank one and enter
//! by substitution (a base shift of their block); unassigned vectors keep
//! the operator path, expanded blockwise into a multilinear table so the
//! cost stays polynomial in the table sizes instead of exponential in
//! completions.

use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyperbolic::{families, HyperbolicContext, FLOAT_BOUNDARY_TOL};
use crate::mixed::delta_bound;
use crate::multipoly::{Caps, MultiPoly, Vector};
use crate::quad::QuadExt;
use crate::scalar::{rational_to_f64, Backend, Scalar};
use crate::unipoly::UniPoly;

const FLOAT_SUM_TOL: f64 = 1e-9;
const DERIV_TABLE_CAP: usize = 200_000;

/// Rank-one vectors resolving the direction, with the part count and the
/// trace ceiling they are to be split under.
#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    #[serde(rename = "context")]
    ctx: HyperbolicContext,
    vectors: Vec<Vector>,
    k: usize,
    eps: Scalar,
    exact: bool,
}

// Loading re-runs the full invariant validation; eps and the exactness
// tag are recomputed rather than trusted.
impl<'de> serde::Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(serde::Deserialize)]
        struct Repr {
            context: HyperbolicContext,
            vectors: Vec<Vector>,
            k: usize,
        }
        let repr = Repr::deserialize(deserializer)?;
        let backend = repr.context.backend();
        let vectors = repr
            .vectors
            .into_iter()
            .map(|v| match backend {
                Backend::Float => v.to_float_backend(),
                Backend::Rational => v,
            })
            .collect();
        Instance::new(repr.context, vectors, repr.k).map_err(D::Error::custom)
    }
}

impl Instance {
    /// Validate the hypotheses: each vector in the closed cone with rank
    /// at most one, and the sum equal to the direction (within 1e-9 per
    /// coordinate for float instances).
    pub fn new(ctx: HyperbolicContext, vectors: Vec<Vector>, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Precondition("need at least one part".into()));
        }
        if vectors.is_empty() {
            return Err(Error::Precondition("need at least one vector".into()));
        }
        let backend = ctx.backend();
        let mut sum = Vector::zero(ctx.nvars(), backend);
        for u in &vectors {
            if u.dim() != ctx.nvars() || (u.dim() > 0 && u.backend() != backend) {
                return Err(Error::DimensionMismatch(
                    "vector does not match the context".into(),
                ));
            }
            sum = sum.add(u)?;
        }
        match backend {
            Backend::Rational => {
                if sum != *ctx.e() {
                    return Err(Error::Precondition(format!(
                        "vectors sum to {sum}, not the direction {}",
                        ctx.e()
                    )));
                }
            }
            Backend::Float => {
                for (a, b) in sum.coords().iter().zip(ctx.e().coords()) {
                    if (a.to_f64() - b.to_f64()).abs() > FLOAT_SUM_TOL {
                        return Err(Error::Precondition(format!(
                            "vector sum misses the direction beyond {FLOAT_SUM_TOL}"
                        )));
                    }
                }
            }
        }
        let mut eps = Scalar::zero(backend);
        for (i, u) in vectors.iter().enumerate() {
            if ctx.rank(u)? > 1 {
                return Err(Error::Precondition(format!(
                    "vector {} has rank above one",
                    i + 1
                )));
            }
            match backend {
                Backend::Rational => {
                    if !ctx.cone_membership(u, crate::hyperbolic::ConeMode::Closed)? {
                        return Err(Error::OutsideCone(format!("vector {}", i + 1)));
                    }
                }
                Backend::Float => {
                    let sp = ctx.spectrum(u)?;
                    if sp.lambda_min().to_f64() < -FLOAT_BOUNDARY_TOL {
                        return Err(Error::OutsideCone(format!(
                            "vector {} has an eigenvalue below -{FLOAT_BOUNDARY_TOL}",
                            i + 1
                        )));
                    }
                }
            }
            let tr = ctx.trace(u)?;
            if eps.cmp_same(&tr) == Ordering::Less {
                eps = tr;
            }
        }
        let exact = backend == Backend::Rational;
        Ok(Instance {
            ctx,
            vectors,
            k,
            eps,
            exact,
        })
    }

    pub fn ctx(&self) -> &HyperbolicContext {
        &self.ctx
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn parts(&self) -> usize {
        self.k
    }

    pub fn eps(&self) -> &Scalar {
        &self.eps
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The certified bound `delta(k * eps, m) / k` for this instance.
    pub fn bound(&self) -> Result<BoundValue> {
        let m = self.len();
        match &self.eps {
            Scalar::Rational(eps) => {
                let alpha = eps * BigRational::from_integer(BigInt::from(self.k as i64));
                let delta = delta_bound(&alpha, m)?;
                let inv_k = BigRational::new(BigInt::one(), BigInt::from(self.k as u64));
                Ok(BoundValue::Exact(delta.scale(&inv_k)))
            }
            Scalar::Float(eps) => {
                let alpha = BigRational::from_float(eps * self.k as f64)
                    .ok_or_else(|| Error::Parse("non-finite eps".into()))?;
                let delta = delta_bound(&alpha, m)?;
                Ok(BoundValue::Approx(delta.to_f64() / self.k as f64))
            }
        }
    }

    fn part_sum(&self, assignment: &[usize], part: usize) -> Result<Vector> {
        let mut sum = Vector::zero(self.ctx.nvars(), self.ctx.backend());
        for (j, &c) in assignment.iter().enumerate() {
            if c == part {
                sum = sum.add(&self.vectors[j])?;
            }
        }
        Ok(sum)
    }
}

/// Exact or tolerance-tagged bound value.
#[derive(Debug, Clone)]
pub enum BoundValue {
    Exact(QuadExt),
    Approx(f64),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(q) => q.to_f64(),
            BoundValue::Approx(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&QuadExt> {
        match self {
            BoundValue::Exact(q) => Some(q),
            BoundValue::Approx(_) => None,
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Exact(q) => q.serialize(serializer),
            BoundValue::Approx(v) => {
                let mut st = serializer.serialize_struct("BoundValue", 1)?;
                st.serialize_field("decimal", v)?;
                st.end()
            }
        }
    }
}

impl<'de> serde::Deserialize<'de> for BoundValue {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(serde::Deserialize)]
        struct Repr {
            exact: Option<String>,
            decimal: f64,
        }
        let repr = Repr::deserialize(deserializer)?;
        match repr.exact {
            Some(text) => Ok(BoundValue::Exact(
                QuadExt::parse_text(&text).map_err(D::Error::custom)?,
            )),
            None => Ok(BoundValue::Approx(repr.decimal)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMethod {
    Greedy,
    Exhaustive,
}

/// A produced partition with everything needed to re-verify it.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct PartitionCertificate {
    pub method: PartitionMethod,
    pub k: usize,
    pub assignment: Vec<usize>,
    pub part_spectra: Vec<Vec<Scalar>>,
    pub max_seminorm: Scalar,
    pub bound: BoundValue,
    pub pass: bool,
    /// Pass with an empty part; the bound held without splitting work.
    pub trivial_pass: bool,
    pub greedy_trace: Vec<Scalar>,
    pub intermediates_real_rooted: Option<bool>,
}

// ---- conditional expectation ----

/// Directional-derivative closure of `h` under products of the unassigned
/// vectors, keyed by subset mask (compressed to the unassigned indices).
fn derivative_tables(
    h: &MultiPoly,
    us: &[Vector],
    unassigned: &[usize],
    max_order: usize,
) -> Result<HashMap<u64, MultiPoly>> {
    let nu = unassigned.len();
    if nu > 60 {
        return Err(Error::CapsExceeded("more than 60 unassigned vectors".into()));
    }
    let mut cache: HashMap<u64, MultiPoly> = HashMap::new();
    cache.insert(0, h.clone());
    let mut frontier = vec![0u64];
    for _ in 0..max_order.min(nu) {
        let mut next = Vec::new();
        for &mask in &frontier {
            let low = if mask == 0 {
                nu
            } else {
                mask.trailing_zeros() as usize
            };
            for b in 0..low {
                let parent = cache.get(&mask).expect("parent in cache");
                let dp = parent.directional_derivative(&us[unassigned[b]])?;
                if dp.is_zero() {
                    continue;
                }
                let nm = mask | (1 << b);
                cache.insert(nm, dp);
                next.push(nm);
            }
            if cache.len() > DERIV_TABLE_CAP {
                return Err(Error::CapsExceeded(format!(
                    "derivative table above {DERIV_TABLE_CAP} entries"
                )));
            }
        }
        frontier = next;
    }
    Ok(cache)
}

/// Conditional expectation of the fully-assigned characteristic
/// polynomial given a prefix assignment, as a univariate polynomial.
///
/// Equals the brute-force average over all completions of the prefix;
/// the blockwise multilinear expansion below is the operator-path
/// evaluation of that average.
pub fn expected_charpoly(inst: &Instance, partial: &[usize]) -> Result<UniPoly> {
    let m = inst.len();
    let k = inst.parts();
    if partial.len() > m {
        return Err(Error::Precondition("prefix longer than the instance".into()));
    }
    if partial.iter().any(|&c| c >= k) {
        return Err(Error::Precondition("part index out of range".into()));
    }
    let ctx = inst.ctx();
    let backend = ctx.backend();
    let n = ctx.nvars();
    let d = ctx.degree();

    let k_scalar = Scalar::from_int(k as i64, backend);
    let mut shifts = vec![Vector::zero(n, backend); k];
    for (j, &c) in partial.iter().enumerate() {
        shifts[c] = shifts[c].add(&inst.vectors()[j].scale(&k_scalar))?;
    }
    let unassigned: Vec<usize> = (partial.len()..m).collect();
    let cache = derivative_tables(ctx.h(), inst.vectors(), &unassigned, d)?;
    let mut masks: Vec<u64> = cache.keys().copied().collect();
    masks.sort_unstable();

    // Per-block table: signed restrictions of each derivative along the
    // block's shifted line.
    let mut acc: Vec<(u64, UniPoly)> = vec![(0, UniPoly::constant(Scalar::one(backend)))];
    let mut result = UniPoly::zero(backend);
    for (i, shift) in shifts.iter().enumerate() {
        let base = shift.neg();
        let mut table: Vec<(u64, UniPoly)> = Vec::with_capacity(masks.len());
        for &mask in &masks {
            let f = cache[&mask].restrict_to_line(&base, ctx.e())?;
            if f.is_zero() {
                continue;
            }
            let signed = if mask.count_ones() % 2 == 1 { f.neg() } else { f };
            table.push((mask, signed));
        }
        if i + 1 < k {
            let mut next: HashMap<u64, UniPoly> = HashMap::new();
            for (ma, pa) in &acc {
                for (mb, qb) in &table {
                    if ma & mb != 0 {
                        continue;
                    }
                    let prod = pa.mul(qb);
                    next.entry(ma | mb)
                        .and_modify(|p| *p = p.add(&prod))
                        .or_insert(prod);
                }
            }
            acc = next.into_iter().collect();
            acc.sort_unstable_by_key(|(m, _)| *m);
        } else {
            // Last block: fold straight into the answer.
            for (ma, pa) in &acc {
                for (mb, qb) in &table {
                    if ma & mb == 0 {
                        result = result.add(&pa.mul(qb));
                    }
                }
            }
        }
    }
    if backend == Backend::Rational && !result.is_real_rooted()? {
        return Err(Error::NotRealRooted(
            "conditional expectation; the instance is corrupt".into(),
        ));
    }
    Ok(result)
}

/// Exact-or-float comparison of largest roots used by the greedy walk.
fn less_root(a: &UniPoly, b: &UniPoly) -> Result<bool> {
    match a.backend() {
        Backend::Rational => Ok(a.compare_largest_roots(b)? == Ordering::Less),
        Backend::Float => Ok(a.float_largest_root()? < b.float_largest_root()?),
    }
}

fn root_approx(f: &UniPoly) -> Result<Scalar> {
    match f.backend() {
        Backend::Rational => {
            let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)));
            let (lo, hi) = f.largest_root_bracket(&tol)?;
            Ok(Scalar::Rational(
                (lo + hi) / BigRational::from_integer(BigInt::from(2)),
            ))
        }
        Backend::Float => Ok(Scalar::Float(f.float_largest_root()?)),
    }
}

/// Walk the vectors in order; at each step commit the part whose
/// conditional expectation has the smallest largest root (lowest index
/// on exact ties). The final root never exceeds the starting one.
pub fn greedy_partition(inst: &Instance) -> Result<PartitionCertificate> {
    Ok(greedy_partition_with_polys(inst)?.0)
}

/// Greedy walk that also hands back the chosen conditional expectation
/// after each step (the empty assignment first), for exact trace checks.
pub fn greedy_partition_with_polys(
    inst: &Instance,
) -> Result<(PartitionCertificate, Vec<UniPoly>)> {
    let m = inst.len();
    let k = inst.parts();
    let mut assignment: Vec<usize> = Vec::with_capacity(m);
    let start = expected_charpoly(inst, &assignment)?;
    let mut trace = vec![root_approx(&start)?];
    let mut polys = vec![start];
    for _j in 0..m {
        let mut best_c = 0usize;
        assignment.push(0);
        let mut best_poly = expected_charpoly(inst, &assignment)?;
        for c in 1..k {
            *assignment.last_mut().unwrap() = c;
            let cand = expected_charpoly(inst, &assignment)?;
            if less_root(&cand, &best_poly)? {
                best_poly = cand;
                best_c = c;
            }
        }
        *assignment.last_mut().unwrap() = best_c;
        trace.push(root_approx(&best_poly)?);
        polys.push(best_poly);
    }
    let cert = certificate_for(
        inst,
        assignment,
        PartitionMethod::Greedy,
        trace,
        Some(inst.is_exact()),
    )?;
    Ok((cert, polys))
}

// Lazily refined largest-root data per part mask.
struct MaskInfo {
    poly: UniPoly,
    lo: BigRational,
    hi: BigRational,
    approx: f64,
}

struct MaskTable<'a> {
    inst: &'a Instance,
    infos: HashMap<u64, MaskInfo>,
    ties: HashMap<(u64, u64), Ordering>,
}

impl<'a> MaskTable<'a> {
    fn new(inst: &'a Instance) -> Self {
        MaskTable {
            inst,
            infos: HashMap::new(),
            ties: HashMap::new(),
        }
    }

    fn ensure(&mut self, mask: u64) -> Result<()> {
        if self.infos.contains_key(&mask) {
            return Ok(());
        }
        let mut sum = Vector::zero(self.inst.ctx().nvars(), self.inst.ctx().backend());
        for (j, u) in self.inst.vectors().iter().enumerate() {
            if mask & (1 << j) != 0 {
                sum = sum.add(u)?;
            }
        }
        let poly = self.inst.ctx().restriction(&sum)?;
        let info = match self.inst.ctx().backend() {
            Backend::Rational => {
                let width = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(15)));
                let (lo, hi) = poly.largest_root_bracket(&width)?;
                let approx = (rational_to_f64(&lo) + rational_to_f64(&hi)) / 2.0;
                MaskInfo {
                    poly,
                    lo,
                    hi,
                    approx,
                }
            }
            Backend::Float => {
                let v = poly.float_largest_root()?;
                MaskInfo {
                    poly,
                    lo: BigRational::one(),
                    hi: BigRational::one(),
                    approx: v,
                }
            }
        };
        self.infos.insert(mask, info);
        Ok(())
    }

    fn cmp(&mut self, a: u64, b: u64) -> Result<Ordering> {
        if a == b {
            return Ok(Ordering::Equal);
        }
        self.ensure(a)?;
        self.ensure(b)?;
        if self.inst.ctx().backend() == Backend::Float {
            let (x, y) = (self.infos[&a].approx, self.infos[&b].approx);
            return Ok(x.partial_cmp(&y).unwrap());
        }
        let (ia, ib) = (&self.infos[&a], &self.infos[&b]);
        if ia.hi <= ib.lo {
            return Ok(Ordering::Less);
        }
        if ib.hi <= ia.lo {
            return Ok(Ordering::Greater);
        }
        let key = (a.min(b), a.max(b));
        if let Some(o) = self.ties.get(&key) {
            return Ok(if a <= b { *o } else { o.reverse() });
        }
        let o = ia.poly.compare_largest_roots(&ib.poly)?;
        self.ties.insert(key, if a <= b { o } else { o.reverse() });
        Ok(o)
    }
}

/// Enumerate every assignment (at most 10^6) and return the one
/// minimizing the maximum part seminorm; first in lexicographic order
/// on exact ties.
pub fn exhaustive_partition(inst: &Instance) -> Result<PartitionCertificate> {
    let m = inst.len();
    let k = inst.parts();
    let total = (k as f64).powi(m as i32);
    if total > 1e6 {
        return Err(Error::BudgetExceeded(format!(
            "k^m = {total:.3e} assignments exceed the 10^6 enumeration budget"
        )));
    }
    let mut table = MaskTable::new(inst);
    let mut best: Option<(Vec<usize>, u64)> = None;
    let mut assignment = vec![0usize; m];
    let mut part_masks = vec![0u64; k];
    enumerate(
        inst,
        &mut table,
        &mut assignment,
        &mut part_masks,
        0,
        &mut best,
    )?;
    let (assignment, _) = best.expect("at least one assignment");
    certificate_for(inst, assignment, PartitionMethod::Exhaustive, Vec::new(), None)
}

fn enumerate(
    inst: &Instance,
    table: &mut MaskTable,
    assignment: &mut Vec<usize>,
    part_masks: &mut Vec<u64>,
    depth: usize,
    best: &mut Option<(Vec<usize>, u64)>,
) -> Result<()> {
    let m = inst.len();
    let k = inst.parts();
    if depth == m {
        let mut worst = part_masks[0];
        for &pm in part_masks.iter().skip(1) {
            if table.cmp(pm, worst)? == Ordering::Greater {
                worst = pm;
            }
        }
        match best {
            None => *best = Some((assignment.clone(), worst)),
            Some((_, incumbent)) => {
                if table.cmp(worst, *incumbent)? == Ordering::Less {
                    *best = Some((assignment.clone(), worst));
                }
            }
        }
        return Ok(());
    }
    for c in 0..k {
        assignment[depth] = c;
        part_masks[c] |= 1 << depth;
        enumerate(inst, table, assignment, part_masks, depth + 1, best)?;
        part_masks[c] &= !(1 << depth);
    }
    Ok(())
}

fn certificate_for(
    inst: &Instance,
    assignment: Vec<usize>,
    method: PartitionMethod,
    greedy_trace: Vec<Scalar>,
    intermediates_real_rooted: Option<bool>,
) -> Result<PartitionCertificate> {
    let k = inst.parts();
    let bound = inst.bound()?;
    let mut part_spectra = Vec::with_capacity(k);
    let mut part_polys = Vec::with_capacity(k);
    let mut any_empty = false;
    for c in 0..k {
        let sum = inst.part_sum(&assignment, c)?;
        if sum.is_zero() {
            any_empty = true;
        }
        part_polys.push((inst.ctx().restriction(&sum)?, sum.clone()));
        part_spectra.push(inst.ctx().spectrum(&sum)?.eigenvalues);
    }
    // Max part seminorm: part sums live in the closed cone, so the
    // seminorm is the top eigenvalue.
    let mut worst = 0usize;
    for c in 1..k {
        if less_root(&part_polys[worst].0, &part_polys[c].0)? {
            worst = c;
        }
    }
    let max_seminorm = inst.ctx().seminorm(&part_polys[worst].1)?;
    let pass = verify_bound(inst, &part_polys, &bound)?;
    Ok(PartitionCertificate {
        method,
        k,
        assignment,
        part_spectra,
        max_seminorm,
        bound,
        pass,
        trivial_pass: pass && any_empty,
        greedy_trace,
        intermediates_real_rooted,
    })
}

fn verify_bound(
    inst: &Instance,
    part_polys: &[(UniPoly, Vector)],
    bound: &BoundValue,
) -> Result<bool> {
    for (poly, sum) in part_polys {
        match bound {
            BoundValue::Exact(q) => {
                // Both eigenvalue tails must clear the bound.
                if poly.largest_root_vs_quad(q)? == Ordering::Greater {
                    return Ok(false);
                }
                let down = inst.ctx().restriction(&sum.neg())?;
                if down.largest_root_vs_quad(q)? == Ordering::Greater {
                    return Ok(false);
                }
            }
            BoundValue::Approx(b) => {
                let v = poly.float_largest_root()?;
                let down = inst.ctx().restriction(&sum.neg())?.float_largest_root()?;
                if v.max(down) > b + FLOAT_BOUNDARY_TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Re-verification report for a certificate, recomputed from scratch.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub recomputed_pass: bool,
    pub claimed_pass: bool,
    pub consistent: bool,
    pub max_seminorm: Scalar,
    pub bound: BoundValue,
    pub margin: f64,
    pub part_margins: Vec<f64>,
    pub trivial_pass: bool,
    pub mismatches: Vec<String>,
}

/// Recompute every part spectrum and the bound comparison in
/// exact-or-bracketed arithmetic.
pub fn verify_certificate(inst: &Instance, cert: &PartitionCertificate) -> Result<VerifyReport> {
    let m = inst.len();
    let k = inst.parts();
    if cert.assignment.len() != m {
        return Err(Error::Malformed(format!(
            "assignment covers {} of {} vectors",
            cert.assignment.len(),
            m
        )));
    }
    if cert.k != k {
        return Err(Error::Malformed("certificate part count differs".into()));
    }
    if let Some(&bad) = cert.assignment.iter().find(|&&c| c >= k) {
        return Err(Error::Malformed(format!("part index {bad} out of range")));
    }
    let bound = inst.bound()?;
    let mut part_polys = Vec::with_capacity(k);
    let mut part_margins = Vec::with_capacity(k);
    let mut any_empty = false;
    let mut mismatches = Vec::new();
    for c in 0..k {
        let sum = inst.part_sum(&cert.assignment, c)?;
        if sum.is_zero() {
            any_empty = true;
        }
        let poly = inst.ctx().restriction(&sum)?;
        let semi = inst.ctx().seminorm(&sum)?;
        part_margins.push(bound.to_f64() - semi.to_f64());
        let claimed = &cert.part_spectra.get(c);
        if let Some(spectrum) = claimed {
            let recomputed = inst.ctx().spectrum(&sum)?.eigenvalues;
            if spectrum.len() != recomputed.len()
                || spectrum
                    .iter()
                    .zip(&recomputed)
                    .any(|(a, b)| (a.to_f64() - b.to_f64()).abs() > 1e-8)
            {
                mismatches.push(format!("part {c} spectrum differs from recomputation"));
            }
        }
        part_polys.push((poly, sum));
    }
    let mut worst = 0usize;
    for c in 1..k {
        if less_root(&part_polys[worst].0, &part_polys[c].0)? {
            worst = c;
        }
    }
    let max_seminorm = inst.ctx().seminorm(&part_polys[worst].1)?;
    if (max_seminorm.to_f64() - cert.max_seminorm.to_f64()).abs() > 1e-8 {
        mismatches.push("claimed max seminorm differs from recomputation".into());
    }
    let recomputed_pass = verify_bound(inst, &part_polys, &bound)?;
    if recomputed_pass != cert.pass {
        mismatches.push("claimed pass flag differs from recomputation".into());
    }
    Ok(VerifyReport {
        recomputed_pass,
        claimed_pass: cert.pass,
        consistent: mismatches.is_empty(),
        margin: bound.to_f64() - max_seminorm.to_f64(),
        max_seminorm,
        bound,
        part_margins,
        trivial_pass: recomputed_pass && any_empty,
        mismatches,
    })
}

// ---- instance generation ----

/// `e_d` on `n` variables with the standard basis vectors; the exact
/// benchmark family.
pub fn standard_basis_instance(n: usize, d: usize, k: usize) -> Result<Instance> {
    if d < 1 || d > n {
        return Err(Error::Infeasible(format!(
            "need 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    let ctx = families::elementary_symmetric(n, d)?;
    let us = (0..n)
        .map(|i| Vector::basis(n, i, Backend::Rational))
        .collect();
    Instance::new(ctx, us, k)
}

/// `m` random rank-one symmetric matrices whitened to sum to the
/// identity, flattened into symmetric-determinant coordinates. Float
/// backend; sums hold to 1e-9.
pub fn determinant_rank_one_instance(
    d: usize,
    m: usize,
    k: usize,
    seed: u64,
) -> Result<Instance> {
    if d < 1 || d > 5 {
        return Err(Error::Infeasible("need 1 <= d <= 5".into()));
    }
    if m < d {
        return Err(Error::Infeasible(
            "need at least d rank-one matrices to span".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const MAX_ATTEMPTS: usize = 100;
    for _ in 0..MAX_ATTEMPTS {
        let ws: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..d).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let mut gram = DMatrix::<f64>::zeros(d, d);
        for w in &ws {
            for i in 0..d {
                for j in 0..d {
                    gram[(i, j)] += w[i] * w[j];
                }
            }
        }
        let eig = gram.clone().symmetric_eigen();
        let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let lmax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
        if lmin <= 0.0 || lmax / lmin > 1e8 {
            continue; // near-singular whitening; resample
        }
        // gram^{-1/2} through the eigen basis.
        let mut isqrt = DMatrix::<f64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for t in 0..d {
                    acc += eig.eigenvectors[(i, t)] * eig.eigenvectors[(j, t)]
                        / eig.eigenvalues[t].sqrt();
                }
                isqrt[(i, j)] = acc;
            }
        }
        let nvars = d * (d + 1) / 2;
        let us: Vec<Vector> = ws
            .iter()
            .map(|w| {
                let mut tilde = vec![0.0; d];
                for i in 0..d {
                    for j in 0..d {
                        tilde[i] += isqrt[(i, j)] * w[j];
                    }
                }
                let mut coords = vec![Scalar::Float(0.0); nvars];
                for i in 0..d {
                    for j in i..d {
                        coords[crate::multipoly::sym_index(d, i, j)] =
                            Scalar::Float(tilde[i] * tilde[j]);
                    }
                }
                Vector::new(coords)
            })
            .collect::<Result<_>>()?;
        let h = MultiPoly::symmetric_determinant(d)?.to_float_backend();
        let mut e = Vector::zero(nvars, Backend::Float);
        for i in 0..d {
            e.set_coord(crate::multipoly::sym_index(d, i, i), Scalar::Float(1.0));
        }
        let ctx = HyperbolicContext::certify(h, e, crate::hyperbolic::CertStrategy::Structural)?;
        return Instance::new(ctx, us, k);
    }
    Err(Error::Infeasible(format!(
        "whitening stayed ill-conditioned over {MAX_ATTEMPTS} samples"
    )))
}

/// Blockwise direct sum: contexts multiply over disjoint variable
/// blocks, vectors embed into their block, invariants carry over.
pub fn direct_sum_instance(components: &[Instance]) -> Result<Instance> {
    if components.is_empty() {
        return Err(Error::Precondition("empty direct sum".into()));
    }
    let k = components[0].parts();
    let backend = components[0].ctx().backend();
    if components
        .iter()
        .any(|c| c.parts() != k || c.ctx().backend() != backend)
    {
        return Err(Error::Precondition(
            "direct sum components must share the part count and backend".into(),
        ));
    }
    let total: usize = components.iter().map(|c| c.ctx().nvars()).sum();
    let caps = Caps::default();
    let degree: u32 = components.iter().map(|c| c.ctx().h().degree()).sum();
    caps.check(total, degree)?;
    let mut h = MultiPoly::constant(total, Scalar::one(backend));
    let mut e = Vector::zero(0, backend);
    let mut us = Vec::new();
    let mut evidences = Vec::new();
    let mut offset = 0usize;
    for comp in components {
        h = h.mul_with_caps(&comp.ctx().h().embed(total, offset), &caps)?;
        e = e.concat(comp.ctx().e())?;
        for u in comp.vectors() {
            us.push(u.embed(total, offset));
        }
        evidences.push(comp.ctx().certification().clone());
        offset += comp.ctx().nvars();
    }
    let ctx = HyperbolicContext::from_parts(
        h,
        e,
        crate::hyperbolic::CertEvidence::DirectSum { parts: evidences },
    )?;
    Instance::new(ctx, us, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tolerate() -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12))))
    }

    #[test]
    fn standard_basis_invariants() {
        let inst = standard_basis_instance(4, 2, 2).unwrap();
        assert_eq!(inst.eps(), &Scalar::ratio(1, 2));
        assert_eq!(inst.len(), 4);
        assert!(inst.is_exact());
    }

    #[test]
    fn expected_equals_brute_force_average() {
        let inst = standard_basis_instance(4, 2, 2).unwrap();
        let expectation = expected_charpoly(&inst, &[]).unwrap();
        // Brute force: average the fully-assigned product polynomials
        // over all k^m completions; an independent code path.
        let m = inst.len();
        let k = inst.parts();
        let mut sum = UniPoly::zero(Backend::Rational);
        let total = k.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let mut assignment = Vec::with_capacity(m);
            for _ in 0..m {
                assignment.push(c % k);
                c /= k;
            }
            let mut prod = UniPoly::constant(Scalar::one(Backend::Rational));
            for part in 0..k {
                let sumv = inst.part_sum(&assignment, part).unwrap();
                let scaled = sumv.scale(&Scalar::from_int(k as i64, Backend::Rational));
                prod = prod.mul(&inst.ctx().restriction(&scaled).unwrap());
            }
            sum = sum.add(&prod);
        }
        let avg = sum.scale(&Scalar::ratio(1, total as i64));
        assert_eq!(expectation, avg);
    }

    #[test]
    fn expected_fully_assigned_is_blockwise_product() {
        let inst = standard_basis_instance(4, 2, 2).unwrap();
        let assignment = [0usize, 1, 0, 1];
        let expectation = expected_charpoly(&inst, &assignment).unwrap();
        let mut prod = UniPoly::constant(Scalar::one(Backend::Rational));
        for part in 0..2 {
            let sumv = inst.part_sum(&assignment, part).unwrap();
            let scaled = sumv.scale(&Scalar::from_int(2, Backend::Rational));
            prod = prod.mul(&inst.ctx().restriction(&scaled).unwrap());
        }
        assert_eq!(expectation, prod);
    }

    #[test]
    fn expected_single_vector_symmetric_blocks() {
        // m = 1 forces u_1 = e, which needs degree one for rank one.
        let inst = {
            let ctx = families::elementary_symmetric(3, 1).unwrap();
            Instance::new(ctx, vec![Vector::all_ones(3, Backend::Rational)], 2).unwrap()
        };
        let e0 = expected_charpoly(&inst, &[]).unwrap();
        let e1 = expected_charpoly(&inst, &[0]).unwrap();
        assert_eq!(e0, e1);
    }

    #[test]
    fn greedy_on_standard_basis_4_2_2() {
        let inst = standard_basis_instance(4, 2, 2).unwrap();
        let cert = greedy_partition(&inst).unwrap();
        assert!(cert.pass);
        assert!(!cert.trivial_pass);
        assert_eq!(cert.intermediates_real_rooted, Some(true));
        // The balanced split attains (3 + sqrt(3))/6.
        let expected = QuadExt::new(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::new(BigInt::one(), BigInt::from(6)),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap();
        assert!((cert.max_seminorm.to_f64() - expected.to_f64()).abs() < 1e-9);
        // Each part got two vectors.
        let ones: usize = cert.assignment.iter().filter(|&&c| c == 0).count();
        assert_eq!(ones, 2);
        // Greedy trace never increases.
        for w in cert.greedy_trace.windows(2) {
            assert!(w[1].to_f64() <= w[0].to_f64() + 1e-12);
        }
    }

    #[test]
    fn greedy_indicator_instance() {
        // Product polynomial with u_i = e_i: spectra are 0/1 indicators
        // and every valid split has max seminorm one.
        let ctx = families::coordinate_product(4).unwrap();
        let us = (0..4)
            .map(|i| Vector::basis(4, i, Backend::Rational))
            .collect();
        let inst = Instance::new(ctx, us, 2).unwrap();
        let cert = greedy_partition(&inst).unwrap();
        assert!(cert.pass);
        assert!((cert.max_seminorm.to_f64() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn greedy_single_vector() {
        let ctx = families::elementary_symmetric(3, 1).unwrap();
        let inst = Instance::new(ctx, vec![Vector::all_ones(3, Backend::Rational)], 2).unwrap();
        let cert = greedy_partition(&inst).unwrap();
        assert!(cert.pass && cert.trivial_pass);
        let semis: Vec<f64> = (0..2)
            .map(|c| {
                let s = inst.part_sum(&cert.assignment, c).unwrap();
                inst.ctx().seminorm(&s).unwrap().to_f64()
            })
            .collect();
        let mut sorted = semis.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((sorted[0] - 0.0).abs() < 1e-12 && (sorted[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exhaustive_matches_known_optimum() {
        let inst = standard_basis_instance(4, 2, 2).unwrap();
        let cert = exhaustive_partition(&inst).unwrap();
        let expected = QuadExt::new(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::new(BigInt::one(), BigInt::from(6)),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap();
        // Optimum is the balanced split, exactly.
        let worst = cert
            .assignment
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .count();
        assert_eq!(worst, 2);
        let s0 = inst.part_sum(&cert.assignment, 0).unwrap();
        let f = inst.ctx().restriction(&s0).unwrap();
        assert_eq!(
            f.largest_root_vs_quad(&expected).unwrap(),
            Ordering::Equal
        );
        // Greedy never beats the exhaustive optimum.
        let greedy = greedy_partition(&inst).unwrap();
        assert!(greedy.max_seminorm.to_f64() >= cert.max_seminorm.to_f64() - 1e-12);
    }

    #[test]
    fn exhaustive_budget_guard() {
        let inst = standard_basis_instance(8, 2, 8).unwrap();
        // 8^8 = 16.7e6 exceeds the budget.
        assert!(matches!(
            exhaustive_partition(&inst),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn verify_certificate_round_trip() {
        let inst = standard_basis_instance(4, 2, 2).unwrap();
        let cert = greedy_partition(&inst).unwrap();
        let report = verify_certificate(&inst, &cert).unwrap();
        assert!(report.recomputed_pass && report.consistent);

        // All-to-one-part still passes here (the bound is loose) but is
        // flagged as a trivial pass.
        let mut corrupted = cert.clone();
        corrupted.assignment = vec![0; 4];
        corrupted.part_spectra.clear();
        let report = verify_certificate(&inst, &corrupted).unwrap();
        assert!(report.recomputed_pass);
        assert!(report.trivial_pass);

        // Non-covering assignment is malformed.
        let mut broken = cert.clone();
        broken.assignment = vec![0, 1];
        assert!(matches!(
            verify_certificate(&inst, &broken),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn scale_bridge() {
        // The fully-assigned expectation's largest root equals k times
        // the worst part eigenvalue.
        let inst = standard_basis_instance(5, 2, 2).unwrap();
        let cert = greedy_partition(&inst).unwrap();
        let full = expected_charpoly(&inst, &cert.assignment).unwrap();
        let mut worst: Option<UniPoly> = None;
        for c in 0..2 {
            let s = inst.part_sum(&cert.assignment, c).unwrap();
            let scaled = s.scale(&Scalar::from_int(2, Backend::Rational));
            let f = inst.ctx().restriction(&scaled).unwrap();
            worst = Some(match worst {
                None => f,
                Some(w) => {
                    if w.compare_largest_roots(&f).unwrap() == Ordering::Less {
                        f
                    } else {
                        w
                    }
                }
            });
        }
        assert_eq!(
            full.compare_largest_roots(&worst.unwrap()).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn determinant_instance_smoke() {
        let inst = determinant_rank_one_instance(2, 6, 2, 42).unwrap();
        assert!(!inst.is_exact());
        assert_eq!(inst.len(), 6);
        // Sum of the u_i hits the identity within 1e-9 per coordinate.
        let mut sum = Vector::zero(3, Backend::Float);
        for u in inst.vectors() {
            sum = sum.add(u).unwrap();
        }
        let id = [1.0, 0.0, 1.0];
        for (c, want) in sum.coords().iter().zip(id) {
            assert!((c.to_f64() - want).abs() < 1e-9);
        }
        let cert = greedy_partition(&inst).unwrap();
        assert!(cert.max_seminorm.to_f64() <= cert.bound.to_f64() + 1e-6);
    }

    #[test]
    fn direct_sum_preserves_invariants() {
        let a = standard_basis_instance(3, 2, 2).unwrap();
        let b = {
            let ctx = families::coordinate_product(3).unwrap();
            let us = (0..3)
                .map(|i| Vector::basis(3, i, Backend::Rational))
                .collect();
            Instance::new(ctx, us, 2).unwrap()
        };
        let joint = direct_sum_instance(&[a, b]).unwrap();
        assert_eq!(joint.len(), 6);
        assert_eq!(joint.ctx().nvars(), 6);
        assert_eq!(joint.ctx().degree(), 5);
        let cert = greedy_partition(&joint).unwrap();
        assert!(cert.pass);
        let _ = tolerate();
    }
}
