//! Constant-sum strong Rayleigh measures and their combinatorics: the
//! multivariate partition function, hyperbolicity certification at the
//! all-ones direction, marginals, partitions of the ground set, the
//! support matroid, the rank-function packing criterion, and disjoint
//! base certificates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{CertEvidence, CertStrategy, ConeMode, HyperbolicContext};
use crate::mixed::delta_bound;
use crate::multipoly::{Monomial, MultiPoly, Vector};
use crate::partition::{greedy_partition, Instance, PartitionCertificate};
use crate::quad::QuadExt;
use crate::scalar::{rational_to_string, Backend, Scalar};

const EDMONDS_MAX_GROUND: usize = 20;
const PACKING_MAX_GROUND: usize = 24;
const PACKING_MAX_BASES: usize = 10_000;
const FULL_EXCHANGE_MAX_GROUND: usize = 14;

/// Probability measure on subsets of `[n]`, exact probabilities, sorted
/// deterministic support.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    n: usize,
    support: Vec<(u32, BigRational)>,
}

impl DiscreteMeasure {
    pub fn new(n: usize, support: Vec<(BTreeSet<usize>, BigRational)>) -> Result<Self> {
        if n > PACKING_MAX_GROUND {
            return Err(Error::CapsExceeded(format!(
                "ground sets above {PACKING_MAX_GROUND} elements are out of desk scale"
            )));
        }
        let mut seen = BTreeSet::new();
        let mut total = BigRational::zero();
        let mut sets = Vec::with_capacity(support.len());
        for (set, p) in support {
            if !p.is_positive() {
                return Err(Error::Precondition(
                    "support probabilities must be positive".into(),
                ));
            }
            let mut mask = 0u32;
            for &i in &set {
                if i >= n {
                    return Err(Error::Precondition(format!(
                        "element {i} outside the ground set [{n}]"
                    )));
                }
                mask |= 1 << i;
            }
            if !seen.insert(mask) {
                return Err(Error::Precondition("duplicate support subset".into()));
            }
            total += &p;
            sets.push((mask, p));
        }
        if sets.is_empty() || !total.is_one() {
            return Err(Error::Precondition(format!(
                "probabilities sum to {}, not 1",
                rational_to_string(&total)
            )));
        }
        sets.sort_by_key(|(m, _)| *m);
        Ok(DiscreteMeasure { n, support: sets })
    }

    pub fn point_mass(n: usize, set: &BTreeSet<usize>) -> Result<Self> {
        Self::new(n, vec![(set.clone(), BigRational::one())])
    }

    /// Uniform measure on the bases of the uniform matroid `U_{d,n}`.
    pub fn uniform_matroid(d: usize, n: usize) -> Result<Self> {
        if d > n {
            return Err(Error::Precondition("rank exceeds the ground set".into()));
        }
        let sets = subsets_of_size(n, d);
        let count = sets.len() as i64;
        let p = BigRational::new(BigInt::one(), BigInt::from(count));
        let support = sets
            .into_iter()
            .map(|mask| (mask_to_set(mask), p.clone()))
            .collect();
        Self::new(n, support)
    }

    /// Uniform measure on the spanning trees of a graph given as an edge
    /// list; the ground set is the edge set.
    pub fn uniform_spanning_trees(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let trees = spanning_trees(num_vertices, edges)?;
        if trees.is_empty() {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        let p = BigRational::new(BigInt::one(), BigInt::from(trees.len() as i64));
        let support = trees
            .into_iter()
            .map(|mask| (mask_to_set(mask), p.clone()))
            .collect();
        Self::new(edges.len(), support)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn support_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.support.iter().map(|(m, _)| *m)
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// All support sets share one cardinality (the partition function is
    /// homogeneous); returns it.
    pub fn constant_sum(&self) -> Option<usize> {
        let d = self.support[0].0.count_ones() as usize;
        self.support
            .iter()
            .all(|(m, _)| m.count_ones() as usize == d)
            .then_some(d)
    }

    /// `P(x) = sum_S mu(S) prod_{j in S} x_j`, multi-affine by
    /// construction.
    pub fn partition_function(&self) -> MultiPoly {
        let terms = self.support.iter().map(|(mask, p)| {
            let mut exps = vec![0u32; self.n];
            for i in 0..self.n {
                if mask & (1 << i) != 0 {
                    exps[i] = 1;
                }
            }
            (Monomial(exps), Scalar::Rational(p.clone()))
        });
        MultiPoly::from_terms(self.n, Backend::Rational, terms).expect("validated support")
    }

    /// `P[S : i in S]`; equals the trace of the i-th basis vector under
    /// the certified context.
    pub fn marginal(&self, i: usize) -> Result<BigRational> {
        if i >= self.n {
            return Err(Error::Precondition(format!(
                "element {i} outside the ground set"
            )));
        }
        let mut acc = BigRational::zero();
        for (mask, p) in &self.support {
            if mask & (1 << i) != 0 {
                acc += p;
            }
        }
        Ok(acc)
    }

    pub fn max_marginal(&self) -> Result<BigRational> {
        let mut best = BigRational::zero();
        for i in 0..self.n {
            let m = self.marginal(i)?;
            if m > best {
                best = m;
            }
        }
        Ok(best)
    }
}

fn mask_to_set(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn subsets_of_size(n: usize, d: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut stack = vec![(0u32, 0usize, 0usize)];
    while let Some((mask, next, size)) = stack.pop() {
        if size == d {
            out.push(mask);
            continue;
        }
        for i in next..n {
            if n - i >= d - size {
                stack.push((mask | (1 << i), i + 1, size + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

fn spanning_trees(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Vec<u32>> {
    if edges.len() > PACKING_MAX_GROUND {
        return Err(Error::CapsExceeded("too many edges for enumeration".into()));
    }
    for &(u, v) in edges {
        if u >= num_vertices || v >= num_vertices {
            return Err(Error::Precondition(format!(
                "edge ({u}, {v}) outside the vertex range"
            )));
        }
    }
    if num_vertices == 0 {
        return Ok(Vec::new());
    }
    let want = num_vertices - 1;
    let mut out = Vec::new();
    for mask in subsets_of_size(edges.len(), want) {
        if is_spanning_tree(num_vertices, edges, mask) {
            out.push(mask);
        }
    }
    Ok(out)
}

fn is_spanning_tree(num_vertices: usize, edges: &[(usize, usize)], mask: u32) -> bool {
    let mut parent: Vec<usize> = (0..num_vertices).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merged = 0;
    for (i, &(u, v)) in edges.iter().enumerate() {
        if mask & (1 << i) == 0 {
            continue;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
        merged += 1;
    }
    merged == num_vertices - 1
}

/// A measure together with the hyperbolicity certificate of its
/// partition function at the all-ones direction.
#[derive(Debug, Clone)]
pub struct RayleighContext {
    measure: DiscreteMeasure,
    ctx: HyperbolicContext,
    degree: usize,
}

/// Certify a constant-sum measure: hyperbolic partition function at the
/// all-ones vector with the nonnegative orthant inside the closed cone.
/// Non-constant-sum measures are rejected, not approximated.
pub fn certify_strong_rayleigh(
    measure: DiscreteMeasure,
    strategy: CertStrategy,
) -> Result<RayleighContext> {
    let degree = measure.constant_sum().ok_or_else(|| {
        Error::Precondition(
            "measure is not constant-sum; general stability testing is out of scope".into(),
        )
    })?;
    let p = measure.partition_function();
    let e = Vector::all_ones(measure.ground_size(), Backend::Rational);
    let ctx = match HyperbolicContext::certify(p.clone(), e.clone(), CertStrategy::Structural) {
        Ok(ctx) => ctx,
        Err(_) => HyperbolicContext::certify(p, e, strategy)?,
    };
    // Sampled nonnegative directions must stay in the closed cone.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5261796c);
    for _ in 0..64 {
        let coords: Vec<i64> = (0..measure.ground_size())
            .map(|_| rng.random_range(0..=6))
            .collect();
        let x = Vector::from_ints(&coords, Backend::Rational);
        if !ctx.cone_membership(&x, ConeMode::Closed)? {
            return Err(Error::OutsideCone(format!(
                "nonnegative direction {x} escapes the cone; measure is not strong Rayleigh"
            )));
        }
    }
    Ok(RayleighContext {
        measure,
        ctx,
        degree,
    })
}

impl RayleighContext {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn ctx(&self) -> &HyperbolicContext {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn evidence(&self) -> &CertEvidence {
        self.ctx.certification()
    }

    /// Ground-set partition under the certified context: the instance has
    /// the basis vectors as its rank-one family (multi-affinity gives
    /// rank at most one automatically) and eps = max marginal.
    pub fn partition(&self, k: usize) -> Result<PartitionCertificate> {
        let inst = self.instance(k)?;
        greedy_partition(&inst)
    }

    pub fn instance(&self, k: usize) -> Result<Instance> {
        let n = self.measure.ground_size();
        let us = (0..n)
            .map(|i| Vector::basis(n, i, Backend::Rational))
            .collect();
        Instance::new(self.ctx.clone(), us, k)
    }

    /// The support as a matroid basis system, validated against the
    /// exchange axiom (fully at small scale, sampled above). A failure
    /// on a certified measure contradicts the support theorem and is
    /// surfaced as an error with a witness.
    pub fn support_matroid(&self) -> Result<MatroidView> {
        MatroidView::from_bases(
            self.measure.ground_size(),
            self.measure.support_masks().collect(),
        )
    }
}

/// Matroid presented by its bases, with a rank oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatroidView {
    n: usize,
    d: usize,
    bases: Vec<u32>,
    #[serde(skip)]
    rank_table: std::cell::OnceCell<Vec<u8>>,
}

impl MatroidView {
    /// Validate the basis exchange axiom and build the view. Exhaustive
    /// validation up to 14 ground elements, seeded sampling above.
    pub fn from_bases(n: usize, mut bases: Vec<u32>) -> Result<Self> {
        if n > PACKING_MAX_GROUND {
            return Err(Error::CapsExceeded(format!(
                "ground sets above {PACKING_MAX_GROUND} elements are out of desk scale"
            )));
        }
        if bases.is_empty() {
            return Err(Error::Precondition("a matroid needs at least one basis".into()));
        }
        if bases.len() > PACKING_MAX_BASES {
            return Err(Error::CapsExceeded(format!(
                "more than {PACKING_MAX_BASES} bases"
            )));
        }
        bases.sort_unstable();
        bases.dedup();
        let d = bases[0].count_ones() as usize;
        if bases.iter().any(|b| b.count_ones() as usize != d) {
            return Err(Error::Precondition("bases of unequal size".into()));
        }
        let view = MatroidView {
            n,
            d,
            bases,
            rank_table: std::cell::OnceCell::new(),
        };
        view.validate_exchange()?;
        Ok(view)
    }

    fn validate_exchange(&self) -> Result<()> {
        let check_pair = |a: u32, b: u32| -> Result<()> {
            let only_a = a & !b;
            for x in 0..self.n {
                if only_a & (1 << x) == 0 {
                    continue;
                }
                let only_b = b & !a;
                let mut ok = false;
                for y in 0..self.n {
                    if only_b & (1 << y) == 0 {
                        continue;
                    }
                    let candidate = (a & !(1 << x)) | (1 << y);
                    if self.bases.binary_search(&candidate).is_ok() {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return Err(Error::ExchangeFailure(format!(
                        "no exchange for element {x} across bases {:?} and {:?}",
                        mask_to_set(a),
                        mask_to_set(b)
                    )));
                }
            }
            Ok(())
        };
        if self.n <= FULL_EXCHANGE_MAX_GROUND {
            for (i, &a) in self.bases.iter().enumerate() {
                for &b in &self.bases[i + 1..] {
                    check_pair(a, b)?;
                    check_pair(b, a)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x4578636831);
            for _ in 0..4096 {
                let a = self.bases[rng.random_range(0..self.bases.len())];
                let b = self.bases[rng.random_range(0..self.bases.len())];
                if a != b {
                    check_pair(a, b)?;
                }
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank_total(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn is_basis(&self, mask: u32) -> bool {
        self.bases.binary_search(&mask).is_ok()
    }

    fn table(&self) -> &Vec<u8> {
        self.rank_table.get_or_init(|| {
            // r(S) = max |S ∩ B|; dynamic program over the subset lattice
            // seeded by the independent sets (subsets of bases).
            let size = 1usize << self.n;
            let mut independent = vec![false; size];
            for &b in &self.bases {
                // enumerate subsets of b
                let b = b as usize;
                let mut s = b;
                loop {
                    independent[s] = true;
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & b;
                }
            }
            let mut rank = vec![0u8; size];
            for s in 1..size {
                if independent[s] {
                    rank[s] = s.count_ones() as u8;
                } else {
                    let mut best = 0u8;
                    let mut rest = s;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        best = best.max(rank[s & !bit]);
                        rest &= rest - 1;
                    }
                    rank[s] = best;
                }
            }
            rank
        })
    }

    /// Combinatorial rank `r(S) = max |S ∩ B|` over the bases.
    pub fn rank(&self, set: &BTreeSet<usize>) -> Result<usize> {
        let mut mask = 0u32;
        for &i in set {
            if i >= self.n {
                return Err(Error::Precondition(format!(
                    "element {i} outside the ground set"
                )));
            }
            mask |= 1 << i;
        }
        Ok(self.rank_mask(mask))
    }

    pub fn rank_mask(&self, mask: u32) -> usize {
        self.table()[mask as usize] as usize
    }
}

/// Outcome of the base-packing rank criterion.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PackingVerdict {
    Pass,
    Fail { witness: Vec<usize> },
}

/// Rank criterion for `k` disjoint bases:
/// `r(S) >= d - (n - |S|)/k` for every subset `S`, checked by full
/// enumeration. The first failing subset (in mask order) is returned.
pub fn edmonds_check(matroid: &MatroidView, k: usize) -> Result<PackingVerdict> {
    if k < 1 {
        return Err(Error::Precondition("need k >= 1".into()));
    }
    let n = matroid.ground_size();
    if n > EDMONDS_MAX_GROUND {
        return Err(Error::CapsExceeded(format!(
            "rank criterion enumerates 2^n subsets; n = {n} above {EDMONDS_MAX_GROUND}"
        )));
    }
    let d = matroid.rank_total();
    for mask in 0u32..(1 << n) {
        // k r(S) >= k d - (n - |S|), in integers.
        let r = matroid.rank_mask(mask);
        let s = mask.count_ones() as usize;
        if k * r + n < k * d + s {
            return Ok(PackingVerdict::Fail {
                witness: mask_to_set(mask).into_iter().collect(),
            });
        }
    }
    Ok(PackingVerdict::Pass)
}

/// Brute-force packing oracle: `k` pairwise-disjoint bases by
/// backtracking, or a certified none.
pub fn find_disjoint_bases(matroid: &MatroidView, k: usize) -> Result<Option<Vec<Vec<usize>>>> {
    if k < 1 {
        return Err(Error::Precondition("need k >= 1".into()));
    }
    if matroid.rank_total() * k > matroid.ground_size() {
        return Ok(None);
    }
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    let mut nodes = 0usize;
    const NODE_BUDGET: usize = 10_000_000;
    fn rec(
        bases: &[u32],
        k: usize,
        used: u32,
        start: usize,
        chosen: &mut Vec<u32>,
        nodes: &mut usize,
    ) -> Result<bool> {
        if chosen.len() == k {
            return Ok(true);
        }
        for i in start..bases.len() {
            *nodes += 1;
            if *nodes > NODE_BUDGET {
                return Err(Error::BudgetExceeded(
                    "disjoint-base backtracking node budget".into(),
                ));
            }
            let b = bases[i];
            if used & b != 0 {
                continue;
            }
            chosen.push(b);
            // Later parts may reuse earlier basis indices; only the
            // disjointness constrains them.
            if rec(bases, k, used | b, 0, chosen, nodes)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    let found = rec(matroid.bases(), k, 0, 0, &mut chosen, &mut nodes)?;
    Ok(found.then(|| {
        chosen
            .into_iter()
            .map(|m| mask_to_set(m).into_iter().collect())
            .collect()
    }))
}

/// Report for the sufficient marginal threshold for `k` disjoint bases
/// in the support of a certified measure.
#[derive(Debug, Clone, Serialize)]
pub struct PackingReport {
    pub k: usize,
    pub threshold: QuadExt,
    pub max_marginal: Scalar,
    /// Marginals clear the threshold, so the packing is guaranteed.
    pub theorem_applies: bool,
    pub bases_found: Option<Vec<Vec<usize>>>,
    /// `theorem_applies` with no exhibited bases would contradict the
    /// guarantee; always expected `false`.
    pub contradiction: bool,
}

/// Marginal threshold `(1/sqrt(k-1) - 1/sqrt(k))^2`, exact.
pub fn packing_threshold(k: usize) -> Result<QuadExt> {
    if k < 2 {
        return Err(Error::Precondition("need k >= 2".into()));
    }
    let kq = BigInt::from(k as i64);
    let km1 = BigInt::from(k as i64 - 1);
    // 1/(k-1) + 1/k - 2/sqrt(k(k-1))
    let a = BigRational::new(BigInt::from(2 * k as i64 - 1), &kq * &km1);
    let b = -BigRational::new(BigInt::from(2), &kq * &km1);
    let r = BigRational::from_integer(&kq * &km1);
    QuadExt::new(a, b, r)
}

/// If every marginal clears the threshold, the support must pack `k`
/// disjoint bases; exhibit them through the brute-force oracle either
/// way and flag the (never expected) contradiction.
pub fn packing_certificate(rctx: &RayleighContext, k: usize) -> Result<PackingReport> {
    let threshold = packing_threshold(k)?;
    let max_marginal = rctx.measure().max_marginal()?;
    let theorem_applies = threshold.cmp_rational(&max_marginal) != std::cmp::Ordering::Less;
    let matroid = rctx.support_matroid()?;
    let bases_found = find_disjoint_bases(&matroid, k)?;
    let contradiction = theorem_applies && bases_found.is_none();
    Ok(PackingReport {
        k,
        threshold,
        max_marginal: Scalar::Rational(max_marginal),
        theorem_applies,
        bases_found,
        contradiction,
    })
}

/// Instance-level bound for a ground-set partition of a certified
/// measure; convenience used by reports.
pub fn rayleigh_bound(rctx: &RayleighContext, k: usize) -> Result<QuadExt> {
    let eps = rctx.measure().max_marginal()?;
    let alpha = eps * BigRational::from_integer(BigInt::from(k as i64));
    let delta = delta_bound(&alpha, rctx.measure().ground_size())?;
    Ok(delta.scale(&BigRational::new(BigInt::one(), BigInt::from(k as u64))))
}

pub fn k4_edges() -> Vec<(usize, usize)> {
    vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn partition_function_examples() {
        let mu = DiscreteMeasure::point_mass(2, &set(&[0, 1])).unwrap();
        let p = mu.partition_function();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.degree(), 2);

        let mu = DiscreteMeasure::uniform_matroid(2, 4).unwrap();
        let p = mu.partition_function();
        let e2 = MultiPoly::elementary_symmetric(4, 2)
            .unwrap()
            .scale(&Scalar::ratio(1, 6));
        assert_eq!(p, e2);

        let bad = DiscreteMeasure::new(
            2,
            vec![
                (set(&[0]), BigRational::new(BigInt::one(), BigInt::from(3))),
                (set(&[1]), BigRational::new(BigInt::one(), BigInt::from(3))),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn certify_examples() {
        let mu = DiscreteMeasure::uniform_matroid(2, 4).unwrap();
        let rctx = certify_strong_rayleigh(
            mu,
            CertStrategy::Sampled {
                samples: 32,
                seed: 5,
            },
        )
        .unwrap();
        assert!(matches!(
            rctx.evidence(),
            CertEvidence::Structural { .. }
        ));

        let trees = DiscreteMeasure::uniform_spanning_trees(4, &k4_edges()).unwrap();
        assert_eq!(trees.support_len(), 16);
        let rctx = certify_strong_rayleigh(
            trees,
            CertStrategy::Sampled {
                samples: 48,
                seed: 5,
            },
        )
        .unwrap();
        assert!(matches!(rctx.evidence(), CertEvidence::Sampled { .. }));

        // Not constant-sum: {} and {1, 2}.
        let mixed = DiscreteMeasure::new(
            3,
            vec![
                (set(&[]), BigRational::new(BigInt::one(), BigInt::from(2))),
                (
                    set(&[0, 1]),
                    BigRational::new(BigInt::one(), BigInt::from(2)),
                ),
            ],
        )
        .unwrap();
        assert!(matches!(
            certify_strong_rayleigh(mixed, CertStrategy::Structural),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn marginals() {
        let mu = DiscreteMeasure::uniform_matroid(2, 4).unwrap();
        for i in 0..4 {
            assert_eq!(
                mu.marginal(i).unwrap(),
                BigRational::new(BigInt::one(), BigInt::from(2))
            );
        }
        let trees = DiscreteMeasure::uniform_spanning_trees(4, &k4_edges()).unwrap();
        for i in 0..6 {
            assert_eq!(
                trees.marginal(i).unwrap(),
                BigRational::new(BigInt::one(), BigInt::from(2))
            );
        }
        let pm = DiscreteMeasure::point_mass(2, &set(&[0])).unwrap();
        assert_eq!(pm.marginal(0).unwrap(), BigRational::one());
        assert!(pm.marginal(5).is_err());
    }

    #[test]
    fn marginal_equals_trace() {
        let trees = DiscreteMeasure::uniform_spanning_trees(4, &k4_edges()).unwrap();
        let rctx = certify_strong_rayleigh(
            trees,
            CertStrategy::Sampled {
                samples: 32,
                seed: 9,
            },
        )
        .unwrap();
        for i in 0..6 {
            let tr = rctx
                .ctx()
                .trace(&Vector::basis(6, i, Backend::Rational))
                .unwrap();
            assert_eq!(
                tr,
                Scalar::Rational(rctx.measure().marginal(i).unwrap())
            );
        }
    }

    #[test]
    fn rayleigh_partition_matches_standard_basis() {
        let mu = DiscreteMeasure::uniform_matroid(2, 4).unwrap();
        let rctx = certify_strong_rayleigh(mu, CertStrategy::Structural).unwrap();
        let cert = rctx.partition(2).unwrap();
        assert!(cert.pass);
        // Identical instance to the standard-basis benchmark modulo the
        // uniform 1/6 scale, which leaves eigenvalues unchanged.
        let expected = QuadExt::new(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::new(BigInt::one(), BigInt::from(6)),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap();
        assert!((cert.max_seminorm.to_f64() - expected.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn support_matroid_examples() {
        let mu = DiscreteMeasure::uniform_matroid(2, 4).unwrap();
        let rctx = certify_strong_rayleigh(mu, CertStrategy::Structural).unwrap();
        let m = rctx.support_matroid().unwrap();
        assert_eq!(m.bases().len(), 6);
        assert_eq!(m.rank(&set(&[0])).unwrap(), 1);
        assert_eq!(m.rank(&set(&[0, 1, 2])).unwrap(), 2);
        assert_eq!(m.rank(&set(&[])).unwrap(), 0);

        let trees = DiscreteMeasure::uniform_spanning_trees(4, &k4_edges()).unwrap();
        let rctx = certify_strong_rayleigh(
            trees,
            CertStrategy::Sampled {
                samples: 32,
                seed: 3,
            },
        )
        .unwrap();
        let m = rctx.support_matroid().unwrap();
        assert_eq!(m.bases().len(), 16);
        // A triangle has rank 2 in the graphic matroid of K4.
        assert_eq!(m.rank(&set(&[0, 1, 3])).unwrap(), 2);

        // Support {12, 34} fails the exchange axiom.
        let err = MatroidView::from_bases(4, vec![0b0011, 0b1100]);
        assert!(matches!(err, Err(Error::ExchangeFailure(_))));
    }

    #[test]
    fn matroid_rank_matches_hyperbolic_rank() {
        let mu = DiscreteMeasure::uniform_spanning_trees(4, &k4_edges()).unwrap();
        let rctx = certify_strong_rayleigh(
            mu,
            CertStrategy::Sampled {
                samples: 32,
                seed: 3,
            },
        )
        .unwrap();
        let m = rctx.support_matroid().unwrap();
        for mask in 0u32..(1 << 6) {
            let mut v = Vector::zero(6, Backend::Rational);
            for i in 0..6 {
                if mask & (1 << i) != 0 {
                    v.set_coord(i, Scalar::one(Backend::Rational));
                }
            }
            assert_eq!(
                m.rank_mask(mask),
                rctx.ctx().rank(&v).unwrap(),
                "rank mismatch at mask {mask:b}"
            );
        }
    }

    #[test]
    fn edmonds_and_disjoint_bases_agree() {
        // U_{2,4}: two disjoint bases exist.
        let m = MatroidView::from_bases(4, subsets_of_size(4, 2)).unwrap();
        assert!(matches!(edmonds_check(&m, 2).unwrap(), PackingVerdict::Pass));
        let found = find_disjoint_bases(&m, 2).unwrap().unwrap();
        assert_eq!(found, vec![vec![0, 1], vec![2, 3]]);

        // M(K4): decomposes into two spanning trees.
        let trees = spanning_trees(4, &k4_edges()).unwrap();
        let m = MatroidView::from_bases(6, trees).unwrap();
        assert!(matches!(edmonds_check(&m, 2).unwrap(), PackingVerdict::Pass));
        assert!(find_disjoint_bases(&m, 2).unwrap().is_some());

        // U_{2,3}: three elements cannot hold two disjoint 2-bases; the
        // first witness is the empty set.
        let m = MatroidView::from_bases(3, subsets_of_size(3, 2)).unwrap();
        match edmonds_check(&m, 2).unwrap() {
            PackingVerdict::Fail { witness } => assert!(witness.is_empty()),
            PackingVerdict::Pass => panic!("U_{{2,3}} cannot pack two bases"),
        }
        assert!(find_disjoint_bases(&m, 2).unwrap().is_none());
    }

    #[test]
    fn packing_certificate_examples() {
        // Threshold for k = 2 is 3/2 - sqrt(2).
        let th = packing_threshold(2).unwrap();
        assert!((th.to_f64() - 0.0857864376).abs() < 1e-9);

        // Uniform U_{2,24}: marginal 1/12 clears the threshold and two
        // disjoint bases come out.
        let mu = DiscreteMeasure::uniform_matroid(2, 24).unwrap();
        let rctx = certify_strong_rayleigh(mu, CertStrategy::Structural).unwrap();
        let report = packing_certificate(&rctx, 2).unwrap();
        assert!(report.theorem_applies);
        assert!(!report.contradiction);
        assert_eq!(report.bases_found.unwrap().len(), 2);
        assert_eq!(
            th.cmp_rational(&BigRational::new(BigInt::one(), BigInt::from(12))),
            Ordering::Greater
        );

        // Uniform U_{2,4}: marginal 1/2 misses the threshold, yet bases
        // still exist; the report stays silent rather than refuted.
        let mu = DiscreteMeasure::uniform_matroid(2, 4).unwrap();
        let rctx = certify_strong_rayleigh(mu, CertStrategy::Structural).unwrap();
        let report = packing_certificate(&rctx, 2).unwrap();
        assert!(!report.theorem_applies);
        assert!(report.bases_found.is_some());
        assert!(!report.contradiction);
    }
}
