//! Cluster geometry: partitions of a finite point set into fibers along a
//! line direction or the level sets of a plane normal, divisibility of
//! fiber sizes by a prime, and decomposition of a cluster into axis
//! translates of a planar foundation over a rank-2 base subgroup.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{complete_to_basis, hnf_basis, orthogonal_lattice, IntVec, Sublattice};

/// A finite nonempty set of distinct lattice points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cluster {
    dim: usize,
    points: Vec<IntVec>, // sorted, distinct
}

impl Cluster {
    pub fn new(points: Vec<IntVec>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Domain("cluster must be nonempty".into()));
        };
        let dim = first.dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::Dimension("cluster points have mixed dimensions".into()));
        }
        let mut sorted = points;
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("cluster points must be distinct".into()));
        }
        Ok(Cluster { dim, points: sorted })
    }

    pub fn from_i64(points: &[&[i64]]) -> Self {
        Cluster::new(points.iter().map(|p| IntVec::from_i64(p)).collect())
            .expect("literal cluster is wellformed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn points(&self) -> &[IntVec] {
        &self.points
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&IntVec::zero(self.dim))
    }

    /// Lexicographically smallest point.
    pub fn min_point(&self) -> &IntVec {
        &self.points[0]
    }

    pub fn translate(&self, w: &IntVec) -> Cluster {
        Cluster {
            dim: self.dim,
            points: self.points.iter().map(|p| p.add(w)).collect(),
        }
    }

    /// Translate carrying the lexicographically smallest point to the origin.
    pub fn normalize_origin(&self) -> (Cluster, IntVec) {
        let w = self.min_point().clone();
        (self.translate(&w.neg()), w)
    }

    pub fn dilate(&self, alpha: u64) -> Cluster {
        let a = BigInt::from(alpha);
        Cluster::new(self.points.iter().map(|p| p.scale(&a)).collect())
            .expect("dilation by a positive integer preserves distinctness")
    }

    /// Rank of the subgroup generated by all pairwise differences.
    pub fn difference_rank(&self) -> usize {
        let diffs = self.difference_vectors();
        crate::lattice::span_rank(self.dim, &diffs)
    }

    fn difference_vectors(&self) -> Vec<IntVec> {
        let base = &self.points[0];
        self.points[1..].iter().map(|p| p.sub(base)).collect()
    }
}

/// How a fiber partition groups the points of a cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberKind {
    /// Fibers are intersections with lines parallel to the direction.
    LineDirection(IntVec),
    /// Fibers are level sets of the inner product with the normal.
    PlaneNormal(IntVec),
}

/// A partition of a cluster into fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPartition {
    pub kind: FiberKind,
    pub fibers: Vec<Vec<IntVec>>,
}

impl FiberPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.fibers.iter().map(|f| f.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.fibers.iter().map(|f| f.len()).sum()
    }
}

/// Partition of `f` into the nonempty intersections with lines parallel to `g`.
pub fn line_fibers(f: &Cluster, g: &IntVec) -> Result<FiberPartition> {
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if g.dim() != f.dim() {
        return Err(Error::Dimension("direction dimension differs from cluster".into()));
    }
    // Two points lie on a common line parallel to g iff their components
    // orthogonal to g agree; x*<g,g> - g*<x,g> is that component scaled.
    let gg = g.dot(g);
    let mut groups: BTreeMap<IntVec, Vec<IntVec>> = BTreeMap::new();
    for p in f.points() {
        let label = p.scale(&gg).sub(&g.scale(&p.dot(g)));
        groups.entry(label).or_default().push(p.clone());
    }
    let partition = FiberPartition {
        kind: FiberKind::LineDirection(g.clone()),
        fibers: groups.into_values().collect(),
    };
    debug_assert_eq!(partition.total(), f.len());
    Ok(partition)
}

/// Partition of `f` into the level sets of the inner product with `v`.
pub fn normal_fibers(f: &Cluster, v: &IntVec) -> Result<FiberPartition> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if v.dim() != f.dim() {
        return Err(Error::Dimension("normal dimension differs from cluster".into()));
    }
    let mut groups: BTreeMap<BigInt, Vec<IntVec>> = BTreeMap::new();
    for p in f.points() {
        groups.entry(p.dot(v)).or_default().push(p.clone());
    }
    let partition = FiberPartition {
        kind: FiberKind::PlaneNormal(v.clone()),
        fibers: groups.into_values().collect(),
    };
    debug_assert_eq!(partition.total(), f.len());
    Ok(partition)
}

/// Every fiber size divisible by `p`? Lines and planes missing the cluster
/// contribute empty intersections, which are divisible by convention.
pub fn all_fibers_divisible(partition: &FiberPartition, p: u64) -> bool {
    partition.fibers.iter().all(|f| (f.len() as u64).is_multiple_of(p))
}

/// A decomposition of a cluster into axis translates of a single planar
/// foundation over a rank-2 base subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrismDecomposition {
    pub base: Sublattice,
    pub axis: IntVec,
    pub translate: IntVec,
    pub offsets: BTreeSet<BigInt>,
    pub foundation: Vec<IntVec>,
}

impl PrismDecomposition {
    /// Check every structural invariant against the cluster it decomposes.
    pub fn validate(&self, f: &Cluster) -> Result<()> {
        if f.dim() != 3 {
            return Err(Error::Dimension("prisms are defined in dimension 3".into()));
        }
        if self.base.rank() != 2 {
            return Err(Error::Domain("prism base must have rank 2".into()));
        }
        if self.base.spans_direction(&self.axis) || self.axis.is_zero() {
            return Err(Error::Domain(
                "prism axis must be transversal to the base plane".into(),
            ));
        }
        if !self.offsets.contains(&BigInt::zero()) {
            return Err(Error::Domain("prism offsets must contain 0".into()));
        }
        if self.foundation.is_empty() {
            return Err(Error::Domain("prism foundation must be nonempty".into()));
        }
        // foundation = (translate + base) ∩ F
        let in_coset: Vec<IntVec> = f
            .points()
            .iter()
            .filter(|p| self.base.contains(&p.sub(&self.translate)))
            .cloned()
            .collect();
        let mut foundation = self.foundation.clone();
        foundation.sort();
        if in_coset != foundation {
            return Err(Error::Domain(
                "prism foundation differs from the base-coset intersection".into(),
            ));
        }
        // F is exactly the union of offset translates of the foundation.
        let mut rebuilt: BTreeSet<IntVec> = BTreeSet::new();
        for n in &self.offsets {
            let shift = self.axis.scale(n);
            for y in &self.foundation {
                if !rebuilt.insert(y.add(&shift)) {
                    return Err(Error::Domain("prism layers overlap".into()));
                }
            }
        }
        let original: BTreeSet<IntVec> = f.points().iter().cloned().collect();
        if rebuilt != original {
            return Err(Error::Domain(
                "prism layers do not reconstruct the cluster".into(),
            ));
        }
        Ok(())
    }
}

/// Canonical list of candidate small vectors used to extend a deficient
/// base or choose a transversal axis.
fn standard_axes() -> Vec<IntVec> {
    (0..3).map(|i| IntVec::unit(3, i)).collect()
}

/// Extend the span of `gens` (rank <= 1) to a rank-2 sublattice whose
/// rational span avoids `avoid`.
fn extend_to_rank2_avoiding(gens: &[IntVec], avoid: &IntVec) -> Result<Sublattice> {
    let current = hnf_basis(3, gens);
    match current.len() {
        2 => {
            let l = Sublattice::from_generators(3, &current)?;
            if l.spans_direction(avoid) {
                Err(Error::Domain("axis lies in the base plane".into()))
            } else {
                Ok(l)
            }
        }
        1 => {
            for w in standard_axes() {
                let mut cand = current.clone();
                cand.push(w);
                if crate::lattice::span_rank(3, &cand) != 2 {
                    continue;
                }
                let l = Sublattice::from_generators(3, &cand)?;
                if !l.spans_direction(avoid) {
                    return Ok(l);
                }
            }
            Err(Error::Internal(
                "no standard vector completes a rank-1 span transversally".into(),
            ))
        }
        0 => {
            let t = complete_to_basis(&avoid.primitive_part()?)?;
            Sublattice::from_generators(3, &[t.col(0), t.col(1)])
        }
        _ => Err(Error::Domain("generators span rank 3".into())),
    }
}

/// Integer multiplier `t` with `diff = t * g` for primitive `g`; `diff` must
/// be parallel to `g`.
fn multiplier_along(diff: &IntVec, g: &IntVec) -> BigInt {
    for i in 0..g.dim() {
        if !g.coord(i).is_zero() {
            return diff.coord(i) / g.coord(i);
        }
    }
    unreachable!("primitive axis is nonzero")
}

/// Search for a prism decomposition of a 3-dimensional cluster.
///
/// Axis candidates are the primitive parts of pairwise point differences;
/// an axis works when all its line fibers are translates of one offset
/// pattern and the fiber base points fit in a rank-2 subgroup transversal
/// to the axis. Clusters whose differences span rank at most 2 always
/// decompose with a single offset.
pub fn prism_decompose(f: &Cluster) -> Result<Option<PrismDecomposition>> {
    if f.dim() != 3 {
        return Err(Error::Dimension("prism search requires dimension 3".into()));
    }

    let mut axes: BTreeSet<IntVec> = BTreeSet::new();
    for (i, p) in f.points().iter().enumerate() {
        for q in &f.points()[i + 1..] {
            axes.insert(q.sub(p).canonical_direction()?);
        }
    }

    for g in &axes {
        if let Some(prism) = try_axis(f, g)? {
            return Ok(Some(prism));
        }
    }

    // Single-offset case: the whole cluster sits in one coset of a rank-2 base.
    if f.difference_rank() <= 2 {
        let diffs: Vec<IntVec> = f
            .points()
            .iter()
            .map(|p| p.sub(f.min_point()))
            .filter(|d| !d.is_zero())
            .collect();
        let base_gens = hnf_basis(3, &diffs);
        let mut axis = None;
        for w in standard_axes() {
            let mut cand = base_gens.clone();
            cand.push(w.clone());
            if crate::lattice::span_rank(3, &cand) == base_gens.len() + 1 {
                axis = Some(w);
                break;
            }
        }
        let axis = axis.expect("some standard vector is transversal to a rank <= 2 span");
        let base = extend_to_rank2_avoiding(&base_gens, &axis)?;
        let prism = PrismDecomposition {
            base,
            axis,
            translate: f.min_point().clone(),
            offsets: BTreeSet::from([BigInt::zero()]),
            foundation: f.points().to_vec(),
        };
        prism.validate(f)?;
        return Ok(Some(prism));
    }

    Ok(None)
}

fn try_axis(f: &Cluster, g: &IntVec) -> Result<Option<PrismDecomposition>> {
    let partition = line_fibers(f, g)?;
    // Per fiber: the bottom point (minimal multiplier along g) and the
    // multiplier pattern shifted to start at zero.
    let mut bottoms: Vec<IntVec> = Vec::new();
    let mut shape: Option<BTreeSet<BigInt>> = None;
    for fiber in &partition.fibers {
        let mut with_mult: Vec<(BigInt, &IntVec)> = fiber
            .iter()
            .map(|p| (multiplier_along(&p.sub(&fiber[0]), g), p))
            .collect();
        with_mult.sort_by(|a, b| a.0.cmp(&b.0));
        let min = with_mult[0].0.clone();
        let pattern: BTreeSet<BigInt> = with_mult.iter().map(|(m, _)| m - &min).collect();
        match &shape {
            None => shape = Some(pattern),
            Some(s) => {
                if *s != pattern {
                    return Ok(None);
                }
            }
        }
        bottoms.push(with_mult[0].1.clone());
    }
    let shape = shape.expect("cluster is nonempty");
    if shape.len() <= 1 {
        // All fibers are singletons; handled by the single-offset case.
        return Ok(None);
    }

    bottoms.sort();
    let translate = bottoms[0].clone();
    let diffs: Vec<IntVec> = bottoms[1..].iter().map(|b| b.sub(&translate)).collect();
    let base = match extend_to_rank2_avoiding(&diffs, g) {
        Ok(base) => base,
        Err(Error::Domain(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let prism = PrismDecomposition {
        base,
        axis: g.clone(),
        translate,
        offsets: shape,
        foundation: bottoms,
    };
    prism.validate(f)?;
    Ok(Some(prism))
}

/// Build the prism forced by line divisibility along `g` together with
/// plane divisibility for the normal `v`, for a cluster of size `p*p`.
///
/// The foundation is the lowest occupied level of `<., v>`, the base is the
/// saturated plane orthogonal to `v`, and the offsets are read off from the
/// level spacing along the primitive part of `g`.
pub fn prism_from_divisibility(
    f: &Cluster,
    p: u64,
    g: &IntVec,
    v: &IntVec,
) -> Result<PrismDecomposition> {
    if f.dim() != 3 {
        return Err(Error::Dimension("prism construction requires dimension 3".into()));
    }
    if f.len() as u64 != p * p {
        return Err(Error::Domain(format!(
            "cluster size {} is not the square of p = {p}",
            f.len()
        )));
    }
    if g.is_zero() || v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !all_fibers_divisible(&line_fibers(f, g)?, p) {
        return Err(Error::Domain(
            "line fibers along the axis are not all divisible by p".into(),
        ));
    }
    if !all_fibers_divisible(&normal_fibers(f, v)?, p) {
        return Err(Error::Domain(
            "plane fibers for the normal are not all divisible by p".into(),
        ));
    }
    let axis = g.primitive_part()?;
    let step = axis.dot(v);
    if step.is_zero() {
        return Err(Error::Domain("axis is parallel to the plane family".into()));
    }

    let levels = normal_fibers(f, v)?;
    let mut by_level: Vec<(BigInt, Vec<IntVec>)> = levels
        .fibers
        .into_iter()
        .map(|fiber| (fiber[0].dot(v), fiber))
        .collect();
    by_level.sort_by(|a, b| a.0.cmp(&b.0));
    let (base_level, mut foundation) = by_level[0].clone();
    foundation.sort();

    if by_level.len() as u64 != p || foundation.len() as u64 != p {
        return Err(Error::Internal(
            "divisibility hypotheses did not force p levels of size p".into(),
        ));
    }

    let mut offsets = BTreeSet::new();
    for (level, _) in &by_level {
        let gap = level - &base_level;
        let (q, r) = num_integer::Integer::div_rem(&gap, &step);
        if !r.is_zero() {
            return Err(Error::Internal(
                "level spacing is not an integer multiple of the axis step".into(),
            ));
        }
        offsets.insert(q);
    }

    let base = Sublattice::from_generators(3, &orthogonal_lattice(v)?)?;
    let prism = PrismDecomposition {
        base,
        axis,
        translate: foundation[0].clone(),
        offsets,
        foundation,
    };
    prism.validate(f)?;
    Ok(prism)
}
