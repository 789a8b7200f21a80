//! Exact computation with the common zero set of the dilated mask sums of a
//! cluster at rational torus points: membership, a finite set of kernel
//! directions covering it, kernel-intersection line families, restriction
//! polynomials along rational lines, and the divisibility dichotomy for
//! clusters of prime-power size.
//!
//! Only rational torus points are handled; on them every question reduces
//! to vanishing of sums of roots of unity, which `cyclotomic` decides
//! exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cluster::{all_fibers_divisible, line_fibers, normal_fibers, Cluster};
use crate::cyclotomic::{is_zero_poly, radical, root_power_sum, CycInt, CycLaurentPoly};
use crate::error::{Error, Result};
use crate::lattice::{complete_to_basis, kernel_direction, orthogonal_lattice, IntVec, Sublattice};

/// Largest cyclotomic order accepted when deciding membership questions.
const MAX_MEMBERSHIP_ORDER: u64 = 100_000;

/// Largest kernel-intersection grid modulus that will be enumerated.
const MAX_GRID_MODULUS: u64 = 4096;

/// A point of the torus with exact rational coordinates, each reduced into
/// `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalTorusPoint {
    coords: Vec<BigRational>,
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl RationalTorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.is_empty() || coords.len() > crate::lattice::MAX_DIM {
            return Err(Error::Dimension(format!(
                "torus point dimension must be 1..={}",
                crate::lattice::MAX_DIM
            )));
        }
        Ok(RationalTorusPoint {
            coords: coords.iter().map(frac).collect(),
        })
    }

    /// Build from `(numerator, denominator)` pairs.
    pub fn from_fracs(fracs: &[(i64, i64)]) -> Self {
        RationalTorusPoint::new(
            fracs
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
        .expect("literal point dimension")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Inner product with an integer vector, as an exact rational.
    pub fn dot_vec(&self, v: &IntVec) -> BigRational {
        debug_assert_eq!(self.dim(), v.dim());
        self.coords
            .iter()
            .zip(v.coords())
            .map(|(c, x)| c * BigRational::from(x.clone()))
            .sum()
    }

    /// The point `self + t*v` for rational `t`, reduced to the torus.
    pub fn offset_along(&self, v: &IntVec, t: &BigRational) -> RationalTorusPoint {
        RationalTorusPoint::new(
            self.coords
                .iter()
                .zip(v.coords())
                .map(|(c, x)| c + t * BigRational::from(x.clone()))
                .collect(),
        )
        .expect("dimension preserved")
    }
}

/// A finite set of pairwise linearly independent nonzero directions whose
/// character kernels cover the common zero set of a cluster's mask sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSet {
    vectors: Vec<IntVec>,
}

impl DeltaSet {
    /// Build from explicit directions; they must be nonzero and pairwise
    /// linearly independent.
    pub fn new(mut vectors: Vec<IntVec>) -> Result<Self> {
        vectors.sort();
        for (i, v) in vectors.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
            for w in &vectors[i + 1..] {
                if crate::lattice::span_rank(v.dim(), &[v.clone(), w.clone()]) < 2 {
                    return Err(Error::Domain(
                        "support directions must be pairwise linearly independent".into(),
                    ));
                }
            }
        }
        Ok(DeltaSet { vectors })
    }

    pub fn vectors(&self) -> &[IntVec] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// A finite union of rational lines on the torus: all lines through a point
/// of `points` with a direction from `directions`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalLineFamily {
    pub points: Vec<RationalTorusPoint>,
    pub directions: Vec<IntVec>,
    pub modulus: u64,
}

impl RationalLineFamily {
    /// Does some line of the family pass through `w`?
    pub fn contains_point(&self, w: &RationalTorusPoint) -> Result<bool> {
        for v in &self.directions {
            for rho in &self.points {
                if point_on_line(w, rho, v)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Is `w` on the closed torus line through `rho` with direction `v`?
///
/// The line is the annihilator of the saturated orthogonal lattice of `v`,
/// translated to `rho`; membership is two integrality checks.
pub fn point_on_line(w: &RationalTorusPoint, rho: &RationalTorusPoint, v: &IntVec) -> Result<bool> {
    let basis = orthogonal_lattice(v)?;
    for u in &basis {
        let diff = w.dot_vec(u) - rho.dot_vec(u);
        if !diff.is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common denominator of the inner products of the cluster's points with a
/// torus point, as a cyclotomic order.
fn mask_order(f: &Cluster, rho: &RationalTorusPoint) -> Result<u64> {
    let mut d = BigInt::one();
    for g in f.points() {
        d = d.lcm(rho.dot_vec(g).denom());
    }
    d.to_u64()
        .filter(|&d| d <= MAX_MEMBERSHIP_ORDER)
        .ok_or_else(|| Error::TooLarge("cyclotomic order exceeds the supported bound".into()))
}

/// Numerators of the inner products scaled to the common denominator `d`.
fn mask_exponents(f: &Cluster, rho: &RationalTorusPoint, d: u64) -> Vec<i64> {
    f.points()
        .iter()
        .map(|g| {
            let r = rho.dot_vec(g) * BigRational::from(BigInt::from(d));
            debug_assert!(r.is_integer());
            r.to_integer().mod_floor(&BigInt::from(d)).to_i64().unwrap()
        })
        .collect()
}

/// The frequencies that need testing: a residue `r` modulo `d` is attained
/// by some positive integer coprime to `m` exactly when no prime dividing
/// `gcd(m, d)` divides `r`. Vanishing of a mask sum at frequency `r`
/// depends only on `gcd(r, d)`, so one representative per admissible
/// divisor of `d` suffices.
fn admissible_divisors(d: u64, m: u64) -> Vec<u64> {
    let g = gcd_u64(d, m);
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= d {
        if d.is_multiple_of(i) {
            if gcd_u64(i, g) == 1 {
                out.push(i);
            }
            let j = d / i;
            if j != i && gcd_u64(j, g) == 1 {
                out.push(j);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Is the residue `r` modulo `d` attained by a positive integer coprime to `m`?
pub fn residue_realizable(r: u64, d: u64, m: u64) -> bool {
    let g = gcd_u64(d, m);
    gcd_u64(gcd_u64(r, d), g) == 1
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Does every dilated mask sum of `f` vanish at the rational point `rho`?
///
/// The sum at frequency `alpha` depends only on `alpha` modulo the common
/// denominator of the inner products, so membership reduces to finitely
/// many exact root-of-unity sums.
pub fn z_membership(f: &Cluster, rho: &RationalTorusPoint) -> Result<bool> {
    if !f.contains_origin() {
        return Err(Error::Domain("cluster must contain the origin".into()));
    }
    if rho.dim() != f.dim() {
        return Err(Error::Dimension("torus point dimension differs from cluster".into()));
    }
    let d = mask_order(f, rho)?;
    if d == 1 {
        // Every inner product is integral: each sum equals the cluster size.
        return Ok(false);
    }
    let exps = mask_exponents(f, rho, d);
    for rep in admissible_divisors(d, f.len() as u64) {
        let scaled: Vec<i64> = exps.iter().map(|&e| e.wrapping_mul(rep as i64)).collect();
        if !root_power_sum(d, &scaled).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite set of directions whose kernels cover the common zero set:
/// scale the nonzero cluster points by the radical of the cluster size,
/// merge parallel results by taking the generator of the intersection of
/// their spans, and keep one vector per direction.
pub fn compute_delta(f: &Cluster) -> Result<DeltaSet> {
    if !f.contains_origin() {
        return Err(Error::Domain("cluster must contain the origin".into()));
    }
    if f.len() < 2 {
        return Err(Error::Domain("cluster must have at least two points".into()));
    }
    let n = BigInt::from(radical(f.len() as u64));
    let mut by_direction: BTreeMap<IntVec, BigInt> = BTreeMap::new();
    for g in f.points() {
        if g.is_zero() {
            continue;
        }
        let scaled = g.scale(&n);
        let dir = scaled.canonical_direction()?;
        let content = scaled.content();
        by_direction
            .entry(dir)
            .and_modify(|acc| *acc = acc.lcm(&content))
            .or_insert(content);
    }
    let vectors = by_direction
        .into_iter()
        .map(|(dir, scale)| dir.scale(&scale))
        .collect();
    Ok(DeltaSet { vectors })
}

/// The kernels of two independent characters meet in finitely many rational
/// lines: a common direction `v` annihilated by both, and translates on the
/// grid with denominator `n`, where `n` is the smallest positive integer
/// with both `(n, 0)` and `(0, n)` in the image lattice of the stacked
/// matrix. Grid points on the same line are merged.
pub fn kernel_intersection_lines(g: &IntVec, h: &IntVec) -> Result<RationalLineFamily> {
    let v = kernel_direction(g, h)?;

    // Image of the standard lattice under the 2x3 matrix with rows g, h.
    let cols: Vec<IntVec> = (0..3)
        .map(|i| {
            IntVec::new(vec![g.coord(i).clone(), h.coord(i).clone()])
                .expect("two-dimensional image vector")
        })
        .collect();
    let nonzero: Vec<IntVec> = cols.into_iter().filter(|c| !c.is_zero()).collect();
    let image = Sublattice::from_generators(2, &nonzero)?;
    if !image.is_full_rank() {
        return Err(Error::Domain("vectors are linearly dependent".into()));
    }
    let index = image
        .index()?
        .to_u64()
        .ok_or_else(|| Error::TooLarge("image lattice index".into()))?;
    let mut n = 1u64;
    for axis in 0..2 {
        let e = IntVec::unit(2, axis);
        let ord = (1..=index)
            .filter(|k| index % k == 0)
            .find(|&k| image.contains(&e.scale(&BigInt::from(k))))
            .expect("order divides the index");
        n = n.lcm(&ord);
    }
    if n > MAX_GRID_MODULUS {
        return Err(Error::TooLarge(format!("grid modulus {n}")));
    }

    // One grid representative per line: points with equal pairings against
    // the saturated orthogonal lattice of v lie on the same line. Lines
    // whose representative is outside both kernels never meet the kernel
    // intersection (the direction pairs to zero with g and h, so kernel
    // membership is constant along each line) and are dropped.
    let basis = orthogonal_lattice(&v)?;
    let nn = n as i64;
    let key_coeffs: Vec<[i64; 3]> = basis
        .iter()
        .map(|u| {
            [
                u.coord(0).mod_floor(&BigInt::from(nn)).to_i64().unwrap(),
                u.coord(1).mod_floor(&BigInt::from(nn)).to_i64().unwrap(),
                u.coord(2).mod_floor(&BigInt::from(nn)).to_i64().unwrap(),
            ]
        })
        .collect();
    let kernel_coeffs: Vec<[i64; 3]> = [g, h]
        .iter()
        .map(|u| {
            [
                u.coord(0).mod_floor(&BigInt::from(nn)).to_i64().unwrap(),
                u.coord(1).mod_floor(&BigInt::from(nn)).to_i64().unwrap(),
                u.coord(2).mod_floor(&BigInt::from(nn)).to_i64().unwrap(),
            ]
        })
        .collect();
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut points = Vec::new();
    for i in 0..nn {
        for j in 0..nn {
            for k in 0..nn {
                let dot = |c: &[i64; 3]| (c[0] * i + c[1] * j + c[2] * k).rem_euclid(nn);
                if dot(&kernel_coeffs[0]) != 0 || dot(&kernel_coeffs[1]) != 0 {
                    continue;
                }
                let key = (dot(&key_coeffs[0]), dot(&key_coeffs[1]));
                if seen.insert(key) {
                    points.push(RationalTorusPoint::from_fracs(&[(i, nn), (j, nn), (k, nn)]));
                }
            }
        }
    }

    Ok(RationalLineFamily {
        points,
        directions: vec![v],
        modulus: n,
    })
}

/// The restriction of the mask sum at frequency `alpha` to the line through
/// `rho` with direction `v`, as a Laurent polynomial in the line parameter
/// with root-of-unity coefficients.
pub fn line_restriction_poly(
    f: &Cluster,
    rho: &RationalTorusPoint,
    v: &IntVec,
    alpha: u64,
) -> Result<CycLaurentPoly> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if gcd_u64(alpha, f.len() as u64) != 1 {
        return Err(Error::Domain(
            "frequency must be coprime to the cluster size".into(),
        ));
    }
    let d = mask_order(f, rho)?;
    restriction_poly_at_residue(f, rho, v, d, alpha % d)
}

fn restriction_poly_at_residue(
    f: &Cluster,
    rho: &RationalTorusPoint,
    v: &IntVec,
    d: u64,
    residue: u64,
) -> Result<CycLaurentPoly> {
    let exps = mask_exponents(f, rho, d);
    let mut poly = CycLaurentPoly::new(d);
    for (g, &c) in f.points().iter().zip(&exps) {
        let z_exp = g
            .dot(v)
            .to_i64()
            .ok_or_else(|| Error::TooLarge("line exponent".into()))?
            .checked_mul(residue as i64)
            .ok_or_else(|| Error::TooLarge("line exponent".into()))?;
        let coeff = CycInt::root_power(d, c.wrapping_mul(residue as i64));
        poly.add_term(z_exp, &coeff);
    }
    Ok(poly)
}

/// Is the whole line through `rho` with direction `v` inside the common
/// zero set? Each restriction polynomial either vanishes identically or has
/// finitely many roots on the circle, so this decides whether infinitely
/// many line points are zeros of every dilated mask sum.
pub fn line_in_z(f: &Cluster, rho: &RationalTorusPoint, v: &IntVec) -> Result<bool> {
    if !f.contains_origin() {
        return Err(Error::Domain("cluster must contain the origin".into()));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let d = mask_order(f, rho)?;
    for rep in admissible_divisors(d, f.len() as u64) {
        let poly = restriction_poly_at_residue(f, rho, v, d, rep % d)?;
        if !is_zero_poly(&poly) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verify the hypothesis that the line lies in the common zero set, then
/// report whether every plane orthogonal to `v` meets the cluster in a set
/// of size divisible by `p`. The conclusion is guaranteed; it is computed
/// so it can be asserted rather than assumed.
pub fn precursor_conclusion_check(
    f: &Cluster,
    p: u64,
    rho: &RationalTorusPoint,
    v: &IntVec,
) -> Result<bool> {
    if !crate::cyclotomic::is_prime(p) || !(f.len() as u64).is_multiple_of(p) {
        return Err(Error::Domain(
            "p must be a prime dividing the cluster size".into(),
        ));
    }
    if !line_in_z(f, rho, v)? {
        return Err(Error::Domain(
            "line is not contained in the common zero set".into(),
        ));
    }
    Ok(all_fibers_divisible(&normal_fibers(f, v)?, p))
}

/// Outcome of the support dichotomy for a direction `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportDichotomy {
    /// Every line parallel to `h` meets the cluster divisibly.
    LinesDivisible,
    /// A certified finite family of rational lines covering the part of the
    /// common zero set inside the kernel of `h`.
    Lines(RationalLineFamily),
}

/// For a cluster of `p`-power size and a nonzero `h`: either all line
/// fibers along `h` are divisible by `p`, or the kernel of `h` meets the
/// common zero set inside a finite, explicitly constructed family of
/// rational lines.
pub fn support_dichotomy(f: &Cluster, p: u64, h: &IntVec) -> Result<SupportDichotomy> {
    if !f.contains_origin() {
        return Err(Error::Domain("cluster must contain the origin".into()));
    }
    if h.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut size = f.len() as u64;
    if size < 2 || !crate::cyclotomic::is_prime(p) {
        return Err(Error::Domain("p must be prime and the cluster nontrivial".into()));
    }
    while size.is_multiple_of(p) {
        size /= p;
    }
    if size != 1 {
        return Err(Error::Domain(
            "cluster size must be a power of the prime".into(),
        ));
    }

    if all_fibers_divisible(&line_fibers(f, h)?, p) {
        return Ok(SupportDichotomy::LinesDivisible);
    }

    // Move h onto the last coordinate axis; points and character indices
    // transform together, torus points contravariantly.
    let h0 = h.primitive_part()?;
    let m = h
        .content()
        .to_u64()
        .ok_or_else(|| Error::TooLarge("direction content".into()))?;
    let t = complete_to_basis(&h0)?;
    let s = t.inverse();
    let flat: Vec<IntVec> = f.points().iter().map(|g| s.apply(g)).collect();

    // Vertical-line classes of the transformed cluster, labelled by their
    // first two coordinates.
    let mut labels: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    for g in &flat {
        labels.insert((g.coord(0).clone(), g.coord(1).clone()));
    }
    let labels: Vec<(BigInt, BigInt)> = labels.into_iter().collect();

    let n = radical(f.len() as u64);
    let p_free = {
        let mut m_red = m;
        while m_red % p == 0 {
            m_red /= p;
        }
        m_red
    };
    let betas: Vec<u64> = (1..=p_free).filter(|b| p_free % b == 0).collect();

    let mut gammas: BTreeSet<IntVec> = BTreeSet::new();
    for (i, e1) in labels.iter().enumerate() {
        for (j, e2) in labels.iter().enumerate() {
            if i == j {
                continue;
            }
            for &beta in &betas {
                let scale = BigInt::from(m) * BigInt::from(n) * BigInt::from(beta);
                let flat_dual = IntVec::new(vec![
                    (&e1.0 - &e2.0) * &scale,
                    (&e1.1 - &e2.1) * &scale,
                    scale,
                ])
                .expect("three-dimensional dual vector");
                let gamma = t.apply(&flat_dual);
                debug_assert_eq!(crate::lattice::span_rank(3, &[h.clone(), gamma.clone()]), 2);
                gammas.insert(gamma);
            }
        }
    }
    debug_assert!(
        !gammas.is_empty(),
        "an indivisible fiber forces at least two line classes"
    );

    let mut points: BTreeSet<RationalTorusPoint> = BTreeSet::new();
    let mut directions: BTreeSet<IntVec> = BTreeSet::new();
    let mut modulus = 1u64;
    for gamma in &gammas {
        let family = kernel_intersection_lines(h, gamma)?;
        points.extend(family.points);
        directions.extend(family.directions);
        modulus = modulus.lcm(&family.modulus);
    }
    Ok(SupportDichotomy::Lines(RationalLineFamily {
        points: points.into_iter().collect(),
        directions: directions.into_iter().collect(),
        modulus,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Cluster {
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])
    }

    fn tower() -> Cluster {
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1]])
    }

    #[test]
    fn z_membership_examples() {
        let f = square();
        assert!(z_membership(&f, &RationalTorusPoint::from_fracs(&[(1, 2), (1, 3), (0, 1)])).unwrap());
        assert!(!z_membership(&f, &RationalTorusPoint::from_fracs(&[(0, 1), (0, 1), (0, 1)])).unwrap());
        assert!(!z_membership(&f, &RationalTorusPoint::from_fracs(&[(1, 3), (0, 1), (0, 1)])).unwrap());
    }

    #[test]
    fn z_membership_requires_origin() {
        let f = Cluster::from_i64(&[&[1, 0, 0], &[2, 0, 0]]);
        assert!(matches!(
            z_membership(&f, &RationalTorusPoint::from_fracs(&[(1, 2), (0, 1), (0, 1)])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn residue_realization_matches_brute_force() {
        // A residue is attainable by an integer coprime to m iff no prime of
        // gcd(m, d) divides it; cross-check by explicit search.
        for d in 1u64..=12 {
            for m in 1u64..=10 {
                for r in 0..d {
                    let found = (1..=4 * d * m).any(|a| a % d == r && gcd_u64(a, m) == 1);
                    assert_eq!(
                        residue_realizable(r, d, m),
                        found,
                        "d={d} m={m} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn membership_agrees_with_residue_enumeration() {
        // The divisor-representative evaluation must match direct
        // enumeration of all realizable residues.
        let clusters = [square(), tower()];
        let pts = [
            RationalTorusPoint::from_fracs(&[(1, 2), (1, 3), (0, 1)]),
            RationalTorusPoint::from_fracs(&[(1, 2), (1, 2), (0, 1)]),
            RationalTorusPoint::from_fracs(&[(1, 4), (1, 2), (1, 6)]),
            RationalTorusPoint::from_fracs(&[(1, 6), (5, 6), (1, 2)]),
            RationalTorusPoint::from_fracs(&[(2, 3), (1, 3), (3, 4)]),
        ];
        for f in &clusters {
            for rho in &pts {
                let d = mask_order(f, rho).unwrap();
                let exps = mask_exponents(f, rho, d);
                let direct = (0..d)
                    .filter(|&r| residue_realizable(r, d, f.len() as u64))
                    .all(|r| {
                        let scaled: Vec<i64> =
                            exps.iter().map(|&e| e * r as i64).collect();
                        root_power_sum(d, &scaled).is_zero()
                    });
                assert_eq!(z_membership(f, rho).unwrap(), direct);
            }
        }
    }

    #[test]
    fn delta_of_square() {
        // Directions e1, e2 and the diagonal, each scaled by radical(4) = 2.
        let f = square();
        let delta = compute_delta(&f).unwrap();
        let got: BTreeSet<IntVec> = delta.vectors().iter().cloned().collect();
        let want: BTreeSet<IntVec> = [
            IntVec::from_i64(&[2, 0, 0]),
            IntVec::from_i64(&[0, 2, 0]),
            IntVec::from_i64(&[2, 2, 0]),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn delta_merges_collinear_scales() {
        let f = Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[3, 0, 0]]);
        let delta = compute_delta(&f).unwrap();
        // Scaled points 2, 4, 6 on the first axis; the intersection of
        // their spans is generated by lcm(2, 4, 6) = 12.
        assert_eq!(delta.vectors(), &[IntVec::from_i64(&[12, 0, 0])]);
    }

    #[test]
    fn delta_of_pair() {
        let f = Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0]]);
        let delta = compute_delta(&f).unwrap();
        assert_eq!(delta.vectors(), &[IntVec::from_i64(&[2, 0, 0])]);
    }

    #[test]
    fn kernel_lines_coordinate_case() {
        let fam =
            kernel_intersection_lines(&IntVec::from_i64(&[1, 0, 0]), &IntVec::from_i64(&[0, 1, 0]))
                .unwrap();
        assert_eq!(fam.directions, vec![IntVec::from_i64(&[0, 0, 1])]);
        assert_eq!(fam.modulus, 1);
        assert_eq!(fam.points.len(), 1);
        assert!(fam.points[0].is_zero());
    }

    #[test]
    fn kernel_lines_scaled_case() {
        let fam =
            kernel_intersection_lines(&IntVec::from_i64(&[2, 0, 0]), &IntVec::from_i64(&[0, 1, 0]))
                .unwrap();
        assert_eq!(fam.directions, vec![IntVec::from_i64(&[0, 0, 1])]);
        assert_eq!(fam.modulus, 2);
    }

    #[test]
    fn kernel_lines_skew_case() {
        let fam =
            kernel_intersection_lines(&IntVec::from_i64(&[1, 1, 0]), &IntVec::from_i64(&[0, 0, 1]))
                .unwrap();
        assert_eq!(fam.directions, vec![IntVec::from_i64(&[1, -1, 0])]);
        assert_eq!(fam.modulus, 1);
    }

    #[test]
    fn kernel_lines_reject_dependent_inputs() {
        assert!(kernel_intersection_lines(
            &IntVec::from_i64(&[1, 2, 3]),
            &IntVec::from_i64(&[2, 4, 6])
        )
        .is_err());
    }

    #[test]
    fn restriction_poly_examples() {
        let f = square();
        let rho = RationalTorusPoint::from_fracs(&[(1, 2), (1, 2), (0, 1)]);
        let v = IntVec::from_i64(&[0, 0, 1]);
        assert!(is_zero_poly(&line_restriction_poly(&f, &rho, &v, 1).unwrap()));

        let zero = RationalTorusPoint::from_fracs(&[(0, 1), (0, 1), (0, 1)]);
        let q = line_restriction_poly(&f, &zero, &v, 1).unwrap();
        assert!(!is_zero_poly(&q));
        assert_eq!(
            q.coefficient(0),
            CycInt::from_integer(1, BigInt::from(4))
        );

        let g = tower();
        let rho = RationalTorusPoint::from_fracs(&[(1, 2), (0, 1), (0, 1)]);
        assert!(is_zero_poly(&line_restriction_poly(&g, &rho, &v, 1).unwrap()));
    }

    #[test]
    fn restriction_poly_rejects_bad_frequency() {
        let f = square();
        let rho = RationalTorusPoint::from_fracs(&[(1, 2), (1, 2), (0, 1)]);
        let v = IntVec::from_i64(&[0, 0, 1]);
        assert!(matches!(
            line_restriction_poly(&f, &rho, &v, 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn line_in_z_examples() {
        let f = square();
        let v = IntVec::from_i64(&[0, 0, 1]);
        assert!(line_in_z(&f, &RationalTorusPoint::from_fracs(&[(1, 2), (1, 2), (0, 1)]), &v).unwrap());
        assert!(!line_in_z(&f, &RationalTorusPoint::from_fracs(&[(0, 1), (0, 1), (0, 1)]), &v).unwrap());

        let g = tower();
        assert!(line_in_z(&g, &RationalTorusPoint::from_fracs(&[(1, 2), (0, 1), (0, 1)]), &v).unwrap());
    }

    #[test]
    fn precursor_examples() {
        let f = square();
        let v = IntVec::from_i64(&[0, 0, 1]);
        let rho = RationalTorusPoint::from_fracs(&[(1, 2), (1, 2), (0, 1)]);
        assert!(precursor_conclusion_check(&f, 2, &rho, &v).unwrap());

        let g = tower();
        let rho = RationalTorusPoint::from_fracs(&[(1, 2), (0, 1), (0, 1)]);
        assert!(precursor_conclusion_check(&g, 2, &rho, &v).unwrap());

        // Hypothesis failure: the zero point is not on a contained line.
        let zero = RationalTorusPoint::from_fracs(&[(0, 1), (0, 1), (0, 1)]);
        assert!(matches!(
            precursor_conclusion_check(&f, 2, &zero, &v),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dichotomy_divisible_branch() {
        let f = square();
        assert_eq!(
            support_dichotomy(&f, 2, &IntVec::from_i64(&[1, 0, 0])).unwrap(),
            SupportDichotomy::LinesDivisible
        );
    }

    #[test]
    fn dichotomy_line_branch_vertical() {
        let f = square();
        let out = support_dichotomy(&f, 2, &IntVec::from_i64(&[0, 0, 1])).unwrap();
        let SupportDichotomy::Lines(fam) = out else {
            panic!("expected the line branch");
        };
        assert!(!fam.points.is_empty());
        assert!(!fam.directions.is_empty());
    }

    #[test]
    fn dichotomy_line_branch_diagonal() {
        let f = tower();
        let out = support_dichotomy(&f, 2, &IntVec::from_i64(&[1, 1, 0])).unwrap();
        assert!(matches!(out, SupportDichotomy::Lines(_)));
    }

    #[test]
    fn dichotomy_rejects_non_prime_power() {
        let f = Cluster::from_i64(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[2, 0, 0],
            &[0, 1, 0],
            &[1, 1, 0],
            &[2, 1, 0],
        ]);
        assert!(matches!(
            support_dichotomy(&f, 2, &IntVec::from_i64(&[1, 0, 0])),
            Err(Error::Domain(_))
        ));
    }
}
