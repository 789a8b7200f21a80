//! Finding and verifying periodic tilings by cluster translates: exact
//! cover search on quotients by a full-rank sublattice, enumeration of
//! candidate period lattices by increasing index, a one-dimensional tiler
//! built on the transfer graph of window coverage states, dilation checks,
//! and the product construction for prisms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cluster::{Cluster, PrismDecomposition};
use crate::error::{Error, Result};
use crate::lattice::{flatten_subgroup, reduce_mod_lattice, IntVec, Sublattice};

/// Largest quotient size accepted by the exact-cover search.
const MAX_TORUS_INDEX: u64 = 100_000;

/// Largest cluster diameter for which the transfer graph is enumerated;
/// the state space is exponential in the diameter.
const MAX_1D_DIAMETER: u32 = 22;

/// A fully periodic tiling: a full-rank period lattice together with the
/// translate representatives of one fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTiling {
    dim: usize,
    period: Sublattice,
    reps: Vec<IntVec>, // reduced, sorted, distinct
}

impl PeriodicTiling {
    pub fn new(period: Sublattice, reps: Vec<IntVec>) -> Result<Self> {
        if !period.is_full_rank() {
            return Err(Error::NotFullRank);
        }
        let mut reduced: Vec<IntVec> = reps
            .iter()
            .map(|r| reduce_mod_lattice(r, &period))
            .collect::<Result<_>>()?;
        reduced.sort();
        if reduced.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(
                "translate representatives coincide modulo the period".into(),
            ));
        }
        Ok(PeriodicTiling {
            dim: period.ambient_dim(),
            period,
            reps: reduced,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> &Sublattice {
        &self.period
    }

    pub fn reps(&self) -> &[IntVec] {
        &self.reps
    }

    /// Map through a unimodular change of coordinates.
    pub fn transform(&self, t: &crate::lattice::UnimodularMatrix) -> Result<PeriodicTiling> {
        let basis: Vec<IntVec> = self.period.basis().iter().map(|b| t.apply(b)).collect();
        let period = Sublattice::from_generators(self.dim, &basis)?;
        let reps = self.reps.iter().map(|r| t.apply(r)).collect();
        PeriodicTiling::new(period, reps)
    }

    /// Translate every tile position by `w`.
    pub fn translate(&self, w: &IntVec) -> Result<PeriodicTiling> {
        let reps = self.reps.iter().map(|r| r.add(w)).collect();
        PeriodicTiling::new(self.period.clone(), reps)
    }
}

/// Does the tiling exactly partition the lattice into cluster translates?
/// Checked on the quotient: the translates of the cluster by the
/// representatives must hit every residue class exactly once.
pub fn verify_tiling(f: &Cluster, t: &PeriodicTiling) -> Result<bool> {
    if f.dim() != t.dim() {
        return Err(Error::Dimension("cluster and tiling dimensions differ".into()));
    }
    let index = t.period.index()?;
    if BigInt::from(t.reps.len()) * BigInt::from(f.len()) != index {
        return Ok(false);
    }
    let mut seen: BTreeSet<IntVec> = BTreeSet::new();
    for rep in &t.reps {
        for a in f.points() {
            if !seen.insert(reduce_mod_lattice(&rep.add(a), &t.period)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Quotient cell bookkeeping for a full-rank sublattice.
struct Torus {
    lattice: Sublattice,
    diag: Vec<u64>,
    index: usize,
}

impl Torus {
    fn new(lattice: Sublattice) -> Result<Self> {
        let diag: Vec<u64> = lattice
            .diagonal()?
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| Error::TooLarge("quotient size".into())))
            .collect::<Result<_>>()?;
        let index = diag.iter().product::<u64>();
        if index > MAX_TORUS_INDEX {
            return Err(Error::TooLarge(format!("quotient of size {index}")));
        }
        Ok(Torus {
            lattice,
            diag,
            index: index as usize,
        })
    }

    fn cell_index(&self, reduced: &IntVec) -> usize {
        let mut idx = 0usize;
        for (i, d) in self.diag.iter().enumerate() {
            let c = reduced.coord(i).to_u64().expect("reduced coordinate fits");
            idx = idx * (*d as usize) + c as usize;
        }
        idx
    }

    fn cell_vec(&self, mut idx: usize) -> IntVec {
        let mut coords = vec![BigInt::zero(); self.diag.len()];
        for i in (0..self.diag.len()).rev() {
            let d = self.diag[i] as usize;
            coords[i] = BigInt::from(idx % d);
            idx /= d;
        }
        IntVec::new(coords).expect("dimension in range")
    }
}

/// Exact cover of the quotient by translates of the cluster. Placements
/// that overlap themselves modulo the lattice are excluded. The search is
/// deterministic: the uncovered cell with fewest available placements is
/// branched first, placements in increasing cell order.
pub fn tile_torus(f: &Cluster, l: &Sublattice) -> Result<Option<PeriodicTiling>> {
    if f.dim() != l.ambient_dim() {
        return Err(Error::Dimension("cluster and lattice dimensions differ".into()));
    }
    let torus = Torus::new(l.clone())?;
    if torus.index % f.len() != 0 {
        return Err(Error::Domain(
            "quotient size is not divisible by the cluster size".into(),
        ));
    }

    let mut placements: Vec<Vec<usize>> = Vec::new();
    let mut placement_cells: Vec<usize> = Vec::new();
    for cell in 0..torus.index {
        let t = torus.cell_vec(cell);
        let mut cover: Vec<usize> = f
            .points()
            .iter()
            .map(|a| Ok(torus.cell_index(&reduce_mod_lattice(&t.add(a), &torus.lattice)?)))
            .collect::<Result<_>>()?;
        cover.sort_unstable();
        cover.dedup();
        if cover.len() < f.len() {
            continue; // self-overlapping modulo the lattice
        }
        placements.push(cover);
        placement_cells.push(cell);
    }

    let mut by_cell: Vec<Vec<usize>> = vec![Vec::new(); torus.index];
    for (pi, cover) in placements.iter().enumerate() {
        for &c in cover {
            by_cell[c].push(pi);
        }
    }

    let mut covered = vec![false; torus.index];
    let mut chosen: Vec<usize> = Vec::new();
    let found = cover_search(&placements, &by_cell, &mut covered, &mut chosen);
    if !found {
        return Ok(None);
    }
    let reps: Vec<IntVec> = chosen
        .iter()
        .map(|&pi| torus.cell_vec(placement_cells[pi]))
        .collect();
    let tiling = PeriodicTiling::new(l.clone(), reps)?;
    debug_assert!(verify_tiling(f, &tiling)?);
    Ok(Some(tiling))
}

fn cover_search(
    placements: &[Vec<usize>],
    by_cell: &[Vec<usize>],
    covered: &mut Vec<bool>,
    chosen: &mut Vec<usize>,
) -> bool {
    let available = |pi: usize, covered: &Vec<bool>| placements[pi].iter().all(|&c| !covered[c]);

    // Most constrained uncovered cell, lowest index first on ties.
    let mut best_cell = None;
    let mut best_count = usize::MAX;
    for (c, is_covered) in covered.iter().enumerate() {
        if *is_covered {
            continue;
        }
        let count = by_cell[c].iter().filter(|&&pi| available(pi, covered)).count();
        if count < best_count {
            best_count = count;
            best_cell = Some(c);
            if count == 0 {
                return false;
            }
        }
    }
    let Some(cell) = best_cell else {
        return true; // everything covered
    };

    for &pi in &by_cell[cell] {
        if !available(pi, covered) {
            continue;
        }
        for &c in &placements[pi] {
            covered[c] = true;
        }
        chosen.push(pi);
        if cover_search(placements, by_cell, covered, chosen) {
            return true;
        }
        chosen.pop();
        for &c in &placements[pi] {
            covered[c] = false;
        }
    }
    false
}

/// Enumerate the canonical Hermite bases of all full-rank sublattices of
/// the given index, in lexicographic order of the flattened basis matrix.
fn hermite_lattices_of_index(dim: usize, index: u64) -> Vec<Sublattice> {
    let mut out = Vec::new();
    let mut diag = vec![1u64; dim];
    enumerate_diagonals(dim, index, 0, &mut diag, &mut |diag| {
        let mut below: Vec<(usize, usize)> = Vec::new();
        for j in 0..dim {
            for i in j + 1..dim {
                below.push((i, j));
            }
        }
        // Sort positions so the enumeration is row-major lexicographic.
        below.sort_by_key(|&(i, j)| (i, j));
        let mut entries = vec![0u64; below.len()];
        loop {
            let mut cols: Vec<IntVec> = Vec::with_capacity(dim);
            for j in 0..dim {
                let mut coords = vec![BigInt::zero(); dim];
                coords[j] = BigInt::from(diag[j]);
                for (pos, &(bi, bj)) in below.iter().enumerate() {
                    if bj == j {
                        coords[bi] = BigInt::from(entries[pos]);
                    }
                }
                cols.push(IntVec::new(coords).expect("dimension in range"));
            }
            out.push(Sublattice::from_generators(dim, &cols).expect("full-rank basis"));
            // Odometer over the below-diagonal entries, bounded by the
            // pivot of their own row.
            let mut pos = below.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                let (bi, _) = below[pos];
                entries[pos] += 1;
                if entries[pos] < diag[bi] {
                    break;
                }
                entries[pos] = 0;
            }
        }
    });
    out
}

fn enumerate_diagonals(
    dim: usize,
    remaining: u64,
    at: usize,
    diag: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]),
) {
    if at == dim - 1 {
        diag[at] = remaining;
        emit(diag);
        return;
    }
    let mut d = 1;
    while d <= remaining {
        if remaining.is_multiple_of(d) {
            diag[at] = d;
            enumerate_diagonals(dim, remaining / d, at + 1, diag, emit);
        }
        d += 1;
    }
}

/// Search full-rank period lattices by increasing index (multiples of the
/// cluster size) up to `max_index`, returning the first exact cover found.
/// `None` means the cap was exhausted, which proves nothing about the
/// cluster.
pub fn search_fully_periodic(f: &Cluster, max_index: u64) -> Result<Option<PeriodicTiling>> {
    let size = f.len() as u64;
    let mut index = size;
    while index <= max_index {
        for l in hermite_lattices_of_index(f.dim(), index) {
            if let Some(t) = tile_torus(f, &l)? {
                return Ok(Some(t));
            }
        }
        index += size;
    }
    Ok(None)
}

/// Report of the one-dimensional tiler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimReport {
    /// Every tiling of the line by this cluster is invariant under this
    /// period (the least common multiple of the transfer cycle lengths).
    pub uniform_period: u64,
    /// One word of length `uniform_period` per transfer cycle, each in its
    /// lexicographically smallest rotation; positions marked '1' carry a
    /// tile.
    pub tilings: Vec<String>,
    pub exact: bool,
}

/// Tile the line by a one-dimensional cluster via the transfer graph of
/// coverage windows. Scanning left to right, a window of length
/// diameter + 1 determines every continuation, the transition function is
/// single-valued, and bi-infinite tilings correspond exactly to the cycles
/// of the resulting functional graph. The recurrent subgraph must therefore
/// split into disjoint cycles with in-degree one; that structural fact is
/// asserted at runtime.
pub fn tile_1d(f: &Cluster) -> Result<OneDimReport> {
    if f.dim() != 1 {
        return Err(Error::Dimension("one-dimensional tiler requires dim 1".into()));
    }
    let (f0, _) = f.normalize_origin();
    let offsets: Vec<u32> = f0
        .points()
        .iter()
        .map(|p| {
            p.coord(0)
                .to_u32()
                .ok_or_else(|| Error::TooLarge("cluster diameter".into()))
        })
        .collect::<Result<_>>()?;
    let diam = *offsets.last().expect("cluster is nonempty");
    if diam > MAX_1D_DIAMETER {
        return Err(Error::TooLarge(format!(
            "cluster diameter {diam} exceeds the transfer-graph bound {MAX_1D_DIAMETER}"
        )));
    }
    let mask: u64 = offsets.iter().fold(0u64, |m, &o| m | (1u64 << o));
    let states: usize = 1usize << diam;

    // next[s] = successor state, usize::MAX for dead ends; place[s] records
    // whether the step lays a tile.
    let mut next = vec![usize::MAX; states];
    let mut place = vec![false; states];
    for s in 0..states {
        let su = s as u64;
        if su & 1 == 1 {
            next[s] = (su >> 1) as usize;
        } else if su & mask == 0 {
            next[s] = ((su | mask) >> 1) as usize;
            place[s] = true;
        }
    }

    // Cycle extraction in the functional graph.
    let mut color = vec![0u8; states]; // 0 new, 1 on path, 2 done
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..states {
        if color[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut s = start;
        loop {
            if color[s] == 1 {
                let pos = path.iter().position(|&x| x == s).expect("state is on path");
                cycles.push(path[pos..].to_vec());
                break;
            }
            if color[s] == 2 {
                break;
            }
            color[s] = 1;
            path.push(s);
            if next[s] == usize::MAX {
                break;
            }
            s = next[s];
        }
        for &x in &path {
            color[x] = 2;
        }
    }

    // Recurrent subgraph sanity: the successor of a cycle state stays in
    // the cycle set, and each recurrent state has exactly one recurrent
    // predecessor.
    let recurrent: BTreeSet<usize> = cycles.iter().flatten().copied().collect();
    let mut indegree = vec![0usize; states];
    for &s in &recurrent {
        let nx = next[s];
        if nx == usize::MAX || !recurrent.contains(&nx) {
            return Err(Error::Internal(
                "recurrent transfer state leaves the recurrent set".into(),
            ));
        }
        indegree[nx] += 1;
    }
    if recurrent.iter().any(|&s| indegree[s] != 1) {
        return Err(Error::Internal(
            "recurrent transfer subgraph is not a disjoint union of cycles".into(),
        ));
    }

    let mut period: u64 = 1;
    for c in &cycles {
        period = period.lcm(&(c.len() as u64));
    }

    let mut tilings: BTreeSet<String> = BTreeSet::new();
    for cycle in &cycles {
        let start = *cycle.iter().min().expect("cycle is nonempty");
        let mut word = Vec::with_capacity(cycle.len());
        let mut s = start;
        for _ in 0..cycle.len() {
            word.push(if place[s] { b'1' } else { b'0' });
            s = next[s];
        }
        debug_assert_eq!(s, start);
        let mut extended = Vec::with_capacity(period as usize);
        while extended.len() < period as usize {
            extended.extend_from_slice(&word);
        }
        let canonical = minimal_rotation(&extended);
        debug_assert!(word_tiles_line(&canonical, &offsets));
        tilings.insert(String::from_utf8(canonical).expect("binary word"));
    }

    let tilings: Vec<String> = tilings.into_iter().collect();
    Ok(OneDimReport {
        uniform_period: period,
        exact: !tilings.is_empty(),
        tilings,
    })
}

fn minimal_rotation(word: &[u8]) -> Vec<u8> {
    let n = word.len();
    let mut best = word.to_vec();
    for shift in 1..n {
        let rotated: Vec<u8> = (0..n).map(|i| word[(i + shift) % n]).collect();
        if rotated < best {
            best = rotated;
        }
    }
    best
}

/// Independent check that a periodic word tiles the line: every residue is
/// covered exactly once by tile positions plus cluster offsets.
pub fn word_tiles_line(word: &[u8], offsets: &[u32]) -> bool {
    let n = word.len();
    let mut count = vec![0usize; n];
    for (i, &w) in word.iter().enumerate() {
        if w == b'1' {
            for &o in offsets {
                count[(i + o as usize) % n] += 1;
            }
        }
    }
    count.iter().all(|&c| c == 1)
}

/// Check the dilation invariance of a verified tiling: scaling the cluster
/// by a frequency coprime to its size must preserve the tiling. The result
/// is computed, not assumed.
pub fn dilation_check(f: &Cluster, t: &PeriodicTiling, alpha: u64) -> Result<bool> {
    if alpha == 0 || alpha.gcd(&(f.len() as u64)) != 1 {
        return Err(Error::Domain(
            "dilation factor must be positive and coprime to the cluster size".into(),
        ));
    }
    if !verify_tiling(f, t)? {
        return Err(Error::Domain("tiling does not verify for the cluster".into()));
    }
    verify_tiling(&f.dilate(alpha), t)
}

/// Tile a prism cluster: first the product construction (a one-dimensional
/// tiling of the offsets times a planar tiling of the flattened
/// foundation), then prioritized period lattices assembled from those two
/// factors, then the generic index-ordered search. `None` means every
/// route exhausted its cap.
pub fn tile_prism(
    p: &PrismDecomposition,
    f: &Cluster,
    max_index: u64,
) -> Result<Option<PeriodicTiling>> {
    p.validate(f)?;
    if !crate::cyclotomic::is_prime(p.foundation.len() as u64) {
        return Err(Error::Domain("prism foundation size must be prime".into()));
    }

    let flat = flatten_subgroup(&p.base)?;
    let flat_inv = flat.inverse();
    let f_flat = Cluster::new(f.points().iter().map(|x| flat.apply(x)).collect())?;
    let axis_flat = flat.apply(&p.axis);

    // One-dimensional structure of the offsets.
    let offset_cluster = Cluster::new(
        p.offsets
            .iter()
            .map(|o| IntVec::new(vec![o.clone()]).expect("dim 1"))
            .collect(),
    )?;
    let line_report = tile_1d(&offset_cluster)?;

    // Planar structure of the foundation, seen in the flattened frame.
    let foundation_flat: Vec<IntVec> = p.foundation.iter().map(|y| flat.apply(y)).collect();
    let planar = Cluster::new(
        foundation_flat
            .iter()
            .map(|y| IntVec::new(vec![y.coord(0).clone(), y.coord(1).clone()]).expect("dim 2"))
            .collect(),
    )?;
    let planar_tiling = search_fully_periodic(&planar, max_index)?;

    if let (true, Some(pt)) = (line_report.exact, planar_tiling.as_ref()) {
        let q = line_report.uniform_period;
        let word = &line_report.tilings[0];
        let line_positions: Vec<i64> = word
            .bytes()
            .enumerate()
            .filter(|&(_, b)| b == b'1')
            .map(|(i, _)| i as i64)
            .collect();

        let embed = |v2: &IntVec| {
            IntVec::new(vec![v2.coord(0).clone(), v2.coord(1).clone(), BigInt::zero()])
                .expect("dim 3")
        };
        let mut basis: Vec<IntVec> = pt.period().basis().iter().map(&embed).collect();
        basis.push(axis_flat.scale(&BigInt::from(q)));
        if let Ok(l3) = Sublattice::from_generators(3, &basis) {
            if l3.is_full_rank() {
                let mut reps = Vec::new();
                for r2 in pt.reps() {
                    for s in &line_positions {
                        reps.push(embed(r2).add(&axis_flat.scale(&BigInt::from(*s))));
                    }
                }
                if let Ok(candidate) = PeriodicTiling::new(l3, reps) {
                    if verify_tiling(&f_flat, &candidate)? {
                        let back = candidate.transform(&flat_inv)?;
                        debug_assert!(verify_tiling(f, &back)?);
                        return Ok(Some(back));
                    }
                }
            }
        }
    }

    // Prioritized fallback: stack the planar period with multiples of the
    // axis before the generic enumeration.
    if let Some(pt) = planar_tiling.as_ref() {
        let embed = |v2: &IntVec| {
            IntVec::new(vec![v2.coord(0).clone(), v2.coord(1).clone(), BigInt::zero()])
                .expect("dim 3")
        };
        for k in 1..=max_index {
            let mut basis: Vec<IntVec> = pt.period().basis().iter().map(&embed).collect();
            basis.push(axis_flat.scale(&BigInt::from(k)));
            let Ok(l3) = Sublattice::from_generators(3, &basis) else {
                continue;
            };
            if !l3.is_full_rank() {
                continue;
            }
            let index = l3.index()?;
            if index > BigInt::from(max_index) || !(&index % BigInt::from(f.len())).is_zero() {
                if index > BigInt::from(max_index) {
                    break;
                }
                continue;
            }
            if let Some(t) = tile_torus(&f_flat, &l3)? {
                let back = t.transform(&flat_inv)?;
                debug_assert!(verify_tiling(f, &back)?);
                return Ok(Some(back));
            }
        }
    }

    search_fully_periodic(f, max_index)
}
