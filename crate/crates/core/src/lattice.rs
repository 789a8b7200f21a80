//! Exact integer linear algebra over low-dimensional lattices: primitive
//! vectors, unimodular basis completion, subgroup flattening, Hermite and
//! Smith normal forms, and canonical reduction modulo a full-rank sublattice.
//!
//! All arithmetic is arbitrary precision. Sublattices are stored in a fixed
//! Hermite normal form (column style, lower triangular, pivot-positive, with
//! each pivot row reduced into `[0, pivot)`), so equal subgroups compare
//! equal syntactically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// An integer vector of dimension 1..=3 with arbitrary-precision coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVec {
    coords: Vec<BigInt>,
}

impl IntVec {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::Dimension(format!(
                "vector dimension must be 1..={MAX_DIM}, got {}",
                coords.len()
            )));
        }
        Ok(IntVec { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVec::new(coords.iter().map(|&c| BigInt::from(c)).collect())
            .expect("literal vector dimension")
    }

    pub fn zero(dim: usize) -> Self {
        IntVec::new(vec![BigInt::zero(); dim]).expect("dimension in range")
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut coords = vec![BigInt::zero(); dim];
        coords[axis] = BigInt::one();
        IntVec::new(coords).expect("dimension in range")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), other.dim());
        IntVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), other.dim());
        IntVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> IntVec {
        IntVec {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntVec {
        IntVec {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// gcd of the coordinates, nonnegative; zero only for the zero vector.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        g
    }

    /// The primitive vector spanning the same ray.
    pub fn primitive_part(&self) -> Result<IntVec> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(IntVec {
            coords: self.coords.iter().map(|c| c / &g).collect(),
        })
    }

    /// Sign-normalized direction: the first nonzero coordinate is positive.
    /// Used to identify a line direction independently of orientation.
    pub fn canonical_direction(&self) -> Result<IntVec> {
        let p = self.primitive_part()?;
        for c in &p.coords {
            if c.is_positive() {
                return Ok(p);
            }
            if c.is_negative() {
                return Ok(p.neg());
            }
        }
        unreachable!("primitive vector is nonzero")
    }
}

/// Is the gcd of the coordinates equal to one?
pub fn is_primitive(v: &IntVec) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.content().is_one())
}

/// A dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = IntMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn from_cols(cols: &[IntVec]) -> Self {
        let r = cols[0].dim();
        let c = cols.len();
        let mut m = IntMat::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.dim(), r);
            for i in 0..r {
                m[(i, j)] = col.coord(i).clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> IntVec {
        IntVec::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
            .expect("matrix dimension in range")
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &IntVec) -> IntVec {
        assert_eq!(self.cols, v.dim());
        IntVec::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * v.coord(j)).sum())
                .collect(),
        )
        .expect("matrix dimension in range")
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by Laplace expansion; intended for the small square
    /// matrices this crate works with.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => BigInt::one(),
            1 => self[(0, 0)].clone(),
            n => {
                let mut det = BigInt::zero();
                for j in 0..n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, j);
                    let term = &self[(0, j)] * minor.determinant();
                    if j % 2 == 0 {
                        det += term;
                    } else {
                        det -= term;
                    }
                }
                det
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> IntMat {
        let mut out = IntMat::zero(self.rows - 1, self.cols - 1);
        let mut oi = 0;
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let mut oj = 0;
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                out[(oi, oj)] = self[(i, j)].clone();
                oj += 1;
            }
            oi += 1;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = &self[(src, j)] * q;
            self[(dst, j)] += add;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = &self[(i, src)] * q;
            self[(i, dst)] += add;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// A square integer matrix with determinant +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMatrix {
    mat: IntMat,
}

impl UnimodularMatrix {
    pub fn new(mat: IntMat) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::Dimension("unimodular matrix must be square".into()));
        }
        if !mat.determinant().abs().is_one() {
            return Err(Error::Domain("matrix determinant is not +1 or -1".into()));
        }
        Ok(UnimodularMatrix { mat })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMatrix {
            mat: IntMat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn apply(&self, v: &IntVec) -> IntVec {
        self.mat.apply(v)
    }

    pub fn col(&self, j: usize) -> IntVec {
        self.mat.col(j)
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            mat: self.mat.mul(&other.mat),
        }
    }

    /// Exact inverse via the adjugate; the determinant is +1 or -1 so the
    /// inverse is integral.
    pub fn inverse(&self) -> UnimodularMatrix {
        let n = self.dim();
        let det = self.mat.determinant();
        let mut adj = IntMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let cof = self.mat.minor(i, j).determinant();
                let signed = if (i + j) % 2 == 0 { cof } else { -cof };
                adj[(j, i)] = if det.is_one() { signed } else { -signed };
            }
        }
        UnimodularMatrix { mat: adj }
    }
}

/// Smith normal form: returns `(U, D, V)` with `D = U * M * V`, `U` and `V`
/// unimodular, `D` diagonal with nonnegative entries and `d1 | d2 | ...`.
pub fn smith_normal_form(m: &IntMat) -> (UnimodularMatrix, IntMat, UnimodularMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut b = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    for k in 0..rows.min(cols) {
        'pivot: loop {
            // Smallest nonzero entry of the trailing submatrix becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if b[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if b[(i, j)].abs() < b[(bi, bj)].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot;
            };
            b.swap_rows(k, pi);
            u.swap_rows(k, pi);
            b.swap_cols(k, pj);
            v.swap_cols(k, pj);
            if b[(k, k)].is_negative() {
                b.negate_row(k);
                u.negate_row(k);
            }

            for i in k + 1..rows {
                if b[(i, k)].is_zero() {
                    continue;
                }
                let q = -b[(i, k)].div_floor(&b[(k, k)]);
                b.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                if !b[(i, k)].is_zero() {
                    // Remainder is smaller than the pivot; re-select.
                    continue 'pivot;
                }
            }
            for j in k + 1..cols {
                if b[(k, j)].is_zero() {
                    continue;
                }
                let q = -b[(k, j)].div_floor(&b[(k, k)]);
                b.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                if !b[(k, j)].is_zero() {
                    continue 'pivot;
                }
            }

            // Divisibility fix-up so the diagonal forms a chain.
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&b[(i, j)] % &b[(k, k)]).is_zero() {
                        let one = BigInt::one();
                        b.add_row_multiple(k, i, &one);
                        u.add_row_multiple(k, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }

    let u = UnimodularMatrix::new(u).expect("row operations preserve unimodularity");
    let v = UnimodularMatrix::new(v).expect("column operations preserve unimodularity");
    debug_assert!(snf_shape_ok(&b));
    debug_assert_eq!(u.matrix().mul(m).mul(v.matrix()), b);
    (u, b, v)
}

fn snf_shape_ok(d: &IntMat) -> bool {
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && !d[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let k = d.rows().min(d.cols());
    for i in 0..k {
        if d[(i, i)].is_negative() {
            return false;
        }
        if i + 1 < k && !d[(i + 1, i + 1)].is_zero() && !(&d[(i + 1, i + 1)] % &d[(i, i)]).is_zero()
            && !d[(i, i)].is_zero() {
                return false;
            }
    }
    true
}

/// Canonical column-style Hermite basis of the subgroup generated by `gens`:
/// pivot rows strictly increase, pivots are positive, and every entry of a
/// pivot row left of its pivot lies in `[0, pivot)`.
pub fn hnf_basis(ambient_dim: usize, gens: &[IntVec]) -> Vec<IntVec> {
    let mut active: Vec<Vec<BigInt>> = gens
        .iter()
        .inspect(|g| assert_eq!(g.dim(), ambient_dim))
        .map(|g| g.coords().to_vec())
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();

    for row in 0..ambient_dim {
        // Combine active columns until at most one has a nonzero entry at `row`.
        loop {
            let nz: Vec<usize> = (0..active.len())
                .filter(|&c| !active[c][row].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            let (a, b) = (nz[0], nz[1]);
            let ea = active[a][row].clone();
            let eb = active[b][row].clone();
            let ext = ea.extended_gcd(&eb);
            let (g, x, y) = (ext.gcd, ext.x, ext.y);
            let ca = active[a].clone();
            let cb = active[b].clone();
            let qa = &ea / &g;
            let qb = &eb / &g;
            for i in 0..ambient_dim {
                active[a][i] = &x * &ca[i] + &y * &cb[i];
                active[b][i] = &qb * &ca[i] - &qa * &cb[i];
            }
            debug_assert_eq!(active[a][row], g);
            debug_assert!(active[b][row].is_zero());
        }
        if let Some(c) = (0..active.len()).find(|&c| !active[c][row].is_zero()) {
            let mut col = active.swap_remove(c);
            if col[row].is_negative() {
                for e in col.iter_mut() {
                    let n = -std::mem::take(e);
                    *e = n;
                }
            }
            // Reduce this row's entries in the previously fixed pivot columns.
            for prev in pivots.iter_mut() {
                let q = prev[row].div_floor(&col[row]);
                if !q.is_zero() {
                    for i in 0..ambient_dim {
                        let s = &q * &col[i];
                        prev[i] -= s;
                    }
                }
            }
            pivots.push(col);
            pivot_rows.push(row);
        }
    }
    debug_assert!(active.iter().all(|c| c.iter().all(|e| e.is_zero())));
    pivots
        .into_iter()
        .map(|c| IntVec::new(c).expect("ambient dimension in range"))
        .collect()
}

/// Rank of the subgroup generated by `gens`.
pub fn span_rank(ambient_dim: usize, gens: &[IntVec]) -> usize {
    hnf_basis(ambient_dim, gens).len()
}

/// A rank-`r` subgroup of the ambient lattice, held in canonical Hermite
/// form so equality of subgroups is equality of representations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sublattice {
    ambient_dim: usize,
    basis: Vec<IntVec>,
    pivot_rows: Vec<usize>,
}

impl Sublattice {
    pub fn from_generators(ambient_dim: usize, gens: &[IntVec]) -> Result<Self> {
        if ambient_dim == 0 || ambient_dim > MAX_DIM {
            return Err(Error::Dimension(format!(
                "ambient dimension must be 1..={MAX_DIM}"
            )));
        }
        let basis = hnf_basis(ambient_dim, gens);
        if basis.is_empty() {
            return Err(Error::ZeroRank);
        }
        let pivot_rows = basis
            .iter()
            .map(|b| {
                b.coords()
                    .iter()
                    .position(|c| !c.is_zero())
                    .expect("basis vector is nonzero")
            })
            .collect();
        Ok(Sublattice {
            ambient_dim,
            basis,
            pivot_rows,
        })
    }

    pub fn from_generators_i64(ambient_dim: usize, gens: &[&[i64]]) -> Result<Self> {
        let vecs: Vec<IntVec> = gens.iter().map(|g| IntVec::from_i64(g)).collect();
        Sublattice::from_generators(ambient_dim, &vecs)
    }

    /// The standard full lattice of the given dimension.
    pub fn standard(dim: usize) -> Self {
        let gens: Vec<IntVec> = (0..dim).map(|i| IntVec::unit(dim, i)).collect();
        Sublattice::from_generators(dim, &gens).expect("standard basis has full rank")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    /// Index of a full-rank sublattice: the product of the Hermite pivots.
    pub fn index(&self) -> Result<BigInt> {
        if !self.is_full_rank() {
            return Err(Error::NotFullRank);
        }
        Ok(self
            .basis
            .iter()
            .enumerate()
            .map(|(j, b)| b.coord(j).clone())
            .product())
    }

    /// Pivot entries of a full-rank lattice; the fundamental parallelepiped
    /// of the Hermite basis is the box `[0,d1) x ... x [0,dn)`.
    pub fn diagonal(&self) -> Result<Vec<BigInt>> {
        if !self.is_full_rank() {
            return Err(Error::NotFullRank);
        }
        Ok(self
            .basis
            .iter()
            .enumerate()
            .map(|(j, b)| b.coord(j).clone())
            .collect())
    }

    /// Membership test by triangular elimination against the Hermite basis.
    pub fn contains(&self, v: &IntVec) -> bool {
        assert_eq!(v.dim(), self.ambient_dim);
        let mut x = v.clone();
        for (col, &prow) in self.basis.iter().zip(&self.pivot_rows) {
            let pivot = col.coord(prow);
            let (q, r) = x.coord(prow).div_rem(pivot);
            if !r.is_zero() {
                return false;
            }
            x = x.sub(&col.scale(&q));
        }
        x.is_zero()
    }

    /// Does the line through `v` meet the sublattice's rational span?
    pub fn spans_direction(&self, v: &IntVec) -> bool {
        let mut gens = self.basis.clone();
        gens.push(v.clone());
        span_rank(self.ambient_dim, &gens) == self.rank()
    }
}

/// For primitive `a`, a unimodular `T` with `T * e_dim = a` (the last
/// standard basis vector is carried to `a`).
pub fn complete_to_basis(a: &IntVec) -> Result<UnimodularMatrix> {
    if !is_primitive(a)? {
        return Err(Error::NotPrimitive);
    }
    let n = a.dim();
    let col = IntMat::from_cols(std::slice::from_ref(a));
    let (u, d, v) = smith_normal_form(&col);
    debug_assert!(d[(0, 0)].is_one());
    let u_inv = u.inverse();
    // a = sign(v) * (first column of U^{-1}); rotate that column into last place.
    let sign = v.matrix()[(0, 0)].clone();
    let mut cols: Vec<IntVec> = (1..n).map(|j| u_inv.col(j)).collect();
    cols.push(u_inv.col(0).scale(&sign));
    let t = UnimodularMatrix::new(IntMat::from_cols(&cols))?;
    debug_assert_eq!(t.col(n - 1), *a);
    Ok(t)
}

/// A unimodular `T` carrying every vector of the rank-`k` sublattice into
/// the subspace where the last `dim - k` coordinates vanish.
pub fn flatten_subgroup(l: &Sublattice) -> Result<UnimodularMatrix> {
    if l.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    let b = IntMat::from_cols(l.basis());
    let (u, _d, _v) = smith_normal_form(&b);
    #[cfg(debug_assertions)]
    for base in l.basis() {
        let img = u.apply(base);
        for i in l.rank()..l.ambient_dim() {
            debug_assert!(img.coord(i).is_zero());
        }
    }
    Ok(u)
}

/// Canonical representative of `v + L` in the fundamental parallelepiped of
/// the Hermite basis of the full-rank lattice `L`.
pub fn reduce_mod_lattice(v: &IntVec, l: &Sublattice) -> Result<IntVec> {
    if !l.is_full_rank() {
        return Err(Error::NotFullRank);
    }
    if v.dim() != l.ambient_dim() {
        return Err(Error::Dimension(
            "vector and lattice dimensions differ".into(),
        ));
    }
    let mut x = v.clone();
    for (i, col) in l.basis().iter().enumerate() {
        let q = x.coord(i).div_floor(col.coord(i));
        if !q.is_zero() {
            x = x.sub(&col.scale(&q));
        }
    }
    Ok(x)
}

/// Basis of the saturated orthogonal complement `{u : <u, v> = 0}` of a
/// nonzero vector in dimension 3 (rank 2).
pub fn orthogonal_lattice(v: &IntVec) -> Result<Vec<IntVec>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if v.dim() != 3 {
        return Err(Error::Dimension("orthogonal lattice requires dim 3".into()));
    }
    let row = IntMat::from_cols(std::slice::from_ref(v)).transpose();
    let (_u, d, vv) = smith_normal_form(&row);
    debug_assert!(!d[(0, 0)].is_zero());
    let b1 = vv.col(1);
    let b2 = vv.col(2);
    debug_assert!(b1.dot(v).is_zero() && b2.dot(v).is_zero());
    Ok(vec![b1, b2])
}

/// Primitive generator of the rank-1 kernel of the 2x3 matrix with rows `g`
/// and `h`, for linearly independent `g`, `h`.
pub fn kernel_direction(g: &IntVec, h: &IntVec) -> Result<IntVec> {
    if g.dim() != 3 || h.dim() != 3 {
        return Err(Error::Dimension("kernel direction requires dim 3".into()));
    }
    if span_rank(3, &[g.clone(), h.clone()]) != 2 {
        return Err(Error::Domain("vectors are linearly dependent".into()));
    }
    let m = IntMat::from_cols(&[g.clone(), h.clone()]).transpose();
    let (_u, d, v) = smith_normal_form(&m);
    debug_assert!(!d[(0, 0)].is_zero() && !d[(1, 1)].is_zero());
    let ker = v.col(2);
    debug_assert!(ker.dot(g).is_zero() && ker.dot(h).is_zero());
    ker.canonical_direction()
}
