//! Bi-infinite sequences in the rationals modulo one that are polynomial on
//! every coset of a modulus, under the shift-and-difference action of
//! integer Laurent operators: evaluation, annihilation tests, the unique
//! solution of unipotent difference equations from initial data, and the
//! minimal period of a rational polynomial piece.
//!
//! Two coefficient vectors can induce the same sequence modulo one (an
//! integer-valued polynomial such as `j(j-1)/2` has nonzero rational
//! coefficients), so pieces are canonicalized through the binomial basis,
//! where reducing coefficients modulo one is faithful.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spectral::frac;

/// A sequence given, on each coset `c + m*j` of the modulus `m`, by a
/// polynomial in `j` with rational coefficients taken modulo one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePolySeq {
    modulus: u64,
    pieces: Vec<Vec<BigRational>>, // canonical monomial coefficients per coset
}

/// Newton (forward difference) coefficients of the polynomial with the
/// given monomial coefficients: `b_k = (Delta^k P)(0)`.
fn newton_coeffs(monomial: &[BigRational]) -> Vec<BigRational> {
    let deg = monomial.len();
    let values: Vec<BigRational> = (0..deg).map(|j| eval_monomial(monomial, j as i64)).collect();
    let mut table = values;
    let mut out = Vec::with_capacity(deg);
    for _ in 0..deg {
        out.push(table[0].clone());
        for i in 0..table.len().saturating_sub(1) {
            table[i] = &table[i + 1] - &table[i];
        }
        table.pop();
    }
    out
}

fn eval_monomial(coeffs: &[BigRational], j: i64) -> BigRational {
    let x = BigRational::from(BigInt::from(j));
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// Monomial coefficients of `sum_k b_k * C(j, k)`.
fn binomial_to_monomial(newton: &[BigRational]) -> Vec<BigRational> {
    let deg = newton.len();
    let mut out = vec![BigRational::zero(); deg];
    // C(j, k) = j (j-1) ... (j-k+1) / k!
    let mut falling = vec![BigRational::one()]; // coefficients of the falling factorial
    let mut k_fact = BigInt::one();
    for (k, b) in newton.iter().enumerate() {
        if k > 0 {
            // falling <- falling * (j - (k-1))
            let shift = BigRational::from(BigInt::from(k as i64 - 1));
            let mut next = vec![BigRational::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - c * &shift;
            }
            falling = next;
            k_fact *= BigInt::from(k as u64);
        }
        if b.is_zero() {
            continue;
        }
        let scale = b / BigRational::from(k_fact.clone());
        for (i, c) in falling.iter().enumerate() {
            out[i] = &out[i] + c * &scale;
        }
    }
    out
}

/// Canonical monomial coefficients: reduce the Newton coefficients modulo
/// one, rebuild, and reduce the monomial coefficients modulo one. Two
/// pieces induce equal sequences modulo one exactly when their canonical
/// forms coincide.
fn canonicalize_piece(monomial: &[BigRational]) -> Vec<BigRational> {
    let reduced_newton: Vec<BigRational> = newton_coeffs(monomial).iter().map(frac).collect();
    let mut out: Vec<BigRational> = binomial_to_monomial(&reduced_newton).iter().map(frac).collect();
    while out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

impl PiecewisePolySeq {
    pub fn new(modulus: u64, pieces: Vec<Vec<BigRational>>) -> Result<Self> {
        if modulus == 0 || pieces.len() != modulus as usize {
            return Err(Error::Domain(
                "sequence needs one piece per coset of its modulus".into(),
            ));
        }
        Ok(PiecewisePolySeq {
            modulus,
            pieces: pieces.iter().map(|p| canonicalize_piece(p)).collect(),
        })
    }

    /// Constant-zero sequence.
    pub fn zero(modulus: u64) -> Self {
        PiecewisePolySeq {
            modulus,
            pieces: vec![Vec::new(); modulus as usize],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pieces(&self) -> &[Vec<BigRational>] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.is_empty())
    }

    /// Value at index `i`, in `[0, 1)`.
    pub fn eval(&self, i: i64) -> BigRational {
        let m = self.modulus as i64;
        let c = i.rem_euclid(m);
        let j = (i - c) / m;
        frac(&eval_monomial(&self.pieces[c as usize], j))
    }

    /// Re-express with a coarser indexing: any multiple of the modulus.
    pub fn with_modulus(&self, m: u64) -> PiecewisePolySeq {
        assert!(m.is_multiple_of(self.modulus));
        if m == self.modulus {
            return self.clone();
        }
        let scale = (m / self.modulus) as i64;
        let mut pieces = Vec::with_capacity(m as usize);
        for c in 0..m as i64 {
            // On coset c + m*j the old piece index is c mod m0, evaluated
            // at scale*j + (c div m0).
            let c0 = c.rem_euclid(self.modulus as i64);
            let q0 = (c - c0) / self.modulus as i64;
            let old = &self.pieces[c0 as usize];
            pieces.push(compose_affine(old, scale, q0));
        }
        PiecewisePolySeq::new(m, pieces).expect("modulus matches piece count")
    }
}

/// Coefficients of `P(a*j + b)`.
fn compose_affine(coeffs: &[BigRational], a: i64, b: i64) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); coeffs.len()];
    // Horner in the substituted variable.
    for c in coeffs.iter().rev() {
        // out <- out * (a j + b) + c
        let mut next = vec![BigRational::zero(); out.len() + 1];
        let ra = BigRational::from(BigInt::from(a));
        let rb = BigRational::from(BigInt::from(b));
        for (i, o) in out.iter().enumerate() {
            next[i + 1] = &next[i + 1] + o * &ra;
            next[i] = &next[i] + o * &rb;
        }
        next[0] = &next[0] + c;
        next.pop();
        out = next;
    }
    out
}

/// A Laurent polynomial with integer coefficients acting on sequences by
/// shifts: the monomial of exponent `n` sends a sequence to its shift by
/// `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentOperator {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentOperator {
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut map = BTreeMap::new();
        for &(e, c) in terms {
            if c != 0 {
                let entry: &mut BigInt = map.entry(e).or_default();
                *entry += c;
                if entry.is_zero() {
                    map.remove(&e);
                }
            }
        }
        LaurentOperator { terms: map }
    }

    /// The shift by `n`.
    pub fn shift(n: i64) -> Self {
        LaurentOperator::from_terms(&[(n, 1)])
    }

    /// The forward difference `u - 1`.
    pub fn difference() -> Self {
        LaurentOperator::from_terms(&[(1, 1), (0, -1)])
    }

    /// `u^m - 1`.
    pub fn unipotent(m: u64) -> Self {
        LaurentOperator::from_terms(&[(m as i64, 1), (0, -1)])
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn mul(&self, other: &LaurentOperator) -> LaurentOperator {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let entry = map.entry(e1 + e2).or_default();
                *entry += c1 * c2;
            }
        }
        map.retain(|_, c| !c.is_zero());
        LaurentOperator { terms: map }
    }

    pub fn pow(&self, k: u32) -> LaurentOperator {
        let mut acc = LaurentOperator::from_terms(&[(0, 1)]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Apply an operator to a sequence; the result keeps the sequence's
/// modulus and satisfies `act(pq, s) = act(p, act(q, s))`.
pub fn act(op: &LaurentOperator, s: &PiecewisePolySeq) -> PiecewisePolySeq {
    let m = s.modulus() as i64;
    let mut pieces = Vec::with_capacity(s.modulus() as usize);
    for c in 0..m {
        // (op s)_{c + m j} = sum_n a_n s_{c + n + m j}; splitting c + n into
        // coset and quotient turns each term into a piece composed with an
        // index shift.
        let mut acc: Vec<BigRational> = Vec::new();
        for (n, a) in s_terms(op) {
            let c0 = (c + n).rem_euclid(m);
            let q0 = (c + n - c0) / m;
            let shifted = compose_affine(&s.pieces[c0 as usize], 1, q0);
            let scale = BigRational::from(a.clone());
            if acc.len() < shifted.len() {
                acc.resize(shifted.len(), BigRational::zero());
            }
            for (i, coeff) in shifted.iter().enumerate() {
                acc[i] = &acc[i] + coeff * &scale;
            }
        }
        pieces.push(acc);
    }
    PiecewisePolySeq::new(s.modulus(), pieces).expect("modulus matches piece count")
}

fn s_terms(op: &LaurentOperator) -> impl Iterator<Item = (i64, &BigInt)> {
    op.terms.iter().map(|(&e, c)| (e, c))
}

/// Does the operator send the sequence to zero?
pub fn is_annihilated(s: &PiecewisePolySeq, op: &LaurentOperator) -> bool {
    act(op, s).is_zero()
}

/// The unique sequence annihilated by `(u^m - 1)^k` with the given first
/// `m * k` values: on each coset the Newton coefficients are read off from
/// the initial values by repeated differencing.
pub fn solve_unipotent(m: u64, k: u32, initial: &[BigRational]) -> Result<PiecewisePolySeq> {
    if m == 0 || k == 0 {
        return Err(Error::Domain("modulus and order must be positive".into()));
    }
    if initial.len() != (m * k as u64) as usize {
        return Err(Error::Domain(format!(
            "expected {} initial values, got {}",
            m * k as u64,
            initial.len()
        )));
    }
    let mut pieces = Vec::with_capacity(m as usize);
    for c in 0..m as usize {
        let coset_values: Vec<BigRational> = (0..k as usize)
            .map(|j| frac(&initial[c + j * m as usize]))
            .collect();
        // Forward differences at zero give the binomial-basis coefficients.
        let mut table = coset_values;
        let mut newton = Vec::with_capacity(k as usize);
        for _ in 0..k {
            newton.push(table[0].clone());
            for i in 0..table.len().saturating_sub(1) {
                table[i] = &table[i + 1] - &table[i];
            }
            table.pop();
        }
        pieces.push(binomial_to_monomial(&newton));
    }
    let seq = PiecewisePolySeq::new(m, pieces)?;
    debug_assert!(is_annihilated(&seq, &LaurentOperator::unipotent(m).pow(k)));
    debug_assert!((0..initial.len()).all(|i| seq.eval(i as i64) == frac(&initial[i])));
    Ok(seq)
}

/// Collapse a product of unipotent factors into a single power: the product
/// of `u^{m_i} - 1` divides `(u^m - 1)^k` with `m` the least common
/// multiple and `k` the number of factors. The divisibility is checked by
/// exact polynomial division on every call.
pub fn reduce_annihilator(moduli: &[u64]) -> Result<(u64, u32)> {
    if moduli.is_empty() || moduli.contains(&0) {
        return Err(Error::Domain("moduli must be positive and nonempty".into()));
    }
    let m = moduli.iter().fold(1u64, |acc, &x| acc.lcm(&x));
    let k = moduli.len() as u32;

    let product = moduli
        .iter()
        .fold(LaurentOperator::from_terms(&[(0, 1)]), |acc, &mi| {
            acc.mul(&LaurentOperator::unipotent(mi))
        });
    let target = LaurentOperator::unipotent(m).pow(k);
    if !divides_as_polynomial(&product, &target) {
        return Err(Error::Internal(
            "product of unipotent factors does not divide the collapsed power".into(),
        ));
    }
    Ok((m, k))
}

/// Exact divisibility of Laurent polynomials with integer coefficients,
/// via ordinary polynomial division of the normalized forms.
fn divides_as_polynomial(div: &LaurentOperator, num: &LaurentOperator) -> bool {
    let to_vec = |op: &LaurentOperator| -> Vec<BigInt> {
        let min = *op.terms.keys().next().expect("nonzero operator");
        let max = *op.terms.keys().next_back().expect("nonzero operator");
        let mut v = vec![BigInt::zero(); (max - min + 1) as usize];
        for (e, c) in &op.terms {
            v[(e - min) as usize] = c.clone();
        }
        v
    };
    let d = to_vec(div);
    let mut r = to_vec(num);
    if r.len() < d.len() {
        return false;
    }
    let lead = d.last().expect("nonempty").clone();
    for k in (0..=r.len() - d.len()).rev() {
        let c = r[k + d.len() - 1].clone();
        if c.is_zero() {
            continue;
        }
        let (q, rem) = c.div_rem(&lead);
        if !rem.is_zero() {
            return false;
        }
        for (i, di) in d.iter().enumerate() {
            let s = di * &q;
            r[k + i] -= s;
        }
    }
    r.iter().all(|c| c.is_zero())
}

/// Outcome of the periodicity classification of a polynomial piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeylClass {
    /// The sequence repeats with this minimal period.
    Periodic(u64),
    /// Unreachable for rational coefficients; a polynomial sequence with an
    /// irrational coefficient equidistributes instead of repeating.
    Equidistributed,
}

/// Minimal period of the sequence `j -> P(j) mod 1` for a rational
/// polynomial `P`. The shift difference `P(j + n) - P(j)` has integer
/// coefficients whenever `n` is a multiple of `L * d!` (`L` the common
/// denominator, `d` the degree), so the minimal period exists and divides
/// that bound; it is found by scanning the bound's divisors.
pub fn classify_weyl(piece: &[BigRational]) -> WeylClass {
    let canonical = canonicalize_piece(piece);
    if canonical.len() <= 1 {
        return WeylClass::Periodic(1);
    }
    let degree = canonical.len() - 1;
    let mut denom_lcm = BigInt::one();
    for c in &canonical[1..] {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut bound = denom_lcm;
    for i in 2..=degree {
        bound *= BigInt::from(i as u64);
    }
    let bound = bound.to_u64().expect("period bound fits");

    let mut divisors: Vec<u64> = (1..=bound).filter(|d| bound % d == 0).collect();
    divisors.sort_unstable();
    for n in divisors {
        if shift_invariant(&canonical, n) {
            return WeylClass::Periodic(n);
        }
    }
    unreachable!("the period bound itself is always a period")
}

/// Is `P(j + n) - P(j)` an integer for every integer `j`? The difference
/// has degree below `deg P`, so integrality at `deg P` consecutive points
/// settles it.
fn shift_invariant(coeffs: &[BigRational], n: u64) -> bool {
    let deg = coeffs.len().saturating_sub(1);
    (0..deg.max(1)).all(|j| {
        let diff = eval_monomial(coeffs, j as i64 + n as i64) - eval_monomial(coeffs, j as i64);
        diff.is_integer()
    })
}
