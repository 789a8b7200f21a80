//! Exact arithmetic in the ring generated by a root of unity, with a
//! faithful zero test: elements are integer polynomials reduced modulo the
//! cyclotomic polynomial of the chosen order, so an element is zero exactly
//! when all stored coefficients vanish. Laurent polynomials with such
//! coefficients inherit a decision procedure for being identically zero.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

/// Largest order for which dense cyclotomic reduction tables are built.
/// Orders are bounded by the exactness requirements of the callers, not by
/// the ring itself; beyond this the enumeration would be infeasible anyway.
pub const MAX_ORDER: u64 = 100_000;

struct CycTable {
    /// Monic cyclotomic polynomial of this order, low degree first.
    phi: Vec<BigInt>,
    /// Reduction of x^k for k in 0..order, each of length deg(phi).
    powers: Vec<Vec<BigInt>>,
}

static TABLES: Lazy<Mutex<HashMap<u64, Arc<CycTable>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> u64 {
    let mut n = n;
    let mut rad = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            rad *= p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        rad *= n;
    }
    rad
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Exact quotient of `num` by the monic polynomial `den`.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = std::mem::take(&mut rem[k + dd]);
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().take(dd).enumerate() {
            let s = &c * d;
            rem[k + i] -= s;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn compute_phi(n: u64) -> Vec<BigInt> {
    if n == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    // (x^n - 1) divided by the cyclotomic polynomials of the proper divisors.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut result = num;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = phi_poly(d);
        result = poly_div_exact(&result, &phi_d);
    }
    result
}

/// Coefficients of the cyclotomic polynomial of order `n`, low degree first.
pub fn phi_poly(n: u64) -> Arc<Vec<BigInt>> {
    Arc::new(table(n).phi.clone())
}

fn table(n: u64) -> Arc<CycTable> {
    assert!((1..=MAX_ORDER).contains(&n), "cyclotomic order out of range");
    if let Some(t) = TABLES.lock().unwrap().get(&n) {
        return Arc::clone(t);
    }
    // Computed outside the lock; a racing duplicate computation is harmless
    // and the map stays write-once per key.
    let phi = compute_phi(n);
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut current = vec![BigInt::zero(); deg];
    if deg > 0 {
        current[0] = BigInt::one();
    }
    for _ in 0..n {
        powers.push(current.clone());
        // current <- current * x mod phi
        let top = current.pop().unwrap_or_default();
        current.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (i, c) in phi.iter().take(deg).enumerate() {
                let s = &top * c;
                current[i] -= s;
            }
        }
    }
    let entry = Arc::new(CycTable { phi, powers });
    let mut map = TABLES.lock().unwrap();
    Arc::clone(map.entry(n).or_insert(entry))
}

/// An exact element of the ring of integers extended by a primitive root of
/// unity of the given order, stored fully reduced.
#[derive(Debug, Clone)]
pub struct CycInt {
    order: u64,
    coeffs: Vec<BigInt>, // length = deg(phi_order)
}

impl CycInt {
    pub fn zero(order: u64) -> Self {
        let deg = table(order).phi.len() - 1;
        CycInt {
            order,
            coeffs: vec![BigInt::zero(); deg],
        }
    }

    pub fn one(order: u64) -> Self {
        let mut z = CycInt::zero(order);
        z.coeffs[0] = BigInt::one();
        z
    }

    pub fn from_integer(order: u64, k: BigInt) -> Self {
        let mut z = CycInt::zero(order);
        z.coeffs[0] = k;
        z
    }

    /// The root-of-unity power `zeta^k` of this order.
    pub fn root_power(order: u64, k: i64) -> Self {
        let t = table(order);
        let idx = k.rem_euclid(order as i64) as usize;
        CycInt {
            order,
            coeffs: t.powers[idx].clone(),
        }
    }

    /// Reduce an integer polynomial in the root of unity.
    pub fn from_poly(order: u64, poly: &[BigInt]) -> Self {
        let t = table(order);
        let deg = t.phi.len() - 1;
        let mut coeffs = vec![BigInt::zero(); deg];
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let red = &t.powers[k % order as usize];
            // x^k = x^(k mod order) because x^order = 1 in this quotient:
            // phi_order divides x^order - 1.
            for (i, r) in red.iter().enumerate() {
                coeffs[i] += c * r;
            }
        }
        CycInt { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Reinterpret in a larger order that this order divides.
    pub fn lift_to(&self, order: u64) -> CycInt {
        assert!(order.is_multiple_of(self.order), "orders must be nested");
        if order == self.order {
            return self.clone();
        }
        let scale = (order / self.order) as usize;
        let mut poly = vec![BigInt::zero(); (self.coeffs.len() - 1) * scale + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * scale] = c.clone();
        }
        CycInt::from_poly(order, &poly)
    }

    fn common_order(&self, other: &CycInt) -> u64 {
        self.order.lcm(&other.order)
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        let n = self.common_order(other);
        let mut a = self.lift_to(n);
        let b = other.lift_to(n);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        let n = self.common_order(other);
        let a = self.lift_to(n);
        let b = other.lift_to(n);
        let mut prod = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        CycInt::from_poly(n, &prod)
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let n = self.common_order(other);
        self.lift_to(n).coeffs == other.lift_to(n).coeffs
    }
}

impl Eq for CycInt {}

/// Exact value of the sum of root-of-unity powers `zeta^a` over the given
/// exponent multiset; exponents are reduced modulo the order first.
pub fn root_power_sum(order: u64, exponents: &[i64]) -> CycInt {
    let mut counts: BTreeMap<usize, BigInt> = BTreeMap::new();
    for &a in exponents {
        let idx = a.rem_euclid(order as i64) as usize;
        *counts.entry(idx).or_default() += 1;
    }
    let deg = counts.keys().next_back().map(|&k| k + 1).unwrap_or(1);
    let mut poly = vec![BigInt::zero(); deg];
    for (k, c) in counts {
        poly[k] = c;
    }
    CycInt::from_poly(order, &poly)
}

/// Evaluate the prime-power vanishing criterion: `is_zero` reports whether
/// the power sum vanishes at order `p^k`, and `divisibility_ok` whether a
/// vanishing sum has length divisible by `p`. The second component is a
/// theorem and should never be false; it is computed, not assumed.
pub fn phi_prime_power_check(p: u64, k: u32, exponents: &[i64]) -> (bool, bool) {
    let order = p.pow(k);
    let is_zero = root_power_sum(order, exponents).is_zero();
    let divisibility_ok = !is_zero || (exponents.len() as u64).is_multiple_of(p);
    (is_zero, divisibility_ok)
}

/// A Laurent polynomial whose coefficients live in a fixed root-of-unity
/// ring; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycLaurentPoly {
    order: u64,
    terms: BTreeMap<i64, CycInt>,
}

impl CycLaurentPoly {
    pub fn new(order: u64) -> Self {
        CycLaurentPoly {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn add_term(&mut self, exponent: i64, coeff: &CycInt) {
        let lifted = coeff.lift_to(self.order.lcm(&coeff.order()));
        debug_assert_eq!(lifted.order(), self.order, "coefficient order must divide");
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !lifted.is_zero() {
                    e.insert(lifted);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&lifted);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, CycInt> {
        &self.terms
    }

    pub fn coefficient(&self, exponent: i64) -> CycInt {
        self.terms
            .get(&exponent)
            .cloned()
            .unwrap_or_else(|| CycInt::zero(self.order))
    }
}

/// Is the Laurent polynomial identically zero? Because a nonzero Laurent
/// polynomial has finitely many roots on the unit circle, this also decides
/// whether it vanishes at infinitely many circle points.
pub fn is_zero_poly(q: &CycLaurentPoly) -> bool {
    q.terms.is_empty()
}
