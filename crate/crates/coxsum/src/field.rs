//! Exact field arithmetic behind a single trait.
//!
//! Four coefficient domains cover every computation in this crate:
//!
//! - [`PrimeField`]: F_p for an odd prime p, with a dense discrete-log table
//!   over a fixed smallest primitive root
//! - [`ExtField`]: F_{p^e} as F_p\[x\] modulo a deterministically chosen
//!   irreducible polynomial, with a precomputed Frobenius matrix
//! - [`Rationals`]: ℚ with arbitrary-precision integers
//! - [`NumberField`]: ℚ\[c\] for c a root of a monic irreducible integer
//!   polynomial, which degenerates to plain ℚ when the polynomial is x
//!
//! All generic linear algebra and group generation is written against the
//! [`Field`] trait, so the same code runs over any of the four.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Context-style field interface: the context owns tables and moduli, and
/// elements are plain data (copyable vectors or scalars).
pub trait Field {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero; callers test with
    /// [`Field::is_zero`] first.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Deterministic trial-division primality test; all moduli in scope are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field F_p with p odd, a fixed generator of F_p^×, and a dense
/// discrete-log table. Elements are `u64` values in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    gamma: u64,
    dlog: Vec<u64>,
}

impl PrimeField {
    /// Builds the context for an odd prime p: smallest primitive root and a
    /// complete discrete-log table.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors = prime_factors(p - 1);
        let gamma = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
            .expect("every prime field has a primitive root");
        let mut dlog = vec![0u64; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            dlog[x as usize] = k;
            x = x * gamma % p;
        }
        Ok(Self { p, gamma, dlog })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The fixed generator of the multiplicative group.
    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    /// Discrete log base gamma, defined for x ≠ 0.
    pub fn dlog(&self, x: u64) -> u64 {
        debug_assert!(x != 0 && x < self.p);
        self.dlog[x as usize]
    }

    pub fn pow(&self, x: u64, k: u64) -> u64 {
        pow_mod(x, k, self.p)
    }
}

fn pow_mod(mut x: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    x %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * x % p;
        }
        x = x * x % p;
        k >>= 1;
    }
    acc
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (n.rem_euclid(p)) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        pow_mod(*a, self.p - 2, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// F_{p^e} represented as F_p\[x\] modulo the lexicographically smallest monic
/// irreducible polynomial of degree e (coefficients compared from the highest
/// power down). Elements are coefficient vectors of length e in the power
/// basis 1, x, …, x^{e−1}; the prime subfield embeds as constant vectors.
#[derive(Debug, Clone)]
pub struct ExtField {
    base: PrimeField,
    e: usize,
    /// Monic modulus, coefficients of x^0 … x^e, length e + 1.
    modulus: Vec<u64>,
    /// Column j holds the coordinates of (x^j)^p, so applying the matrix is
    /// the Frobenius x ↦ x^p.
    frob_matrix: Vec<Vec<u64>>,
}

impl ExtField {
    pub fn new(base: &PrimeField, e: usize) -> Self {
        assert!(e >= 1, "extension degree must be at least 1");
        let p = base.p();
        let modulus = smallest_irreducible(base, e);
        let mut ext = Self {
            base: base.clone(),
            e,
            modulus,
            frob_matrix: Vec::new(),
        };
        let mut frob = vec![vec![0u64; e]; e];
        for j in 0..e {
            let mut basis_j = vec![0u64; e];
            basis_j[j] = 1;
            let img = ext.pow_no_frob(&basis_j, p);
            for i in 0..e {
                frob[i][j] = img[i];
            }
        }
        ext.frob_matrix = frob;
        ext
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Embeds an F_p scalar as a constant.
    pub fn embed(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.e];
        v[0] = c;
        v
    }

    /// x ↦ x^p via the precomputed linear map.
    pub fn frobenius(&self, x: &[u64]) -> Vec<u64> {
        let p = self.base.p();
        let mut out = vec![0u64; self.e];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0 {
                continue;
            }
            for i in 0..self.e {
                out[i] = (out[i] + self.frob_matrix[i][j] * xj) % p;
            }
        }
        out
    }

    /// The Frobenius matrix in the power basis, one column per basis vector.
    pub fn frobenius_matrix(&self) -> &[Vec<u64>] {
        &self.frob_matrix
    }

    /// Returns the F_p value when x lies in the constant-embedded prime
    /// subfield (equivalently, when frobenius(x) = x), and `None` otherwise.
    pub fn in_prime_subfield(&self, x: &[u64]) -> Option<u64> {
        if x[1..].iter().all(|&c| c == 0) {
            Some(x[0])
        } else {
            None
        }
    }

    /// Multiplies by an F_p scalar without a full polynomial product.
    pub fn scalar_mul(&self, c: u64, x: &[u64]) -> Vec<u64> {
        let p = self.base.p();
        x.iter().map(|&xi| c * xi % p).collect()
    }

    pub fn pow(&self, x: &[u64], k: u64) -> Vec<u64> {
        self.pow_no_frob(&x.to_vec(), k)
    }

    fn pow_no_frob(&self, x: &Vec<u64>, mut k: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.e]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.embed(self.base.from_i64(n))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.base.p();
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.base.p();
        a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|&x| if x == 0 { 0 } else { self.base.p() - x }).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.base.p();
        let mut prod = vec![0u64; 2 * self.e - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        poly_rem(&mut prod, &self.modulus, p);
        prod.truncate(self.e);
        prod.resize(self.e, 0);
        prod
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero");
        let p = self.base.p();
        let inv_poly = poly_ext_gcd_inverse(a, &self.modulus, p);
        let mut out = inv_poly;
        out.resize(self.e, 0);
        out
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

/// Reduces `poly` in place modulo the monic `modulus` over F_p; only entries
/// below the modulus degree remain meaningful.
fn poly_rem(poly: &mut [u64], modulus: &[u64], p: u64) {
    let e = modulus.len() - 1;
    for i in (e..poly.len()).rev() {
        let c = poly[i];
        if c == 0 {
            continue;
        }
        poly[i] = 0;
        for j in 0..e {
            let sub = c * modulus[j] % p;
            poly[i - e + j] = (poly[i - e + j] + p - sub) % p;
        }
    }
}

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Inverse of `a` modulo the monic irreducible `modulus`, by the extended
/// Euclidean algorithm over F_p[x].
fn poly_ext_gcd_inverse(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    let mut t0 = vec![0u64];
    let mut t1 = vec![1u64];
    while poly_deg(&r1).is_some() {
        let (q, rem) = poly_divmod(&r0, &r1, p);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    let lead = r0[poly_deg(&r0).expect("gcd of nonzero inputs is nonzero")];
    let scale = pow_mod(lead, p - 2, p);
    t0.iter().map(|&c| c * scale % p).collect()
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len().max(db + 1)];
    let lead_inv = pow_mod(b[db], p - 2, p);
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let c = rem[dr] * lead_inv % p;
        quot[dr - db] = c;
        for j in 0..=db {
            let sub = c * b[j] % p;
            rem[dr - db + j] = (rem[dr - db + j] + p - sub) % p;
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect()
}

/// x^(p^k) modulo f, by k successive Frobenius powers of x; deg f ≥ 2.
fn pow_p_tower(f: &[u64], k: usize, p: u64) -> Vec<u64> {
    let e = poly_deg(f).unwrap();
    let mut x = vec![0u64; e];
    x[1] = 1;
    let mut acc = x;
    for _ in 0..k {
        let mut out = vec![1u64];
        let mut base = acc.clone();
        let mut kk = p;
        while kk > 0 {
            if kk & 1 == 1 {
                let mut prod = poly_mul(&out, &base, p);
                poly_rem(&mut prod, f, p);
                prod.truncate(poly_deg(f).unwrap());
                out = prod;
            }
            let mut sq = poly_mul(&base, &base, p);
            poly_rem(&mut sq, f, p);
            sq.truncate(poly_deg(f).unwrap());
            base = sq;
            kk >>= 1;
        }
        acc = out;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    while poly_deg(&r1).is_some() {
        let (_, rem) = poly_divmod(&r0, &r1, p);
        r0 = r1;
        r1 = rem;
    }
    r0
}

/// Monic irreducibility test: f of degree e is irreducible over F_p iff
/// x^(p^e) ≡ x (mod f) and gcd(x^(p^(e/r)) − x, f) = 1 for every prime r | e.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = poly_deg(f).unwrap();
    if e == 1 {
        return true;
    }
    let xq = pow_p_tower(f, e, p);
    let mut x_poly = vec![0u64, 1];
    x_poly.resize(xq.len().max(2), 0);
    let mut diff = poly_sub(&xq, &x_poly, p);
    if poly_deg(&diff).is_some() {
        return false;
    }
    for r in prime_factors(e as u64) {
        let sub = e / r as usize;
        let xs = pow_p_tower(f, sub, p);
        diff = poly_sub(&xs, &x_poly, p);
        let g = poly_gcd(f, &diff, p);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree e,
/// comparing coefficient tuples (c_{e−1}, …, c_1, c_0) from high to low.
fn smallest_irreducible(base: &PrimeField, e: usize) -> Vec<u64> {
    let p = base.p();
    let total = (p as u128).pow(e as u32);
    for idx in 0..total {
        // idx digits are read least-significant-first into c_0 … c_{e−1}, so
        // the tuple (c_{e−1}, …, c_0) increases lexicographically with idx.
        let mut f = vec![0u64; e + 1];
        f[e] = 1;
        let mut rest = idx;
        for i in 0..e {
            f[i] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The rationals, wrapping arbitrary-precision `BigRational`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// ℚ\[c\] for c a root of a monic irreducible integer polynomial μ. Elements
/// are rational coefficient vectors of length deg μ in the basis
/// 1, c, …, c^{deg μ − 1}; degree 1 makes this plain ℚ with vectors of
/// length 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    /// Monic modulus μ, rational coefficients of c^0 … c^deg, length deg + 1.
    modulus: Vec<BigRational>,
}

impl NumberField {
    /// The degree-1 field ℚ itself, as ℚ\[c\]/(c).
    pub fn rationals() -> Self {
        Self::new(vec![0, 1])
    }

    /// Builds ℚ\[c\]/(μ) from integer coefficients of μ (low to high); μ must
    /// be monic and irreducible over ℚ.
    pub fn new(modulus_int: Vec<i64>) -> Self {
        assert!(modulus_int.len() >= 2, "modulus must have degree at least 1");
        assert_eq!(*modulus_int.last().unwrap(), 1, "modulus must be monic");
        let modulus = modulus_int
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Self { modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }

    /// Embeds a rational constant.
    pub fn embed(&self, q: BigRational) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = q;
        v
    }

    /// The generator c itself (reduced if the degree is 1).
    pub fn generator(&self) -> Vec<BigRational> {
        if self.degree() == 1 {
            // c ≡ −μ(0) since μ is monic linear.
            return vec![-self.modulus[0].clone()];
        }
        let mut v = vec![BigRational::zero(); self.degree()];
        v[1] = BigRational::one();
        v
    }

    /// Returns the rational value when the element is a constant.
    pub fn as_rational(&self, e: &[BigRational]) -> Option<BigRational> {
        if e[1..].iter().all(|c| c.is_zero()) {
            Some(e[0].clone())
        } else {
            None
        }
    }

    /// Evaluates the element at a real value of c.
    pub fn eval_real(&self, e: &[BigRational], c: f64) -> f64 {
        let mut acc = 0.0;
        for coeff in e.iter().rev() {
            acc = acc * c + rational_to_f64(coeff);
        }
        acc
    }

    /// All roots of μ mod p, in increasing order.
    pub fn roots_mod_p(&self, fp: &PrimeField) -> Result<Vec<u64>> {
        let coeffs: Vec<u64> = self
            .modulus
            .iter()
            .map(|c| rational_mod_p(c, fp))
            .collect::<Result<_>>()?;
        let p = fp.p();
        Ok((0..p)
            .filter(|&r| {
                let mut acc = 0u64;
                for &c in coeffs.iter().rev() {
                    acc = (acc * r + c) % p;
                }
                acc == 0
            })
            .collect())
    }

    /// Reduces the element mod p at a chosen root r of μ.
    pub fn reduce_mod_p(&self, e: &[BigRational], fp: &PrimeField, root: u64) -> Result<u64> {
        let mut acc = 0u64;
        for coeff in e.iter().rev() {
            let c = rational_mod_p(coeff, fp)?;
            acc = (acc * root + c) % fp.p();
        }
        Ok(acc)
    }
}

impl Field for NumberField {
    type Elem = Vec<BigRational>;

    fn zero(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.degree()]
    }
    fn one(&self) -> Vec<BigRational> {
        self.embed(BigRational::one())
    }
    fn from_i64(&self, n: i64) -> Vec<BigRational> {
        self.embed(BigRational::from_integer(BigInt::from(n)))
    }
    fn add(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn neg(&self, a: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] = &prod[i + j] + ai * bj;
            }
        }
        // Reduce modulo the monic μ.
        for i in (d..prod.len()).rev() {
            let c = prod[i].clone();
            if c.is_zero() {
                continue;
            }
            prod[i] = BigRational::zero();
            for j in 0..d {
                let delta = &c * &self.modulus[j];
                prod[i - d + j] = &prod[i - d + j] - delta;
            }
        }
        prod.truncate(d);
        prod
    }
    fn inv(&self, a: &Vec<BigRational>) -> Vec<BigRational> {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.degree() == 1 {
            return vec![a[0].recip()];
        }
        let inv = rat_poly_ext_gcd_inverse(a, &self.modulus);
        let mut out = inv;
        out.resize(self.degree(), BigRational::zero());
        out
    }
    fn is_zero(&self, a: &Vec<BigRational>) -> bool {
        a.iter().all(|c| c.is_zero())
    }
}

fn rat_poly_deg(a: &[BigRational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

fn rat_poly_ext_gcd_inverse(a: &[BigRational], modulus: &[BigRational]) -> Vec<BigRational> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while rat_poly_deg(&r1).is_some() {
        let (q, rem) = rat_poly_divmod(&r0, &r1);
        let qt1 = rat_poly_mul(&q, &t1);
        let t2 = rat_poly_sub(&t0, &qt1);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    let lead = r0[rat_poly_deg(&r0).expect("gcd of nonzero inputs is nonzero")].clone();
    t0.iter().map(|c| c / &lead).collect()
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = rat_poly_deg(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len().max(db + 1)];
    while let Some(dr) = rat_poly_deg(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &b[db];
        quot[dr - db] = c.clone();
        for j in 0..=db {
            let delta = &c * &b[j];
            rem[dr - db + j] = &rem[dr - db + j] - delta;
        }
    }
    (quot, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + ai * bj;
        }
    }
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let zero = BigRational::zero();
            let x = a.get(i).unwrap_or(&zero).clone();
            let y = b.get(i).unwrap_or(&zero);
            x - y
        })
        .collect()
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    bigint_to_f64(q.numer()) / bigint_to_f64(q.denom())
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // All integers in scope fit comfortably in f64's exact range.
    let s = n.to_string();
    s.parse::<f64>().expect("decimal integer parses as f64")
}

/// Maps a rational into F_p; fails when the denominator vanishes mod p.
pub fn rational_mod_p(q: &BigRational, fp: &PrimeField) -> Result<u64> {
    let p = BigInt::from(fp.p());
    let num = ((q.numer() % &p) + &p) % &p;
    let den = ((q.denom() % &p) + &p) % &p;
    let num: u64 = num.try_into().expect("reduced residue fits in u64");
    let den: u64 = den.try_into().expect("reduced residue fits in u64");
    if den == 0 {
        return Err(Error::Internal(format!(
            "denominator of {q} vanishes mod {}",
            fp.p()
        )));
    }
    Ok(num * fp.inv(&den) % fp.p())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_primitive_roots() {
        assert_eq!(PrimeField::new(3).unwrap().gamma(), 2);
        assert_eq!(PrimeField::new(7).unwrap().gamma(), 3);
        assert_eq!(PrimeField::new(5).unwrap().gamma(), 2);
        assert_eq!(PrimeField::new(13).unwrap().gamma(), 2);
    }

    #[test]
    fn rejects_non_primes_and_two() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(2), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn dlog_round_trip() {
        for p in [3, 5, 7, 11, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for x in 1..p {
                assert_eq!(f.pow(f.gamma(), f.dlog(x)), x);
            }
        }
    }

    #[test]
    fn degree_one_extension_matches_base() {
        let f3 = PrimeField::new(3).unwrap();
        let ext = ExtField::new(&f3, 1);
        assert_eq!(ext.modulus(), &[0, 1]);
        for a in 0..3u64 {
            for b in 0..3u64 {
                let ea = ext.embed(a);
                let eb = ext.embed(b);
                assert_eq!(ext.mul(&ea, &eb)[0], f3.mul(&a, &b));
                assert_eq!(ext.add(&ea, &eb)[0], f3.add(&a, &b));
            }
        }
    }

    #[test]
    fn f9_has_two_square_roots_of_minus_one() {
        let f3 = PrimeField::new(3).unwrap();
        let ext = ExtField::new(&f3, 2);
        let minus_one = ext.from_i64(-1);
        let mut roots = Vec::new();
        for a in 0..3u64 {
            for b in 0..3u64 {
                let x = vec![a, b];
                if ext.mul(&x, &x) == minus_one {
                    roots.push(x);
                }
            }
        }
        assert_eq!(roots.len(), 2);
        // The chosen modulus is x² + 1, so the generator itself is a root and
        // its Frobenius cube is its negative.
        let i = vec![0u64, 1];
        assert!(roots.contains(&i));
        assert_eq!(ext.frobenius(&i), ext.neg(&i));
    }

    #[test]
    fn frobenius_cycles_and_fixes_prime_subfield() {
        let f5 = PrimeField::new(5).unwrap();
        let ext = ExtField::new(&f5, 3);
        for idx in 0..125u64 {
            let x = vec![idx % 5, (idx / 5) % 5, idx / 25];
            let mut y = x.clone();
            for _ in 0..3 {
                y = ext.frobenius(&y);
            }
            assert_eq!(y, x);
        }
        let fixed = (0..125u64)
            .map(|idx| vec![idx % 5, (idx / 5) % 5, idx / 25])
            .filter(|x| ext.frobenius(x) == *x)
            .count();
        assert_eq!(fixed, 5);
    }

    #[test]
    fn frobenius_is_a_field_homomorphism() {
        let f7 = PrimeField::new(7).unwrap();
        let ext = ExtField::new(&f7, 2);
        for i in 0..49u64 {
            for j in [0u64, 13, 29, 48] {
                let x = vec![i % 7, i / 7];
                let y = vec![j % 7, j / 7];
                assert_eq!(
                    ext.frobenius(&ext.mul(&x, &y)),
                    ext.mul(&ext.frobenius(&x), &ext.frobenius(&y))
                );
                assert_eq!(
                    ext.frobenius(&ext.add(&x, &y)),
                    ext.add(&ext.frobenius(&x), &ext.frobenius(&y))
                );
            }
        }
    }

    #[test]
    fn in_prime_subfield_detects_constants() {
        let f3 = PrimeField::new(3).unwrap();
        let ext = ExtField::new(&f3, 2);
        assert_eq!(ext.in_prime_subfield(&ext.embed(2)), Some(2));
        assert_eq!(ext.in_prime_subfield(&ext.zero()), Some(0));
        assert_eq!(ext.in_prime_subfield(&vec![0, 1]), None);
        // Constant-vector test agrees with the Frobenius fixed-point test.
        for idx in 0..9u64 {
            let x = vec![idx % 3, idx / 3];
            let by_frob = ext.frobenius(&x) == x;
            assert_eq!(ext.in_prime_subfield(&x).is_some(), by_frob);
        }
    }

    #[test]
    fn extension_inverses() {
        let f7 = PrimeField::new(7).unwrap();
        for e in 1..=4usize {
            let ext = ExtField::new(&f7, e);
            for trial in 1..40u64 {
                let x: Vec<u64> = (0..e as u64).map(|i| (trial * 3 + i * 5) % 7).collect();
                if ext.is_zero(&x) {
                    continue;
                }
                assert_eq!(ext.mul(&x, &ext.inv(&x)), ext.one());
            }
        }
    }

    #[test]
    fn number_field_sqrt3_arithmetic() {
        // c² = 3 in ℚ[c]/(c² − 3).
        let nf = NumberField::new(vec![-3, 0, 1]);
        let c = nf.generator();
        assert_eq!(nf.mul(&c, &c), nf.from_i64(3));
        let one_plus = nf.add(&nf.one(), &c);
        let one_minus = nf.sub(&nf.one(), &c);
        assert_eq!(nf.mul(&one_plus, &one_minus), nf.from_i64(-2));
        let inv = nf.inv(&one_plus);
        assert!(nf.is_one(&nf.mul(&one_plus, &inv)));
    }

    #[test]
    fn number_field_reduction_mod_p() {
        // c² = 3 splits mod 11 (5² = 25 = 3), not mod 7.
        let nf = NumberField::new(vec![-3, 0, 1]);
        let f11 = PrimeField::new(11).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(nf.roots_mod_p(&f11).unwrap(), vec![5, 6]);
        assert!(nf.roots_mod_p(&f7).unwrap().is_empty());
        let half = nf.embed(BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(nf.reduce_mod_p(&half, &f11, 5).unwrap(), 6);
    }

    #[test]
    fn degree_one_number_field_is_rationals() {
        let nf = NumberField::rationals();
        assert_eq!(nf.degree(), 1);
        let two = nf.from_i64(2);
        let three = nf.from_i64(3);
        assert_eq!(nf.mul(&two, &three), nf.from_i64(6));
        assert_eq!(nf.as_rational(&two).unwrap(), BigRational::from_integer(2.into()));
    }
}
