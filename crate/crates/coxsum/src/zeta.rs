//! Local monodromy zeta functions of the discriminant at the origin,
//! computed by recursion over connected subdiagrams, with the eigenvalue
//! (K-class) calculus on top.
//!
//! Writing W(ℰ) = Z(−T, G(ℰ)), the product relation
//!
//! ```text
//! ∏_{ℰ ⊆ D connected} W(ℰ)^{(−1)^{|ℰ|}} = ∏_{i=1}^{n} (1 − T^{d_i}) / (1 − T)^n
//! ```
//!
//! over all connected induced subdiagrams ℰ of the Coxeter diagram D
//! determines W(D) from its proper subdiagrams, since every exponent is ±1.
//! Re-multiplying all computed factors reproduces the right side exactly,
//! which is the closure test exposed here.
//!
//! [`kclass_from_zeta`] reads the monodromy eigenvalues off the cyclotomic
//! factorization of Z: a factor Φ_d in the denominator contributes each
//! primitive d-th root of unity with multiplicity +1, in the numerator −1.
//! The class M̄ carries an extra global sign (−1)^{n−1}, and the summed
//! subdiagram classes match V_φ ⊗ Σ_i (V_{d_i} − V_1): that equality is
//! [`eigenvalue_class_identity_check`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coxeter::{CoxeterType, Diagram};
use crate::cyclo::cyclotomic_poly;
use crate::{Error, Result};

type Poly = Vec<BigInt>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_from_i64(coeffs: &[i64]) -> Poly {
    poly_trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

fn poly_is_zero(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_deg(p: &Poly) -> usize {
    p.len() - 1
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(out)
}

/// T ↦ −T.
fn poly_flip(p: &Poly) -> Poly {
    p.iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
        .collect()
}

fn poly_content(p: &Poly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = gcd_bigint(&g, c);
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn poly_scale_down(p: &Poly, c: &BigInt) -> Poly {
    p.iter().map(|x| x / c).collect()
}

/// Exact polynomial division over ℚ, returning the quotient only when the
/// remainder vanishes and the quotient has integer coefficients.
fn poly_divide_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    if poly_is_zero(a) {
        return Some(vec![BigInt::zero()]);
    }
    if poly_deg(a) < poly_deg(b) {
        return None;
    }
    let to_rat = |p: &Poly| -> Vec<BigRational> {
        p.iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let mut rem = to_rat(a);
    let div = to_rat(b);
    let lead = div.last().unwrap().clone();
    let qdeg = rem.len() - div.len();
    let mut quot = vec![BigRational::zero(); qdeg + 1];
    for k in (0..=qdeg).rev() {
        let c = &rem[k + div.len() - 1] / &lead;
        quot[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in div.iter().enumerate() {
            let t = &c * d;
            rem[k + i] -= t;
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut out = Vec::with_capacity(quot.len());
    for c in quot {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(poly_trim(out))
}

/// Primitive gcd with positive lowest nonzero coefficient.
fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let to_rat = |p: &Poly| -> Vec<BigRational> {
        p.iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let trim = |mut p: Vec<BigRational>| -> Vec<BigRational> {
        while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
        p
    };
    let is_zero = |p: &[BigRational]| p.iter().all(|c| c.is_zero());
    let rem = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        let mut r = a.to_vec();
        let lead = b.last().unwrap().clone();
        while !is_zero(&r) && r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() / &lead;
            for (i, d) in b.iter().enumerate() {
                let t = &c * d;
                r[shift + i] -= t;
            }
            r.pop();
            r = trim(r);
        }
        r
    };
    let mut x = trim(to_rat(a));
    let mut y = trim(to_rat(b));
    while !is_zero(&y) {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    // Clear denominators and strip content.
    let lcm_den = x
        .iter()
        .fold(BigInt::one(), |acc, c| {
            let d = c.denom().clone();
            let g = gcd_bigint(&acc, &d);
            acc / g * d
        });
    let ints: Poly = poly_trim(
        x.iter()
            .map(|c| (c * BigRational::from(lcm_den.clone())).to_integer())
            .collect(),
    );
    let content = poly_content(&ints);
    let mut out = poly_scale_down(&ints, &content);
    if let Some(first) = out.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            out = out.iter().map(|c| -c).collect();
        }
    }
    out
}

fn poly_to_string(p: &Poly) -> String {
    let mut s = String::new();
    let mut first = true;
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                s.push('-');
            }
            first = false;
        } else if c.is_negative() {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        let coeff = if mag.is_one() && k > 0 {
            String::new()
        } else {
            mag.to_string()
        };
        let var = match k {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{k}"),
        };
        s.push_str(&coeff);
        s.push_str(&var);
    }
    if first {
        s.push('0');
    }
    s
}

/// A reduced fraction of integer polynomials in T; gcd(num, den) = 1, joint
/// coefficient content 1, lowest nonzero denominator coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunc {
    num: Poly,
    den: Poly,
}

impl RationalFunc {
    pub fn new(num: &[i64], den: &[i64]) -> Self {
        Self::from_polys(poly_from_i64(num), poly_from_i64(den))
    }

    fn from_polys(num: Poly, den: Poly) -> Self {
        assert!(!poly_is_zero(&den), "denominator must be nonzero");
        let g = poly_gcd(&num, &den);
        let num = poly_divide_exact(&num, &g).expect("gcd divides");
        let den = poly_divide_exact(&den, &g).expect("gcd divides");
        let c = gcd_bigint(&poly_content(&num), &poly_content(&den));
        let mut num = poly_scale_down(&num, &c);
        let mut den = poly_scale_down(&den, &c);
        let flip = den
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.is_negative())
            .unwrap_or(false);
        if flip {
            num = num.iter().map(|c| -c).collect();
            den = den.iter().map(|c| -c).collect();
        }
        Self { num, den }
    }

    pub fn one() -> Self {
        Self::new(&[1], &[1])
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_polys(
            poly_mul(&self.num, &other.num),
            poly_mul(&self.den, &other.den),
        )
    }

    pub fn recip(&self) -> Self {
        assert!(!poly_is_zero(&self.num), "reciprocal of zero");
        Self::from_polys(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.recip() } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// T ↦ −T in numerator and denominator.
    pub fn flip_t(&self) -> Self {
        Self::from_polys(poly_flip(&self.num), poly_flip(&self.den))
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = poly_to_string(&self.num);
        let den = poly_to_string(&self.den);
        if den == "1" {
            write!(f, "{num}")
        } else if self.num.iter().filter(|c| !c.is_zero()).count() > 1 {
            write!(f, "({num})/({den})")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

/// All nonempty vertex subsets of the diagram inducing a connected
/// subgraph, in ascending bitmask order.
pub fn connected_subdiagrams(diagram: &Diagram) -> Vec<Vec<usize>> {
    let v = diagram.vertices;
    let mut out = Vec::new();
    for mask in 1u32..(1 << v) {
        let subset: Vec<usize> = (0..v).filter(|&i| mask & (1 << i) != 0).collect();
        if induced_connected(diagram, &subset) {
            out.push(subset);
        }
    }
    out
}

fn induced_connected(diagram: &Diagram, subset: &[usize]) -> bool {
    let in_set = |v: usize| subset.binary_search(&v).is_ok();
    let mut reached = vec![false; subset.len()];
    reached[0] = true;
    let mut frontier = vec![subset[0]];
    while let Some(v) = frontier.pop() {
        for &(a, b, _) in &diagram.edges {
            let w = if a == v { b } else if b == v { a } else { continue };
            if in_set(w) {
                let idx = subset.binary_search(&w).unwrap();
                if !reached[idx] {
                    reached[idx] = true;
                    frontier.push(w);
                }
            }
        }
    }
    reached.iter().all(|&r| r)
}

/// Identifies the Coxeter type of a connected induced subdiagram: one vertex
/// is A_1, two are I_2(label), longer paths are A_k, B_k, or F_4 by their
/// label sequence, and the 4-vertex unlabeled star is D_4.
pub fn classify_subdiagram(diagram: &Diagram, subset: &[usize]) -> Result<CoxeterType> {
    let k = subset.len();
    if k == 1 {
        return Ok(CoxeterType::A(1));
    }
    let edges: Vec<(usize, usize, u32)> = diagram
        .edges
        .iter()
        .filter(|(a, b, _)| subset.contains(a) && subset.contains(b))
        .map(|&(a, b, m)| {
            (
                subset.iter().position(|&v| v == a).unwrap(),
                subset.iter().position(|&v| v == b).unwrap(),
                m,
            )
        })
        .collect();
    if k == 2 {
        let m = edges[0].2 as usize;
        return Ok(CoxeterType::I2(m));
    }

    let mut adjacency = vec![Vec::new(); k];
    for &(a, b, m) in &edges {
        adjacency[a].push((b, m));
        adjacency[b].push((a, m));
    }
    let unsupported = || {
        Error::UnsupportedSubdiagram(format!(
            "{k} vertices with edge labels {:?}",
            edges.iter().map(|e| e.2).collect::<Vec<_>>()
        ))
    };

    let max_degree = adjacency.iter().map(Vec::len).max().unwrap();
    if max_degree == 3 {
        if k == 4
            && adjacency.iter().filter(|a| a.len() == 1).count() == 3
            && edges.iter().all(|e| e.2 == 3)
        {
            return Ok(CoxeterType::D4);
        }
        return Err(unsupported());
    }
    if max_degree > 3 {
        return Err(unsupported());
    }

    // A path: walk from one endpoint and take the smaller label reading.
    let start = (0..k).find(|&v| adjacency[v].len() == 1).ok_or_else(unsupported)?;
    let mut labels = Vec::with_capacity(k - 1);
    let mut prev = usize::MAX;
    let mut cur = start;
    while labels.len() < k - 1 {
        let &(next, m) = adjacency[cur]
            .iter()
            .find(|&&(w, _)| w != prev)
            .ok_or_else(unsupported)?;
        labels.push(m);
        prev = cur;
        cur = next;
    }
    let mut canonical = labels.clone();
    let reversed: Vec<u32> = labels.into_iter().rev().collect();
    if reversed < canonical {
        canonical = reversed;
    }

    if canonical.iter().all(|&m| m == 3) {
        return Ok(CoxeterType::A(k));
    }
    if k == 4 && canonical == [3, 4, 3] {
        return Ok(CoxeterType::F4);
    }
    if canonical[k - 2] == 4 && canonical[..k - 2].iter().all(|&m| m == 3) {
        return Ok(CoxeterType::B(k));
    }
    Err(unsupported())
}

/// ∏_i (1 − T^{d_i}) / (1 − T)^n for the given degree list.
fn degree_product(degrees: &[u64]) -> RationalFunc {
    let n = degrees.len();
    let mut num = poly_from_i64(&[1]);
    for &d in degrees {
        let mut factor = vec![BigInt::zero(); d as usize + 1];
        factor[0] = BigInt::one();
        factor[d as usize] = -BigInt::one();
        num = poly_mul(&num, &factor);
    }
    let mut den = poly_from_i64(&[1]);
    let one_minus_t = poly_from_i64(&[1, -1]);
    for _ in 0..n {
        den = poly_mul(&den, &one_minus_t);
    }
    RationalFunc::from_polys(num, den)
}

/// W(ctype) = Z(−T, G), memoized over diagram classification.
fn w_of(memo: &mut HashMap<CoxeterType, RationalFunc>, ctype: CoxeterType) -> Result<RationalFunc> {
    if let Some(w) = memo.get(&ctype) {
        return Ok(w.clone());
    }
    let diagram = ctype.diagram();
    let full: Vec<usize> = (0..diagram.vertices).collect();
    let mut proper_product = RationalFunc::one();
    for subset in connected_subdiagrams(&diagram) {
        if subset == full {
            continue;
        }
        let sub = classify_subdiagram(&diagram, &subset)?;
        let w = w_of(memo, sub)?;
        let sign = if subset.len() % 2 == 0 { 1 } else { -1 };
        proper_product = proper_product.mul(&w.pow(sign));
    }
    let relation = degree_product(&essential_degrees(ctype));
    let solved = relation.mul(&proper_product.recip());
    let w = if diagram.vertices % 2 == 0 {
        solved
    } else {
        solved.recip()
    };
    memo.insert(ctype, w.clone());
    Ok(w)
}

/// Degrees of the essential reflection group of the diagram (the
/// permutation model delegates to its diagram's type).
fn essential_degrees(ctype: CoxeterType) -> Vec<u64> {
    match ctype {
        CoxeterType::APerm(n) => CoxeterType::A(n).degrees(),
        other => other.degrees(),
    }
}

/// Z(T, G) for a supported type, by the subdiagram recursion.
pub fn zeta_of_type(ctype: CoxeterType) -> Result<RationalFunc> {
    let mut memo = HashMap::new();
    let diagram = ctype.diagram();
    let full: Vec<usize> = (0..diagram.vertices).collect();
    let key = classify_subdiagram(&diagram, &full)?;
    Ok(w_of(&mut memo, key)?.flip_t())
}

/// Re-multiplies every connected subdiagram factor and compares with the
/// degree product, exactly.
pub fn product_relation_check(ctype: CoxeterType) -> Result<bool> {
    let mut memo = HashMap::new();
    let diagram = ctype.diagram();
    let mut product = RationalFunc::one();
    for subset in connected_subdiagrams(&diagram) {
        let sub = classify_subdiagram(&diagram, &subset)?;
        let w = w_of(&mut memo, sub)?;
        let sign = if subset.len() % 2 == 0 { 1 } else { -1 };
        product = product.mul(&w.pow(sign));
    }
    Ok(product == degree_product(&essential_degrees(ctype)))
}

/// A virtual multiset of roots of unity: reduced fractions a/m (the
/// eigenvalue e^{2πi·a/m}) with integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KClass {
    entries: BTreeMap<(u64, u64), i64>,
}

impl KClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// V_m: every m-th root of unity once.
    pub fn v(m: u64) -> Self {
        let mut out = Self::zero();
        for a in 0..m {
            out.add_eigenvalue(a, m, 1);
        }
        out
    }

    pub fn add_eigenvalue(&mut self, a: u64, m: u64, mult: i64) {
        assert!(m > 0);
        let g = gcd_u64(a % m, m);
        let key = ((a % m) / g, m / g);
        let entry = self.entries.entry(key).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.entries.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: i64) {
        for (&(a, m), &mult) in &other.entries {
            self.add_eigenvalue(a, m, mult * scale);
        }
    }

    /// Multiplies every eigenvalue by −1.
    pub fn tensor_phi(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, m), &mult) in &self.entries {
            out.add_eigenvalue(2 * a + m, 2 * m, mult);
        }
        out
    }

    pub fn entries(&self) -> &BTreeMap<(u64, u64), i64> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_u64(b, a % b)
    }
}

fn euler_phi(m: u64) -> u64 {
    (0..m).filter(|&a| gcd_u64(a, m) == 1).count().max(1) as u64
}

/// Eigenvalue content of a zeta function: each cyclotomic factor Φ_d in the
/// denominator adds the primitive d-th roots with +1, in the numerator with
/// −1. Any non-cyclotomic residue is an error.
pub fn kclass_from_zeta(z: &RationalFunc) -> Result<KClass> {
    let mut out = KClass::zero();
    for (poly, side) in [(z.numerator(), -1i64), (z.denominator(), 1i64)] {
        let mut rest = poly_trim(poly.to_vec());
        let bound = 2 * (poly_deg(&rest) as u64 + 1).pow(2) + 2;
        for d in 1..=bound {
            if euler_phi(d) > poly_deg(&rest) as u64 {
                continue;
            }
            let phi_d: Poly = cyclotomic_poly(d as u32)
                .iter()
                .map(|&c| BigInt::from(c))
                .collect();
            while let Some(q) = poly_divide_exact(&rest, &phi_d) {
                rest = q;
                for a in 0..d {
                    if gcd_u64(a, d) == 1 {
                        out.add_eigenvalue(a, d, side);
                    }
                }
            }
        }
        if poly_deg(&rest) != 0 || !rest[0].abs().is_one() {
            return Err(Error::NonCyclotomicFactor(format!(
                "residual factor {} after stripping cyclotomics",
                poly_to_string(&rest)
            )));
        }
    }
    Ok(out)
}

/// M̄ for a type: (−1)^{n−1} times the eigenvalue content of its zeta, with
/// n the essential rank.
pub fn mbar_of_type(ctype: CoxeterType) -> Result<KClass> {
    let z = zeta_of_type(ctype)?;
    let kc = kclass_from_zeta(&z)?;
    let n = ctype.diagram().vertices;
    let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
    let mut out = KClass::zero();
    out.add_scaled(&kc, sign);
    Ok(out)
}

/// Σ_{ℰ connected} M̄(ℰ) = V_φ ⊗ Σ_i (V_{d_i} − V_1), as K-classes.
pub fn eigenvalue_class_identity_check(ctype: CoxeterType) -> Result<bool> {
    let diagram = ctype.diagram();
    let mut lhs = KClass::zero();
    for subset in connected_subdiagrams(&diagram) {
        let sub = classify_subdiagram(&diagram, &subset)?;
        lhs.add_scaled(&mbar_of_type(sub)?, 1);
    }
    let mut inner = KClass::zero();
    for &d in &essential_degrees(ctype) {
        inner.add_scaled(&KClass::v(d), 1);
        inner.add_scaled(&KClass::v(1), -1);
    }
    Ok(lhs == inner.tensor_phi())
}

/// The constants (ā, b̄) with āV_1 + b̄V_φ equal to (−1)^{n−1} V_{φ^{n+N}};
/// always ā + b̄ = (−1)^{n−1}.
pub fn ab_constants(n: u64, n_hyperplanes: u64) -> (i64, i64) {
    let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
    let out = if (n + n_hyperplanes) % 2 == 0 {
        (sign, 0)
    } else {
        (0, sign)
    };
    assert_eq!(out.0 + out.1, sign);
    out
}
