//! Exact accumulation of character-sum terms in ℤ[ζ_{p−1}, ζ_p].
//!
//! Every summand of a character sum over F_p has the shape
//! ζ_{p−1}^a · ζ_p^b, with a the multiplicative and b the additive index.
//! [`CycloSum`] keeps one integer multiplicity per pair (a, b), so sums,
//! scalar multiples, and divisibility checks are exact; conversion to a
//! complex number happens only at comparison boundaries.
//!
//! Equality as algebraic numbers is decided through a canonical form on the
//! integral basis u^a v^b with a < φ(p−1) and 1 ≤ b ≤ p−1, obtained by
//! reducing u-polynomials modulo the cyclotomic polynomial Φ_{p−1} and
//! folding v^0 = −(v + v² + ⋯ + v^{p−1}).

use num_complex::Complex64;

use crate::{Error, Result};

/// Integer-exact sum of terms ζ_{p−1}^a · ζ_p^b over a fixed prime p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloSum {
    p: u64,
    /// Multiplicity of ζ_{p−1}^a ζ_p^b at index a·p + b.
    coeffs: Vec<i64>,
}

impl CycloSum {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            coeffs: vec![0; ((p - 1) * p) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        let mut s = Self::zero(p);
        s.add_term(0, 0, 1);
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Adds count · ζ_{p−1}^a · ζ_p^b.
    pub fn add_term(&mut self, a: u64, b: u64, count: i64) {
        let a = a % (self.p - 1);
        let b = b % self.p;
        self.coeffs[(a * self.p + b) as usize] += count;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| x * k).collect(),
        }
    }

    /// Divides every multiplicity by k, failing unless the division is exact.
    pub fn try_div_exact(&self, k: i64) -> Result<Self> {
        assert!(k != 0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c % k != 0 {
                let a = idx as u64 / self.p;
                let b = idx as u64 % self.p;
                return Err(Error::IntegralityViolation(format!(
                    "coefficient {c} at (ζ_{}^{a}, ζ_{}^{b}) is not divisible by {k}",
                    self.p - 1,
                    self.p
                )));
            }
            out.push(c / k);
        }
        Ok(Self { p: self.p, coeffs: out })
    }

    pub fn is_zero_raw(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The canonical integer coordinates on the basis u^a v^b,
    /// a < φ(p−1), 1 ≤ b ≤ p−1. Equal sums of roots of unity have equal
    /// canonical forms and conversely.
    pub fn canonical(&self) -> Vec<i128> {
        let p = self.p as usize;
        let phi = cyclotomic_poly((self.p - 1) as u32);
        let deg = phi.len() - 1;
        // Fold v^0 into the basis v^1 … v^{p−1}.
        let mut folded = vec![0i128; (p - 1) * (p - 1)];
        for a in 0..p - 1 {
            let base = self.coeffs[a * p] as i128;
            for b in 1..p {
                folded[a * (p - 1) + (b - 1)] = self.coeffs[a * p + b] as i128 - base;
            }
        }
        // Reduce each fixed-b column, a polynomial in u, modulo Φ_{p−1}(u).
        let mut out = vec![0i128; deg * (p - 1)];
        let mut col = vec![0i128; p - 1];
        for b in 0..p - 1 {
            for a in 0..p - 1 {
                col[a] = folded[a * (p - 1) + b];
            }
            for i in (deg..p - 1).rev() {
                let c = col[i];
                if c == 0 {
                    continue;
                }
                col[i] = 0;
                for (j, &phij) in phi.iter().enumerate().take(deg) {
                    col[i - deg + j] -= c * phij;
                }
            }
            for a in 0..deg {
                out[a * (p - 1) + b] = col[a];
            }
        }
        out
    }

    /// Equality as complex algebraic numbers.
    pub fn eq_as_numbers(&self, other: &Self) -> bool {
        self.p == other.p && self.canonical() == other.canonical()
    }

    /// Exact test against the integer 1.
    pub fn is_one(&self) -> bool {
        self.eq_as_numbers(&Self::one(self.p))
    }

    /// Numeric value; the only lossy operation on a [`CycloSum`].
    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let a = (idx as u64 / self.p) as f64;
            let b = (idx as u64 % self.p) as f64;
            let angle = std::f64::consts::TAU * (a / (p - 1.0) + b / p);
            acc += Complex64::new(angle.cos(), angle.sin()) * c as f64;
        }
        acc
    }
}

/// The n-th cyclotomic polynomial Φ_n, integer coefficients low to high,
/// computed by exact division of x^n − 1 by all proper-divisor factors.
pub fn cyclotomic_poly(n: u32) -> Vec<i128> {
    let mut cache: Vec<Vec<i128>> = vec![Vec::new(); n as usize + 1];
    for m in 1..=n {
        let mut f = vec![0i128; m as usize + 1];
        f[0] = -1;
        f[m as usize] = 1;
        for d in 1..m {
            if m % d == 0 {
                f = int_poly_div_exact(&f, &cache[d as usize]);
            }
        }
        cache[m as usize] = f;
    }
    cache[n as usize].clone()
}

/// Exact division of integer polynomials with monic divisor; panics when the
/// division leaves a remainder.
pub fn int_poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let db = b.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    assert_eq!(b[db], 1, "divisor must be monic");
    let mut rem = a.to_vec();
    let da = rem.iter().rposition(|&c| c != 0).unwrap_or(0);
    if da < db {
        assert!(rem.iter().all(|&c| c == 0), "division not exact");
        return vec![0];
    }
    let mut quot = vec![0i128; da - db + 1];
    for i in (db..=da).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - db] = c;
        for j in 0..=db {
            rem[i - db + j] -= c * b[j];
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division not exact");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_match_tables() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_product_recovers_x_n_minus_one() {
        for n in [6u32, 10, 12, 30] {
            let mut prod = vec![1i128];
            for d in 1..=n {
                if n % d == 0 {
                    let phi = cyclotomic_poly(d);
                    let mut next = vec![0i128; prod.len() + phi.len() - 1];
                    for (i, &a) in prod.iter().enumerate() {
                        for (j, &b) in phi.iter().enumerate() {
                            next[i + j] += a * b;
                        }
                    }
                    prod = next;
                }
            }
            let mut expect = vec![0i128; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, expect);
        }
    }

    #[test]
    fn full_additive_character_sum_vanishes() {
        for p in [3u64, 5, 7, 13] {
            let mut s = CycloSum::zero(p);
            for x in 0..p {
                s.add_term(0, x, 1);
            }
            assert!(s.eq_as_numbers(&CycloSum::zero(p)));
            assert!(s.to_complex().norm() < 1e-12);
        }
    }

    #[test]
    fn power_relation_of_zeta_four() {
        // With p = 5, u = ζ_4 = i, so u² = −1.
        let mut u_squared = CycloSum::zero(5);
        u_squared.add_term(2, 0, 1);
        let minus_one = CycloSum::one(5).neg();
        assert!(u_squared.eq_as_numbers(&minus_one));
        assert_ne!(u_squared, minus_one);
    }

    #[test]
    fn to_complex_is_additive() {
        let mut s = CycloSum::zero(7);
        let mut t = CycloSum::zero(7);
        s.add_term(2, 3, 4);
        s.add_term(1, 1, -2);
        t.add_term(5, 6, 1);
        t.add_term(2, 3, 7);
        let lhs = s.add(&t).to_complex();
        let rhs = s.to_complex() + t.to_complex();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn primitive_cube_root_value() {
        let mut s = CycloSum::zero(3);
        s.add_term(0, 1, 1);
        let z = s.to_complex();
        assert!((z.re + 0.5).abs() < 1e-12);
        assert!((z.im - 0.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exact_division_flags_violations() {
        let mut s = CycloSum::zero(5);
        s.add_term(1, 2, 6);
        assert!(s.try_div_exact(3).is_ok());
        assert!(matches!(
            s.try_div_exact(4),
            Err(Error::IntegralityViolation(_))
        ));
    }
}
