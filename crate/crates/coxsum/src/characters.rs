//! Multiplicative characters of F_p^× and their Gauss sums.
//!
//! A character is indexed by an exponent k modulo p−1 against the fixed
//! generator γ of [`PrimeField`]: χ_k(γ^a) = ζ_{p−1}^{k·a}. The additive
//! character is fixed as ψ(x) = ζ_p^x. The Gauss sum carries the leading
//! minus sign of its definition,
//!
//! ```text
//! g(χ) = −Σ_{x ≠ 0} χ(x) ψ(x),
//! ```
//!
//! which makes g(trivial) = 1 exactly and |g(χ)|² = p for nontrivial χ.

use num_complex::Complex64;
use num_integer::Integer;

use crate::cyclo::CycloSum;
use crate::field::PrimeField;
use crate::{Error, Result};

/// A multiplicative character χ of F_p^×, stored as its exponent against the
/// field's generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultChar {
    field: PrimeField,
    k: u64,
}

impl MultChar {
    pub fn new(field: &PrimeField, k: u64) -> Self {
        Self {
            field: field.clone(),
            k: k % (field.p() - 1),
        }
    }

    pub fn trivial(field: &PrimeField) -> Self {
        Self::new(field, 0)
    }

    /// The unique character of order 2 (the Legendre symbol).
    pub fn quadratic(field: &PrimeField) -> Self {
        Self::new(field, (field.p() - 1) / 2)
    }

    /// All p−1 characters, in exponent order.
    pub fn all(field: &PrimeField) -> Vec<Self> {
        (0..field.p() - 1).map(|k| Self::new(field, k)).collect()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn order(&self) -> u64 {
        let m = self.field.p() - 1;
        m / m.gcd(&self.k)
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    /// χ raised to an integer power, as exponent arithmetic mod p−1.
    pub fn pow(&self, d: u64) -> Self {
        let m = self.field.p() - 1;
        Self::new(&self.field, self.k * (d % m) % m)
    }

    /// Pointwise product of characters.
    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.field, self.k + other.k)
    }

    /// The root-of-unity index a with χ(x) = ζ_{p−1}^a; x must be nonzero.
    pub fn eval_index(&self, x: u64) -> Result<u64> {
        if x % self.field.p() == 0 {
            return Err(Error::ZeroArgument);
        }
        let m = self.field.p() - 1;
        Ok(self.k * self.field.dlog(x % self.field.p()) % m)
    }

    pub fn eval_complex(&self, x: u64) -> Result<Complex64> {
        let a = self.eval_index(x)?;
        let angle = std::f64::consts::TAU * a as f64 / (self.field.p() - 1) as f64;
        Ok(Complex64::new(angle.cos(), angle.sin()))
    }

    /// g(χ) = −Σ_{x≠0} χ(x)ψ(x) as an exact cyclotomic sum.
    pub fn gauss_sum(&self) -> CycloSum {
        let p = self.field.p();
        let mut s = CycloSum::zero(p);
        for x in 1..p {
            let a = self.k * self.field.dlog(x) % (p - 1);
            s.add_term(a, x, -1);
        }
        s
    }
}

/// The root-of-unity index b with ψ(x) = ζ_p^b under the fixed convention
/// ψ(x) = ζ_p^x.
pub fn eval_add(field: &PrimeField, x: u64) -> u64 {
    x % field.p()
}

/// φ(x) as ±1 for x ≠ 0.
pub fn legendre(field: &PrimeField, x: u64) -> i64 {
    debug_assert!(x % field.p() != 0);
    if field.dlog(x % field.p()) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Checks the Hasse–Davenport duplication instance
/// g(χ²)·g(φ) = χ(4)·g(χ)·g(φχ). The degenerate cases (χ, χ², or φχ
/// trivial) are rejected rather than patched with conventions.
pub fn duplication_check(chi: &MultChar) -> Result<bool> {
    let field = chi.field();
    let phi = MultChar::quadratic(field);
    let chi_sq = chi.pow(2);
    let phi_chi = phi.mul(chi);
    if chi.is_trivial() {
        return Err(Error::DegenerateCharacter("χ is trivial".into()));
    }
    if chi_sq.is_trivial() {
        return Err(Error::DegenerateCharacter("χ² is trivial".into()));
    }
    if phi_chi.is_trivial() {
        return Err(Error::DegenerateCharacter("φχ is trivial".into()));
    }
    let lhs = chi_sq.gauss_sum().to_complex() * phi.gauss_sum().to_complex();
    let rhs = chi.eval_complex(4 % field.p())?
        * chi.gauss_sum().to_complex()
        * phi_chi.gauss_sum().to_complex();
    let scale = 1.0 + lhs.norm().max(rhs.norm());
    Ok((lhs - rhs).norm() <= 1e-9 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_gauss_sum_is_one_exactly() {
        for p in [3u64, 5, 7, 13, 31] {
            let f = PrimeField::new(p).unwrap();
            assert!(MultChar::trivial(&f).gauss_sum().is_one());
        }
    }

    #[test]
    fn quadratic_gauss_sum_at_three() {
        let f = PrimeField::new(3).unwrap();
        let g = MultChar::quadratic(&f).gauss_sum().to_complex();
        assert!(g.re.abs() < 1e-12);
        assert!((g.im + 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gauss_sum_magnitude_is_p() {
        for p in [3u64, 5, 7, 11, 13, 17, 29, 31] {
            let f = PrimeField::new(p).unwrap();
            for chi in MultChar::all(&f) {
                if chi.is_trivial() {
                    continue;
                }
                let norm_sq = chi.gauss_sum().to_complex().norm_sqr();
                assert!(
                    (norm_sq - p as f64).abs() <= 1e-9 * p as f64,
                    "|g(χ_{})|² = {norm_sq} ≠ {p}",
                    chi.exponent()
                );
            }
        }
    }

    #[test]
    fn character_values_are_multiplicative() {
        let f = PrimeField::new(13).unwrap();
        for chi in MultChar::all(&f) {
            for x in 1..13u64 {
                for y in 1..13u64 {
                    let lhs = chi.eval_index(x * y % 13).unwrap();
                    let rhs = (chi.eval_index(x).unwrap() + chi.eval_index(y).unwrap()) % 12;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn quadratic_character_values() {
        let f = PrimeField::new(3).unwrap();
        let phi = MultChar::quadratic(&f);
        // 2 is a non-square mod 3, 1 is a square.
        assert_eq!(phi.eval_index(2).unwrap(), 1);
        assert_eq!(phi.eval_index(1).unwrap(), 0);
        assert_eq!(legendre(&f, 2), -1);
        assert_eq!(legendre(&f, 1), 1);
        let f7 = PrimeField::new(7).unwrap();
        let phi7 = MultChar::quadratic(&f7);
        for x in 1..7u64 {
            let is_square = (1..7).any(|y| y * y % 7 == x);
            assert_eq!(phi7.eval_index(x).unwrap() == 0, is_square);
        }
    }

    #[test]
    fn character_rejects_zero() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(
            MultChar::trivial(&f).eval_index(0),
            Err(Error::ZeroArgument)
        );
    }

    #[test]
    fn duplication_holds_in_nondegenerate_cases() {
        let f7 = PrimeField::new(7).unwrap();
        let order3 = MultChar::new(&f7, 2);
        assert_eq!(order3.order(), 3);
        assert!(duplication_check(&order3).unwrap());

        let f13 = PrimeField::new(13).unwrap();
        let order4 = MultChar::new(&f13, 3);
        assert_eq!(order4.order(), 4);
        assert!(duplication_check(&order4).unwrap());
    }

    #[test]
    fn duplication_rejects_degenerate_characters() {
        let f5 = PrimeField::new(5).unwrap();
        let phi = MultChar::quadratic(&f5);
        assert!(matches!(
            duplication_check(&phi),
            Err(Error::DegenerateCharacter(_))
        ));
        assert!(matches!(
            duplication_check(&MultChar::trivial(&f5)),
            Err(Error::DegenerateCharacter(_))
        ));
    }

    #[test]
    fn duplication_sweep_small_primes() {
        for p in [5u64, 7, 11, 13, 17] {
            let f = PrimeField::new(p).unwrap();
            for chi in MultChar::all(&f) {
                match duplication_check(&chi) {
                    Ok(holds) => assert!(holds, "duplication failed at p={p}, k={}", chi.exponent()),
                    Err(Error::DegenerateCharacter(_)) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }
}
