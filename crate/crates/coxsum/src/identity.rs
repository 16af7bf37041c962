//! The closed product form of the quotient character sum and its comparison
//! against exact enumeration.
//!
//! With φ the quadratic character and g the sign-normalized Gauss sum, the
//! sum over the free quotient evaluates to
//!
//! ```text
//! S_G(χ) = (−1)^n φ(discr q) g(φ)^n φ(κ) χ(κ) ∏_{i=1}^n g((φχ)^{d_i}) / g(φχ)
//! ```
//!
//! where d_1, …, d_n are the invariant degrees and κ = ∏_α q(α, α)/4 over
//! the chosen hyperplane forms. At χ = φ the product telescopes to 1 and
//! the value is (−1)^n φ(discr q) g(φ)^n.

use num_complex::Complex64;

use crate::characters::{legendre, MultChar};
use crate::coxeter::ReflectionArrangement;
use crate::sectors::QuotientPoints;
use crate::Result;

/// Right-hand side of the identity, evaluated over ℂ from exact cyclotomic
/// Gauss sums.
pub fn product_formula(arr: &ReflectionArrangement, chi: &MultChar) -> Result<Complex64> {
    let fp = arr.field();
    let n = arr.rank();
    let phi = MultChar::quadratic(fp);
    let phi_chi = phi.mul(chi);

    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let g_phi = phi.gauss_sum().to_complex();
    let g_phi_chi = phi_chi.gauss_sum().to_complex();

    let mut val = Complex64::new(sign, 0.0);
    val *= legendre(fp, arr.discr_q()) as f64;
    val *= g_phi.powi(n as i32);
    val *= legendre(fp, arr.kappa()) as f64;
    val *= chi.eval_complex(arr.kappa())?;
    for &d in arr.degrees() {
        val *= phi_chi.pow(d).gauss_sum().to_complex() / g_phi_chi;
    }
    Ok(val)
}

/// S_G(φ) in closed form.
pub fn quadratic_char_value(arr: &ReflectionArrangement) -> Complex64 {
    let fp = arr.field();
    let n = arr.rank();
    let phi = MultChar::quadratic(fp);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    phi.gauss_sum().to_complex().powi(n as i32) * legendre(fp, arr.discr_q()) as f64 * sign
}

/// Outcome of one lhs-vs-rhs comparison; the tolerance scales with the
/// magnitude of the closed form.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares the enumerated sum with the closed form at tolerance
/// `tol_scale`·(1 + |RHS|).
pub fn check_identity(
    arr: &ReflectionArrangement,
    pts: &QuotientPoints,
    chi: &MultChar,
    tol_scale: f64,
) -> Result<IdentityCheck> {
    let lhs = pts.char_sum(chi).to_complex();
    let rhs = product_formula(arr, chi)?;
    let tol = tol_scale * (1.0 + rhs.norm());
    let abs_err = (lhs - rhs).norm();
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_err,
        tol,
        pass: abs_err <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterDatum;
    use crate::field::PrimeField;

    const TOL: f64 = 1e-6;

    fn setup(label: &str, p: u64) -> (ReflectionArrangement, QuotientPoints) {
        let arr = CoxeterDatum::from_label(label)
            .unwrap()
            .reduce_mod_p(&PrimeField::new(p).unwrap())
            .unwrap();
        let pts = QuotientPoints::enumerate(&arr).unwrap();
        (arr, pts)
    }

    #[test]
    fn a1_p3_anchor_values() {
        let (arr, pts) = setup("A1", 3);
        let fp = arr.field();
        let trivial = check_identity(&arr, &pts, &MultChar::trivial(fp), TOL).unwrap();
        assert!(trivial.pass);
        assert!((trivial.lhs.re + 1.0).abs() < 1e-12);
        assert!(trivial.lhs.im.abs() < 1e-12);
        let quad = check_identity(&arr, &pts, &MultChar::quadratic(fp), TOL).unwrap();
        assert!(quad.pass);
        assert!(quad.lhs.re.abs() < 1e-12);
        assert!((quad.lhs.im + 3f64.sqrt()).abs() < 1e-12);
        let closed = quadratic_char_value(&arr);
        assert!((closed - quad.lhs).norm() < 1e-12);
    }

    #[test]
    fn a2_p7_trivial_character() {
        let (arr, pts) = setup("A2", 7);
        let check =
            check_identity(&arr, &pts, &MultChar::trivial(arr.field()), TOL).unwrap();
        assert!(check.pass);
        assert!(check.lhs.re.abs() < 1e-9);
        assert!((check.lhs.im - 7f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn all_characters_pass_on_small_types() {
        for (label, p) in [
            ("A2", 5),
            ("A2perm", 5),
            ("B2", 3),
            ("B2", 5),
            ("G2", 5),
            ("I2(6)", 11),
        ] {
            let (arr, pts) = setup(label, p);
            for chi in MultChar::all(arr.field()) {
                let check = check_identity(&arr, &pts, &chi, TOL).unwrap();
                assert!(
                    check.pass,
                    "{label} p={p} χ exponent {}: lhs {:?} rhs {:?}",
                    chi.exponent(),
                    check.lhs,
                    check.rhs
                );
            }
        }
    }

    #[test]
    fn quadratic_closed_form_agrees() {
        for (label, p) in [("A2", 5), ("B2", 5), ("G2", 7)] {
            let (arr, pts) = setup(label, p);
            let phi = MultChar::quadratic(arr.field());
            let lhs = pts.char_sum(&phi).to_complex();
            let closed = quadratic_char_value(&arr);
            let formula = product_formula(&arr, &phi).unwrap();
            assert!((lhs - closed).norm() < 1e-9, "{label} p={p}");
            assert!((formula - closed).norm() < 1e-9, "{label} p={p}");
        }
    }

    #[test]
    fn generic_characters_have_weil_magnitude() {
        let (arr, pts) = setup("G2", 7);
        let fp = arr.field();
        let phi = MultChar::quadratic(fp);
        for chi in MultChar::all(fp) {
            let phi_chi = phi.mul(&chi);
            let generic = !phi_chi.is_trivial()
                && arr.degrees().iter().all(|&d| !phi_chi.pow(d).is_trivial());
            if generic {
                let lhs = pts.char_sum(&chi).to_complex();
                assert!(
                    (lhs.norm() - 7.0).abs() < 1e-9,
                    "χ exponent {} magnitude {}",
                    chi.exponent(),
                    lhs.norm()
                );
            }
        }
    }

    #[test]
    fn rescaling_covariance() {
        let (arr, pts) = setup("A2", 5);
        let fp = arr.field();
        let c = 3u64;
        let scaled = arr.scaled_forms(c);
        let scaled_pts = QuotientPoints::enumerate(&scaled).unwrap();
        let twice_n = 2 * arr.n_hyperplanes() as u64;
        for chi in MultChar::all(fp) {
            let factor = chi.eval_complex(fp.pow(c, twice_n)).unwrap();
            let lhs = pts.char_sum(&chi).to_complex();
            let scaled_lhs = scaled_pts.char_sum(&chi).to_complex();
            assert!((scaled_lhs - factor * lhs).norm() < 1e-9);
            let check = check_identity(&scaled, &scaled_pts, &chi, TOL).unwrap();
            assert!(check.pass, "scaled identity χ exponent {}", chi.exponent());
        }
    }
}
