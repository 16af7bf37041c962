//! Exact evaluation of the quotient character sum by enumerating
//! Frobenius-twisted fixed loci.
//!
//! For a group element g of order e, the locus V_g = {x ∈ F_{p^e}^n :
//! Frob(x) = g·x} is an n-dimensional F_p-vector space, computed as the
//! kernel of I_n⊗Φ − g⊗I_e acting on F_p^{ne}. Both Δ and q are constant
//! under Frob on V_g, hence take values in F_p there, so a single pass per
//! conjugacy class records the histogram of (dlog Δ(x), q(x)) over the
//! points with Δ(x) ≠ 0. Off the divisor Δ = 0 the group acts freely, so
//! the class-size-weighted totals are exactly divisible by |G| and the
//! quotient histogram counts the F_p-points of U/G; every character sum is
//! a weighted fold of that one histogram.
//!
//! [`QuotientPoints::enumerate_by_orbits`] recounts the same points the
//! slow way, as Frobenius-stable free G-orbits in U(F̄_p) grouped by
//! minimal field of definition, and serves as an independent cross-check.

use std::collections::BTreeMap;

use crate::characters::MultChar;
use crate::coxeter::ReflectionArrangement;
use crate::cyclo::CycloSum;
use crate::field::{ExtField, Field};
use crate::linalg::{kernel_basis, Matrix};
use crate::{Error, Result};

type ExtElem = Vec<u64>;
type ExtPoint = Vec<ExtElem>;

/// F_p-points of the free quotient U/G, stratified by the pair
/// (dlog Δ, q) that determines every character-sum contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPoints {
    p: u64,
    hist: BTreeMap<(u64, u64), i64>,
}

impl QuotientPoints {
    /// One pass per conjugacy class over the p^n points of its twisted
    /// sector, aggregated with class sizes and divided exactly by |G|.
    pub fn enumerate(arr: &ReflectionArrangement) -> Result<Self> {
        let fp = arr.field();
        let mut orders: Vec<usize> = arr.conj_classes().iter().map(|c| c.order).collect();
        orders.sort_unstable();
        orders.dedup();
        let exts: BTreeMap<usize, ExtField> = orders
            .into_iter()
            .map(|e| (e, ExtField::new(fp, e)))
            .collect();

        let mut total: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        for class in arr.conj_classes() {
            let ext = &exts[&class.order];
            let basis = sector_basis(arr, ext, &arr.group()[class.rep]);
            assert_eq!(
                basis.len(),
                arr.rank(),
                "twisted sector must be n-dimensional over the prime field"
            );
            for (key, count) in sector_histogram(arr, ext, &basis) {
                *total.entry(key).or_insert(0) += class.size as i64 * count;
            }
        }

        let g = arr.group_order() as i64;
        for (key, v) in &mut total {
            if *v % g != 0 {
                return Err(Error::IntegralityViolation(format!(
                    "sector total {v} at (dlog Δ, q) = {key:?} is not divisible by |G| = {g}"
                )));
            }
            *v /= g;
        }
        total.retain(|_, v| *v != 0);
        Ok(Self { p: fp.p(), hist: total })
    }

    /// Independent recount: scan F_{p^e}^n for each element order e, keep
    /// points of minimal field exactly F_{p^e} off Δ = 0 whose G-orbit is
    /// Frobenius-stable, and count each orbit once via its lexicographically
    /// smallest member. `cap` bounds the largest point scan p^{ne}.
    pub fn enumerate_by_orbits(arr: &ReflectionArrangement, cap: u64) -> Result<Self> {
        let fp = arr.field();
        let p = fp.p();
        let n = arr.rank();
        let mut orders: Vec<usize> = arr.conj_classes().iter().map(|c| c.order).collect();
        orders.sort_unstable();
        orders.dedup();

        let mut hist: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        for e in orders {
            let scan = (p as u128).checked_pow((n * e) as u32);
            match scan {
                Some(s) if s <= cap as u128 => {}
                _ => {
                    return Err(Error::ResourceLimit(format!(
                        "orbit scan needs {p}^{} points, cap is {cap}",
                        n * e
                    )));
                }
            }
            let ext = ExtField::new(fp, e);
            let proper: Vec<usize> = prime_factors(e).into_iter().map(|r| e / r).collect();
            let total = scan.unwrap() as u64;

            for idx in 0..total {
                let x = decode_point(idx, p, n, e);
                if proper.iter().any(|&d| frobenius_pow(&ext, &x, d) == x) {
                    continue;
                }
                let delta = delta_ext(arr, &ext, &x);
                if ext.is_zero(&delta) {
                    continue;
                }
                let fx = frobenius_pow(&ext, &x, 1);
                if !arr
                    .group()
                    .iter()
                    .any(|g| apply_fp_matrix(&ext, g, &x) == fx)
                {
                    continue;
                }
                let canonical = arr
                    .group()
                    .iter()
                    .map(|g| apply_fp_matrix(&ext, g, &x))
                    .min()
                    .unwrap();
                if canonical != x {
                    continue;
                }
                let q = q_ext(arr, &ext, &x);
                let d0 = prime_value(&ext, &delta);
                let q0 = prime_value(&ext, &q);
                *hist.entry((fp.dlog(d0), q0)).or_insert(0) += 1;
            }
        }
        Ok(Self { p, hist })
    }

    /// Σ_{points} χ(Δ)ψ(q) as an exact cyclotomic sum.
    pub fn char_sum(&self, chi: &MultChar) -> CycloSum {
        let m = self.p - 1;
        let mut s = CycloSum::zero(self.p);
        for (&(a, b), &count) in &self.hist {
            s.add_term(chi.exponent() * a % m, b, count);
        }
        s
    }

    pub fn histogram(&self) -> &BTreeMap<(u64, u64), i64> {
        &self.hist
    }

    /// |(U/G)(F_p)|.
    pub fn total_points(&self) -> i64 {
        self.hist.values().sum()
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// Basis of V_g = ker(I_n⊗Φ − g⊗I_e) ⊆ F_p^{ne}, returned as points with n
/// extension-field coordinates.
pub fn sector_basis(
    arr: &ReflectionArrangement,
    ext: &ExtField,
    g: &Matrix<u64>,
) -> Vec<ExtPoint> {
    let fp = arr.field();
    let n = arr.rank();
    let e = ext.degree();
    let phi = ext.frobenius_matrix();
    let m = Matrix::from_fn(n * e, n * e, |row, col| {
        let (i, r) = (row / e, row % e);
        let (j, s) = (col / e, col % e);
        let a = if i == j { phi[r][s] } else { 0 };
        let b = if r == s { *g.at(i, j) } else { 0 };
        fp.sub(&a, &b)
    });
    kernel_basis(fp, &m)
        .into_iter()
        .map(|v| v.chunks(e).map(|c| c.to_vec()).collect())
        .collect()
}

/// Histogram of (dlog Δ, q) over the points of one sector with Δ ≠ 0.
/// Evaluation uses linearity in the sector coordinates: each form and each
/// Gram pairing is precomputed on the basis.
fn sector_histogram(
    arr: &ReflectionArrangement,
    ext: &ExtField,
    basis: &[ExtPoint],
) -> BTreeMap<(u64, u64), i64> {
    let fp = arr.field();
    let p = fp.p();
    let n = arr.rank();

    let form_at_basis: Vec<Vec<ExtElem>> = arr
        .forms()
        .iter()
        .map(|form| basis.iter().map(|b| ell_ext(ext, form, b)).collect())
        .collect();
    let gram = arr.gram();
    let pair_at_basis: Vec<Vec<ExtElem>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    let mut acc = ext.zero();
                    for i in 0..n {
                        for j in 0..n {
                            let t = ext.mul(&basis[k][i], &basis[l][j]);
                            acc = ext.add(&acc, &ext.scalar_mul(*gram.at(i, j), &t));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let mut hist: BTreeMap<(u64, u64), i64> = BTreeMap::new();
    let points = p.pow(n as u32);
    'point: for idx in 0..points {
        let mut c = vec![0u64; n];
        let mut rest = idx;
        for ck in c.iter_mut() {
            *ck = rest % p;
            rest /= p;
        }

        let mut prod = ext.one();
        for values in &form_at_basis {
            let mut ell = ext.zero();
            for (ck, v) in c.iter().zip(values) {
                if *ck != 0 {
                    ell = ext.add(&ell, &ext.scalar_mul(*ck, v));
                }
            }
            if ext.is_zero(&ell) {
                continue 'point;
            }
            prod = ext.mul(&prod, &ell);
        }
        let delta = ext.mul(&prod, &prod);

        let mut q = ext.zero();
        for k in 0..n {
            for l in 0..n {
                let s = c[k] * c[l] % p;
                if s != 0 {
                    q = ext.add(&q, &ext.scalar_mul(s, &pair_at_basis[k][l]));
                }
            }
        }

        let d0 = prime_value(ext, &delta);
        let q0 = prime_value(ext, &q);
        *hist.entry((fp.dlog(d0), q0)).or_insert(0) += 1;
    }
    hist
}

/// Δ(x) = (∏_i ℓ_i(x))² over the extension field; zero when x lies on a
/// hyperplane.
pub fn delta_ext(arr: &ReflectionArrangement, ext: &ExtField, x: &ExtPoint) -> ExtElem {
    let mut prod = ext.one();
    for form in arr.forms() {
        let ell = ell_ext(ext, form, x);
        if ext.is_zero(&ell) {
            return ext.zero();
        }
        prod = ext.mul(&prod, &ell);
    }
    ext.mul(&prod, &prod)
}

/// q(x) = xᵀ·Gram·x over the extension field.
pub fn q_ext(arr: &ReflectionArrangement, ext: &ExtField, x: &ExtPoint) -> ExtElem {
    let n = arr.rank();
    let mut acc = ext.zero();
    for i in 0..n {
        for j in 0..n {
            let t = ext.mul(&x[i], &x[j]);
            acc = ext.add(&acc, &ext.scalar_mul(*arr.gram().at(i, j), &t));
        }
    }
    acc
}

fn ell_ext(ext: &ExtField, form: &[u64], x: &ExtPoint) -> ExtElem {
    let mut acc = ext.zero();
    for (c, xi) in form.iter().zip(x) {
        if *c != 0 {
            acc = ext.add(&acc, &ext.scalar_mul(*c, xi));
        }
    }
    acc
}

fn apply_fp_matrix(ext: &ExtField, g: &Matrix<u64>, x: &ExtPoint) -> ExtPoint {
    let n = g.nrows();
    (0..n)
        .map(|i| {
            let mut acc = ext.zero();
            for (j, xj) in x.iter().enumerate() {
                let c = *g.at(i, j);
                if c != 0 {
                    acc = ext.add(&acc, &ext.scalar_mul(c, xj));
                }
            }
            acc
        })
        .collect()
}

fn frobenius_pow(ext: &ExtField, x: &ExtPoint, d: usize) -> ExtPoint {
    x.iter()
        .map(|xi| {
            let mut v = xi.clone();
            for _ in 0..d {
                v = ext.frobenius(&v);
            }
            v
        })
        .collect()
}

/// Extracts the F_p value of an extension element known to lie in the prime
/// subfield.
fn prime_value(ext: &ExtField, v: &ExtElem) -> u64 {
    ext.in_prime_subfield(v)
        .expect("value must descend to the prime field on a twisted sector")
}

fn decode_point(idx: u64, p: u64, n: usize, e: usize) -> ExtPoint {
    let mut rest = idx;
    (0..n)
        .map(|_| {
            (0..e)
                .map(|_| {
                    let d = rest % p;
                    rest /= p;
                    d
                })
                .collect()
        })
        .collect()
}

fn prime_factors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterDatum;
    use crate::field::PrimeField;

    fn arrangement(label: &str, p: u64) -> ReflectionArrangement {
        CoxeterDatum::from_label(label)
            .unwrap()
            .reduce_mod_p(&PrimeField::new(p).unwrap())
            .unwrap()
    }

    #[test]
    fn a1_p3_quotient_by_hand() {
        let arr = arrangement("A1", 3);
        let pts = QuotientPoints::enumerate(&arr).unwrap();
        // Identity sector: x ∈ {1, 2} gives Δ = (2x)² = 1, q = 2x² = 2.
        // Twisted sector: x² = −1 in F_9 gives Δ = x² = 2, q = 2x² = 1.
        let expected: BTreeMap<(u64, u64), i64> =
            [((0, 2), 1), ((1, 1), 1)].into_iter().collect();
        assert_eq!(*pts.histogram(), expected);
        assert_eq!(pts.total_points(), 2);
    }

    #[test]
    fn a1_p3_character_sums_by_hand() {
        let arr = arrangement("A1", 3);
        let pts = QuotientPoints::enumerate(&arr).unwrap();
        let fp = arr.field();
        let trivial = pts.char_sum(&MultChar::trivial(fp));
        let t = trivial.to_complex();
        assert!((t.re + 1.0).abs() < 1e-12 && t.im.abs() < 1e-12);
        // The quadratic-character sum equals the quadratic Gauss sum −i√3,
        // exactly as cyclotomic integers.
        let phi = MultChar::quadratic(fp);
        assert!(pts.char_sum(&phi).eq_as_numbers(&phi.gauss_sum()));
    }

    #[test]
    fn sectors_are_n_dimensional() {
        for (label, p) in [("A2", 5), ("B2", 3), ("G2", 5)] {
            let arr = arrangement(label, p);
            for class in arr.conj_classes() {
                let ext = ExtField::new(arr.field(), class.order);
                let basis = sector_basis(&arr, &ext, &arr.group()[class.rep]);
                assert_eq!(basis.len(), arr.rank(), "{label} class {}", class.rep);
            }
        }
    }

    #[test]
    fn histogram_is_constant_on_conjugacy_classes() {
        let arr = arrangement("A2", 5);
        let fp = arr.field();
        for class in arr.conj_classes() {
            let ext = ExtField::new(fp, class.order);
            let rep = &arr.group()[class.rep];
            let rep_hist = sector_histogram(&arr, &ext, &sector_basis(&arr, &ext, rep));
            let mut seen = 0;
            for g in arr.group() {
                if seen >= 2 {
                    break;
                }
                if g == rep {
                    continue;
                }
                let conjugate = arr
                    .group()
                    .iter()
                    .any(|h| h.mul(fp, rep).mul(fp, &invert(fp, h)) == *g);
                if conjugate {
                    let hist = sector_histogram(&arr, &ext, &sector_basis(&arr, &ext, g));
                    assert_eq!(hist, rep_hist);
                    seen += 1;
                }
            }
        }
    }

    fn invert(fp: &PrimeField, g: &Matrix<u64>) -> Matrix<u64> {
        let id = Matrix::identity(fp, g.ncols());
        let mut acc = g.clone();
        let mut prev = id.clone();
        while acc != id {
            prev = acc.clone();
            acc = acc.mul(fp, g);
        }
        prev
    }

    #[test]
    fn orbit_scan_matches_sectors_on_a1() {
        for p in [3, 5, 7, 11] {
            let arr = arrangement("A1", p);
            let fast = QuotientPoints::enumerate(&arr).unwrap();
            let slow = QuotientPoints::enumerate_by_orbits(&arr, 10_000_000).unwrap();
            assert_eq!(fast, slow, "p = {p}");
        }
    }

    #[test]
    fn orbit_scan_matches_sectors_on_a2_p5() {
        let arr = arrangement("A2", 5);
        let fast = QuotientPoints::enumerate(&arr).unwrap();
        let slow = QuotientPoints::enumerate_by_orbits(&arr, 10_000_000).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn orbit_scan_respects_cap() {
        let arr = arrangement("A2", 5);
        assert!(matches!(
            QuotientPoints::enumerate_by_orbits(&arr, 100),
            Err(Error::ResourceLimit(_))
        ));
    }
}
