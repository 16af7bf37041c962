//! Intersection lattice of a central hyperplane arrangement, the group
//! action on it, the chain invariant d(X), and the lattice-level identities
//! for the trivial-character sum.
//!
//! A lattice element X is an intersection of hyperplanes, keyed by the full
//! set {i : X ⊆ H_i}; that key determines X, since X is recovered as the
//! intersection over its key. The ambient space has the empty key. Good
//! reduction ([`theta_check`]) holds when the characteristic-0 and mod-p
//! lattices carry identical key/dimension signatures.
//!
//! For a group orbit of X, the invariant d(X) counts chains
//! X ⊂ X_1 ⊂ ⋯ ⊂ X_m ⊂ 𝔸^n (strict inclusions, both endpoints counted in
//! the length |c| = m + 2, and the degenerate chain {𝔸^n} has |c| = 1)
//! modulo the stabilizer of X: d(X) = (−1)^{n − dim X} Σ_c (−1)^{|c|−1}
//! over the chain classes whose chain stabilizer acts on X with
//! determinant 1. The trivial-character sum then decomposes as
//! (−1)^n Σ_{X ∈ L/G} d(X)·φ(discr q|_X)·g(φ)^{dim X}.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;

use crate::characters::{legendre, MultChar};
use crate::coxeter::{CoxeterDatum, ReflectionArrangement};
use crate::field::{Field, PrimeField};
use crate::identity::IdentityCheck;
use crate::linalg::{basis_pivots, coords_in_row_basis, kernel_basis, row_space_canonical, Matrix};
use crate::sectors::QuotientPoints;
use crate::{Error, Result};

/// One subspace in the intersection lattice.
#[derive(Debug, Clone)]
pub struct LatticeElement<E> {
    /// Sorted indices of every hyperplane containing the subspace.
    pub hyperplanes: Vec<usize>,
    pub dim: usize,
    /// Canonical reduced row-echelon basis of the subspace.
    pub basis: Vec<Vec<E>>,
}

/// All intersections of the hyperplanes ℓ_i = 0, ordered by decreasing
/// dimension then key; index 0 is the ambient space.
#[derive(Debug, Clone)]
pub struct Lattice<E> {
    n: usize,
    elements: Vec<LatticeElement<E>>,
    index: HashMap<Vec<usize>, usize>,
    /// Strict supersets of each element, ascending element indices.
    above: Vec<Vec<usize>>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> Lattice<E> {
    pub fn build<F: Field<Elem = E>>(field: &F, n: usize, forms: &[Vec<E>]) -> Self {
        let full_space: Vec<Vec<E>> = (0..n)
            .map(|i| {
                let mut v = vec![field.zero(); n];
                v[i] = field.one();
                v
            })
            .collect();
        let ambient_key = containing_hyperplanes(field, forms, &full_space);

        let mut elements = vec![LatticeElement {
            hyperplanes: ambient_key.clone(),
            dim: n,
            basis: full_space,
        }];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(ambient_key, 0);

        let mut frontier = 0;
        while frontier < elements.len() {
            let current = frontier;
            frontier += 1;
            for j in 0..forms.len() {
                if elements[current].hyperplanes.binary_search(&j).is_ok() {
                    continue;
                }
                let mut rows: Vec<Vec<E>> = elements[current]
                    .hyperplanes
                    .iter()
                    .map(|&i| forms[i].clone())
                    .collect();
                rows.push(forms[j].clone());
                let system = Matrix::from_rows(rows);
                let basis = row_space_canonical(field, &kernel_basis(field, &system));
                let key = containing_hyperplanes(field, forms, &basis);
                if !index.contains_key(&key) {
                    index.insert(key.clone(), elements.len());
                    elements.push(LatticeElement {
                        hyperplanes: key,
                        dim: basis.len(),
                        basis,
                    });
                }
            }
        }

        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| {
            elements[b]
                .dim
                .cmp(&elements[a].dim)
                .then_with(|| elements[a].hyperplanes.cmp(&elements[b].hyperplanes))
        });
        let elements: Vec<LatticeElement<E>> = order.into_iter().map(|i| elements[i].clone()).collect();
        let index: HashMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, el)| (el.hyperplanes.clone(), i))
            .collect();
        let above: Vec<Vec<usize>> = elements
            .iter()
            .map(|el| {
                elements
                    .iter()
                    .enumerate()
                    .filter(|(_, other)| {
                        other.hyperplanes.len() < el.hyperplanes.len()
                            && is_subset(&other.hyperplanes, &el.hyperplanes)
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();

        Self {
            n,
            elements,
            index,
            above,
        }
    }

    pub fn elements(&self) -> &[LatticeElement<E>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ambient(&self) -> usize {
        0
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn index_of(&self, key: &[usize]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Sorted (key, dim) pairs; two arrangements have isomorphic lattices
    /// via hyperplane indexing exactly when their signatures agree.
    pub fn signature(&self) -> Vec<(Vec<usize>, usize)> {
        self.elements
            .iter()
            .map(|el| (el.hyperplanes.clone(), el.dim))
            .collect()
    }
}

fn containing_hyperplanes<F: Field>(
    field: &F,
    forms: &[Vec<F::Elem>],
    basis: &[Vec<F::Elem>],
) -> Vec<usize> {
    (0..forms.len())
        .filter(|&i| {
            basis.iter().all(|b| {
                let mut acc = field.zero();
                for (c, x) in forms[i].iter().zip(b) {
                    acc = field.add(&acc, &field.mul(c, x));
                }
                field.is_zero(&acc)
            })
        })
        .collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// π_g with ℓ_i ∘ g proportional to ℓ_{π_g(i)}; a group element permutes
/// the hyperplanes, so exactly one match exists per index.
fn hyperplane_permutation<F: Field>(
    field: &F,
    forms: &[Vec<F::Elem>],
    g: &Matrix<F::Elem>,
) -> Result<Vec<usize>> {
    let n = g.nrows();
    (0..forms.len())
        .map(|i| {
            let composed: Vec<F::Elem> = (0..n)
                .map(|k| {
                    let mut acc = field.zero();
                    for j in 0..n {
                        acc = field.add(&acc, &field.mul(&forms[i][j], g.at(j, k)));
                    }
                    acc
                })
                .collect();
            (0..forms.len())
                .find(|&j| proportional(field, &composed, &forms[j]))
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "hyperplane {i} is not mapped to a hyperplane by the group"
                    ))
                })
        })
        .collect()
}

fn proportional<F: Field>(field: &F, u: &[F::Elem], v: &[F::Elem]) -> bool {
    let Some(t) = u.iter().position(|x| !field.is_zero(x)) else {
        return v.iter().all(|x| field.is_zero(x));
    };
    if field.is_zero(&v[t]) {
        return false;
    }
    let c = field.mul(&v[t], &field.inv(&u[t]));
    u.iter()
        .zip(v)
        .all(|(x, y)| field.mul(&c, x) == *y)
}

/// The group action on a lattice: hyperplane permutations, the induced
/// element permutations, orbits, and stabilizers.
pub struct LatticeAction<'a, F: Field> {
    field: &'a F,
    lat: &'a Lattice<F::Elem>,
    group: &'a [Matrix<F::Elem>],
    /// element_map[g][x] = index of g·X.
    element_map: Vec<Vec<usize>>,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl<'a, F: Field> LatticeAction<'a, F> {
    pub fn new(
        field: &'a F,
        lat: &'a Lattice<F::Elem>,
        forms: &[Vec<F::Elem>],
        group: &'a [Matrix<F::Elem>],
    ) -> Result<Self> {
        let mut element_map = Vec::with_capacity(group.len());
        for g in group {
            let perm = hyperplane_permutation(field, forms, g)?;
            let map: Vec<usize> = lat
                .elements
                .iter()
                .map(|el| {
                    let key_set: HashSet<usize> = el.hyperplanes.iter().copied().collect();
                    let image: Vec<usize> = (0..forms.len())
                        .filter(|&i| key_set.contains(&perm[i]))
                        .collect();
                    lat.index_of(&image)
                        .expect("group action must permute lattice elements")
                })
                .collect();
            element_map.push(map);
        }

        let mut orbit_of = vec![usize::MAX; lat.len()];
        let mut orbits = Vec::new();
        for start in 0..lat.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members: Vec<usize> = element_map.iter().map(|m| m[start]).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                orbit_of[m] = id;
            }
            orbits.push(members);
        }

        Ok(Self {
            field,
            lat,
            group,
            element_map,
            orbits,
            orbit_of,
        })
    }

    pub fn lattice(&self) -> &Lattice<F::Elem> {
        self.lat
    }

    /// Orbits as sorted element-index lists; the representative is the first
    /// entry.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit_of[x]
    }

    /// Indices of group elements fixing X as a set.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.len())
            .filter(|&g| self.element_map[g][x] == x)
            .collect()
    }

    /// d(X): the signed count of chain classes from X to the ambient space
    /// whose chain stabilizer acts on X with determinant 1.
    pub fn d_invariant(&self, x: usize) -> i64 {
        let lat = self.lat;
        let ambient = lat.ambient();
        let stab = self.stabilizer(x);

        let chains: Vec<Vec<usize>> = if x == ambient {
            vec![vec![]]
        } else {
            let mut out = Vec::new();
            let mut path = Vec::new();
            collect_chains(lat, x, ambient, &mut path, &mut out);
            out
        };

        let dets: Vec<bool> = self.restricted_det_is_one(x, &stab);

        let mut total = 0i64;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for chain in &chains {
            if seen.contains(chain) {
                continue;
            }
            let mut chain_stab_det_ok = true;
            for (pos, &g) in stab.iter().enumerate() {
                let image: Vec<usize> = chain.iter().map(|&y| self.element_map[g][y]).collect();
                if image == *chain && !dets[pos] {
                    chain_stab_det_ok = false;
                }
                seen.insert(image);
            }
            if chain_stab_det_ok {
                let len = if x == ambient { 1 } else { chain.len() + 2 };
                total += if (len - 1) % 2 == 0 { 1 } else { -1 };
            }
        }

        let sign = if (lat.dim() - lat.elements[x].dim) % 2 == 0 {
            1
        } else {
            -1
        };
        sign * total
    }

    /// For each stabilizer element, whether its restriction to X has
    /// determinant 1.
    fn restricted_det_is_one(&self, x: usize, stab: &[usize]) -> Vec<bool> {
        let field = self.field;
        let basis = &self.lat.elements[x].basis;
        if basis.is_empty() {
            return vec![true; stab.len()];
        }
        let pivots = basis_pivots(field, basis);
        stab.iter()
            .map(|&g| {
                let rows: Vec<Vec<F::Elem>> = basis
                    .iter()
                    .map(|b| {
                        let gb = self.group[g].mul_vec(field, b);
                        coords_in_row_basis(field, basis, &pivots, &gb)
                            .expect("stabilizer must preserve the subspace")
                    })
                    .collect();
                field.is_one(&Matrix::from_rows(rows).det(field))
            })
            .collect()
    }

    /// d(X) per orbit, listed as (representative element, value).
    pub fn d_by_orbit(&self) -> Vec<(usize, i64)> {
        self.orbits
            .iter()
            .map(|orbit| (orbit[0], self.d_invariant(orbit[0])))
            .collect()
    }
}

/// Chains x ⊂ y_1 ⊂ ⋯ ⊂ y_m ⊂ ambient as intermediate index sequences,
/// depth-first in ascending index order (the empty chain comes first).
fn collect_chains<E>(
    lat: &Lattice<E>,
    from: usize,
    ambient: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(path.clone());
    let last = *path.last().unwrap_or(&from);
    for &next in &lat.above[last] {
        if next == ambient {
            continue;
        }
        if lat.elements[next].hyperplanes.len() < lat.elements[last].hyperplanes.len() {
            path.push(next);
            collect_chains(lat, from, ambient, path, out);
            path.pop();
        }
    }
}

/// Builds the mod-p lattice of a reduced arrangement.
pub fn lattice_mod_p(arr: &ReflectionArrangement) -> Lattice<u64> {
    Lattice::build(arr.field(), arr.rank(), arr.forms())
}

/// The lattice over the characteristic-0 coefficient field.
pub fn lattice_char0(datum: &CoxeterDatum) -> Lattice<Vec<num_rational::BigRational>> {
    let nf = datum.coefficient_field();
    let forms: Vec<_> = datum
        .roots()
        .iter()
        .map(|alpha| datum.gram().mul_vec(nf, alpha))
        .collect();
    Lattice::build(nf, datum.rank(), &forms)
}

/// Whether reduction mod p identifies the two intersection lattices,
/// hyperplane by hyperplane. Never errors: any failure to reduce the
/// arrangement (non-split coefficient field, vanishing root, prime in a
/// denominator) reports false.
pub fn theta_check(datum: &CoxeterDatum, fp: &PrimeField) -> bool {
    let nf = datum.coefficient_field();
    let Ok(roots_of_modulus) = nf.roots_mod_p(fp) else {
        return false;
    };
    let Some(&c_root) = roots_of_modulus.first() else {
        return false;
    };

    let n = datum.rank();
    let mut gram_rows = Vec::with_capacity(n);
    for i in 0..n {
        let row: Result<Vec<u64>> = datum
            .gram()
            .row(i)
            .iter()
            .map(|x| nf.reduce_mod_p(x, fp, c_root))
            .collect();
        match row {
            Ok(r) => gram_rows.push(r),
            Err(_) => return false,
        }
    }
    let gram_p = Matrix::from_rows(gram_rows);

    let mut forms_p = Vec::with_capacity(datum.roots().len());
    for alpha in datum.roots() {
        let reduced: Result<Vec<u64>> =
            alpha.iter().map(|x| nf.reduce_mod_p(x, fp, c_root)).collect();
        let Ok(root) = reduced else {
            return false;
        };
        let form = gram_p.mul_vec(fp, &root);
        if form.iter().all(|&x| x == 0) {
            return false;
        }
        forms_p.push(form);
    }

    let l0 = lattice_char0(datum);
    let lp = Lattice::build(fp, n, &forms_p);
    l0.signature() == lp.signature()
}

/// φ(discr q|_X) for a mod-p lattice element, from the Gram determinant of
/// the restriction to any basis of X; basis change shifts the determinant
/// by a square, so the φ value is well-defined.
fn restricted_form_sign(arr: &ReflectionArrangement, el: &LatticeElement<u64>) -> Result<i64> {
    if el.basis.is_empty() {
        return Ok(1);
    }
    let fp = arr.field();
    let k = el.basis.len();
    let gram_x = Matrix::from_fn(k, k, |i, j| {
        let mut acc = 0u64;
        for a in 0..arr.rank() {
            for b in 0..arr.rank() {
                acc = (acc
                    + el.basis[i][a] * arr.gram().at(a, b) % fp.p() * el.basis[j][b])
                    % fp.p();
            }
        }
        acc
    });
    let det = gram_x.det(fp);
    if det == 0 {
        return Err(Error::DegenerateForm(fp.p()));
    }
    Ok(legendre(fp, det))
}

/// Lattice-level decomposition of the trivial-character sum:
/// (−1)^n Σ_{orbits} d(X)·φ(discr q|_X)·g(φ)^{dim X}, compared against the
/// enumerated S_G(trivial).
pub fn trace_identity_check(
    arr: &ReflectionArrangement,
    pts: &QuotientPoints,
    tol_scale: f64,
) -> Result<IdentityCheck> {
    let fp = arr.field();
    let lat = lattice_mod_p(arr);
    let action = LatticeAction::new(fp, &lat, arr.forms(), arr.group())?;
    let g_phi = MultChar::quadratic(fp).gauss_sum().to_complex();

    let mut rhs = Complex64::new(0.0, 0.0);
    for (rep, d) in action.d_by_orbit() {
        if d == 0 {
            continue;
        }
        let el = &lat.elements()[rep];
        let sign = restricted_form_sign(arr, el)?;
        rhs += d as f64 * sign as f64 * g_phi.powi(el.dim as i32);
    }
    if arr.rank() % 2 == 1 {
        rhs = -rhs;
    }

    let lhs = pts.char_sum(&MultChar::trivial(fp)).to_complex();
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

/// Locates the orbit with d = 1 and confirms it is the only one with d ≠ 0.
/// Returns (representative element index, uniqueness holds).
pub fn uniqueness_check(action: &LatticeAction<'_, PrimeField>) -> (usize, bool) {
    let values = action.d_by_orbit();
    let nonzero: Vec<&(usize, i64)> = values.iter().filter(|(_, d)| *d != 0).collect();
    match nonzero.as_slice() {
        [(rep, 1)] => (*rep, true),
        [first, ..] => (first.0, false),
        [] => (usize::MAX, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn arrangement(label: &str, p: u64) -> ReflectionArrangement {
        CoxeterDatum::from_label(label)
            .unwrap()
            .reduce_mod_p(&PrimeField::new(p).unwrap())
            .unwrap()
    }

    #[test]
    fn small_lattice_sizes() {
        // A_1: ambient and the origin. A_2: ambient, three lines, origin.
        // B_2: ambient, four lines, origin.
        for (label, expected) in [("A1", 2usize), ("A2", 5), ("B2", 6), ("G2", 8)] {
            let lat = lattice_char0(&CoxeterDatum::from_label(label).unwrap());
            assert_eq!(lat.len(), expected, "{label}");
        }
    }

    #[test]
    fn ambient_is_element_zero() {
        let lat = lattice_char0(&CoxeterDatum::from_label("A2").unwrap());
        assert!(lat.elements()[0].hyperplanes.is_empty());
        assert_eq!(lat.elements()[0].dim, 2);
        let origin = lat.elements().last().unwrap();
        assert_eq!(origin.dim, 0);
        assert_eq!(origin.hyperplanes, vec![0, 1, 2]);
    }

    #[test]
    fn a1_d_values_by_hand() {
        let arr = arrangement("A1", 3);
        let lat = lattice_mod_p(&arr);
        let action = LatticeAction::new(arr.field(), &lat, arr.forms(), arr.group()).unwrap();
        let values = action.d_by_orbit();
        assert_eq!(values.len(), 2);
        // Ambient line: the lone chain is fixed by the reflection, whose
        // determinant on the line is −1, so no chain class contributes.
        assert_eq!(values[0], (0, 0));
        // Origin: one chain, determinant on a point is trivially 1.
        assert_eq!(values[1], (1, 1));
    }

    #[test]
    fn a2_unique_unit_orbit_is_a_line() {
        let arr = arrangement("A2", 7);
        let lat = lattice_mod_p(&arr);
        let action = LatticeAction::new(arr.field(), &lat, arr.forms(), arr.group()).unwrap();
        let (rep, ok) = uniqueness_check(&action);
        assert!(ok);
        assert_eq!(lat.elements()[rep].dim, 1);
    }

    #[test]
    fn d_is_nonnegative_and_orbit_invariant() {
        for (label, p) in [("A2", 5), ("B2", 5), ("G2", 7), ("A2perm", 5)] {
            let arr = arrangement(label, p);
            let lat = lattice_mod_p(&arr);
            let action =
                LatticeAction::new(arr.field(), &lat, arr.forms(), arr.group()).unwrap();
            for orbit in action.orbits() {
                let d0 = action.d_invariant(orbit[0]);
                assert!(d0 >= 0, "{label} p={p}");
                for &x in &orbit[1..] {
                    assert_eq!(action.d_invariant(x), d0, "{label} p={p}");
                }
            }
        }
    }

    #[test]
    fn trace_identity_small_types() {
        for (label, p) in [("A1", 3), ("A2", 7), ("B2", 5), ("G2", 5), ("A2perm", 5)] {
            let arr = arrangement(label, p);
            let pts = QuotientPoints::enumerate(&arr).unwrap();
            let check = trace_identity_check(&arr, &pts, 1e-6).unwrap();
            assert!(
                check.pass,
                "{label} p={p}: lhs {:?} rhs {:?}",
                check.lhs,
                check.rhs
            );
        }
    }

    #[test]
    fn a1_p3_trace_value() {
        let arr = arrangement("A1", 3);
        let pts = QuotientPoints::enumerate(&arr).unwrap();
        let check = trace_identity_check(&arr, &pts, 1e-6).unwrap();
        assert!((check.rhs.re + 1.0).abs() < 1e-12);
        assert!(check.rhs.im.abs() < 1e-12);
    }

    #[test]
    fn theta_holds_at_good_primes() {
        for (label, p) in [("A2", 5), ("A2", 7), ("B2", 3), ("G2", 5), ("I2(5)", 11)] {
            let datum = CoxeterDatum::from_label(label).unwrap();
            assert!(theta_check(&datum, &PrimeField::new(p).unwrap()), "{label} p={p}");
        }
    }

    #[test]
    fn theta_detects_collapsed_hyperplanes() {
        // A_2 at p = 3: all three forms become proportional, the lattice
        // drops from five elements to two.
        let datum = CoxeterDatum::from_label("A2").unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert!(!theta_check(&datum, &f3));
    }

    #[test]
    fn theta_false_for_non_split_prime() {
        let datum = CoxeterDatum::from_label("I2(5)").unwrap();
        assert!(!theta_check(&datum, &PrimeField::new(7).unwrap()));
    }

    #[test]
    fn synthetic_collapse_changes_signature() {
        // Over ℚ the forms x, y, x+3y give a generic three-line arrangement;
        // mod 3 the third form collapses onto the first.
        let nf = NumberField::rationals();
        let forms0 = vec![
            vec![nf.from_i64(1), nf.from_i64(0)],
            vec![nf.from_i64(0), nf.from_i64(1)],
            vec![nf.from_i64(1), nf.from_i64(3)],
        ];
        let l0 = Lattice::build(&nf, 2, &forms0);
        assert_eq!(l0.len(), 5);

        let f3 = PrimeField::new(3).unwrap();
        let forms_p = vec![vec![1, 0], vec![0, 1], vec![1, 0]];
        let lp = Lattice::build(&f3, 2, &forms_p);
        assert_eq!(lp.len(), 4);
        assert_ne!(l0.signature(), lp.signature());
    }

    #[test]
    fn determinant_coherence_with_uniqueness() {
        // The product over orbits of (φ(discr q|_X)·g(φ)^{dim X})^{d(X)}
        // collapses to the factor of the unique d = 1 orbit.
        let arr = arrangement("B2", 5);
        let pts = QuotientPoints::enumerate(&arr).unwrap();
        let lat = lattice_mod_p(&arr);
        let action = LatticeAction::new(arr.field(), &lat, arr.forms(), arr.group()).unwrap();
        let g_phi = MultChar::quadratic(arr.field()).gauss_sum().to_complex();

        let mut product = Complex64::new(1.0, 0.0);
        for (rep, d) in action.d_by_orbit() {
            let el = &lat.elements()[rep];
            let factor = restricted_form_sign(&arr, el).unwrap() as f64
                * g_phi.powi(el.dim as i32);
            product *= factor.powi(d as i32);
        }
        let (rep, ok) = uniqueness_check(&action);
        assert!(ok);
        let el = &lat.elements()[rep];
        let selected =
            restricted_form_sign(&arr, el).unwrap() as f64 * g_phi.powi(el.dim as i32);
        assert!((product - selected).norm() < 1e-9);
        // The selected factor is the whole trivial-character sum up to
        // (−1)^n.
        let lhs = pts.char_sum(&MultChar::trivial(arr.field())).to_complex();
        assert!((lhs - selected).norm() < 1e-6);
    }
}
