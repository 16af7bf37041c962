//! Root-system data for the supported finite reflection groups and its
//! reduction to odd characteristic.
//!
//! A [`CoxeterDatum`] carries exact characteristic-zero data: simple roots
//! and an invariant bilinear form over ℚ\[c\] (with c = 2cos(π/m) for the
//! dihedral types, and plain ℚ otherwise), the group generated by the simple
//! reflections, one root vector per reflection hyperplane, the classical
//! degree list, and the Coxeter diagram. Construction verifies the two
//! degree constraints ∏d_i = |G| and Σ(d_i − 1) = N by counting.
//!
//! [`reduce_mod_p`](CoxeterDatum::reduce_mod_p) turns a datum into a
//! [`ReflectionArrangement`] over F_p after checking p ∤ |G|, that the form
//! stays nondegenerate, that no root vanishes, and (for dihedral types) that
//! the coefficient field splits; the mod-p group is regenerated from the
//! reduced simple reflections and must reach the full group order.
//!
//! Supported: A_n in the rank-n root-lattice model with Cartan form ("A3")
//! and in the permutation model on n+1 coordinates with identity form
//! ("A3perm"), B_n ("B4"), D_4, G_2, F_4, and I_2(m) ("I2(5)").

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::{HashMap, HashSet};

use crate::cyclo::cyclotomic_poly;
use crate::field::{Field, NumberField, PrimeField};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// A Coxeter diagram: `vertices` nodes with labeled edges (i, j, m_ij); only
/// labels m_ij ≥ 3 are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, u32)>,
}

/// The supported Coxeter types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    /// A_n, rank-n root-lattice model (Cartan Gram matrix).
    A(usize),
    /// A_n, permutation model: S_{n+1} on n+1 coordinates, identity form.
    APerm(usize),
    B(usize),
    D4,
    G2,
    F4,
    I2(usize),
}

impl CoxeterType {
    /// Parses labels like "A2", "A3perm", "B4", "D4", "G2", "F4", "I2(5)".
    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(label.to_string());
        let s = label.trim();
        if let Some(rest) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m: usize = rest.parse().map_err(|_| bad())?;
            if m < 3 {
                return Err(bad());
            }
            return Ok(Self::I2(m));
        }
        match s {
            "D4" => return Ok(Self::D4),
            "G2" => return Ok(Self::G2),
            "F4" => return Ok(Self::F4),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix('A') {
            if let Some(n) = rest.strip_suffix("perm") {
                let n: usize = n.parse().map_err(|_| bad())?;
                if (1..=5).contains(&n) {
                    return Ok(Self::APerm(n));
                }
                return Err(bad());
            }
            let n: usize = rest.parse().map_err(|_| bad())?;
            if (1..=5).contains(&n) {
                return Ok(Self::A(n));
            }
            return Err(bad());
        }
        if let Some(rest) = s.strip_prefix('B') {
            let n: usize = rest.parse().map_err(|_| bad())?;
            if (2..=4).contains(&n) {
                return Ok(Self::B(n));
            }
            return Err(bad());
        }
        Err(bad())
    }

    pub fn label(&self) -> String {
        match self {
            Self::A(n) => format!("A{n}"),
            Self::APerm(n) => format!("A{n}perm"),
            Self::B(n) => format!("B{n}"),
            Self::D4 => "D4".into(),
            Self::G2 => "G2".into(),
            Self::F4 => "F4".into(),
            Self::I2(m) => format!("I2({m})"),
        }
    }

    /// The ambient dimension, which is the n of the character-sum identity.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::A(n) => *n,
            Self::APerm(n) => *n + 1,
            Self::B(n) => *n,
            Self::D4 | Self::F4 => 4,
            Self::G2 | Self::I2(_) => 2,
        }
    }

    /// Degrees of the invariant ring, one per ambient dimension (the
    /// permutation model includes the degree-1 invariant x_1 + ⋯ + x_{n+1}).
    pub fn degrees(&self) -> Vec<u64> {
        match self {
            Self::A(n) => (2..=*n as u64 + 1).collect(),
            Self::APerm(n) => (1..=*n as u64 + 1).collect(),
            Self::B(n) => (1..=*n as u64).map(|i| 2 * i).collect(),
            Self::D4 => vec![2, 4, 4, 6],
            Self::G2 => vec![2, 6],
            Self::F4 => vec![2, 6, 8, 12],
            Self::I2(m) => vec![2, *m as u64],
        }
    }

    pub fn group_order(&self) -> u64 {
        self.degrees().iter().product()
    }

    /// The Coxeter diagram of the reflection group (the permutation model
    /// shares the A_n diagram).
    pub fn diagram(&self) -> Diagram {
        let path = |n: usize, labels: &[u32]| Diagram {
            vertices: n,
            edges: (0..n.saturating_sub(1))
                .map(|i| (i, i + 1, labels[i]))
                .collect(),
        };
        match self {
            Self::A(n) | Self::APerm(n) => path(*n, &vec![3; n.saturating_sub(1)]),
            Self::B(n) => {
                let mut labels = vec![3; *n - 1];
                labels[*n - 2] = 4;
                path(*n, &labels)
            }
            Self::D4 => Diagram {
                vertices: 4,
                edges: vec![(0, 1, 3), (1, 2, 3), (1, 3, 3)],
            },
            Self::G2 => path(2, &[6]),
            Self::F4 => path(4, &[3, 4, 3]),
            Self::I2(m) => path(2, &[*m as u32]),
        }
    }
}

type NfElem = Vec<BigRational>;

/// Exact characteristic-zero data for one Coxeter type.
#[derive(Debug, Clone)]
pub struct CoxeterDatum {
    ctype: CoxeterType,
    nf: NumberField,
    /// Real value of the coefficient-field generator c (0 when the field
    /// is ℚ).
    c_real: f64,
    ambient: usize,
    gram: Matrix<NfElem>,
    simple_roots: Vec<Vec<NfElem>>,
    /// One root vector per reflection hyperplane, deterministic signs,
    /// sorted.
    roots: Vec<Vec<NfElem>>,
    group: Vec<Matrix<NfElem>>,
    degrees: Vec<u64>,
}

impl CoxeterDatum {
    pub fn new(ctype: CoxeterType) -> Result<Self> {
        let (nf, c_real) = coefficient_field(&ctype);
        let ambient = ctype.ambient_dim();
        let gram = gram_matrix(&ctype, &nf);
        let simple_roots = simple_root_vectors(&ctype, &nf);

        let generators: Vec<Matrix<NfElem>> = simple_roots
            .iter()
            .map(|alpha| reflection_matrix(&nf, &gram, alpha))
            .collect();
        let group = generate_group(&nf, &generators, 60_000)?;

        let order = ctype.group_order();
        if group.len() as u64 != order {
            return Err(Error::Internal(format!(
                "{}: generated group has {} elements, degree product gives {order}",
                ctype.label(),
                group.len()
            )));
        }

        let roots = root_representatives(&nf, &group, &simple_roots);
        let degrees = ctype.degrees();
        let n_hyperplanes: u64 = degrees.iter().map(|d| d - 1).sum();
        if roots.len() as u64 != n_hyperplanes {
            return Err(Error::Internal(format!(
                "{}: {} root lines but Σ(d_i − 1) = {n_hyperplanes}",
                ctype.label(),
                roots.len()
            )));
        }
        let reflections = group
            .iter()
            .filter(|g| is_reflection(&nf, g))
            .count();
        if reflections != roots.len() {
            return Err(Error::Internal(format!(
                "{}: {reflections} reflections for {} hyperplanes",
                ctype.label(),
                roots.len()
            )));
        }

        Ok(Self {
            ctype,
            nf,
            c_real,
            ambient,
            gram,
            simple_roots,
            roots,
            group,
            degrees,
        })
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(CoxeterType::parse(label)?)
    }

    pub fn ctype(&self) -> CoxeterType {
        self.ctype
    }

    pub fn label(&self) -> String {
        self.ctype.label()
    }

    /// Ambient dimension n of the identity.
    pub fn rank(&self) -> usize {
        self.ambient
    }

    pub fn coefficient_field(&self) -> &NumberField {
        &self.nf
    }

    pub fn c_real(&self) -> f64 {
        self.c_real
    }

    pub fn gram(&self) -> &Matrix<NfElem> {
        &self.gram
    }

    pub fn simple_roots(&self) -> &[Vec<NfElem>] {
        &self.simple_roots
    }

    /// One root per reflection hyperplane.
    pub fn roots(&self) -> &[Vec<NfElem>] {
        &self.roots
    }

    pub fn group(&self) -> &[Matrix<NfElem>] {
        &self.group
    }

    pub fn group_order(&self) -> u64 {
        self.group.len() as u64
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn n_hyperplanes(&self) -> usize {
        self.roots.len()
    }

    pub fn diagram(&self) -> Diagram {
        self.ctype.diagram()
    }

    /// q(x, y) = xᵀ·Gram·y over the coefficient field.
    pub fn q_bilinear(&self, x: &[NfElem], y: &[NfElem]) -> NfElem {
        let mut acc = self.nf.zero();
        for i in 0..self.ambient {
            for j in 0..self.ambient {
                let t = self.nf.mul(&x[i], &self.nf.mul(self.gram.at(i, j), &y[j]));
                acc = self.nf.add(&acc, &t);
            }
        }
        acc
    }

    /// κ = ∏_i q(α_i, α_i)/4 over the coefficient field.
    pub fn kappa_char0(&self) -> NfElem {
        let quarter = self.nf.embed(BigRational::new(BigInt::one(), BigInt::from(4)));
        let mut acc = self.nf.one();
        for alpha in &self.roots {
            let len = self.q_bilinear(alpha, alpha);
            acc = self.nf.mul(&acc, &self.nf.mul(&len, &quarter));
        }
        acc
    }

    /// κ as a rational number; every supported type has rational κ because
    /// root lengths are preserved along each group orbit.
    pub fn kappa_rational(&self) -> Option<BigRational> {
        self.nf.as_rational(&self.kappa_char0())
    }

    /// Reduces the datum mod p. Checks, in order: p odd and prime (by
    /// construction of the context), p ∤ |G|, the coefficient field splits,
    /// the form stays nondegenerate, no root vanishes; then regenerates the
    /// group from the reduced simple reflections and verifies its order.
    pub fn reduce_mod_p(&self, fp: &PrimeField) -> Result<ReflectionArrangement> {
        let p = fp.p();
        let order = self.group_order();
        if order % p == 0 {
            return Err(Error::BadPrime { p, order });
        }
        let roots_of_modulus = self.nf.roots_mod_p(fp)?;
        let Some(&c_root) = roots_of_modulus.first() else {
            return Err(Error::NonSplitPrime(p));
        };

        let reduce_elem = |e: &NfElem| self.nf.reduce_mod_p(e, fp, c_root);
        let n = self.ambient;
        let gram_p = reduce_matrix(&self.gram, &reduce_elem)?;
        if fp.is_zero(&gram_p.det(fp)) {
            return Err(Error::DegenerateForm(p));
        }
        let mut roots_p = Vec::with_capacity(self.roots.len());
        for alpha in &self.roots {
            let v: Vec<u64> = alpha.iter().map(&reduce_elem).collect::<Result<_>>()?;
            if v.iter().all(|&x| x == 0) {
                return Err(Error::RootVanishes(p));
            }
            roots_p.push(v);
        }

        let generators: Vec<Matrix<u64>> = self
            .simple_roots
            .iter()
            .map(|alpha| reflection_matrix(&self.nf, &self.gram, alpha))
            .map(|m| reduce_matrix(&m, &reduce_elem))
            .collect::<Result<_>>()?;
        let group = generate_group(fp, &generators, 60_000)?;
        if group.len() as u64 != order {
            return Err(Error::Internal(format!(
                "mod-{p} group closure has {} elements, expected {order}",
                group.len()
            )));
        }

        // ℓ_i(x) = q(α_i, x) has coefficient row Gram·α_i.
        let forms: Vec<Vec<u64>> = roots_p
            .iter()
            .map(|alpha| gram_p.mul_vec(fp, alpha))
            .collect();
        if forms.iter().any(|f| f.iter().all(|&x| x == 0)) {
            return Err(Error::RootVanishes(p));
        }

        let mut kappa = 1u64;
        let inv4 = fp.inv(&4);
        for alpha in &roots_p {
            let mut len = 0u64;
            for i in 0..n {
                for j in 0..n {
                    len = (len + alpha[i] * gram_p.at(i, j) % p * alpha[j]) % p;
                }
            }
            kappa = kappa * (len * inv4 % p) % p;
        }
        if kappa == 0 {
            return Err(Error::Internal(format!(
                "κ vanishes mod {p} although the reduction passed all checks"
            )));
        }

        let discr_q = gram_p.det(fp);
        let conj_classes = conjugacy_classes(fp, &group, &generators);

        Ok(ReflectionArrangement {
            label: self.label(),
            fp: fp.clone(),
            n,
            gram: gram_p,
            roots: roots_p,
            forms,
            group,
            conj_classes,
            kappa,
            discr_q,
            degrees: self.degrees.clone(),
        })
    }
}

/// One conjugacy class of the mod-p group: the index of its representative
/// in the group list, its size, and the order of its elements.
#[derive(Debug, Clone)]
pub struct ConjClass {
    pub rep: usize,
    pub size: usize,
    pub order: usize,
}

/// A Coxeter arrangement over F_p: the reduced group, one linear form per
/// reflection hyperplane, and the constants of the character-sum identity.
#[derive(Debug, Clone)]
pub struct ReflectionArrangement {
    label: String,
    fp: PrimeField,
    n: usize,
    gram: Matrix<u64>,
    roots: Vec<Vec<u64>>,
    /// Coefficient rows of ℓ_i(x) = q(α_i, x).
    forms: Vec<Vec<u64>>,
    group: Vec<Matrix<u64>>,
    conj_classes: Vec<ConjClass>,
    kappa: u64,
    discr_q: u64,
    degrees: Vec<u64>,
}

impl ReflectionArrangement {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> &PrimeField {
        &self.fp
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &Matrix<u64> {
        &self.gram
    }

    pub fn roots(&self) -> &[Vec<u64>] {
        &self.roots
    }

    pub fn forms(&self) -> &[Vec<u64>] {
        &self.forms
    }

    pub fn group(&self) -> &[Matrix<u64>] {
        &self.group
    }

    pub fn group_order(&self) -> u64 {
        self.group.len() as u64
    }

    pub fn conj_classes(&self) -> &[ConjClass] {
        &self.conj_classes
    }

    pub fn kappa(&self) -> u64 {
        self.kappa
    }

    pub fn discr_q(&self) -> u64 {
        self.discr_q
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn n_hyperplanes(&self) -> usize {
        self.forms.len()
    }

    /// Δ(x) = (∏_i ℓ_i(x))² for a point over F_p.
    pub fn delta_eval_fp(&self, x: &[u64]) -> u64 {
        let p = self.fp.p();
        let mut prod = 1u64;
        for form in &self.forms {
            let mut v = 0u64;
            for (c, xi) in form.iter().zip(x) {
                v = (v + c * xi) % p;
            }
            if v == 0 {
                return 0;
            }
            prod = prod * v % p;
        }
        prod * prod % p
    }

    /// q(x) = xᵀ·Gram·x for a point over F_p.
    pub fn q_eval_fp(&self, x: &[u64]) -> u64 {
        let p = self.fp.p();
        let mut acc = 0u64;
        for i in 0..self.n {
            for j in 0..self.n {
                acc = (acc + x[i] * self.gram.at(i, j) % p * x[j]) % p;
            }
        }
        acc
    }

    /// Replaces every form ℓ_i by c·ℓ_i, scaling κ by c^{2N} accordingly;
    /// exhibits the rescaling covariance of the identity.
    pub fn scaled_forms(&self, c: u64) -> Self {
        assert!(c % self.fp.p() != 0);
        let p = self.fp.p();
        let mut out = self.clone();
        out.forms = self
            .forms
            .iter()
            .map(|f| f.iter().map(|&x| x * c % p).collect())
            .collect();
        // The dual vector of c·ℓ_i is c·α_i, so κ gains q(cα, cα)/q(α, α)
        // = c² per hyperplane.
        let c2n = self.fp.pow(c, 2 * self.forms.len() as u64);
        out.kappa = self.kappa * c2n % p;
        out.roots = self
            .roots
            .iter()
            .map(|r| r.iter().map(|&x| x * c % p).collect())
            .collect();
        out
    }
}

fn coefficient_field(ctype: &CoxeterType) -> (NumberField, f64) {
    match ctype {
        CoxeterType::I2(m) => {
            let modulus = cos_min_poly(*m);
            let degree_one = modulus.len() == 2;
            let nf = NumberField::new(modulus);
            let c = 2.0 * (std::f64::consts::PI / *m as f64).cos();
            if degree_one {
                (nf, c)
            } else {
                (nf, c)
            }
        }
        _ => (NumberField::rationals(), 0.0),
    }
}

/// Minimal polynomial of 2cos(π/m) over ℚ, integer coefficients low to high:
/// the palindromic cyclotomic polynomial Φ_{2m}(y) equals
/// y^{φ(2m)/2}·μ(y + 1/y).
fn cos_min_poly(m: usize) -> Vec<i64> {
    let phi = cyclotomic_poly(2 * m as u32);
    let d = (phi.len() - 1) / 2;
    // B_k(x) with y^k + y^{−k} = B_k(y + 1/y): B_0 = 2, B_1 = x,
    // B_{k+1} = x·B_k − B_{k−1}.
    let mut b_prev: Vec<i128> = vec![2];
    let mut b_cur: Vec<i128> = vec![0, 1];
    let mut mu = vec![0i128; d + 1];
    mu[0] = phi[d];
    for k in 1..=d {
        let bk = if k == 1 { b_cur.clone() } else { b_cur.clone() };
        for (i, &c) in bk.iter().enumerate() {
            mu[i] += phi[d + k] * c;
        }
        let mut b_next = vec![0i128; b_cur.len() + 1];
        for (i, &c) in b_cur.iter().enumerate() {
            b_next[i + 1] += c;
        }
        for (i, &c) in b_prev.iter().enumerate() {
            b_next[i] -= c;
        }
        b_prev = b_cur;
        b_cur = b_next;
    }
    mu.iter().map(|&c| i64::try_from(c).expect("small coefficients")).collect()
}

fn gram_matrix(ctype: &CoxeterType, nf: &NumberField) -> Matrix<NfElem> {
    let n = ctype.ambient_dim();
    match ctype {
        CoxeterType::A(_) => Matrix::from_fn(n, n, |i, j| {
            if i == j {
                nf.from_i64(2)
            } else if i.abs_diff(j) == 1 {
                nf.from_i64(-1)
            } else {
                nf.zero()
            }
        }),
        CoxeterType::G2 => {
            let rows = [[2i64, -3], [-3, 6]];
            Matrix::from_fn(2, 2, |i, j| nf.from_i64(rows[i][j]))
        }
        CoxeterType::I2(_) => {
            let c = nf.generator();
            Matrix::from_fn(2, 2, |i, j| {
                if i == j {
                    nf.from_i64(2)
                } else {
                    nf.neg(&c)
                }
            })
        }
        _ => Matrix::identity(nf, n),
    }
}

fn simple_root_vectors(ctype: &CoxeterType, nf: &NumberField) -> Vec<Vec<NfElem>> {
    let n = ctype.ambient_dim();
    let basis = |i: usize| {
        let mut v = vec![nf.zero(); n];
        v[i] = nf.one();
        v
    };
    let diff = |i: usize, j: usize| {
        let mut v = vec![nf.zero(); n];
        v[i] = nf.one();
        v[j] = nf.from_i64(-1);
        v
    };
    match ctype {
        CoxeterType::A(_) | CoxeterType::G2 | CoxeterType::I2(_) => (0..n).map(basis).collect(),
        CoxeterType::APerm(k) => (0..*k).map(|i| diff(i, i + 1)).collect(),
        CoxeterType::B(k) => {
            let mut v: Vec<_> = (0..*k - 1).map(|i| diff(i, i + 1)).collect();
            v.push(basis(*k - 1));
            v
        }
        CoxeterType::D4 => {
            vec![diff(0, 1), diff(1, 2), diff(2, 3), {
                let mut v = vec![nf.zero(); 4];
                v[2] = nf.one();
                v[3] = nf.one();
                v
            }]
        }
        CoxeterType::F4 => {
            // Long simple roots e_2 − e_3, e_3 − e_4; short roots e_4 and
            // (e_1 − e_2 − e_3 − e_4)/2, the latter scaled by 2 to keep
            // integer coordinates (a root may be rescaled without changing
            // its reflection or hyperplane).
            let mut last = vec![nf.one(); 4];
            last[1] = nf.from_i64(-1);
            last[2] = nf.from_i64(-1);
            last[3] = nf.from_i64(-1);
            vec![diff(1, 2), diff(2, 3), basis(3), last]
        }
    }
}

/// s_α(x) = x − 2·q(x, α)/q(α, α)·α as a matrix: I − (2/q(α,α))·α·(Gram·α)ᵀ.
fn reflection_matrix<F: Field>(
    field: &F,
    gram: &Matrix<F::Elem>,
    alpha: &[F::Elem],
) -> Matrix<F::Elem> {
    let n = alpha.len();
    let dual = gram.mul_vec(field, alpha);
    let mut len = field.zero();
    for i in 0..n {
        len = field.add(&len, &field.mul(&alpha[i], &dual[i]));
    }
    let scale = field.mul(&field.from_i64(2), &field.inv(&len));
    Matrix::from_fn(n, n, |i, j| {
        let outer = field.mul(&scale, &field.mul(&alpha[i], &dual[j]));
        let id = if i == j { field.one() } else { field.zero() };
        field.sub(&id, &outer)
    })
}

/// Breadth-first closure of the generated group, deterministic order, with a
/// hard size cap.
fn generate_group<F: Field>(
    field: &F,
    generators: &[Matrix<F::Elem>],
    cap: usize,
) -> Result<Vec<Matrix<F::Elem>>> {
    let n = generators
        .first()
        .map(Matrix::ncols)
        .expect("at least one generator");
    let identity = Matrix::identity(field, n);
    let mut seen: HashSet<Matrix<F::Elem>> = HashSet::new();
    let mut elements = vec![identity.clone()];
    seen.insert(identity);
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let next = g.mul(field, &current);
            if seen.insert(next.clone()) {
                if elements.len() >= cap {
                    return Err(Error::ResourceLimit(format!(
                        "group closure exceeded {cap} elements"
                    )));
                }
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// The G-orbit of the simple roots, folded to one representative per
/// hyperplane line, sorted. Each line keeps its lexicographically largest
/// orbit vector; for most types that is just the larger member of a ± pair,
/// while in F_4 the doubled short roots shadow their half-length parallels.
fn root_representatives(
    nf: &NumberField,
    group: &[Matrix<NfElem>],
    simple_roots: &[Vec<NfElem>],
) -> Vec<Vec<NfElem>> {
    let mut by_line: HashMap<Vec<NfElem>, Vec<NfElem>> = HashMap::new();
    for g in group {
        for alpha in simple_roots {
            let v = g.mul_vec(nf, alpha);
            let lead = v.iter().find(|x| !nf.is_zero(x)).expect("nonzero root");
            let scale = nf.inv(lead);
            let key: Vec<NfElem> = v.iter().map(|x| nf.mul(x, &scale)).collect();
            match by_line.entry(key) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    if cmp_vec(&v, e.get()) == std::cmp::Ordering::Greater {
                        e.insert(v);
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
            }
        }
    }
    let mut out: Vec<_> = by_line.into_values().collect();
    out.sort_by(cmp_vec);
    out
}

fn cmp_vec(a: &Vec<NfElem>, b: &Vec<NfElem>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        for (cx, cy) in x.iter().zip(y) {
            match cx.cmp(cy) {
                std::cmp::Ordering::Equal => {}
                other => return other,
            }
        }
    }
    std::cmp::Ordering::Equal
}

fn is_reflection(nf: &NumberField, g: &Matrix<NfElem>) -> bool {
    let n = g.ncols();
    let id = Matrix::identity(nf, n);
    if *g == id || g.mul(nf, g) != id {
        return false;
    }
    let shifted = Matrix::from_fn(n, n, |i, j| nf.sub(g.at(i, j), id.at(i, j)));
    shifted.rank(nf) == 1
}

fn reduce_matrix<E: Clone + Eq + std::hash::Hash + std::fmt::Debug>(
    m: &Matrix<E>,
    reduce: &impl Fn(&E) -> Result<u64>,
) -> Result<Matrix<u64>> {
    let rows: Vec<Vec<u64>> = (0..m.nrows())
        .map(|i| m.row(i).iter().map(reduce).collect::<Result<Vec<u64>>>())
        .collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Conjugacy classes by orbit closure under conjugation with the (involutive)
/// generators; representatives are the lexicographically smallest members.
fn conjugacy_classes(
    fp: &PrimeField,
    group: &[Matrix<u64>],
    generators: &[Matrix<u64>],
) -> Vec<ConjClass> {
    let index: HashMap<&Matrix<u64>, usize> =
        group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut class_of = vec![usize::MAX; group.len()];
    let mut classes = Vec::new();
    for start in 0..group.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let class_id = classes.len();
        let mut members = vec![start];
        class_of[start] = class_id;
        let mut frontier = 0;
        while frontier < members.len() {
            let cur = members[frontier];
            frontier += 1;
            for s in generators {
                let conj = s.mul(fp, &group[cur]).mul(fp, s);
                let idx = index[&conj];
                if class_of[idx] == usize::MAX {
                    class_of[idx] = class_id;
                    members.push(idx);
                }
            }
        }
        let rep = *members
            .iter()
            .min_by(|&&a, &&b| group[a].rows_vec().cmp(&group[b].rows_vec()))
            .unwrap();
        classes.push(ConjClass {
            rep,
            size: members.len(),
            order: element_order(fp, &group[rep]),
        });
    }
    classes
}

fn element_order(fp: &PrimeField, g: &Matrix<u64>) -> usize {
    let id = Matrix::identity(fp, g.ncols());
    let mut acc = g.clone();
    let mut k = 1;
    while acc != id {
        acc = acc.mul(fp, g);
        k += 1;
        assert!(k <= 10_000, "element order runaway");
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for label in ["A1", "A4", "A3perm", "B2", "B4", "D4", "G2", "F4", "I2(5)", "I2(7)"] {
            assert_eq!(CoxeterType::parse(label).unwrap().label(), label);
        }
        assert!(CoxeterType::parse("H4").is_err());
        assert!(CoxeterType::parse("E6").is_err());
        assert!(CoxeterType::parse("I2(2)").is_err());
    }

    #[test]
    fn cos_min_polys_match_tables() {
        assert_eq!(cos_min_poly(3), vec![-1, 1]);
        assert_eq!(cos_min_poly(4), vec![-2, 0, 1]);
        assert_eq!(cos_min_poly(5), vec![-1, -1, 1]);
        assert_eq!(cos_min_poly(6), vec![-3, 0, 1]);
        assert_eq!(cos_min_poly(12), vec![1, 0, -4, 0, 1]);
    }

    #[test]
    fn small_type_counts() {
        for (label, order, n_roots) in [
            ("A1", 2u64, 1usize),
            ("A2", 6, 3),
            ("A3", 24, 6),
            ("A2perm", 6, 3),
            ("B2", 8, 4),
            ("B3", 48, 9),
            ("G2", 12, 6),
            ("I2(5)", 10, 5),
            ("I2(6)", 12, 6),
        ] {
            let d = CoxeterDatum::from_label(label).unwrap();
            assert_eq!(d.group_order(), order, "{label}");
            assert_eq!(d.n_hyperplanes(), n_roots, "{label}");
            let sum: u64 = d.degrees().iter().map(|x| x - 1).sum();
            assert_eq!(sum, n_roots as u64, "{label}");
        }
    }

    #[test]
    fn rank_four_counts() {
        for (label, order, n_roots) in
            [("B4", 384u64, 16usize), ("D4", 192, 12), ("F4", 1152, 24), ("A4", 120, 10)]
        {
            let d = CoxeterDatum::from_label(label).unwrap();
            assert_eq!(d.group_order(), order, "{label}");
            assert_eq!(d.n_hyperplanes(), n_roots, "{label}");
        }
    }

    #[test]
    fn kappa_values() {
        let g2 = CoxeterDatum::from_label("G2").unwrap();
        assert_eq!(
            g2.kappa_rational().unwrap(),
            BigRational::new(27.into(), 64.into())
        );
        let a1 = CoxeterDatum::from_label("A1").unwrap();
        assert_eq!(
            a1.kappa_rational().unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let i25 = CoxeterDatum::from_label("I2(5)").unwrap();
        assert_eq!(
            i25.kappa_rational().unwrap(),
            BigRational::new(1.into(), 32.into())
        );
        // Permutation model: κ = 2^{−n(n+1)/2} for A_n in n+1 coordinates.
        let a2p = CoxeterDatum::from_label("A2perm").unwrap();
        assert_eq!(
            a2p.kappa_rational().unwrap(),
            BigRational::new(1.into(), 8.into())
        );
        // B_2: two long lines (q = 2) and two short (q = 1), κ = 2^{−6}.
        let b2 = CoxeterDatum::from_label("B2").unwrap();
        assert_eq!(
            b2.kappa_rational().unwrap(),
            BigRational::new(1.into(), 64.into())
        );
        // F_4: twelve long lines (q = 2) and twelve doubled-short (q = 4).
        let f4 = CoxeterDatum::from_label("F4").unwrap();
        assert_eq!(
            f4.kappa_rational().unwrap(),
            BigRational::new(1.into(), 4096.into())
        );
    }

    #[test]
    fn a1_reduction_mod_three() {
        let d = CoxeterDatum::from_label("A1").unwrap();
        let f3 = PrimeField::new(3).unwrap();
        let arr = d.reduce_mod_p(&f3).unwrap();
        assert_eq!(arr.group_order(), 2);
        assert_eq!(arr.kappa(), 2);
        assert_eq!(arr.discr_q(), 2);
        // Δ(1) = ℓ(1)² = (2·1)² = 4 ≡ 1, q(1) = 2.
        assert_eq!(arr.delta_eval_fp(&[1]), 1);
        assert_eq!(arr.q_eval_fp(&[1]), 2);
    }

    #[test]
    fn bad_primes_rejected() {
        let a2 = CoxeterDatum::from_label("A2").unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(
            a2.reduce_mod_p(&f3),
            Err(Error::BadPrime { p: 3, order: 6 })
        ));
        let b2 = CoxeterDatum::from_label("B2").unwrap();
        // B_2 at p = 3 is fine (3 ∤ 8); p = 2 is rejected upstream.
        assert!(b2.reduce_mod_p(&f3).is_ok());
        assert!(PrimeField::new(2).is_err());
    }

    #[test]
    fn dihedral_split_primes() {
        let i25 = CoxeterDatum::from_label("I2(5)").unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert!(matches!(i25.reduce_mod_p(&f7), Err(Error::NonSplitPrime(7))));
        let f11 = PrimeField::new(11).unwrap();
        let arr = i25.reduce_mod_p(&f11).unwrap();
        assert_eq!(arr.group_order(), 10);
        assert_eq!(arr.n_hyperplanes(), 5);
    }

    #[test]
    fn conjugacy_classes_partition_the_group() {
        let b2 = CoxeterDatum::from_label("B2").unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let arr = b2.reduce_mod_p(&f5).unwrap();
        let total: usize = arr.conj_classes().iter().map(|c| c.size).sum();
        assert_eq!(total, 8);
        // W(B_2) is dihedral of order 8: five classes.
        assert_eq!(arr.conj_classes().len(), 5);
        for class in arr.conj_classes() {
            assert_eq!(8 % class.size, 0);
        }
    }

    #[test]
    fn delta_and_q_are_group_invariant() {
        for label in ["A2", "B2", "G2"] {
            let d = CoxeterDatum::from_label(label).unwrap();
            let f7 = PrimeField::new(7).unwrap();
            let arr = match d.reduce_mod_p(&f7) {
                Ok(a) => a,
                Err(_) => continue,
            };
            let pts: Vec<Vec<u64>> = (0..40u64)
                .map(|t| (0..arr.rank()).map(|i| (3 * t + 2 * i as u64 + 1) % 7).collect())
                .collect();
            for x in &pts {
                let dx = arr.delta_eval_fp(x);
                let qx = arr.q_eval_fp(x);
                for g in arr.group() {
                    let gx = g.mul_vec(&f7, x);
                    assert_eq!(arr.delta_eval_fp(&gx), dx);
                    assert_eq!(arr.q_eval_fp(&gx), qx);
                }
            }
        }
    }

    #[test]
    fn generators_are_reflections_mod_p() {
        let d = CoxeterDatum::from_label("B3").unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let arr = d.reduce_mod_p(&f5).unwrap();
        let id = Matrix::identity(&f5, 3);
        let mut reflections = 0;
        for g in arr.group() {
            if *g == id || g.mul(&f5, g) != id {
                continue;
            }
            let shifted = Matrix::from_fn(3, 3, |i, j| f5.sub(g.at(i, j), id.at(i, j)));
            if shifted.rank(&f5) == 1 {
                reflections += 1;
            }
        }
        assert_eq!(reflections, arr.n_hyperplanes());
    }
}
