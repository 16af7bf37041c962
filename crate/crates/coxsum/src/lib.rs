//! Exact character sums of finite Coxeter arrangements.
//!
//! A Coxeter arrangement is a triple (V, G, q): a finite reflection group G
//! acting on V = F^n together with a G-invariant nondegenerate symmetric
//! bilinear form q. Writing ℓ_1, …, ℓ_N for linear forms cutting out the
//! reflection hyperplanes and Δ = (∏ℓ_i)² for the squared discriminant
//! product, the central object is the quotient character sum
//!
//! ```text
//! S_G(χ) = Σ_{x ∈ (U/G)(F_p)} χ(Δ(x)) ψ(q(x)),
//! ```
//!
//! taken over rational points of the quotient of the hyperplane complement U.
//! This crate evaluates S_G(χ) exactly by enumerating Frobenius-twisted
//! sectors, and checks it against the Gauss-sum product formula
//!
//! ```text
//! S_G(χ) = (−1)^n φ(discr q) g(φ)^n φ(κ) χ(κ) ∏_i g((φχ)^{d_i}) / g(φχ),
//! ```
//!
//! where φ is the quadratic character, g the Gauss sum, d_i the degrees of
//! the reflection group, and κ = ∏_i q(α_i, α_i)/4 over the root vectors.
//!
//! Supporting machinery, each with its own module and runnable example:
//!
//! - [`field`]: exact arithmetic in F_p, F_{p^e}, ℚ, and real quadratic-like
//!   number fields ℚ\[c\], behind one [`field::Field`] trait
//! - [`linalg`]: generic exact Gaussian elimination (kernels, RREF canonical
//!   subspace forms, determinants) over any [`field::Field`]
//! - [`cyclo`]: integer-exact accumulation of sums of ζ_{p−1}^a ζ_p^b terms
//! - [`characters`]: multiplicative characters, Gauss sums, the
//!   Hasse–Davenport duplication identity
//! - [`coxeter`]: root-system data per Coxeter type and its reduction mod p
//! - [`sectors`]: twisted-sector enumeration of S_G(χ) plus an independent
//!   naive orbit oracle
//! - [`identity`]: the Gauss-sum product formula and verification records
//! - [`lattice`]: intersection lattices, good-reduction check, chain
//!   invariants d(X), and the Frobenius trace identity
//! - [`zeta`]: monodromy zeta functions via the connected-subdiagram
//!   recursion, with the eigenvalue-class calculus
//! - [`critical`]: the real critical value of Δ on {q = 1}, by projected
//!   gradient ascent and by exact formula
//! - [`report`]: sweep orchestration and JSON/CSV reporting for the CLI

pub mod characters;
pub mod coxeter;
pub mod critical;
pub mod cyclo;
pub mod field;
pub mod identity;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod sectors;
pub mod zeta;

use thiserror::Error;

/// Everything that can go wrong while building data or evaluating sums.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is excluded")]
    EvenCharacteristic,
    #[error("character is undefined at 0")]
    ZeroArgument,
    #[error("degenerate character: {0}")]
    DegenerateCharacter(String),
    #[error("unsupported Coxeter type: {0}")]
    UnsupportedType(String),
    #[error("bad prime {p}: divides the group order {order}")]
    BadPrime { p: u64, order: u64 },
    #[error("bilinear form degenerates mod {0}")]
    DegenerateForm(u64),
    #[error("a root vector vanishes mod {0}")]
    RootVanishes(u64),
    #[error("defining polynomial of the root coefficients has no root mod {0}")]
    NonSplitPrime(u64),
    #[error("internal arithmetic error: {0}")]
    Internal(String),
    #[error("subfield violation: {0}")]
    SubfieldViolation(String),
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("zeta function has a non-cyclotomic factor: {0}")]
    NonCyclotomicFactor(String),
    #[error("unsupported subdiagram: {0}")]
    UnsupportedSubdiagram(String),
    #[error("optimizer failed to converge")]
    NonConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
