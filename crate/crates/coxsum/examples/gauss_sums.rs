//! Gauss sums as exact cyclotomic integers
//!
//! This example demonstrates:
//! - Evaluating g(χ) = −Σ χ(x) ψ(x) without floating-point error
//! - The magnitude law |g(χ)|² = p for nontrivial χ
//! - The Hasse–Davenport duplication identity relating g(χ²) to g(χ)
//!
//! Run with: cargo run --example gauss_sums

use coxsum::characters::{duplication_check, MultChar};
use coxsum::field::PrimeField;

fn main() {
    println!("=== Gauss Sums ===\n");
    magnitudes(13);
    duplication(13);
}

/// Every nontrivial Gauss sum lies on the circle of radius √p; the trivial
/// character gives exactly 1 under this sign convention.
fn magnitudes(p: u64) {
    println!("--- |g(χ)|² over F_{p} ---\n");
    let fp = PrimeField::new(p).unwrap();
    for chi in MultChar::all(&fp) {
        let g = chi.gauss_sum().to_complex();
        println!(
            "chi^{} (order {:2}): g = {:8.4} {:+8.4}i   |g|² = {:.6}",
            chi.exponent(),
            chi.order(),
            g.re,
            g.im,
            g.norm_sqr(),
        );
    }
    println!();
}

/// g(χ²)·g(φ) = χ(4)·g(χ)·g(χφ) whenever χ² stays nontrivial, checked as
/// an exact identity of cyclotomic integers.
fn duplication(p: u64) {
    println!("--- duplication identity over F_{p} ---\n");
    let fp = PrimeField::new(p).unwrap();
    let mut checked = 0;
    for chi in MultChar::all(&fp) {
        match duplication_check(&chi) {
            Ok(true) => checked += 1,
            Ok(false) => println!("chi^{}: FAILED", chi.exponent()),
            Err(_) => println!("chi^{}: degenerate, skipped", chi.exponent()),
        }
    }
    println!("{checked} characters satisfy the identity exactly");
}
