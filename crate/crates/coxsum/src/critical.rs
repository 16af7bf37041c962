//! Constrained maximization of the squared hyperplane product over ℝ.
//!
//! For a real arrangement with root-line forms ℓ_1, …, ℓ_N and invariant
//! form q, the maximum of Δ(x) = ∏_i ℓ_i(x)² over the ellipsoid {q(x) = 1}
//! equals the exact rational κ ∏_i d_i^{d_i} / N^N, where κ = ∏_i q(α_i, α_i)/4
//! over the same root representatives. Both sides rescale by c² when a root
//! is rescaled by c, so the identity is scaling-covariant.
//!
//! The optimizer runs projected gradient ascent on log Δ = Σ_i 2 log|ℓ_i(x)|
//! with multi-start; hyperplanes act as automatic −∞ barriers. Every run
//! first validates the analytic gradient against central finite differences
//! at random feasible points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxeter::CoxeterDatum;
use crate::{Error, Result};

const MAX_ITERS: usize = 10_000;
const STEP_TOL: f64 = 1e-12;

/// Double-precision view of a Coxeter arrangement: the Gram matrix of q and
/// one linear form per hyperplane line, paired through q.
pub struct RealArrangement {
    n: usize,
    gram: Vec<Vec<f64>>,
    forms: Vec<Vec<f64>>,
}

impl RealArrangement {
    pub fn new(datum: &CoxeterDatum) -> Self {
        let nf = datum.coefficient_field();
        let c = datum.c_real();
        let n = datum.rank();
        let gram: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| nf.eval_real(datum.gram().at(i, j), c)).collect())
            .collect();
        let forms: Vec<Vec<f64>> = datum
            .roots()
            .iter()
            .map(|root| {
                let real_root: Vec<f64> =
                    root.iter().map(|e| nf.eval_real(e, c)).collect();
                (0..n)
                    .map(|i| (0..n).map(|j| gram[i][j] * real_root[j]).sum())
                    .collect()
            })
            .collect();
        assert!(
            cholesky_ok(&gram),
            "invariant form must be positive definite"
        );
        Self { n, gram, forms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn n_hyperplanes(&self) -> usize {
        self.forms.len()
    }

    pub fn q(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                total += x[i] * self.gram[i][j] * x[j];
            }
        }
        total
    }

    fn grad_q(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| 2.0 * (0..self.n).map(|j| self.gram[i][j] * x[j]).sum::<f64>())
            .collect()
    }

    pub fn delta(&self, x: &[f64]) -> f64 {
        self.forms
            .iter()
            .map(|f| dot(f, x).powi(2))
            .product()
    }

    pub fn log_delta(&self, x: &[f64]) -> f64 {
        self.forms
            .iter()
            .map(|f| 2.0 * dot(f, x).abs().ln())
            .sum()
    }

    pub fn grad_log_delta(&self, x: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; self.n];
        for f in &self.forms {
            let v = dot(f, x);
            for (g, &fi) in grad.iter_mut().zip(f) {
                *g += 2.0 * fi / v;
            }
        }
        grad
    }

    /// Rescales x onto {q = 1}.
    fn retract(&self, x: &[f64]) -> Vec<f64> {
        let scale = self.q(x).sqrt();
        x.iter().map(|&c| c / scale).collect()
    }

    fn random_feasible(&self, rng: &mut ChaCha8Rng, min_margin: f64) -> Vec<f64> {
        let mut fallback: Option<(f64, Vec<f64>)> = None;
        for _ in 0..10_000 {
            let y: Vec<f64> = (0..self.n).map(|_| gaussian(rng)).collect();
            if self.q(&y) < 1e-12 {
                continue;
            }
            let x = self.retract(&y);
            let margin = self
                .forms
                .iter()
                .map(|f| dot(f, &x).abs() / dot(f, f).sqrt())
                .fold(f64::INFINITY, f64::min);
            if margin >= min_margin {
                return x;
            }
            if fallback.as_ref().map(|(m, _)| margin > *m).unwrap_or(true) {
                fallback = Some((margin, x));
            }
        }
        fallback.expect("sphere sampling produced no usable point").1
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn cholesky_ok(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if d <= 0.0 {
                    return false;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

fn validate_gradient(ra: &RealArrangement, rng: &mut ChaCha8Rng) -> Result<()> {
    let h = 3e-6;
    for _ in 0..10 {
        let x = ra.random_feasible(rng, 0.05);
        let analytic = ra.grad_log_delta(&x);
        let mut fd = vec![0.0; ra.dim()];
        for j in 0..ra.dim() {
            let mut hi = x.clone();
            let mut lo = x.clone();
            hi[j] += h;
            lo[j] -= h;
            fd[j] = (ra.log_delta(&hi) - ra.log_delta(&lo)) / (2.0 * h);
        }
        let err: f64 = analytic
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
        if err > 1e-6 * (1.0 + scale) {
            return Err(Error::Internal(format!(
                "gradient mismatch {err:.3e} against finite differences"
            )));
        }
    }
    Ok(())
}

/// One ascent run; returns the converged (log Δ, x) or None on hitting the
/// iteration cap before the step tolerance.
fn ascend(ra: &RealArrangement, seed: u64) -> Option<(f64, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = ra.random_feasible(&mut rng, 1e-9);
    let mut value = ra.log_delta(&x);
    let mut alpha: f64 = 1.0;
    for _ in 0..MAX_ITERS {
        let grad = ra.grad_log_delta(&x);
        let normal = ra.grad_q(&x);
        let coeff = dot(&grad, &normal) / dot(&normal, &normal);
        let tangent: Vec<f64> = grad
            .iter()
            .zip(&normal)
            .map(|(g, u)| g - coeff * u)
            .collect();
        let tnorm = dot(&tangent, &tangent).sqrt();
        if tnorm < STEP_TOL {
            return Some((value, x));
        }
        alpha = (alpha * 2.0).min(1.0);
        let mut moved = false;
        while alpha * tnorm > STEP_TOL * 0.01 {
            let cand: Vec<f64> = x
                .iter()
                .zip(&tangent)
                .map(|(xi, ti)| xi + alpha * ti)
                .collect();
            let cand = ra.retract(&cand);
            let cval = ra.log_delta(&cand);
            if cval.is_finite() && cval > value + 1e-4 * alpha * tnorm * tnorm {
                let step: f64 = x
                    .iter()
                    .zip(&cand)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                x = cand;
                value = cval;
                moved = true;
                if step < STEP_TOL {
                    return Some((value, x));
                }
                break;
            }
            alpha *= 0.5;
        }
        if !moved {
            return Some((value, x));
        }
    }
    None
}

/// Best Δ value over seeded multi-start projected gradient ascent on the
/// ellipsoid {q = 1}.
pub fn max_delta_on_sphere(ra: &RealArrangement, restarts: u32, seed: u64) -> Result<f64> {
    assert!(restarts >= 1, "need at least one start");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    validate_gradient(ra, &mut rng)?;
    let start_seeds: Vec<u64> = (0..restarts).map(|_| rng.gen()).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in start_seeds {
        if let Some((value, x)) = ascend(ra, s) {
            let better = best.as_ref().map(|(b, _)| value > *b).unwrap_or(true);
            if better {
                best = Some((value, x));
            }
        }
    }
    match best {
        Some((_, x)) => Ok(ra.delta(&x)),
        None => Err(Error::NonConvergence),
    }
}

/// The exact critical value κ ∏_i d_i^{d_i} / N^N, together with its
/// (−1)^n-th power (the leading-coefficient normal form).
pub fn critical_value_formula(datum: &CoxeterDatum) -> Result<(BigRational, BigRational)> {
    let kappa = datum.kappa_rational().ok_or_else(|| {
        Error::Internal("irrational root-length product".into())
    })?;
    let mut value = kappa;
    for &d in datum.degrees() {
        value *= BigRational::from(BigInt::from(d)).pow(d as i32);
    }
    let nn = datum.n_hyperplanes() as u64;
    value /= BigRational::from(BigInt::from(nn)).pow(nn as i32);
    let signed = if datum.rank() % 2 == 1 {
        value.recip()
    } else {
        value.clone()
    };
    Ok((value, signed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterType;
    use num_traits::ToPrimitive;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_one_closed_form() {
        let datum = CoxeterDatum::new(CoxeterType::A(1)).unwrap();
        let (max, signed) = critical_value_formula(&datum).unwrap();
        assert_eq!(max, rational(2, 1));
        assert_eq!(signed, rational(1, 2));

        let ra = RealArrangement::new(&datum);
        let found = max_delta_on_sphere(&ra, 4, 7).unwrap();
        assert!((found - 2.0).abs() < 1e-9, "found {found}");
    }

    #[test]
    fn optimizer_matches_formula_on_rank_two() {
        for ctype in [CoxeterType::A(2), CoxeterType::B(2), CoxeterType::G2] {
            let datum = CoxeterDatum::new(ctype).unwrap();
            let (max, _) = critical_value_formula(&datum).unwrap();
            let target = max.to_f64().unwrap();
            let ra = RealArrangement::new(&datum);
            let found = max_delta_on_sphere(&ra, 50, 11).unwrap();
            assert!(found <= target + 1e-9, "{}: {found} > {target}", datum.label());
            assert!(
                found >= target * (1.0 - 1e-6),
                "{}: {found} < {target}",
                datum.label()
            );
        }
    }

    #[test]
    fn optimizer_matches_formula_in_a_number_field() {
        let datum = CoxeterDatum::new(CoxeterType::I2(5)).unwrap();
        let (max, _) = critical_value_formula(&datum).unwrap();
        let target = max.to_f64().unwrap();
        let ra = RealArrangement::new(&datum);
        let found = max_delta_on_sphere(&ra, 50, 3).unwrap();
        assert!(found <= target + 1e-9);
        assert!(found >= target * (1.0 - 1e-6), "{found} vs {target}");
    }

    #[test]
    fn permutation_model_value_is_exact_rational() {
        let datum = CoxeterDatum::new(CoxeterType::APerm(2)).unwrap();
        let (max, _) = critical_value_formula(&datum).unwrap();
        // κ = 2^{−3}, degrees {1, 2, 3}: (1/8)·1·4·27/3³ = 1/2.
        assert_eq!(max, rational(1, 2));
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let datum = CoxeterDatum::new(CoxeterType::B(2)).unwrap();
        let ra = RealArrangement::new(&datum);
        let a = max_delta_on_sphere(&ra, 10, 42).unwrap();
        let b = max_delta_on_sphere(&ra, 10, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
