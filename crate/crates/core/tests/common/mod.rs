#![allow(dead_code)]

use std::sync::{Arc, Mutex};

use diskbsp::harmonics::{build_plan, HarmonicPlan, Truncation};
use diskbsp::transform::DHCoefficients;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static PLANS: Mutex<Vec<Arc<HarmonicPlan>>> = Mutex::new(Vec::new());

/// Default-truncation plan, built once per test binary.
pub fn plan(size: usize) -> Arc<HarmonicPlan> {
    let mut plans = PLANS.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(p) = plans.iter().find(|p| p.size() == size) {
        return p.clone();
    }
    let p = build_plan(size, Truncation::default()).unwrap();
    plans.push(p.clone());
    p
}

/// Random real-image coefficients with `|a_{n,1}| >= floor` for `n >= 0`.
pub fn random_coeffs(plan: &Arc<HarmonicPlan>, seed: u64, floor: f64) -> DHCoefficients {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DHCoefficients::zeros(plan.clone());
    for n in 0..=plan.max_order() {
        for k in 1..=plan.root_count(n) {
            let mag = if k == 1 {
                rng.random_range(floor..1.0)
            } else {
                rng.random_range(0.0..1.0)
            };
            let v = if n == 0 {
                Complex64::new(if rng.random_bool(0.5) { mag } else { -mag }, 0.0)
            } else {
                Complex64::from_polar(mag, rng.random_range(0.0..std::f64::consts::TAU))
            };
            a.set(n, k, v).unwrap();
            if n > 0 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                a.set(-n, k, v.conj() * sign).unwrap();
            }
        }
    }
    a
}

pub fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

pub fn l2_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|v| v.norm_sqr()).sum();
    (num / den).sqrt()
}
