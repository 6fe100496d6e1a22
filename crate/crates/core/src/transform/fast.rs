use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::direct::check_plan_size;
use super::rotate::bilinear_sample;
use super::{DHCoefficients, ImageGrid};
use crate::error::Result;
use crate::harmonics::HarmonicPlan;

/// Angular node count for the polar grid: at least `2L`, and enough to carry
/// every retained order without aliasing.
pub fn polar_angles(plan: &HarmonicPlan) -> usize {
    let need = (2 * plan.size()).max(2 * plan.max_order() as usize + 2);
    need.div_ceil(4) * 4
}

/// Approximate coefficients from a polar resampling of the image.
///
/// The image is sampled bilinearly on `N_θ x L` polar nodes, each ring is
/// transformed with an FFT over `θ`, and the radial integral against
/// `c J_n(λ r) r` is a trapezoidal sum on `r_s = s / (L - 1)`.
pub fn dht_forward_fast(image: &ImageGrid, plan: &Arc<HarmonicPlan>) -> Result<DHCoefficients> {
    check_plan_size(image, plan)?;
    let masked = image.clone().masked();
    let n_theta = polar_angles(plan);
    let radii = plan.polar_radii();
    let n_r = radii.len();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_theta);
    let dtheta = 2.0 * PI / n_theta as f64;

    let (sins, coss): (Vec<f64>, Vec<f64>) =
        (0..n_theta).map(|t| (t as f64 * dtheta).sin_cos()).unzip();
    // rings[s * n_theta + n] holds dθ Σ_t f(r_s, θ_t) e^{-inθ_t}
    let mut rings = vec![Complex64::default(); n_r * n_theta];
    for (s, &r) in radii.iter().enumerate() {
        let ring = &mut rings[s * n_theta..(s + 1) * n_theta];
        for (t, z) in ring.iter_mut().enumerate() {
            *z = Complex64::new(bilinear_sample(&masked, r * coss[t], r * sins[t]), 0.0);
        }
        fft.process(ring);
        ring.iter_mut().for_each(|z| *z *= dtheta);
    }

    let h = 1.0 / (n_r - 1) as f64;
    let weights: Vec<f64> = radii
        .iter()
        .enumerate()
        .map(|(s, &r)| {
            if s == 0 || s == n_r - 1 {
                0.5 * h * r
            } else {
                h * r
            }
        })
        .collect();

    let mut values = vec![Complex64::default(); plan.len()];
    for n in 0..=plan.max_order() {
        let col = n as usize;
        for k in 1..=plan.root_count(n) {
            let profile = plan.polar_profile(n as u32, k);
            let mut s = Complex64::default();
            for ((w, p), ring) in weights.iter().zip(profile).zip(rings.chunks_exact(n_theta)) {
                s += ring[col] * (w * p);
            }
            values[plan.index_of(n, k).expect("order in plan")] = s;
            if n > 0 {
                let neg = if n % 2 == 0 { s.conj() } else { -s.conj() };
                values[plan.index_of(-n, k).expect("order in plan")] = neg;
            }
        }
    }
    DHCoefficients::new(plan.clone(), values)
}
