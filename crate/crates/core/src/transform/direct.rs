use std::sync::Arc;

use num_complex::Complex64;

use super::{DHCoefficients, ImageGrid};
use crate::error::{Error, Result};
use crate::harmonics::HarmonicPlan;

fn check_size(image: &ImageGrid, plan: &HarmonicPlan) -> Result<()> {
    if image.size() != plan.size() {
        return Err(Error::invalid(format!(
            "image is {0}x{0} but the plan is for {1}x{1}",
            image.size(),
            plan.size()
        )));
    }
    Ok(())
}

pub(super) fn check_plan_size(image: &ImageGrid, plan: &HarmonicPlan) -> Result<()> {
    check_size(image, plan)
}

/// `a_j = Σ_p f_p ψ_j*(x_p) Δx²` over the in-disk pixels.
///
/// Pixels are binned per distinct radius for each order, so the cost is one
/// pass over the disk per order plus one short dot product per coefficient.
pub fn dht_forward(image: &ImageGrid, plan: &Arc<HarmonicPlan>) -> Result<DHCoefficients> {
    check_size(image, plan)?;
    let grid = plan.grid();
    let area = grid.cell_area();
    let ridx = grid.radius_index();
    let nr = grid.radii().len();
    let f: Vec<f64> = grid.pixels().iter().map(|&p| image.pixels()[p]).collect();

    let mut values = vec![Complex64::default(); plan.len()];
    let mut bins = vec![Complex64::default(); nr];
    for n in 0..=plan.max_order() {
        bins.iter_mut().for_each(|b| *b = Complex64::default());
        let ang = plan.angular(n as u32);
        for ((&v, &u), e) in f.iter().zip(ridx).zip(ang) {
            bins[u as usize] += e.conj() * v;
        }
        for k in 1..=plan.root_count(n) {
            let profile = plan.radial_profile(n as u32, k);
            let s: Complex64 = profile.iter().zip(&bins).map(|(r, b)| b * r).sum();
            let s = s * area;
            values[plan.index_of(n, k).expect("order in plan")] = s;
            if n > 0 {
                // f is real, so the e^{+inθ} bins are the conjugates
                let neg = if n % 2 == 0 { s.conj() } else { -s.conj() };
                values[plan.index_of(-n, k).expect("order in plan")] = neg;
            }
        }
    }
    DHCoefficients::new(plan.clone(), values)
}

/// `f(x_p) = Re Σ_j a_j ψ_j(x_p)` inside the disk, zero outside.
pub fn dht_inverse(coeffs: &DHCoefficients, plan: &Arc<HarmonicPlan>) -> Result<ImageGrid> {
    if coeffs.plan().hash() != plan.hash() {
        return Err(Error::invalid("coefficients belong to a different plan"));
    }
    let grid = plan.grid();
    let ridx = grid.radius_index();
    let nr = grid.radii().len();
    let mut acc = vec![0.0; grid.len()];
    let mut pos = vec![Complex64::default(); nr];
    let mut neg = vec![Complex64::default(); nr];
    for n in 0..=plan.max_order() {
        pos.iter_mut().for_each(|b| *b = Complex64::default());
        neg.iter_mut().for_each(|b| *b = Complex64::default());
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for k in 1..=plan.root_count(n) {
            let profile = plan.radial_profile(n as u32, k);
            let a = coeffs.get(n, k);
            for (p, r) in pos.iter_mut().zip(profile) {
                *p += a * r;
            }
            if n > 0 {
                let b = coeffs.get(-n, k) * sign;
                for (q, r) in neg.iter_mut().zip(profile) {
                    *q += b * r;
                }
            }
        }
        let ang = plan.angular(n as u32);
        for ((out, &u), e) in acc.iter_mut().zip(ridx).zip(ang) {
            let u = u as usize;
            let mut v = (pos[u] * e).re;
            if n > 0 {
                v += (neg[u] * e.conj()).re;
            }
            *out += v;
        }
    }
    let mut image = ImageGrid::zeros(plan.size());
    for (&p, v) in grid.pixels().iter().zip(acc) {
        image.pixels_mut()[p] = v;
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{build_plan, Truncation};

    #[test]
    fn forward_matches_basis_inner_products() {
        let plan = build_plan(8, Truncation::PixelCount).unwrap();
        let img = ImageGrid::from_fn(8, |r, c| ((r * 3 + c * 7) % 5) as f64 / 4.0).masked();
        let a = dht_forward(&img, &plan).unwrap();
        let grid = plan.grid();
        for j in 0..plan.len() {
            let mut s = Complex64::default();
            for (i, &p) in grid.pixels().iter().enumerate() {
                s += plan.basis_value(j, i).conj() * img.pixels()[p];
            }
            s *= grid.cell_area();
            assert!((s - a.values()[j]).norm() < 1e-13, "j={j}");
        }
    }

    #[test]
    fn inverse_matches_basis_sum() {
        let plan = build_plan(8, Truncation::PixelCount).unwrap();
        let vals: Vec<_> = (0..plan.len())
            .map(|j| Complex64::new((j as f64).sin(), (j as f64 * 0.3).cos()))
            .collect();
        let a = DHCoefficients::new(plan.clone(), vals).unwrap();
        let img = dht_inverse(&a, &plan).unwrap();
        for (i, &p) in plan.grid().pixels().iter().enumerate() {
            let s: Complex64 = (0..plan.len())
                .map(|j| a.values()[j] * plan.basis_value(j, i))
                .sum();
            assert!((s.re - img.pixels()[p]).abs() < 1e-12);
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let plan = build_plan(8, Truncation::PixelCount).unwrap();
        assert!(dht_forward(&ImageGrid::zeros(10), &plan).is_err());
    }
}
