//! Rotational registration and relative errors.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{dht_inverse, rotate_coeffs, DHCoefficients, ImageGrid};

/// Angles on the coarse search grid.
pub const ALIGN_GRID: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMode {
    /// `‖f̂ - f‖ / ‖f‖`.
    #[default]
    Linear,
    /// `‖f̂ - f‖² / ‖f‖²`.
    Squared,
}

#[derive(Debug, Clone)]
pub struct AlignmentResult {
    /// Angle in `[0, 2π)` applied to the estimate's coefficients.
    pub phi: f64,
    pub aligned_coeffs: DHCoefficients,
    pub aligned: ImageGrid,
    pub rel_error_linear: f64,
    pub rel_error_squared: f64,
}

/// Masked-disk relative error of `estimate` against `reference`.
pub fn image_relative_error(
    estimate: &ImageGrid,
    reference: &ImageGrid,
    mode: ErrorMode,
) -> Result<f64> {
    if estimate.size() != reference.size() {
        return Err(Error::invalid("image sizes differ"));
    }
    let l = reference.size();
    let (mut num, mut den) = (0.0, 0.0);
    for row in 0..l {
        for col in 0..l {
            if !reference.in_disk(row, col) {
                continue;
            }
            let f = reference.get(row, col);
            let d = estimate.get(row, col) - f;
            num += d * d;
            den += f * f;
        }
    }
    if den == 0.0 {
        return Err(Error::degenerate(
            None,
            "reference image is zero on the disk",
        ));
    }
    Ok(match mode {
        ErrorMode::Linear => (num / den).sqrt(),
        ErrorMode::Squared => num / den,
    })
}

/// `Σ_j |a^est_j e^{i n_j φ} - a^ref_j|²`.
pub fn alignment_objective(estimate: &DHCoefficients, reference: &DHCoefficients, phi: f64) -> f64 {
    estimate
        .values()
        .iter()
        .zip(reference.values())
        .zip(estimate.plan().entries())
        .map(|((e, r), h)| {
            (e * num_complex::Complex64::from_polar(1.0, f64::from(h.n) * phi) - r).norm_sqr()
        })
        .sum()
}

/// Angle minimising [`alignment_objective`]: grid search, then golden-section
/// refinement inside the winning cell.
pub fn best_angle(estimate: &DHCoefficients, reference: &DHCoefficients) -> f64 {
    let step = TAU / ALIGN_GRID as f64;
    let f = |phi: f64| alignment_objective(estimate, reference, phi);
    let (mut best_phi, mut best) = (0.0, f(0.0));
    for i in 1..ALIGN_GRID {
        let phi = i as f64 * step;
        let v = f(phi);
        if v < best {
            best = v;
            best_phi = phi;
        }
    }
    let (mut lo, mut hi) = (best_phi - step, best_phi + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-13 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let refined = 0.5 * (lo + hi);
    let phi = if f(refined) <= best {
        refined
    } else {
        best_phi
    };
    phi.rem_euclid(TAU)
}

/// Register `estimate` to `reference` and score it against the reference's
/// own reconstruction.
pub fn best_rotation_align(
    estimate: &DHCoefficients,
    reference: &DHCoefficients,
) -> Result<AlignmentResult> {
    let target = dht_inverse(reference, reference.plan())?;
    best_rotation_align_to(estimate, reference, &target)
}

/// As [`best_rotation_align`], but score against `target` (for instance the
/// original image rather than its band-limited reconstruction).
pub fn best_rotation_align_to(
    estimate: &DHCoefficients,
    reference: &DHCoefficients,
    target: &ImageGrid,
) -> Result<AlignmentResult> {
    if !estimate.same_plan(reference) {
        return Err(Error::invalid("coefficients belong to different plans"));
    }
    if reference.norm_sqr() == 0.0 {
        return Err(Error::degenerate(None, "reference coefficients are zero"));
    }
    let phi = best_angle(estimate, reference);
    let aligned_coeffs = rotate_coeffs(estimate, phi);
    let aligned = dht_inverse(&aligned_coeffs, estimate.plan())?;
    let rel_error_linear = image_relative_error(&aligned, target, ErrorMode::Linear)?;
    let rel_error_squared = image_relative_error(&aligned, target, ErrorMode::Squared)?;
    Ok(AlignmentResult {
        phi,
        aligned_coeffs,
        aligned,
        rel_error_linear,
        rel_error_squared,
    })
}
