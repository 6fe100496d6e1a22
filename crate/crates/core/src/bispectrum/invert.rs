use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::full::FullBispectrum;
use super::selective::{selective_labels, SelectiveBispectrum, SelectiveLabel};
use super::Bispectrum;
use crate::error::{Error, Result};
use crate::transform::{extend_negative, DHCoefficients};

/// A first-root coefficient counts as vanished below this fraction of the
/// largest coefficient recovered so far.
pub const TAU_ZERO: f64 = 1e-8;

/// Imaginary residual tolerated on quantities that are real for exact data.
pub const TAU_SYM: f64 = 1e-9;

/// What the inversion had to assume or discard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionDiagnostics {
    pub gauge: String,
    /// `|Im b_{0,0,1}| / |b_{0,0,1}|`, dropped before the cube root.
    pub cube_root_residual: f64,
    /// `|Im b_{2,0,1}| / |b_{2,0,1}|`, dropped before the square root.
    pub sqrt_residual: f64,
    /// Both residuals are at most [`TAU_SYM`].
    pub residuals_within_tolerance: bool,
    /// Order whose `|a_{n,1}|` was smallest relative to the running maximum.
    pub weakest_order: i32,
    pub weakest_ratio: f64,
}

fn residual(z: Complex64) -> f64 {
    let r = z.norm();
    if r == 0.0 {
        0.0
    } else {
        z.im.abs() / r
    }
}

/// Recover the coefficients, with `a_{1,1}` real and non-negative.
pub fn invert_selective(b: &SelectiveBispectrum) -> Result<DHCoefficients> {
    invert_selective_with_diagnostics(b).map(|(a, _)| a)
}

pub fn invert_selective_with_diagnostics(
    b: &SelectiveBispectrum,
) -> Result<(DHCoefficients, InversionDiagnostics)> {
    let plan = b.plan_arc().clone();
    let get = |label| b.get(label).expect("label from this plan");
    let scale = b
        .values()
        .iter()
        .map(|v| v.norm().cbrt())
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::degenerate(
            Some(0),
            "bispectrum is zero or not finite",
        ));
    }

    let mut a = DHCoefficients::zeros(plan.clone());
    let b001 = get(SelectiveLabel::Zero { k: 1 });
    let a01 = b001.re.cbrt();
    if a01.abs() <= TAU_ZERO * scale {
        return Err(Error::degenerate(Some(0), "a_{0,1} vanishes"));
    }
    a.set(0, 1, Complex64::new(a01, 0.0))?;
    let mut running = a01.abs();
    let a01_sq = a01 * a01;
    for k in 2..=plan.root_count(0) {
        let v = (get(SelectiveLabel::Zero { k }) / a01_sq).conj();
        running = running.max(v.norm());
        a.set(0, k, v)?;
    }

    let b201 = get(SelectiveLabel::Two { n: 0, k: 1 });
    let sq = b201.re / a01;
    if sq < 0.0 {
        return Err(Error::degenerate(
            Some(1),
            "Re(b_{2,0,1}) / a_{0,1} is negative, so |a_{1,1}|² would be negative",
        ));
    }
    let a11 = sq.sqrt();
    let mut weakest = (1, a11 / running);
    if a11 <= TAU_ZERO * running {
        return Err(Error::degenerate(Some(1), "a_{1,1} vanishes"));
    }
    a.set(1, 1, Complex64::new(a11, 0.0))?;
    running = running.max(a11);
    let d0 = Complex64::new(a11 * a01, 0.0);
    for k in 2..=plan.root_count(1) {
        let v = (get(SelectiveLabel::Two { n: 0, k }) / d0).conj();
        running = running.max(v.norm());
        a.set(1, k, v)?;
    }

    for n in 1..plan.max_order() {
        let an1 = a.get(n, 1);
        let ratio = an1.norm() / running;
        if ratio < weakest.1 {
            weakest = (n, ratio);
        }
        if an1.norm() <= TAU_ZERO * running {
            return Err(Error::degenerate(Some(n), format!("a_{{{n},1}} vanishes")));
        }
        let d = an1 * a11;
        for k in 1..=plan.root_count(n + 1) {
            let v = (get(SelectiveLabel::Two { n, k }) / d).conj();
            if !v.is_finite() {
                return Err(Error::degenerate(Some(n), "recursion overflowed"));
            }
            running = running.max(v.norm());
            a.set(n + 1, k, v)?;
        }
    }

    let cube_root_residual = residual(b001);
    let sqrt_residual = residual(b201);
    let diagnostics = InversionDiagnostics {
        gauge: "a_{1,1} real non-negative".into(),
        cube_root_residual,
        sqrt_residual,
        residuals_within_tolerance: cube_root_residual <= TAU_SYM && sqrt_residual <= TAU_SYM,
        weakest_order: weakest.0,
        weakest_ratio: weakest.1,
    };
    Ok((extend_negative(&a), diagnostics))
}

/// The selective entries of a full bispectrum.
pub fn selective_from_full(b: &FullBispectrum) -> Result<SelectiveBispectrum> {
    let plan = b.plan_arc().clone();
    let values = selective_labels(&plan)
        .into_iter()
        .map(|label| {
            b.get(label.full_label(&plan))
                .ok_or_else(|| Error::invalid("full index lacks a selective entry"))
        })
        .collect::<Result<Vec<_>>>()?;
    SelectiveBispectrum::from_values(plan, values)
}

/// Pick the selective entries out of a full bispectrum and invert those.
pub fn invert_full(b: &FullBispectrum) -> Result<DHCoefficients> {
    invert_selective(&selective_from_full(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bispectrum::{full_bispectrum, selective_bispectrum};
    use crate::harmonics::{build_plan, Truncation};
    use crate::transform::rotate_coeffs;

    fn random_like(l: usize, seed: u64) -> DHCoefficients {
        use rand::{Rng, SeedableRng};
        let plan = build_plan(l, Truncation::PixelCount).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut a = DHCoefficients::zeros(plan.clone());
        for e in plan.entries() {
            if e.n < 0 {
                continue;
            }
            let mut v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if e.n == 0 {
                v.im = 0.0;
            }
            if e.k == 1 && v.norm() < 0.1 {
                v = v / v.norm() * 0.1 + 0.1;
            }
            a.set(e.n, e.k, v).unwrap();
        }
        extend_negative(&a)
    }

    fn max_rel(a: &DHCoefficients, b: &DHCoefficients) -> f64 {
        let num = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        num / a.max_abs()
    }

    #[test]
    fn recovers_up_to_gauge_rotation() {
        let a = random_like(16, 3);
        let phase = a.get(1, 1).arg();
        let got = invert_selective(&selective_bispectrum(&a)).unwrap();
        assert!(max_rel(&rotate_coeffs(&a, -phase), &got) < 1e-10);
    }

    #[test]
    fn zero_bispectrum_is_degenerate() {
        let plan = build_plan(8, Truncation::PixelCount).unwrap();
        let err = invert_selective(&SelectiveBispectrum::zeros(plan)).unwrap_err();
        assert!(matches!(err, Error::Degenerate { order: Some(0), .. }));
    }

    #[test]
    fn vanishing_order_is_named() {
        let a = random_like(16, 4);
        let mut a = a.clone();
        a.set(3, 1, Complex64::default()).unwrap();
        a.set(-3, 1, Complex64::default()).unwrap();
        let err = invert_selective(&selective_bispectrum(&a)).unwrap_err();
        assert!(
            matches!(err, Error::Degenerate { order: Some(3), .. }),
            "{err}"
        );
    }

    #[test]
    fn full_inversion_delegates() {
        let a = random_like(8, 5);
        let x = invert_full(&full_bispectrum(&a).unwrap()).unwrap();
        let y = invert_selective(&selective_bispectrum(&a)).unwrap();
        assert_eq!(x.values(), y.values());
    }

    #[test]
    fn exact_data_has_clean_diagnostics() {
        let a = random_like(16, 6);
        let (_, d) = invert_selective_with_diagnostics(&selective_bispectrum(&a)).unwrap();
        assert!(d.residuals_within_tolerance);
        assert!(d.weakest_ratio > 0.0);
    }
}
