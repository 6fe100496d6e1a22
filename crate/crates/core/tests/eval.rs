mod common;

use std::f64::consts::TAU;

use diskbsp::eval::{
    alignment_objective, best_angle, best_rotation_align, image_relative_error, ErrorMode,
    ALIGN_GRID,
};
use diskbsp::testimages::smooth_blobs;
use diskbsp::transform::{dht_forward, rotate_coeffs, DHCoefficients, ImageGrid};
use diskbsp::Error;
use num_complex::Complex64;

#[test]
fn recovers_known_rotation() {
    let plan = common::plan(16);
    let a = dht_forward(&smooth_blobs(16, 4), &plan).unwrap();
    let est = rotate_coeffs(&a, 0.7);
    let r = best_rotation_align(&est, &a).unwrap();
    let want = (-0.7f64).rem_euclid(TAU);
    assert!((r.phi - want).abs() < 1e-3, "{}", r.phi);
    assert!(r.rel_error_linear <= 1e-9);
    assert!(r.rel_error_squared <= 1e-9);
    assert!((0.0..TAU).contains(&r.phi));
}

#[test]
fn identical_inputs_align_trivially() {
    let plan = common::plan(16);
    let a = dht_forward(&smooth_blobs(16, 1), &plan).unwrap();
    let r = best_rotation_align(&a, &a).unwrap();
    assert!(r.phi.min(TAU - r.phi) < 1e-9);
    assert!(r.rel_error_linear < 1e-9);
}

#[test]
fn sign_flip_on_radial_support_cannot_be_undone() {
    let plan = common::plan(16);
    let mut a = DHCoefficients::zeros(plan.clone());
    a.set(0, 1, Complex64::new(0.8, 0.0)).unwrap();
    a.set(0, 2, Complex64::new(-0.3, 0.0)).unwrap();
    let r = best_rotation_align(&a.scaled(-1.0), &a).unwrap();
    assert!((r.rel_error_linear - 2.0).abs() < 1e-12);
    assert!((r.rel_error_squared - 4.0).abs() < 1e-12);
}

#[test]
fn zero_reference_is_degenerate() {
    let plan = common::plan(8);
    let a = common::random_coeffs(&plan, 0, 0.1);
    let zero = DHCoefficients::zeros(plan);
    assert!(matches!(
        best_rotation_align(&a, &zero),
        Err(Error::Degenerate { .. })
    ));
}

#[test]
fn image_error_examples() {
    let f = smooth_blobs(16, 2);
    assert_eq!(
        image_relative_error(&f, &f, ErrorMode::Linear).unwrap(),
        0.0
    );
    let zero = ImageGrid::zeros(16);
    assert!((image_relative_error(&zero, &f, ErrorMode::Linear).unwrap() - 1.0).abs() < 1e-15);
    assert!((image_relative_error(&zero, &f, ErrorMode::Squared).unwrap() - 1.0).abs() < 1e-15);
    let mut twice = f.clone();
    twice.scale(2.0);
    assert!((image_relative_error(&twice, &f, ErrorMode::Linear).unwrap() - 1.0).abs() < 1e-15);
    assert!(image_relative_error(&f, &zero, ErrorMode::Linear).is_err());
    assert!(image_relative_error(&ImageGrid::zeros(8), &f, ErrorMode::Linear).is_err());
}

#[test]
fn refined_angle_beats_every_grid_point() {
    let plan = common::plan(16);
    for seed in 0..5 {
        let a = common::random_coeffs(&plan, seed, 0.1);
        let b = rotate_coeffs(&common::random_coeffs(&plan, seed + 100, 0.1), 0.3);
        let phi = best_angle(&a, &b);
        let best = alignment_objective(&a, &b, phi);
        for i in 0..ALIGN_GRID {
            let g = i as f64 * TAU / ALIGN_GRID as f64;
            assert!(best <= alignment_objective(&a, &b, g) + 1e-12);
        }
    }
}

#[test]
fn common_rotation_leaves_residual_unchanged() {
    let plan = common::plan(16);
    let est = common::random_coeffs(&plan, 1, 0.1);
    let reference = common::random_coeffs(&plan, 2, 0.1);
    let base = alignment_objective(&est, &reference, best_angle(&est, &reference));
    for psi in [0.4, 2.5, 5.9] {
        let (e, r) = (rotate_coeffs(&est, psi), rotate_coeffs(&reference, psi));
        let v = alignment_objective(&e, &r, best_angle(&e, &r));
        assert!((v - base).abs() <= 1e-9 * base, "{psi}: {v} vs {base}");
    }
}

// The pixel grid is only symmetric under quarter turns, so the image-space
// error is exactly invariant for those.
#[test]
fn quarter_turns_leave_image_error_unchanged() {
    let plan = common::plan(16);
    let est = common::random_coeffs(&plan, 1, 0.1);
    let reference = common::random_coeffs(&plan, 2, 0.1);
    let base = best_rotation_align(&est, &reference).unwrap();
    for q in 1..4 {
        let psi = q as f64 * TAU / 4.0;
        let r = best_rotation_align(&rotate_coeffs(&est, psi), &rotate_coeffs(&reference, psi))
            .unwrap();
        assert!((r.rel_error_linear - base.rel_error_linear).abs() <= 1e-9);
    }
}
