mod common;

use std::collections::HashSet;

use diskbsp::bispectrum::{
    bispectrum_relative_error, full_bispectrum, full_bispectrum_chunks, full_count, invert_full,
    invert_selective, invert_selective_with_diagnostics, relative_error, selective_bispectrum,
    selective_labels, Bispectrum, FullBispectrum, FullIndex, SelectiveBispectrum, SelectiveLabel,
};
use diskbsp::transform::{rotate_coeffs, DHCoefficients};
use diskbsp::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// Literal j1 <= j2 enumeration of admissible triples, frozen as a regression.
// These are not the published table values; see the acceptance target.
#[test]
fn full_counts_under_deduplicated_convention() {
    for (size, want) in [(8, 3016u64), (16, 95297), (28, 1523204), (56, 48668840)] {
        let plan = common::plan(size);
        assert_eq!(full_count(&plan), want, "L={size}");
    }
    let plan = common::plan(16);
    assert_eq!(FullIndex::new(plan.clone()).len(), 95297);
    assert_eq!(FullIndex::new(plan).labels().count(), 95297);
}

#[test]
fn full_index_is_exhaustive_and_unique() {
    let plan = common::plan(8);
    let index = FullIndex::new(plan.clone());
    let e = plan.entries();
    let mut seen = HashSet::new();
    for (pos, label) in index.labels().enumerate() {
        assert!(label.j1 <= label.j2);
        let n3 = e[label.j1].n + e[label.j2].n;
        assert!(n3.abs() <= plan.max_order());
        assert!(label.k3 >= 1 && label.k3 <= plan.root_count(n3));
        assert_eq!(index.position(label), Some(pos as u64));
        assert!(seen.insert(label));
    }
    let mut brute = 0u64;
    for j1 in 0..e.len() {
        for j2 in j1..e.len() {
            let n3 = e[j1].n + e[j2].n;
            if n3.abs() <= plan.max_order() {
                brute += plan.root_count(n3) as u64;
            }
        }
    }
    assert_eq!(brute, index.len());
}

#[test]
fn zero_coefficients_give_zero_bispectra() {
    let plan = common::plan(8);
    let a = DHCoefficients::zeros(plan);
    assert!(full_bispectrum(&a)
        .unwrap()
        .values()
        .iter()
        .all(|v| v.norm() == 0.0));
    assert!(selective_bispectrum(&a)
        .values()
        .iter()
        .all(|v| v.norm() == 0.0));
}

#[test]
fn single_radial_coefficient() {
    let plan = common::plan(8);
    let mut a = DHCoefficients::zeros(plan.clone());
    a.set(0, 1, c(2.0, 0.0)).unwrap();
    let b = full_bispectrum(&a).unwrap();
    let j01 = plan.index_of(0, 1).unwrap();
    for (label, v) in b.index().labels().zip(b.values()) {
        let pure = label.j1 == j01 && label.j2 == j01 && label.k3 == 1;
        if pure {
            assert_eq!(*v, c(8.0, 0.0));
        } else {
            assert_eq!(*v, c(0.0, 0.0), "{label:?}");
        }
    }
}

#[test]
fn selective_definitions() {
    let plan = common::plan(28);
    let a = common::random_coeffs(&plan, 5, 0.1);
    let b = selective_bispectrum(&a);
    assert_eq!(b.len(), 315);
    let a01 = a.get(0, 1);
    assert!((b.get(SelectiveLabel::Zero { k: 1 }).unwrap() - a01 * a01 * a01).norm() < 1e-15);
    assert!(b.get(SelectiveLabel::Zero { k: 1 }).unwrap().im.abs() <= 1e-9);
    for label in selective_labels(&plan) {
        let want = match label {
            SelectiveLabel::Zero { k } => a01 * a01 * a.get(0, k).conj(),
            SelectiveLabel::Two { n, k } => a.get(1, 1) * a.get(n, 1) * a.get(n + 1, k).conj(),
        };
        assert!((b.get(label).unwrap() - want).norm() <= 1e-14 * (1.0 + want.norm()));
    }
}

#[test]
fn selective_values_are_full_values_bitwise() {
    for size in [8, 16] {
        let plan = common::plan(size);
        let a = common::random_coeffs(&plan, 9, 0.0);
        let full = full_bispectrum(&a).unwrap();
        let sel = selective_bispectrum(&a);
        for label in sel.labels() {
            let fv = full.get(label.full_label(&plan)).unwrap();
            let sv = sel.get(label).unwrap();
            assert_eq!(fv.re.to_bits(), sv.re.to_bits(), "{label:?}");
            assert_eq!(fv.im.to_bits(), sv.im.to_bits(), "{label:?}");
        }
    }
}

#[test]
fn chunked_matches_materialised() {
    let plan = common::plan(16);
    let a = common::random_coeffs(&plan, 2, 0.0);
    let full = full_bispectrum(&a).unwrap();
    let mut streamed = Vec::new();
    full_bispectrum_chunks(&a, 777, |chunk| streamed.extend_from_slice(chunk));
    assert_eq!(streamed.as_slice(), full.values());
}

#[test]
fn inversion_with_real_gauge_is_exact() {
    let plan = common::plan(16);
    let a = common::random_coeffs(&plan, 4, 0.1);
    let phi = a.get(1, 1).arg();
    let a = rotate_coeffs(&a, -phi);
    assert!(a.get(1, 1).im.abs() < 1e-15 && a.get(1, 1).re > 0.0);
    let back = invert_selective(&selective_bispectrum(&a)).unwrap();
    assert!(common::l2_rel(back.values(), a.values()) < 1e-10);
}

#[test]
fn zero_bispectrum_is_degenerate() {
    let plan = common::plan(8);
    let err = invert_selective(&SelectiveBispectrum::zeros(plan.clone())).unwrap_err();
    assert!(matches!(err, Error::Degenerate { order: Some(0), .. }));
    let zeros = FullBispectrum::from_values(plan.clone(), vec![c(0.0, 0.0); 3016]).unwrap();
    assert!(matches!(invert_full(&zeros), Err(Error::Degenerate { .. })));
}

#[test]
fn vanishing_first_root_names_order() {
    let plan = common::plan(16);
    let mut a = common::random_coeffs(&plan, 1, 0.1);
    a.set(4, 1, c(0.0, 0.0)).unwrap();
    a.set(-4, 1, c(0.0, 0.0)).unwrap();
    let err = invert_selective(&selective_bispectrum(&a)).unwrap_err();
    assert!(
        matches!(err, Error::Degenerate { order: Some(4), .. }),
        "{err}"
    );

    let mut neg = common::random_coeffs(&plan, 1, 0.1);
    neg.set(0, 1, c(0.5, 0.0)).unwrap();
    let mut b = selective_bispectrum(&neg);
    let idx = b
        .labels()
        .iter()
        .position(|l| *l == SelectiveLabel::Two { n: 0, k: 1 })
        .unwrap();
    b.values_mut()[idx] = c(-0.3, 0.0);
    assert!(matches!(
        invert_selective(&b),
        Err(Error::Degenerate { order: Some(1), .. })
    ));
}

#[test]
fn imaginary_residuals_are_reported() {
    let plan = common::plan(8);
    let a = common::random_coeffs(&plan, 3, 0.2);
    let mut b = selective_bispectrum(&a);
    let (_, clean) = invert_selective_with_diagnostics(&b).unwrap();
    assert!(clean.residuals_within_tolerance);
    b.values_mut()[0] += c(0.0, 1e-3);
    let (_, diag) = invert_selective_with_diagnostics(&b).unwrap();
    assert!(!diag.residuals_within_tolerance);
    assert!(diag.cube_root_residual > 1e-9);
}

#[test]
fn full_inversion_agrees_with_selective() {
    let plan = common::plan(8);
    let a = common::random_coeffs(&plan, 8, 0.1);
    let full = full_bispectrum(&a).unwrap();
    let from_full = invert_full(&full).unwrap();
    let from_sel = invert_selective(&selective_bispectrum(&a)).unwrap();
    assert_eq!(from_full.values(), from_sel.values());
}

#[test]
fn relative_error_examples() {
    let plan = common::plan(16);
    let a = common::random_coeffs(&plan, 6, 0.1);
    let b = selective_bispectrum(&a);
    assert_eq!(bispectrum_relative_error(&b, &b).unwrap(), 0.0);
    let twice: Vec<Complex64> = b.values().iter().map(|v| v * 2.0).collect();
    assert!((relative_error(b.values(), &twice).unwrap() - 1.0).abs() < 1e-15);
    let rotated = selective_bispectrum(&rotate_coeffs(&a, 2.2));
    assert!(bispectrum_relative_error(&b, &rotated).unwrap() <= 1e-10);
    assert!(matches!(
        relative_error(b.values(), &twice[1..]),
        Err(Error::InvalidArgument(_))
    ));
    let zero = SelectiveBispectrum::zeros(plan.clone());
    assert!(matches!(
        bispectrum_relative_error(&zero, &b),
        Err(Error::Degenerate { .. })
    ));
    let other = selective_bispectrum(&common::random_coeffs(&common::plan(8), 1, 0.1));
    assert!(bispectrum_relative_error(&b, &other).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inversion_recovers_up_to_rotation(seed in any::<u64>(), size in prop::sample::select(vec![8usize, 16, 28])) {
        let plan = common::plan(size);
        let a = common::random_coeffs(&plan, seed, 0.1);
        let back = invert_selective(&selective_bispectrum(&a)).unwrap();
        let want = rotate_coeffs(&a, -a.get(1, 1).arg());
        prop_assert!(common::l2_rel(back.values(), want.values()) <= 1e-8);
    }

    #[test]
    fn invariance_in_coefficient_space(seed in any::<u64>(), phi in -20.0f64..20.0) {
        let plan = common::plan(8);
        let a = common::random_coeffs(&plan, seed, 0.0);
        let r = rotate_coeffs(&a, phi);
        let s0 = selective_bispectrum(&a);
        prop_assert!(bispectrum_relative_error(&s0, &selective_bispectrum(&r)).unwrap() <= 1e-10);
        let f0 = full_bispectrum(&a).unwrap();
        prop_assert!(bispectrum_relative_error(&f0, &full_bispectrum(&r).unwrap()).unwrap() <= 1e-10);
    }

    #[test]
    fn bispectrum_is_cubic(seed in any::<u64>(), s in -3.0f64..3.0) {
        let plan = common::plan(8);
        let a = common::random_coeffs(&plan, seed, 0.0);
        let b = selective_bispectrum(&a);
        let bs = selective_bispectrum(&a.scaled(s));
        for (x, y) in b.values().iter().zip(bs.values()) {
            prop_assert!((x * s.powi(3) - y).norm() <= 1e-12 * (1.0 + y.norm()));
        }
    }
}
