//! Bessel functions of the first kind for non-negative integer order.
//!
//! Small arguments use the ascending power series while its terms decrease
//! monotonically. Everything else goes through Miller's backward recurrence
//! normalised with `J_0 + 2 Σ J_{2k} = 1`, which stays accurate well past the
//! largest roots any plan needs.

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const MAX_ORDER: u32 = 4096;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_n(x)` for integer `n >= 0` and finite `x >= 0`.
///
/// Negative arguments follow `J_n(-x) = (-1)^n J_n(x)`; negative orders can be
/// obtained by the caller through `J_{-n}(x) = (-1)^n J_n(x)`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check_args(n, x)?;
    if x < 0.0 {
        let v = bessel_j_unchecked(n, -x);
        return Ok(if n % 2 == 1 { -v } else { v });
    }
    Ok(bessel_j_unchecked(n, x))
}

fn check_args(n: u32, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::invalid(format!(
            "bessel_j: argument must be finite, got {x}"
        )));
    }
    if n > MAX_ORDER {
        return Err(Error::invalid(format!(
            "bessel_j: order {n} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// `(J_n(x), J_{n+1}(x))` from a single recurrence pass, `x >= 0`.
pub(crate) fn bessel_j_pair(n: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if n == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    if series_ok(n + 1, x) {
        return (series(n, x), series(n + 1, x));
    }
    miller(n, x)
}

pub(crate) fn bessel_j_unchecked(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if series_ok(n, x) {
        return series(n, x);
    }
    miller(n, x).0
}

/// `J_n'(x) = (n/x) J_n(x) - J_{n+1}(x)`, together with `J_n(x)`.
pub(crate) fn bessel_j_and_derivative(n: u32, x: f64) -> (f64, f64) {
    let (jn, jn1) = bessel_j_pair(n, x);
    if x == 0.0 {
        let d = match n {
            1 => 0.5,
            _ => 0.0,
        };
        return (jn, d);
    }
    (jn, f64::from(n) / x * jn - jn1)
}

// Terms of the series shrink from the first one onwards when (x/2)^2 < n+1;
// the tighter bound keeps the alternating tail well conditioned.
fn series_ok(n: u32, x: f64) -> bool {
    let q = 0.25 * x * x;
    x < 1.0 || q < 0.25 * (f64::from(n) + 1.0)
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let lead = (f64::from(n) * half.ln() - ln_factorial(n)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + f64::from(n)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    lead * sum
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| f64::from(i).ln()).sum()
}

fn miller(n: u32, x: f64) -> (f64, f64) {
    let top = f64::from(n).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()).ceil() as u32;
    start += start % 2;
    let start = start.max(n + 4);
    let two_over_x = 2.0 / x;

    // After the step at index j, `cur` holds J_{j-1} and `prev` holds J_j
    // (up to a common scale).
    let mut prev = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut norm = 0.0_f64;
    let mut jn = 0.0_f64;
    let mut jn1 = 0.0_f64;
    for j in (1..=start).rev() {
        let next = f64::from(j) * two_over_x * cur - prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            norm *= RESCALE_BY;
            jn *= RESCALE_BY;
            jn1 *= RESCALE_BY;
        }
        // cur = J_{j-1}
        let idx = j - 1;
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if idx == n {
            jn = cur;
        }
        if idx == n + 1 {
            jn1 = cur;
        }
    }
    norm += cur;
    (jn / norm, jn1 / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            bessel_j(0, f64::NAN),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            bessel_j(2, f64::INFINITY),
            Err(Error::InvalidArgument(_))
        ));
        assert!(bessel_j(MAX_ORDER + 1, 1.0).is_err());
    }

    #[test]
    fn odd_orders_are_odd() {
        let a = bessel_j(3, 2.5).unwrap();
        let b = bessel_j(3, -2.5).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &(n, x) in &[(0u32, 3.3), (1, 7.1), (5, 12.0), (40, 55.5)] {
            let (_, d) = bessel_j_and_derivative(n, x);
            let h = 1e-5;
            let fd = (bessel_j_unchecked(n, x + h) - bessel_j_unchecked(n, x - h)) / (2.0 * h);
            assert!((d - fd).abs() < 1e-9, "n={n} x={x}: {d} vs {fd}");
        }
    }
}
