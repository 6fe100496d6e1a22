//! Positive zeros of `J_n`.
//!
//! Order 0 is seeded from McMahon's expansion. Every higher order is
//! bracketed by the zeros of the order below it (interlacing:
//! `λ_{n-1,k} < λ_{n,k} < λ_{n-1,k+1}`) and refined with a safeguarded
//! Newton iteration.

use std::f64::consts::PI;

use super::bessel::{bessel_j_and_derivative, bessel_j_unchecked, MAX_ORDER};
use crate::error::{Error, Result};

/// Residual every stored root satisfies.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Zeros of `J_0 .. J_{max_order}`, each order holding a prefix `k = 1..`.
#[derive(Debug, Clone, Default)]
pub struct BesselRootTable {
    roots: Vec<Vec<f64>>,
}

impl BesselRootTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table holding, for every order with at least one zero below `bound`,
    /// all zeros `<= bound` plus the first zero above it.
    pub fn up_to(bound: f64) -> Self {
        let mut table = Self::new();
        let mut n = 0usize;
        loop {
            table.ensure(n, 1);
            if table.roots[n][0] > bound {
                break;
            }
            let mut k = table.roots[n].len();
            while table.roots[n][k - 1] <= bound {
                k += 1;
                table.ensure(n, k);
            }
            n += 1;
        }
        table
    }

    /// Highest order currently stored.
    pub fn max_order(&self) -> Option<usize> {
        self.roots.len().checked_sub(1)
    }

    /// Zeros of order `n`, ascending.
    pub fn order(&self, n: usize) -> &[f64] {
        self.roots.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `λ_{n,k}` with 1-based `k`, computing it if needed.
    pub fn root(&mut self, n: usize, k: usize) -> f64 {
        assert!(k >= 1, "root index is 1-based");
        self.ensure(n, k);
        self.roots[n][k - 1]
    }

    /// Make sure order `n` holds at least `count` zeros.
    pub fn ensure(&mut self, n: usize, count: usize) {
        if self.roots.len() <= n {
            self.roots.resize_with(n + 1, Vec::new);
        }
        if self.roots[n].len() >= count {
            return;
        }
        if n == 0 {
            while self.roots[0].len() < count {
                let k = self.roots[0].len() + 1;
                let r = order_zero_root(k);
                self.roots[0].push(r);
            }
            return;
        }
        // zero k of order n sits between zeros k and k+1 of order n-1
        self.ensure(n - 1, count + 1);
        while self.roots[n].len() < count {
            let k = self.roots[n].len() + 1;
            let lo = self.roots[n - 1][k - 1];
            let hi = self.roots[n - 1][k];
            let r = refine(n as u32, lo, hi, mcmahon(n as u32, k));
            self.roots[n].push(r);
        }
    }
}

/// k-th positive zero of `J_n`.
pub fn bessel_root(n: u32, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("bessel_root: root index is 1-based"));
    }
    if n > MAX_ORDER {
        return Err(Error::invalid(format!(
            "bessel_root: order {n} exceeds {MAX_ORDER}"
        )));
    }
    let mut table = BesselRootTable::new();
    Ok(table.root(n as usize, k))
}

/// McMahon's large-zero expansion. Only used as a starting guess.
fn mcmahon(n: u32, k: usize) -> f64 {
    let mu = 4.0 * f64::from(n) * f64::from(n);
    let beta = (k as f64 + 0.5 * f64::from(n) - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
}

fn order_zero_root(k: usize) -> f64 {
    let guess = mcmahon(0, k);
    // neighbouring zeros of J_0 are more than 3 apart, so ±0.5 isolates one
    refine(0, guess - 0.5, guess + 0.5, guess)
}

/// Safeguarded Newton on `J_n` inside a sign-changing bracket `(lo, hi)`.
fn refine(n: u32, mut lo: f64, mut hi: f64, guess: f64) -> f64 {
    let mut f_lo = bessel_j_unchecked(n, lo);
    let f_hi = bessel_j_unchecked(n, hi);
    debug_assert!(
        f_lo * f_hi <= 0.0,
        "bracket ({lo}, {hi}) does not straddle a zero of J_{n}"
    );
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let (f, d) = bessel_j_and_derivative(n, x);
        if f == 0.0 {
            return x;
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        let newton = x - f / d;
        let next = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_index_is_rejected() {
        assert!(bessel_root(0, 0).is_err());
    }

    #[test]
    fn first_zeros() {
        assert!((bessel_root(0, 1).unwrap() - 2.404825557695773).abs() < 1e-13);
        assert!((bessel_root(1, 1).unwrap() - 3.831705970207512).abs() < 1e-13);
    }

    #[test]
    fn interlacing_triple() {
        let a = bessel_root(0, 1).unwrap();
        let b = bessel_root(1, 1).unwrap();
        let c = bessel_root(0, 2).unwrap();
        assert!(a < b && b < c);
    }

    #[test]
    fn up_to_covers_bound() {
        let t = BesselRootTable::up_to(20.0);
        let top = t.max_order().unwrap();
        // the last stored order is the first one with no zero below the bound
        assert!(t.order(top)[0] > 20.0);
        assert!(t.order(top - 1)[0] <= 20.0);
        for n in 0..top {
            let r = t.order(n);
            assert!(*r.last().unwrap() > 20.0);
        }
    }
}
