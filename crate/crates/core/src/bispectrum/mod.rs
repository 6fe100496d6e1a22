//! Full and selective disk bispectra and the inversion of the selective one.

mod full;
mod invert;
mod selective;

pub use full::{
    full_bispectrum, full_bispectrum_chunks, full_count, FullBispectrum, FullIndex, FullLabel,
    MAX_MATERIALISED,
};
pub use invert::{
    invert_full, invert_selective, invert_selective_with_diagnostics, selective_from_full,
    InversionDiagnostics, TAU_SYM, TAU_ZERO,
};
pub use selective::{selective_bispectrum, selective_labels, SelectiveBispectrum, SelectiveLabel};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::HarmonicPlan;

/// Shared access to either bispectrum.
pub trait Bispectrum {
    fn plan(&self) -> &HarmonicPlan;
    fn values(&self) -> &[Complex64];
}

/// The product every bispectrum entry is built from. Both bispectra call this
/// with `j1 <= j2`, which keeps shared entries bitwise identical.
#[inline]
pub(crate) fn triple(a1: Complex64, a2: Complex64, a3: Complex64) -> Complex64 {
    (a1 * a2) * a3.conj()
}

/// `‖b1 - b2‖ / ‖b1‖` in the Euclidean norm.
pub fn bispectrum_relative_error<B: Bispectrum>(b1: &B, b2: &B) -> Result<f64> {
    if b1.plan().hash() != b2.plan().hash() {
        return Err(Error::invalid("bispectra come from different plans"));
    }
    relative_error(b1.values(), b2.values())
}

/// Relative Euclidean error between two aligned value vectors.
pub fn relative_error(b1: &[Complex64], b2: &[Complex64]) -> Result<f64> {
    if b1.len() != b2.len() {
        return Err(Error::invalid(format!(
            "index sizes differ: {} vs {}",
            b1.len(),
            b2.len()
        )));
    }
    let den: f64 = b1.iter().map(|v| v.norm_sqr()).sum();
    if den == 0.0 {
        return Err(Error::degenerate(
            None,
            "reference bispectrum has zero norm",
        ));
    }
    let num: f64 = b1.iter().zip(b2).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok((num / den).sqrt())
}
