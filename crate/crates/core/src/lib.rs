//! Disk harmonic transform, full and selective disk bispectra, bispectrum
//! inversion, and rotation-invariant multi-reference alignment.

pub mod bench;
pub mod bispectrum;
pub mod cli;
pub mod error;
pub mod eval;
pub mod harmonics;
pub mod io;
pub mod mra;
pub mod testimages;
pub mod transform;

pub use error::{Error, Result};
