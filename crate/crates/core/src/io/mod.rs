//! Image, dataset and table formats.

mod idx;
mod pgm;
mod raw;
mod tables;

pub use idx::{read_idx, read_idx_dataset, write_idx, IdxDataset, IDX_IMAGE_MAGIC};
pub use pgm::{read_pgm, read_pgm_bytes, write_pgm, PgmEncoding, PgmImage};
pub use raw::{read_raw, sidecar_path, write_raw, RawImageHeader};
pub use tables::{
    read_coeffs, read_full, read_selective, write_coeffs, write_full, write_selective,
    BispectrumEnvelope, CoeffEnvelope, Provenance,
};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// `v / max` rounded through `f32`, so every reader yields values that the raw
/// format stores exactly.
pub(crate) fn unit_scale(v: u32, max: u32) -> f64 {
    f64::from(v as f32 / max as f32)
}
