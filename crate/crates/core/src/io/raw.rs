use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_file, write_file};
use crate::error::{Error, Result};
use crate::transform::ImageGrid;

/// Sidecar describing a raw float image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawImageHeader {
    #[serde(rename = "L")]
    pub size: usize,
    pub dtype: String,
    pub order: String,
    #[serde(default)]
    pub scale: String,
}

impl RawImageHeader {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            dtype: "f32".into(),
            order: "row-major".into(),
            scale: "intensities in [0, 1]; little-endian".into(),
        }
    }
}

/// `<path>.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Little-endian `f32` pixels plus a JSON sidecar. Values are narrowed to
/// `f32`, so only `f32`-representable images survive bit for bit.
pub fn write_raw(path: &Path, image: &ImageGrid) -> Result<()> {
    if let Some(i) = image.pixels().iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("pixel {i} is not finite")));
    }
    let mut bytes = Vec::with_capacity(4 * image.pixels().len());
    for &v in image.pixels() {
        bytes.extend_from_slice(&(v as f32).to_le_bytes());
    }
    write_file(path, &bytes)?;
    let header = serde_json::to_vec_pretty(&RawImageHeader::new(image.size()))?;
    write_file(&sidecar_path(path), &header)
}

pub fn read_raw(path: &Path) -> Result<ImageGrid> {
    let side = sidecar_path(path);
    let side_name = side.display().to_string();
    let header: RawImageHeader = serde_json::from_slice(&read_file(&side)?)
        .map_err(|e| Error::parse(&side_name, e.column() as u64, e.to_string()))?;
    if header.dtype != "f32" || header.order != "row-major" {
        return Err(Error::parse(
            &side_name,
            0,
            "only f32 row-major images are supported",
        ));
    }
    let bytes = read_file(path)?;
    let need = 4 * header.size * header.size;
    if bytes.len() != need {
        return Err(Error::parse(
            path.display().to_string(),
            bytes.len() as u64,
            format!(
                "payload is {} bytes but L={} needs {need}",
                bytes.len(),
                header.size
            ),
        ));
    }
    let pixels = bytes
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
        .collect();
    ImageGrid::from_vec(header.size, pixels)
        .map_err(|e| Error::parse(path.display().to_string(), 0, e.to_string()))
}
