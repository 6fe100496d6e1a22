//! Disk harmonic transform: image grids, coefficient vectors, the direct and
//! polar-grid backends, and the rotation action on both sides.

mod coeffs;
mod direct;
mod fast;
mod image;
mod rotate;

pub use coeffs::{extend_negative, nonneg_half_extract, rotate_coeffs, DHCoefficients};
pub use direct::{dht_forward, dht_inverse};
pub use fast::{dht_forward_fast, polar_angles};
pub use image::ImageGrid;
pub use rotate::bilinear_rotate;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harmonics::HarmonicPlan;
use std::sync::Arc;

/// Which forward transform to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Riemann sum against the sampled basis.
    #[default]
    Direct,
    /// Polar resampling, angular FFT and radial quadrature.
    Fast,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Backend::Direct),
            "fast" => Ok(Backend::Fast),
            other => Err(format!("unknown backend {other:?} (expected direct|fast)")),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Direct => "direct",
            Backend::Fast => "fast",
        })
    }
}

/// Forward transform with the chosen backend.
pub fn forward(
    image: &ImageGrid,
    plan: &Arc<HarmonicPlan>,
    backend: Backend,
) -> Result<DHCoefficients> {
    match backend {
        Backend::Direct => dht_forward(image, plan),
        Backend::Fast => dht_forward_fast(image, plan),
    }
}
