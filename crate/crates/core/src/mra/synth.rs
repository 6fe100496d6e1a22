use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use super::{mix, MRAConfig};
use crate::error::Result;
use crate::transform::{bilinear_rotate, ImageGrid};

/// Generator for copy `index`. Every copy owns a stream, so copies can be
/// produced in any order with the same result.
pub(crate) fn copy_rng(seed: u64, sigma2: f64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(mix(seed ^ mix(sigma2.to_bits())));
    rng.set_stream(index);
    rng
}

/// `n_X` rotated, noisy, masked copies of `clean`.
pub fn synthesize_dataset(clean: &ImageGrid, cfg: &MRAConfig) -> Result<Vec<ImageGrid>> {
    synthesize_with_angles(clean, cfg).map(|v| v.into_iter().map(|(img, _)| img).collect())
}

/// As [`synthesize_dataset`], also returning each copy's angle.
pub fn synthesize_with_angles(clean: &ImageGrid, cfg: &MRAConfig) -> Result<Vec<(ImageGrid, f64)>> {
    cfg.validate()?;
    let noise = Normal::new(0.0, cfg.sigma2.sqrt()).expect("σ checked above");
    Ok((0..cfg.n_x as u64)
        .map(|i| {
            let mut rng = copy_rng(cfg.seed, cfg.sigma2, i);
            let phi = match cfg.fixed_angle {
                Some(a) => a,
                None => rng.random_range(0.0..TAU),
            };
            let mut img = bilinear_rotate(clean, phi);
            if cfg.sigma2 > 0.0 {
                for v in img.pixels_mut() {
                    *v += noise.sample(&mut rng);
                }
            }
            (img.masked(), phi)
        })
        .collect())
}
