//! Deterministic images for tests, benchmarks and the MRA experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::transform::ImageGrid;

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

/// Anti-aliased stroke through `points` (pixel coordinates, `(col, row)`).
fn stroke(size: usize, points: &[(f64, f64)], half_width: f64) -> ImageGrid {
    ImageGrid::from_fn(size, |row, col| {
        let p = (col as f64, row as f64);
        let d = points
            .windows(2)
            .map(|w| segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min);
        (half_width - d + 0.5).clamp(0.0, 1.0)
    })
}

/// A handwritten-looking "6" on a 28x28 canvas, intensities in `[0, 1]`,
/// drawn in the central 20x20 box like the MNIST digits.
pub fn digit_six() -> ImageGrid {
    let mut pts = Vec::new();
    // the hook, from the top right down into the loop
    for i in 0..=12 {
        let t = i as f64 / 12.0;
        let col = 17.0 - 7.5 * t + 1.5 * (t * std::f64::consts::PI).sin();
        let row = 5.0 + 12.0 * t;
        pts.push((col, row));
    }
    // the loop, centred low
    let (cc, cr, rc, rr) = (13.5, 17.5, 4.8, 4.3);
    for i in 0..=40 {
        let a = std::f64::consts::PI + i as f64 / 40.0 * std::f64::consts::TAU;
        pts.push((cc + rc * a.cos(), cr - rr * a.sin()));
    }
    stroke(28, &pts, 1.3).masked()
}

/// Sum of a few random Gaussian bumps, disk masked, peak near 1.
pub fn smooth_blobs(size: usize, seed: u64) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            let r = rng.random_range(0.0..0.55);
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            (
                r * t.cos(),
                r * t.sin(),
                rng.random_range(4.0..14.0),
                rng.random_range(0.4..1.0),
            )
        })
        .collect();
    let dx = 2.0 / size as f64;
    ImageGrid::from_fn(size, |row, col| {
        let x = -1.0 + (col as f64 + 0.5) * dx;
        let y = -1.0 + (row as f64 + 0.5) * dx;
        blobs
            .iter()
            .map(|&(cx, cy, s, w)| w * (-((x - cx).powi(2) + (y - cy).powi(2)) * s).exp())
            .sum()
    })
    .masked()
}

/// Independent uniform `[0, 1)` pixels, disk masked.
pub fn random_image(size: usize, seed: u64) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ImageGrid::from_fn(size, |_, _| rng.random::<f64>()).masked()
}
