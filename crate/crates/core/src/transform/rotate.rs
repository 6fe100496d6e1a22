use std::f64::consts::FRAC_PI_2;

use super::ImageGrid;

/// Bilinear sample of `image` at the continuous point `(x, y)` in `[-1, 1]^2`.
/// Samples beyond the pixel centres blend towards zero.
pub(crate) fn bilinear_sample(image: &ImageGrid, x: f64, y: f64) -> f64 {
    let l = image.size();
    let inv = l as f64 / 2.0;
    let cx = (x + 1.0) * inv - 0.5;
    let cy = (y + 1.0) * inv - 0.5;
    let c0 = cx.floor();
    let r0 = cy.floor();
    let tx = cx - c0;
    let ty = cy - r0;
    let at = |r: f64, c: f64| -> f64 {
        if r < 0.0 || c < 0.0 || r >= l as f64 || c >= l as f64 {
            0.0
        } else {
            image.get(r as usize, c as usize)
        }
    };
    let v00 = at(r0, c0);
    let v01 = at(r0, c0 + 1.0);
    let v10 = at(r0 + 1.0, c0);
    let v11 = at(r0 + 1.0, c0 + 1.0);
    (1.0 - ty) * ((1.0 - tx) * v00 + tx * v01) + ty * ((1.0 - tx) * v10 + tx * v11)
}

/// `out(x) = f(R_φ x)`, so that coefficients pick up `e^{inφ}`.
///
/// Multiples of `π/2` are exact index permutations. The result is disk masked.
pub fn bilinear_rotate(image: &ImageGrid, phi: f64) -> ImageGrid {
    let l = image.size();
    let src = image.clone().masked();
    let q = phi / FRAC_PI_2;
    if (q - q.round()).abs() < 1e-12 {
        let turns = (q.round() as i64).rem_euclid(4);
        let mut out = src;
        for _ in 0..turns {
            out = ImageGrid::from_fn(l, |row, col| out.get(col, l - 1 - row));
        }
        return out.masked();
    }
    let (s, c) = phi.sin_cos();
    let mut out = ImageGrid::zeros(l);
    for row in 0..l {
        for col in 0..l {
            if !src.in_disk(row, col) {
                continue;
            }
            let (x, y) = src.center(row, col);
            out.set(
                row,
                col,
                bilinear_sample(&src, c * x - s * y, s * x + c * y),
            );
        }
    }
    out
}
