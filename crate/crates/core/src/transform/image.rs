use crate::error::{Error, Result};

/// `L x L` real image, row-major, on `[-1, 1]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    size: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            pixels: vec![0.0; size * size],
        }
    }

    pub fn from_vec(size: usize, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != size * size {
            return Err(Error::invalid(format!(
                "expected {} pixels for side {size}, got {}",
                size * size,
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("pixel {i} is not finite")));
        }
        Ok(Self { size, pixels })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(size * size);
        for row in 0..size {
            for col in 0..size {
                pixels.push(f(row, col));
            }
        }
        Self { size, pixels }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.pixels[row * self.size + col] = v;
    }

    /// Centre of pixel `(row, col)` in `[-1, 1]^2`.
    pub fn center(&self, row: usize, col: usize) -> (f64, f64) {
        let dx = 2.0 / self.size as f64;
        (
            -1.0 + (col as f64 + 0.5) * dx,
            -1.0 + (row as f64 + 0.5) * dx,
        )
    }

    pub fn in_disk(&self, row: usize, col: usize) -> bool {
        let l = self.size as i64;
        let dx = 2 * col as i64 + 1 - l;
        let dy = 2 * row as i64 + 1 - l;
        dx * dx + dy * dy < l * l
    }

    /// Zero every pixel outside the unit disk.
    pub fn mask_disk(&mut self) {
        let size = self.size;
        for row in 0..size {
            for col in 0..size {
                if !self.in_disk(row, col) {
                    self.pixels[row * size + col] = 0.0;
                }
            }
        }
    }

    pub fn masked(mut self) -> Self {
        self.mask_disk();
        self
    }

    /// `Σ |f_p| Δx²` over the disk, the discrete `L¹` norm.
    pub fn l1_norm(&self) -> f64 {
        let dx = 2.0 / self.size as f64;
        let mut s = 0.0;
        for row in 0..self.size {
            for col in 0..self.size {
                if self.in_disk(row, col) {
                    s += self.get(row, col).abs();
                }
            }
        }
        s * dx * dx
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    pub fn scale(&mut self, a: f64) {
        self.pixels.iter_mut().for_each(|v| *v *= a);
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &ImageGrid) -> Result<ImageGrid> {
        if other.size != self.size {
            return Err(Error::invalid("image sizes differ"));
        }
        let pixels = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(x, y)| x + a * y)
            .collect();
        Ok(ImageGrid {
            size: self.size,
            pixels,
        })
    }
}
