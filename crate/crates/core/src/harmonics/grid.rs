//! Pixel geometry of an `L x L` image on `[-1, 1]^2` restricted to the open
//! unit disk.

use num_complex::Complex64;

/// In-disk pixel centres of an `L x L` grid.
///
/// Pixel `(row, col)` has centre `x = -1 + (col + 0.5) Δx`,
/// `y = -1 + (row + 0.5) Δx`, `Δx = 2 / L`; it is kept when `x² + y² < 1`.
/// Pixels sharing a radius share an entry of `radii`, which lets radial basis
/// values be sampled once per distinct radius.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    size: usize,
    pixels: Vec<usize>,
    radius_index: Vec<u32>,
    radii: Vec<f64>,
    multiplicity: Vec<u32>,
    phase: Vec<Complex64>,
    theta: Vec<f64>,
}

impl DiskGrid {
    pub fn new(size: usize) -> Self {
        let l = size as i64;
        let mut keyed: Vec<(i64, usize)> = Vec::new();
        for row in 0..l {
            for col in 0..l {
                let dx = 2 * col + 1 - l;
                let dy = 2 * row + 1 - l;
                let key = dx * dx + dy * dy;
                if key < l * l {
                    keyed.push((key, (row * l + col) as usize));
                }
            }
        }
        let mut keys: Vec<i64> = keyed.iter().map(|&(k, _)| k).collect();
        keys.sort_unstable();
        keys.dedup();
        let radii: Vec<f64> = keys.iter().map(|&k| (k as f64).sqrt() / l as f64).collect();
        let mut multiplicity = vec![0u32; keys.len()];

        let spacing = 2.0 / size as f64;
        let mut pixels = Vec::with_capacity(keyed.len());
        let mut radius_index = Vec::with_capacity(keyed.len());
        let mut phase = Vec::with_capacity(keyed.len());
        let mut theta = Vec::with_capacity(keyed.len());
        for &(key, p) in &keyed {
            let u = keys.binary_search(&key).expect("key present");
            multiplicity[u] += 1;
            let (row, col) = (p / size, p % size);
            let x = -1.0 + (col as f64 + 0.5) * spacing;
            let y = -1.0 + (row as f64 + 0.5) * spacing;
            let t = y.atan2(x);
            pixels.push(p);
            radius_index.push(u as u32);
            theta.push(t);
            phase.push(Complex64::from_polar(1.0, t));
        }
        Self {
            size,
            pixels,
            radius_index,
            radii,
            multiplicity,
            phase,
            theta,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.size as f64
    }

    /// `Δx²`, the area weight of one pixel.
    pub fn cell_area(&self) -> f64 {
        let dx = self.spacing();
        dx * dx
    }

    /// Row-major flat indices of in-disk pixels.
    pub fn pixels(&self) -> &[usize] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn radius_index(&self) -> &[u32] {
        &self.radius_index
    }

    /// Distinct radii, ascending.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Number of in-disk pixels at each distinct radius.
    pub fn multiplicity(&self) -> &[u32] {
        &self.multiplicity
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `e^{iθ}` per in-disk pixel.
    pub fn phase(&self) -> &[Complex64] {
        &self.phase
    }

    /// Whether flat pixel `p` lies inside the disk.
    pub fn contains(&self, p: usize) -> bool {
        let l = self.size as i64;
        let (row, col) = ((p / self.size) as i64, (p % self.size) as i64);
        let dx = 2 * col + 1 - l;
        let dy = 2 * row + 1 - l;
        dx * dx + dy * dy < l * l
    }
}
