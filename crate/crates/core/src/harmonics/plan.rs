//! Truncated, ordered disk-harmonic frequency table with its sampled basis.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bessel::bessel_j_unchecked;
use super::grid::DiskGrid;
use super::roots::BesselRootTable;
use crate::error::{Error, Result};

/// How many disk harmonics a plan keeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Truncation {
    /// Keep the `⌊πL²/4⌋` lowest frequencies (one per in-disk pixel, as the
    /// area of the disk suggests). A trailing `-n` entry whose `+n` partner
    /// falls past the cut is dropped so the table stays symmetric in `n`.
    PixelCount,
    /// Keep every `λ_nk <= factor * L`. `factor = π/2` is the Nyquist rule.
    Bandlimit { factor: f64 },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::PixelCount
    }
}

impl Truncation {
    pub fn nyquist() -> Self {
        Truncation::Bandlimit { factor: PI / 2.0 }
    }
}

/// One retained harmonic `ψ_j = c J_n(λ r) e^{inθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicEntry {
    pub j: usize,
    pub n: i32,
    pub k: usize,
    pub lambda: f64,
    /// Normalisation giving the sampled function unit discrete norm.
    pub c: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PlanFile {
    format: String,
    size: usize,
    truncation: Truncation,
    bandlimit: f64,
    entries: Vec<HarmonicEntry>,
}

const PLAN_FORMAT: &str = "diskbsp-plan/1";

/// Everything the transforms need for one image size.
///
/// The sampled basis is stored factored: radial profiles `c J_|n|(λ r)` per
/// `n >= 0` entry and distinct pixel radius, plus the per-pixel phase from
/// [`DiskGrid`]. Negative orders reuse the `|n|` profile with sign `(-1)^n`.
#[derive(Debug)]
pub struct HarmonicPlan {
    size: usize,
    truncation: Truncation,
    bandlimit: f64,
    entries: Vec<HarmonicEntry>,
    max_order: i32,
    root_counts: Vec<usize>,
    by_order: Vec<Vec<usize>>,
    grid: DiskGrid,
    radial_offsets: Vec<usize>,
    radial: Vec<f64>,
    polar_radii: Vec<f64>,
    polar_radial: Vec<f64>,
    angular: Vec<Complex64>,
    hash: String,
}

/// Build the plan for an `L x L` image.
pub fn build_plan(size: usize, truncation: Truncation) -> Result<Arc<HarmonicPlan>> {
    validate_size(size)?;
    let entries = enumerate(size, truncation)?;
    let bandlimit = match truncation {
        Truncation::PixelCount => entries.last().map(|e| e.0).unwrap_or(0.0),
        Truncation::Bandlimit { factor } => factor * size as f64,
    };
    let raw: Vec<HarmonicEntry> = entries
        .iter()
        .enumerate()
        .map(|(j, &(lambda, n, k))| HarmonicEntry {
            j,
            n,
            k,
            lambda,
            c: continuum_normalisation(n.unsigned_abs(), lambda),
        })
        .collect();
    HarmonicPlan::assemble(size, truncation, bandlimit, raw, true).map(Arc::new)
}

fn validate_size(size: usize) -> Result<()> {
    if size < 4 || size % 2 != 0 {
        return Err(Error::invalid(format!(
            "image side must be even and at least 4, got {size}"
        )));
    }
    Ok(())
}

/// `1 / (√π |J_{|n|+1}(λ)|)`, the unit-L² constant on the continuous disk.
fn continuum_normalisation(order: u32, lambda: f64) -> f64 {
    1.0 / (PI.sqrt() * bessel_j_unchecked(order + 1, lambda).abs())
}

fn enumerate(size: usize, truncation: Truncation) -> Result<Vec<(f64, i32, usize)>> {
    match truncation {
        Truncation::Bandlimit { factor } => {
            if !(factor.is_finite() && factor > 0.0) {
                return Err(Error::invalid(format!(
                    "bandlimit factor must be positive, got {factor}"
                )));
            }
            let bound = factor * size as f64;
            let all = candidates(bound);
            let kept: Vec<_> = all.into_iter().filter(|e| e.0 <= bound).collect();
            if kept.is_empty() {
                return Err(Error::invalid(format!(
                    "bandlimit {bound} keeps no harmonics (first root is 2.405)"
                )));
            }
            Ok(kept)
        }
        Truncation::PixelCount => {
            let target = (PI * (size * size) as f64 / 4.0).floor() as usize;
            // Weyl: #{λ <= b} ≈ b²/4
            let mut bound = 2.0 * (target as f64).sqrt() + 10.0;
            loop {
                let all = candidates(bound);
                let below = all.iter().filter(|e| e.0 <= bound).count();
                if below > target {
                    let mut kept: Vec<_> = all.into_iter().take(target).collect();
                    if let Some(&(_, n, k)) = kept.last() {
                        if n < 0 {
                            debug_assert!(!kept.iter().any(|e| e.1 == -n && e.2 == k));
                            kept.pop();
                        }
                    }
                    return Ok(kept);
                }
                bound *= 1.2;
            }
        }
    }
}

/// All `(λ, n, k)` from a root table up to `bound`, sorted by λ; equal λ
/// (the ±n pair) puts `-n` first.
fn candidates(bound: f64) -> Vec<(f64, i32, usize)> {
    let table = BesselRootTable::up_to(bound);
    let mut out = Vec::new();
    for n in 0..=table.max_order().unwrap_or(0) {
        for (i, &lambda) in table.order(n).iter().enumerate() {
            let k = i + 1;
            out.push((lambda, n as i32, k));
            if n > 0 {
                out.push((lambda, -(n as i32), k));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| a.1.abs().cmp(&b.1.abs()))
            .then_with(|| a.1.cmp(&b.1))
    });
    out
}

impl HarmonicPlan {
    fn assemble(
        size: usize,
        truncation: Truncation,
        bandlimit: f64,
        mut entries: Vec<HarmonicEntry>,
        normalise: bool,
    ) -> Result<Self> {
        let max_order = entries.iter().map(|e| e.n.abs()).max().unwrap_or(0);
        let width = (2 * max_order + 1) as usize;
        let mut by_order: Vec<Vec<usize>> = vec![Vec::new(); width];
        for e in &entries {
            by_order[(e.n + max_order) as usize].push(e.j);
        }
        for (slot, list) in by_order.iter_mut().enumerate() {
            list.sort_by_key(|&j| entries[j].k);
            for (i, &j) in list.iter().enumerate() {
                if entries[j].k != i + 1 {
                    return Err(Error::invalid(format!(
                        "order {} skips root index {}",
                        slot as i32 - max_order,
                        i + 1
                    )));
                }
            }
        }
        let root_counts: Vec<usize> = (0..=max_order)
            .map(|n| by_order[(n + max_order) as usize].len())
            .collect();
        for n in 1..=max_order {
            if by_order[(max_order - n) as usize].len() != root_counts[n as usize] {
                return Err(Error::invalid(format!(
                    "orders ±{n} keep different root counts"
                )));
            }
        }

        let grid = DiskGrid::new(size);
        let area = grid.cell_area();
        let radii = grid.radii();
        let mult = grid.multiplicity();
        let polar_radii: Vec<f64> = (0..size).map(|s| s as f64 / (size - 1) as f64).collect();

        let mut radial_offsets = Vec::with_capacity(max_order as usize + 2);
        let mut acc = 0;
        for &count in &root_counts {
            radial_offsets.push(acc);
            acc += count;
        }
        radial_offsets.push(acc);
        let mut radial = vec![0.0; acc * radii.len()];
        let mut polar_radial = vec![0.0; acc * size];

        for n in 0..=max_order {
            for &j in &by_order[(n + max_order) as usize] {
                let row = radial_offsets[n as usize] + entries[j].k - 1;
                let lambda = entries[j].lambda;
                let samples: Vec<f64> = radii
                    .iter()
                    .map(|&r| bessel_j_unchecked(n as u32, lambda * r))
                    .collect();
                let mut c = entries[j].c;
                if normalise {
                    let norm2: f64 = samples
                        .iter()
                        .zip(mult)
                        .map(|(v, &m)| f64::from(m) * (c * v) * (c * v))
                        .sum::<f64>()
                        * area;
                    c /= norm2.sqrt();
                }
                let dst = &mut radial[row * radii.len()..(row + 1) * radii.len()];
                for (d, v) in dst.iter_mut().zip(&samples) {
                    *d = c * v;
                }
                let pdst = &mut polar_radial[row * size..(row + 1) * size];
                for (d, &r) in pdst.iter_mut().zip(&polar_radii) {
                    *d = c * bessel_j_unchecked(n as u32, lambda * r);
                }
                entries[j].c = c;
            }
        }
        // the -n entries share the +n constant
        for j in 0..entries.len() {
            if entries[j].n < 0 {
                let n = -entries[j].n;
                let partner = by_order[(n + max_order) as usize][entries[j].k - 1];
                entries[j].c = entries[partner].c;
            }
        }

        let pixels = grid.len();
        let mut angular = Vec::with_capacity((max_order as usize + 1) * pixels);
        for n in 0..=max_order {
            angular.extend(
                grid.theta()
                    .iter()
                    .map(|&t| Complex64::from_polar(1.0, f64::from(n) * t)),
            );
        }

        let hash = plan_hash(size, &truncation, &entries);
        Ok(Self {
            size,
            truncation,
            bandlimit,
            entries,
            max_order,
            root_counts,
            by_order,
            grid,
            radial_offsets,
            radial,
            polar_radii,
            polar_radial,
            angular,
            hash,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Largest admissible `λ`.
    pub fn bandlimit(&self) -> f64 {
        self.bandlimit
    }

    pub fn entries(&self) -> &[HarmonicEntry] {
        &self.entries
    }

    /// Number of harmonics `m`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `N_m`, the largest retained `|n|`.
    pub fn max_order(&self) -> i32 {
        self.max_order
    }

    /// `K_n`, zero when `|n| > N_m`.
    pub fn root_count(&self, n: i32) -> usize {
        self.root_counts
            .get(n.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }

    /// `j` of `(n, k)`, if retained.
    pub fn index_of(&self, n: i32, k: usize) -> Option<usize> {
        if n.abs() > self.max_order || k == 0 {
            return None;
        }
        self.by_order[(n + self.max_order) as usize]
            .get(k - 1)
            .copied()
    }

    /// Indices `j` of order `n`, by increasing `k`.
    pub fn order_indices(&self, n: i32) -> &[usize] {
        if n.abs() > self.max_order {
            return &[];
        }
        &self.by_order[(n + self.max_order) as usize]
    }

    /// `Σ_{n=0}^{N_m} K_n`, the selective bispectrum length.
    pub fn selective_len(&self) -> usize {
        self.root_counts.iter().sum()
    }

    pub fn grid(&self) -> &DiskGrid {
        &self.grid
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    /// Hex digest identifying the harmonic table.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// Radial profile of `(|n|, k)` at the distinct disk radii, without the
    /// `(-1)^n` sign of negative orders.
    pub fn radial_profile(&self, order: u32, k: usize) -> &[f64] {
        let u = self.grid.radii().len();
        let row = self.radial_offsets[order as usize] + k - 1;
        &self.radial[row * u..(row + 1) * u]
    }

    /// Nodes `r_s = s / (L - 1)` used by the polar-grid backend.
    pub fn polar_radii(&self) -> &[f64] {
        &self.polar_radii
    }

    /// Radial profile of `(|n|, k)` at [`Self::polar_radii`].
    pub fn polar_profile(&self, order: u32, k: usize) -> &[f64] {
        let row = self.radial_offsets[order as usize] + k - 1;
        &self.polar_radial[row * self.size..(row + 1) * self.size]
    }

    /// `e^{inθ_i}` over the in-disk pixels, for `0 <= n <= N_m`.
    pub fn angular(&self, n: u32) -> &[Complex64] {
        let p = self.grid.len();
        &self.angular[n as usize * p..(n as usize + 1) * p]
    }

    /// `ψ_j` at the `i`-th in-disk pixel.
    pub fn basis_value(&self, j: usize, i: usize) -> Complex64 {
        let e = self.entries[j];
        let u = self.grid.radius_index()[i] as usize;
        let mut r = self.radial_profile(e.n.unsigned_abs(), e.k)[u];
        if e.n < 0 && e.n % 2 != 0 {
            r = -r;
        }
        let t = self.grid.theta()[i];
        Complex64::from_polar(r, f64::from(e.n) * t)
    }

    /// `Δx² Σ_p ψ_a(x_p) ψ_b*(x_p)`.
    pub fn gram(&self, a: usize, b: usize) -> Complex64 {
        let area = self.grid.cell_area();
        (0..self.grid.len())
            .map(|i| self.basis_value(a, i) * self.basis_value(b, i).conj())
            .sum::<Complex64>()
            * area
    }

    /// `Δx² Σ_p ψ_a(x_p) ψ_b(x_p)`.
    pub fn pseudo_gram(&self, a: usize, b: usize) -> Complex64 {
        let area = self.grid.cell_area();
        (0..self.grid.len())
            .map(|i| self.basis_value(a, i) * self.basis_value(b, i))
            .sum::<Complex64>()
            * area
    }

    /// Write the harmonic table as JSON. The sampled basis is not stored.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = PlanFile {
            format: PLAN_FORMAT.to_string(),
            size: self.size,
            truncation: self.truncation,
            bandlimit: self.bandlimit,
            entries: self.entries.clone(),
        };
        let text = serde_json::to_string_pretty(&file)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Read a table written by [`Self::save`] and resample the basis.
    pub fn load(path: &Path) -> Result<Arc<Self>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: PlanFile = serde_json::from_str(&text)
            .map_err(|e| Error::parse(path.display().to_string(), 0, format!("plan file: {e}")))?;
        if file.format != PLAN_FORMAT {
            return Err(Error::parse(
                path.display().to_string(),
                0,
                format!("unknown plan format {:?}", file.format),
            ));
        }
        validate_size(file.size)?;
        for (i, e) in file.entries.iter().enumerate() {
            if e.j != i || e.k == 0 || !(e.lambda > 0.0) || !(e.c > 0.0) {
                return Err(Error::parse(
                    path.display().to_string(),
                    0,
                    format!("malformed entry {i}"),
                ));
            }
        }
        Self::assemble(
            file.size,
            file.truncation,
            file.bandlimit,
            file.entries,
            false,
        )
        .map(Arc::new)
    }

    /// Load `dir/plan-L<size>-<rule>.json` if present, otherwise build and
    /// store it there.
    pub fn cached(size: usize, truncation: Truncation, dir: &Path) -> Result<Arc<Self>> {
        let tag = match truncation {
            Truncation::PixelCount => "pixels".to_string(),
            Truncation::Bandlimit { factor } => format!("band{:016x}", factor.to_bits()),
        };
        let path = dir.join(format!("plan-L{size}-{tag}.json"));
        if path.exists() {
            if let Ok(plan) = Self::load(&path) {
                if plan.truncation == truncation {
                    return Ok(plan);
                }
            }
        }
        let plan = build_plan(size, truncation)?;
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        plan.save(&path)?;
        Ok(plan)
    }
}

fn plan_hash(size: usize, truncation: &Truncation, entries: &[HarmonicEntry]) -> String {
    let mut h = Sha256::new();
    h.update((size as u64).to_le_bytes());
    h.update(serde_json::to_vec(truncation).unwrap_or_default());
    for e in entries {
        h.update(e.n.to_le_bytes());
        h.update((e.k as u64).to_le_bytes());
        h.update(e.lambda.to_bits().to_le_bytes());
    }
    hex::encode(&h.finalize()[..8])
}
