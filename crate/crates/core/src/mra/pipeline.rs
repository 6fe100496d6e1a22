use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bias::{analytic_bias, monte_carlo_bias, BiasTerm, SignalStats};
use super::synth::synthesize_dataset;
use super::{mix, Correction, MRAConfig};
use crate::bispectrum::{
    invert_selective_with_diagnostics, selective_bispectrum, Bispectrum, InversionDiagnostics,
    SelectiveBispectrum,
};
use crate::error::{Error, Result};
use crate::eval::best_rotation_align_to;
use crate::harmonics::HarmonicPlan;
use crate::transform::{dht_forward, dht_inverse, forward, DHCoefficients, ImageGrid};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub transform_ms: f64,
    pub bias_ms: f64,
    pub invert_ms: f64,
}

impl Timing {
    pub fn total_ms(&self) -> f64 {
        self.transform_ms + self.bias_ms + self.invert_ms
    }
}

#[derive(Debug, Clone)]
pub struct MRAEstimate {
    pub image: ImageGrid,
    pub coeffs: DHCoefficients,
    pub mean_bispectrum: SelectiveBispectrum,
    pub bias: Option<BiasTerm>,
    pub diagnostics: InversionDiagnostics,
    pub timing: Timing,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Average the selective bispectra of `images`, remove the noise bias,
/// invert, and map back to pixels.
///
/// `cfg` supplies the backend, the correction mode and the simulation
/// budget; its `n_x` and `size` are not used.
pub fn mra_estimate(
    images: &[ImageGrid],
    sigma2: f64,
    plan: &Arc<HarmonicPlan>,
    cfg: &MRAConfig,
) -> Result<MRAEstimate> {
    if images.is_empty() {
        return Err(Error::invalid("no images to average"));
    }
    let mut timing = Timing::default();
    let t = Instant::now();
    let mut sum = vec![Complex64::default(); plan.selective_len()];
    let mut a0 = vec![0.0; plan.root_count(0)];
    for img in images {
        let a = forward(img, plan, cfg.backend)?;
        let b = selective_bispectrum(&a);
        sum.iter_mut().zip(b.values()).for_each(|(s, v)| *s += v);
        a0.iter_mut()
            .zip(SignalStats::from_coeffs(&a).a0)
            .for_each(|(s, v)| *s += v);
    }
    let n = images.len() as f64;
    sum.iter_mut().for_each(|v| *v /= n);
    a0.iter_mut().for_each(|v| *v /= n);
    let mean = SelectiveBispectrum::from_values(plan.clone(), sum)?;
    let stats = SignalStats { a0 };
    timing.transform_ms = ms(t);

    let t = Instant::now();
    let bias = match cfg.correction {
        Correction::Off => None,
        Correction::On => Some(analytic_bias(plan, sigma2, &stats)?),
        Correction::MonteCarlo => {
            let first = analytic_bias(plan, sigma2, &stats)?;
            let pilot = invert_selective_with_diagnostics(&subtract(&mean, &first)?)?.0;
            let pilot_image = dht_inverse(&pilot, plan)?;
            Some(monte_carlo_bias(
                plan,
                &pilot_image,
                sigma2,
                cfg.mc_trials,
                mix(cfg.seed ^ 0x6d63),
            )?)
        }
    };
    timing.bias_ms = ms(t);

    let t = Instant::now();
    let corrected = match &bias {
        Some(b) => subtract(&mean, b)?,
        None => mean.clone(),
    };
    let (coeffs, diagnostics) = invert_selective_with_diagnostics(&corrected)?;
    let image = dht_inverse(&coeffs, plan)?;
    timing.invert_ms = ms(t);
    Ok(MRAEstimate {
        image,
        coeffs,
        mean_bispectrum: mean,
        bias,
        diagnostics,
        timing,
    })
}

fn subtract(mean: &SelectiveBispectrum, bias: &BiasTerm) -> Result<SelectiveBispectrum> {
    let values = mean
        .values()
        .iter()
        .zip(bias.values())
        .map(|(m, d)| m - d)
        .collect();
    SelectiveBispectrum::from_values(mean.plan_arc().clone(), values)
}

/// The factorial design of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub nx: Vec<usize>,
    pub sigma2: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl SweepGrid {
    pub fn cells(&self) -> usize {
        self.nx.len() * self.sigma2.len() * self.seeds.len()
    }
}

/// One `(n_X, σ², seed)` run. `rel_error` is the squared relative error
/// against the clean image after registration; it is NaN when the inversion
/// failed, with the reason in `failure`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MRARecord {
    pub nx: usize,
    pub sigma2: f64,
    pub seed: u64,
    pub rel_error: f64,
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub nx: usize,
    pub sigma2: f64,
    pub runs: usize,
    pub failures: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone)]
pub struct MRAReport {
    pub config: MRAConfig,
    pub grid: SweepGrid,
    pub records: Vec<MRARecord>,
    /// Registered estimate per record, `None` where the inversion failed.
    pub estimates: Vec<Option<ImageGrid>>,
}

impl MRAReport {
    /// Mean and sample standard deviation over seeds, per `(n_X, σ²)`.
    pub fn summary(&self) -> Vec<CellSummary> {
        let mut out = Vec::new();
        for &s2 in &self.grid.sigma2 {
            for &nx in &self.grid.nx {
                let cell: Vec<&MRARecord> = self
                    .records
                    .iter()
                    .filter(|r| r.nx == nx && r.sigma2 == s2)
                    .collect();
                let ok: Vec<f64> = cell
                    .iter()
                    .map(|r| r.rel_error)
                    .filter(|v| v.is_finite())
                    .collect();
                let mean = if ok.is_empty() {
                    f64::NAN
                } else {
                    ok.iter().sum::<f64>() / ok.len() as f64
                };
                let std = if ok.len() < 2 {
                    0.0
                } else {
                    (ok.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (ok.len() - 1) as f64)
                        .sqrt()
                };
                out.push(CellSummary {
                    nx,
                    sigma2: s2,
                    runs: cell.len(),
                    failures: cell.len() - ok.len(),
                    mean,
                    std,
                });
            }
        }
        out
    }

    pub fn mean_error(&self, nx: usize, sigma2: f64) -> Option<f64> {
        self.summary()
            .into_iter()
            .find(|c| c.nx == nx && c.sigma2 == sigma2)
            .map(|c| c.mean)
    }
}

/// Run every `(σ², seed, n_X)` cell on `clean`. Each cell draws its copies
/// from streams keyed by `(seed, σ², copy index)`, so the order cells run in
/// does not matter.
pub fn mra_sweep(clean: &ImageGrid, base: &MRAConfig, grid: &SweepGrid) -> Result<MRAReport> {
    let plan = crate::harmonics::build_plan(clean.size(), Default::default())?;
    mra_sweep_with_plan(clean, &plan, base, grid)
}

pub fn mra_sweep_with_plan(
    clean: &ImageGrid,
    plan: &Arc<HarmonicPlan>,
    base: &MRAConfig,
    grid: &SweepGrid,
) -> Result<MRAReport> {
    if grid.cells() == 0 {
        return Err(Error::invalid("sweep grid is empty"));
    }
    let reference = dht_forward(clean, plan)?;
    let target = clean.clone().masked();
    let mut records = Vec::with_capacity(grid.cells());
    let mut estimates = Vec::with_capacity(grid.cells());
    for &sigma2 in &grid.sigma2 {
        for &seed in &grid.seeds {
            for &nx in &grid.nx {
                let cfg = MRAConfig {
                    n_x: nx,
                    sigma2,
                    seed,
                    size: clean.size(),
                    ..base.clone()
                };
                let t = Instant::now();
                let data = synthesize_dataset(clean, &cfg)?;
                let outcome = mra_estimate(&data, sigma2, plan, &cfg)
                    .and_then(|est| best_rotation_align_to(&est.coeffs, &reference, &target));
                let wall_ms = ms(t);
                let (rel_error, failure, image) = match outcome {
                    Ok(al) => (al.rel_error_squared, None, Some(al.aligned)),
                    Err(e @ Error::Degenerate { .. }) => (f64::NAN, Some(e.to_string()), None),
                    Err(e) => return Err(e),
                };
                records.push(MRARecord {
                    nx,
                    sigma2,
                    seed,
                    rel_error,
                    wall_ms,
                    failure,
                });
                estimates.push(image);
            }
        }
    }
    Ok(MRAReport {
        config: base.clone(),
        grid: grid.clone(),
        records,
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{best_rotation_align, image_relative_error, ErrorMode};
    use crate::harmonics::{build_plan, Truncation};
    use crate::testimages::smooth_blobs;

    #[test]
    fn single_clean_copy_reproduces_bandlimited_image() {
        let plan = build_plan(16, Truncation::PixelCount).unwrap();
        let clean = smooth_blobs(16, 5);
        let mut cfg = MRAConfig::new(16, 1, 0.0, 0);
        cfg.correction = Correction::Off;
        let est = mra_estimate(std::slice::from_ref(&clean), 0.0, &plan, &cfg).unwrap();
        let reference = dht_forward(&clean, &plan).unwrap();
        let al = best_rotation_align(&est.coeffs, &reference).unwrap();
        assert!(al.rel_error_linear < 1e-8, "{}", al.rel_error_linear);
        let _ = image_relative_error(&est.image, &clean, ErrorMode::Linear).unwrap();
    }

    #[test]
    fn sweep_has_one_record_per_cell() {
        let clean = smooth_blobs(8, 2);
        let grid = SweepGrid {
            nx: vec![2, 3],
            sigma2: vec![0.0, 0.01],
            seeds: vec![1, 2, 3],
        };
        let report = mra_sweep(&clean, &MRAConfig::new(8, 1, 0.0, 0), &grid).unwrap();
        assert_eq!(report.records.len(), 12);
        assert_eq!(report.summary().len(), 4);
    }
}
