//! Timing harness for the transform and bispectrum stages.

use std::hint::black_box;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bispectrum::{
    full_bispectrum_chunks, full_count, invert_selective, selective_bispectrum,
};
use crate::error::Result;
use crate::harmonics::{build_plan, Truncation};
use crate::testimages::smooth_blobs;
use crate::transform::{forward, Backend, DHCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    FullBsp,
    SelectiveBsp,
    Dht,
    Inversion,
}

impl std::fmt::Display for Operation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Operation::FullBsp => "full-bsp",
            Operation::SelectiveBsp => "selective-bsp",
            Operation::Dht => "dht",
            Operation::Inversion => "inversion",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(rename = "L")]
    pub size: usize,
    pub operation: Operation,
    pub backend: String,
    /// Median over `repeats` timed runs, per call.
    pub wall_ms: f64,
    pub repeats: usize,
    pub count: u64,
}

/// Median per-call time of `f` in milliseconds. One untimed warm-up, then
/// `repeats` samples; fast calls are batched so each sample spans at least
/// `min_sample_ms`.
pub fn median_ms(repeats: usize, min_sample_ms: f64, mut f: impl FnMut()) -> f64 {
    let t = Instant::now();
    f();
    let once = t.elapsed().as_secs_f64() * 1e3;
    let batch = if once >= min_sample_ms {
        1
    } else {
        ((min_sample_ms / once.max(1e-6)).ceil() as usize).clamp(1, 1 << 24)
    };
    let mut samples: Vec<f64> = (0..repeats.max(1))
        .map(|_| {
            let t = Instant::now();
            for _ in 0..batch {
                f();
            }
            t.elapsed().as_secs_f64() * 1e3 / batch as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

/// Streams the whole full bispectrum, folding it so none of it is skipped.
pub fn full_bispectrum_pass(coeffs: &DHCoefficients) -> Complex64 {
    let mut acc = Complex64::default();
    full_bispectrum_chunks(coeffs, 1 << 15, |chunk| {
        acc += black_box(chunk)[chunk.len() - 1];
    });
    acc
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub truncation: Truncation,
    pub include_transforms: bool,
    pub min_sample_ms: f64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            sizes: vec![16, 28, 56, 112],
            repeats: 5,
            truncation: Truncation::PixelCount,
            include_transforms: true,
            min_sample_ms: 2.0,
        }
    }
}

/// Time each stage at each size. Coefficients are computed once up front so
/// the bispectrum timings cover only the bispectrum.
pub fn run_bench(opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &l in &opts.sizes {
        let plan = build_plan(l, opts.truncation)?;
        let image = smooth_blobs(l, 17);
        let coeffs = forward(&image, &plan, Backend::Direct)?;
        let rec = |operation, backend: &str, wall_ms, count| BenchRecord {
            size: l,
            operation,
            backend: backend.into(),
            wall_ms,
            repeats: opts.repeats,
            count,
        };
        let sel = median_ms(opts.repeats, opts.min_sample_ms, || {
            black_box(selective_bispectrum(black_box(&coeffs)));
        });
        out.push(rec(
            Operation::SelectiveBsp,
            "-",
            sel,
            plan.selective_len() as u64,
        ));
        let full = median_ms(opts.repeats, opts.min_sample_ms, || {
            black_box(full_bispectrum_pass(black_box(&coeffs)));
        });
        out.push(rec(Operation::FullBsp, "-", full, full_count(&plan)));
        if opts.include_transforms {
            let b = selective_bispectrum(&coeffs);
            let inv = median_ms(opts.repeats, opts.min_sample_ms, || {
                let _ = black_box(invert_selective(black_box(&b)));
            });
            out.push(rec(Operation::Inversion, "-", inv, plan.len() as u64));
            for backend in [Backend::Direct, Backend::Fast] {
                let t = median_ms(opts.repeats, opts.min_sample_ms, || {
                    let _ = black_box(forward(black_box(&image), &plan, backend));
                });
                out.push(rec(
                    Operation::Dht,
                    &backend.to_string(),
                    t,
                    plan.len() as u64,
                ));
            }
        }
    }
    Ok(out)
}

/// `full / selective` time per size, in input order.
pub fn speedups(records: &[BenchRecord]) -> Vec<(usize, f64)> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.size).collect();
    sizes.dedup();
    sizes
        .into_iter()
        .filter_map(|l| {
            let t = |op| {
                records
                    .iter()
                    .find(|r| r.size == l && r.operation == op)
                    .map(|r| r.wall_ms)
            };
            Some((l, t(Operation::FullBsp)? / t(Operation::SelectiveBsp)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_constant_work_is_positive() {
        let mut x = 0u64;
        let m = median_ms(5, 0.1, || {
            for i in 0..1000 {
                x = black_box(x.wrapping_add(i));
            }
        });
        assert!(m > 0.0);
    }

    #[test]
    fn small_bench_has_all_rows() {
        let opts = BenchOptions {
            sizes: vec![8],
            repeats: 3,
            min_sample_ms: 0.05,
            ..Default::default()
        };
        let recs = run_bench(&opts).unwrap();
        assert_eq!(recs.len(), 5);
        assert_eq!(speedups(&recs).len(), 1);
        assert!(recs.iter().all(|r| r.wall_ms > 0.0));
    }
}
