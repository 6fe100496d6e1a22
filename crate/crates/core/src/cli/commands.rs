use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use super::{Cli, Command, GlobalArgs};
use crate::bench::{run_bench, speedups, BenchOptions};
use crate::bispectrum::{
    full_count, invert_selective_with_diagnostics, selective_bispectrum, selective_from_full,
};
use crate::error::{Error, Result};
use crate::harmonics::{build_plan, HarmonicPlan, Truncation};
use crate::io::{self, Provenance};
use crate::mra::{mra_sweep_with_plan, MRAConfig, SweepGrid};
use crate::testimages::digit_six;
use crate::transform::{dht_inverse, forward, ImageGrid};

fn truncation(g: &GlobalArgs) -> Result<Truncation> {
    match g.bandlimit_factor {
        None => Ok(Truncation::PixelCount),
        Some(f) if f.is_finite() && f > 0.0 => Ok(Truncation::Bandlimit { factor: f }),
        Some(f) => Err(Error::invalid(format!(
            "bandlimit factor {f} must be positive"
        ))),
    }
}

fn plan_for(size: usize, g: &GlobalArgs) -> Result<Arc<HarmonicPlan>> {
    let t = truncation(g)?;
    match &g.plan_cache {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            HarmonicPlan::cached(size, t, dir)
        }
        None => build_plan(size, t),
    }
}

fn extension(path: &Path) -> String {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default()
}

fn is_idx(path: &Path) -> bool {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_default();
    name.ends_with("-ubyte") || matches!(extension(path).as_str(), "idx" | "idx3")
}

/// Read a PGM, an IDX stack entry or a raw `f32` image, by file name.
pub fn read_image(path: &Path, index: usize) -> Result<ImageGrid> {
    if extension(path) == "pgm" {
        Ok(io::read_pgm(path)?.image)
    } else if is_idx(path) {
        io::read_idx(path, index)
    } else {
        io::read_raw(path)
    }
}

pub fn write_image(path: &Path, image: &ImageGrid) -> Result<()> {
    if extension(path) == "pgm" {
        io::write_pgm(path, image, io::PgmEncoding::Binary)
    } else {
        io::write_raw(path, image)
    }
}

fn cache(g: &GlobalArgs) -> Option<&Path> {
    g.plan_cache.as_deref()
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_vec_pretty(v)?).map_err(|e| Error::io(path, e))
}

pub fn run(cli: &Cli, flags: Vec<String>) -> Result<()> {
    let g = &cli.global;
    let mut prov = Provenance::new(flags);
    prov.seed = Some(g.seed);
    match &cli.command {
        Command::Plan { size, out } => {
            let plan = plan_for(*size, g)?;
            println!("L = {}", plan.size());
            println!("rule = {}", serde_json::to_string(&plan.truncation())?);
            println!("bandlimit = {}", plan.bandlimit());
            println!("m = {}", plan.len());
            println!("N_m = {}", plan.max_order());
            let ks: Vec<String> = (0..=plan.max_order())
                .map(|n| format!("{n}:{}", plan.root_count(n)))
                .collect();
            println!("K_n = {}", ks.join(" "));
            println!("selective = {}", plan.selective_len());
            println!("full = {}", full_count(&plan));
            println!("hash = {}", plan.hash());
            if let Some(out) = out {
                plan.save(out)?;
            }
        }
        Command::Dht {
            input,
            index,
            out,
            backend,
        } => {
            let image = read_image(input, *index)?;
            let plan = plan_for(image.size(), g)?;
            let a = forward(&image, &plan, *backend)?;
            io::write_coeffs(out, &a, &prov, None)?;
            println!(
                "wrote {} coefficients (L = {}, backend {backend})",
                a.len(),
                plan.size()
            );
        }
        Command::Idht { input, out } => {
            let a = io::read_coeffs(input, cache(g))?;
            let image = dht_inverse(&a, a.plan())?;
            write_image(out, &image)?;
            println!("wrote {0}x{0} image", image.size());
        }
        Command::Bsp {
            input,
            out,
            selective: _,
            full,
        } => {
            let a = io::read_coeffs(input, cache(g))?;
            if *full {
                let n = io::write_full(out, &a, &prov)?;
                println!("wrote {n} full bispectrum entries");
            } else {
                let b = selective_bispectrum(&a);
                io::write_selective(out, &b, &prov)?;
                println!("wrote {} selective bispectrum entries", b.len());
            }
        }
        Command::Invert { input, out, full } => {
            let b = if *full {
                selective_from_full(&io::read_full(input, cache(g))?)?
            } else {
                io::read_selective(input, cache(g))?
            };
            let (a, diag) = invert_selective_with_diagnostics(&b)?;
            io::write_coeffs(out, &a, &prov, Some(&diag))?;
            if !diag.residuals_within_tolerance {
                eprintln!(
                    "warning: dropped imaginary residuals {:.3e} (cube root) and {:.3e} (square root)",
                    diag.cube_root_residual, diag.sqrt_residual
                );
            }
            println!("recovered {} coefficients, gauge {}", a.len(), diag.gauge);
        }
        Command::Bench {
            sizes,
            repeats,
            out,
            bispectra_only,
        } => {
            if *repeats < 5 {
                return Err(Error::invalid("timings are medians of at least 5 repeats"));
            }
            let opts = BenchOptions {
                sizes: sizes.clone(),
                repeats: *repeats,
                truncation: truncation(g)?,
                include_transforms: !bispectra_only,
                ..Default::default()
            };
            let records = run_bench(&opts)?;
            println!(
                "{:>5} {:>14} {:>8} {:>14} {:>12}",
                "L", "operation", "backend", "wall_ms", "count"
            );
            for r in &records {
                println!(
                    "{:>5} {:>14} {:>8} {:>14.6} {:>12}",
                    r.size,
                    r.operation.to_string(),
                    r.backend,
                    r.wall_ms,
                    r.count
                );
            }
            let ratios = speedups(&records);
            for (l, s) in &ratios {
                println!("speedup L={l}: {s:.1}x");
            }
            if let Some(out) = out {
                let mut w = csv::Writer::from_path(out).map_err(|e| Error::io(out, e.into()))?;
                for r in &records {
                    w.serialize(r)?;
                }
                w.flush().map_err(|e| Error::io(out, e))?;
                let speedups: Vec<_> = ratios
                    .iter()
                    .map(|(l, s)| serde_json::json!({"L": l, "speedup": s}))
                    .collect();
                write_json(
                    &io::sidecar_path(out),
                    &serde_json::json!({ "provenance": prov, "speedups": speedups }),
                )?;
            }
        }
        Command::Mra {
            image,
            index,
            nx,
            sigma2,
            seeds,
            out,
            backend,
            correction,
            mc_trials,
        } => {
            let clean = match image {
                Some(p) => read_image(p, *index)?,
                None => digit_six(),
            }
            .masked();
            let plan = plan_for(clean.size(), g)?;
            prov = prov.with_plan(&plan);
            let mut base = MRAConfig::new(clean.size(), 1, 0.0, g.seed);
            base.backend = *backend;
            base.correction = *correction;
            base.mc_trials = *mc_trials;
            let grid = SweepGrid {
                nx: nx.clone(),
                sigma2: sigma2.clone(),
                seeds: (g.seed..g.seed + seeds).collect(),
            };
            let report = mra_sweep_with_plan(&clean, &plan, &base, &grid)?;
            std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
            let est_dir = out.join("estimates");
            std::fs::create_dir_all(&est_dir).map_err(|e| Error::io(&est_dir, e))?;
            let csv_path = out.join("report.csv");
            let mut w =
                csv::Writer::from_path(&csv_path).map_err(|e| Error::io(&csv_path, e.into()))?;
            w.write_record(["nx", "sigma2", "seed", "rel_error", "wall_ms"])?;
            for (rec, est) in report.records.iter().zip(&report.estimates) {
                w.write_record([
                    rec.nx.to_string(),
                    rec.sigma2.to_string(),
                    rec.seed.to_string(),
                    rec.rel_error.to_string(),
                    format!("{:.3}", rec.wall_ms),
                ])?;
                if let Some(img) = est {
                    let name: PathBuf = est_dir.join(format!(
                        "nx{}_sigma2_{}_seed{}.f32",
                        rec.nx, rec.sigma2, rec.seed
                    ));
                    io::write_raw(&name, img)?;
                }
            }
            w.flush().map_err(|e| Error::io(&csv_path, e))?;
            let summary = report.summary();
            let failures: Vec<_> = report
                .records
                .iter()
                .filter(|r| r.failure.is_some())
                .collect();
            write_json(
                &out.join("summary.json"),
                &serde_json::json!({
                    "provenance": prov,
                    "config": report.config,
                    "grid": report.grid,
                    "metric": "squared relative error against the clean image after registration",
                    "cells": summary,
                    "failures": failures,
                }),
            )?;
            println!(
                "{:>6} {:>8} {:>5} {:>10} {:>10}",
                "nx", "sigma2", "runs", "mean", "std"
            );
            for c in &summary {
                println!(
                    "{:>6} {:>8} {:>5} {:>10.4} {:>10.4}",
                    c.nx, c.sigma2, c.runs, c.mean, c.std
                );
            }
            println!(
                "wrote {} records to {}",
                report.records.len(),
                csv_path.display()
            );
        }
    }
    Ok(())
}
