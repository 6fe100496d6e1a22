use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::raw::sidecar_path;
use super::{read_file, write_file};
use crate::bispectrum::{
    full_bispectrum_chunks, Bispectrum, FullBispectrum, FullIndex, InversionDiagnostics,
    SelectiveBispectrum, SelectiveLabel,
};
use crate::error::{Error, Result};
use crate::harmonics::{build_plan, HarmonicPlan, Truncation};
use crate::transform::DHCoefficients;

/// Who wrote a file and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan_hash: Option<String>,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(flags: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            plan_hash: None,
            flags,
            seed: None,
        }
    }

    pub fn with_plan(mut self, plan: &HarmonicPlan) -> Self {
        self.plan_hash = Some(plan.hash().to_string());
        self
    }
}

/// JSON sidecar of a coefficient CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffEnvelope {
    pub format: String,
    #[serde(rename = "L")]
    pub size: usize,
    pub truncation: Truncation,
    pub bandlimit: f64,
    pub plan_hash: String,
    pub count: usize,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversion: Option<InversionDiagnostics>,
}

/// JSON sidecar of a bispectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BispectrumEnvelope {
    pub format: String,
    pub kind: String,
    #[serde(rename = "L")]
    pub size: usize,
    pub truncation: Truncation,
    pub bandlimit: f64,
    pub plan_hash: String,
    pub count: u64,
    pub provenance: Provenance,
}

const COEFF_FORMAT: &str = "diskbsp-coeffs/1";
const BSP_FORMAT: &str = "diskbsp-bispectrum/1";

#[derive(Debug, Serialize, Deserialize)]
struct CoeffRow {
    j: usize,
    n: i32,
    k: usize,
    lambda: f64,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SelectiveRow {
    row: u8,
    j1_or_n: i64,
    k3: usize,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct FullRow {
    j1: usize,
    j2: usize,
    k3: usize,
    re: f64,
    im: f64,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, &serde_json::to_vec_pretty(value)?)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = read_file(path)?;
    serde_json::from_slice(&bytes)
        .map_err(|e| Error::parse(path.display().to_string(), e.column() as u64, e.to_string()))
}

fn plan_for(
    size: usize,
    truncation: Truncation,
    hash: &str,
    cache: Option<&Path>,
    name: &Path,
) -> Result<Arc<HarmonicPlan>> {
    let plan = match cache {
        Some(dir) => HarmonicPlan::cached(size, truncation, dir)?,
        None => build_plan(size, truncation)?,
    };
    if plan.hash() != hash {
        return Err(Error::parse(
            name.display().to_string(),
            0,
            format!(
                "plan hash {hash} does not match the rebuilt plan {}",
                plan.hash()
            ),
        ));
    }
    Ok(plan)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let offset = e.position().map(|p| p.byte()).unwrap_or(0);
    Error::parse(path.display().to_string(), offset, e.to_string())
}

/// CSV `j,n,k,lambda,re,im` at `path`, envelope at `<path>.json`.
pub fn write_coeffs(
    path: &Path,
    coeffs: &DHCoefficients,
    provenance: &Provenance,
    inversion: Option<&InversionDiagnostics>,
) -> Result<()> {
    let plan = coeffs.plan();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for (e, v) in plan.entries().iter().zip(coeffs.values()) {
        w.serialize(CoeffRow {
            j: e.j,
            n: e.n,
            k: e.k,
            lambda: e.lambda,
            re: v.re,
            im: v.im,
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    write_json(
        &sidecar_path(path),
        &CoeffEnvelope {
            format: COEFF_FORMAT.into(),
            size: plan.size(),
            truncation: plan.truncation(),
            bandlimit: plan.bandlimit(),
            plan_hash: plan.hash().into(),
            count: plan.len(),
            provenance: provenance.clone().with_plan(plan),
            inversion: inversion.cloned(),
        },
    )
}

/// Read a coefficient CSV, rebuilding (or loading from `cache`) its plan.
pub fn read_coeffs(path: &Path, cache: Option<&Path>) -> Result<DHCoefficients> {
    let env: CoeffEnvelope = read_json(&sidecar_path(path))?;
    if env.format != COEFF_FORMAT {
        return Err(Error::parse(
            path.display().to_string(),
            0,
            format!("unknown format {}", env.format),
        ));
    }
    let plan = plan_for(env.size, env.truncation, &env.plan_hash, cache, path)?;
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut values = Vec::with_capacity(plan.len());
    for (i, row) in r.deserialize::<CoeffRow>().enumerate() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let e = plan.entries().get(i).ok_or_else(|| {
            Error::parse(path.display().to_string(), 0, "more rows than harmonics")
        })?;
        if (row.j, row.n, row.k) != (e.j, e.n, e.k) {
            return Err(Error::parse(
                path.display().to_string(),
                0,
                format!(
                    "row {i} is (j={}, n={}, k={}), plan expects (j={}, n={}, k={})",
                    row.j, row.n, row.k, e.j, e.n, e.k
                ),
            ));
        }
        values.push(Complex64::new(row.re, row.im));
    }
    DHCoefficients::new(plan, values)
        .map_err(|e| Error::parse(path.display().to_string(), 0, e.to_string()))
}

fn bsp_envelope(
    kind: &str,
    plan: &HarmonicPlan,
    count: u64,
    provenance: &Provenance,
) -> BispectrumEnvelope {
    BispectrumEnvelope {
        format: BSP_FORMAT.into(),
        kind: kind.into(),
        size: plan.size(),
        truncation: plan.truncation(),
        bandlimit: plan.bandlimit(),
        plan_hash: plan.hash().into(),
        count,
        provenance: provenance.clone().with_plan(plan),
    }
}

/// CSV `row,j1_or_n,k3,re,im`. Row-0 entries carry `j1_or_n = 0`.
pub fn write_selective(
    path: &Path,
    b: &SelectiveBispectrum,
    provenance: &Provenance,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for (label, v) in b.labels().into_iter().zip(b.values()) {
        let (j1_or_n, k3) = match label {
            SelectiveLabel::Zero { k } => (0, k),
            SelectiveLabel::Two { n, k } => (i64::from(n), k),
        };
        w.serialize(SelectiveRow {
            row: label.row(),
            j1_or_n,
            k3,
            re: v.re,
            im: v.im,
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    write_json(
        &sidecar_path(path),
        &bsp_envelope("selective", b.plan(), b.len() as u64, provenance),
    )
}

/// CSV `j1,j2,k3,re,im`, streamed so the full set never sits in memory.
pub fn write_full(path: &Path, coeffs: &DHCoefficients, provenance: &Provenance) -> Result<u64> {
    let plan = coeffs.plan().clone();
    let index = FullIndex::new(plan.clone());
    let mut labels = index.labels();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut failure = None;
    let mut written = 0u64;
    full_bispectrum_chunks(coeffs, 1 << 14, |chunk| {
        if failure.is_some() {
            return;
        }
        for v in chunk {
            let l = labels.next().expect("labels and values line up");
            if let Err(e) = w.serialize(FullRow {
                j1: l.j1,
                j2: l.j2,
                k3: l.k3,
                re: v.re,
                im: v.im,
            }) {
                failure = Some(e);
                return;
            }
            written += 1;
        }
    });
    if let Some(e) = failure {
        return Err(csv_error(path, e));
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    write_json(
        &sidecar_path(path),
        &bsp_envelope("full", &plan, written, provenance),
    )?;
    Ok(written)
}

fn read_bsp_envelope(path: &Path, kind: &str) -> Result<BispectrumEnvelope> {
    let env: BispectrumEnvelope = read_json(&sidecar_path(path))?;
    if env.format != BSP_FORMAT || env.kind != kind {
        return Err(Error::parse(
            path.display().to_string(),
            0,
            format!(
                "expected a {kind} bispectrum, found {} {}",
                env.format, env.kind
            ),
        ));
    }
    Ok(env)
}

pub fn read_selective(path: &Path, cache: Option<&Path>) -> Result<SelectiveBispectrum> {
    let env = read_bsp_envelope(path, "selective")?;
    let plan = plan_for(env.size, env.truncation, &env.plan_hash, cache, path)?;
    let labels = crate::bispectrum::selective_labels(&plan);
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut values = Vec::with_capacity(labels.len());
    for (i, row) in r.deserialize::<SelectiveRow>().enumerate() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let expected = labels.get(i).copied();
        let got = match row.row {
            0 => SelectiveLabel::Zero { k: row.k3 },
            2 => SelectiveLabel::Two {
                n: row.j1_or_n as i32,
                k: row.k3,
            },
            other => {
                return Err(Error::parse(
                    path.display().to_string(),
                    0,
                    format!("row tag {other} is not 0 or 2"),
                ));
            }
        };
        if expected != Some(got) {
            return Err(Error::parse(
                path.display().to_string(),
                0,
                format!("entry {i} has unexpected label {got:?}"),
            ));
        }
        values.push(Complex64::new(row.re, row.im));
    }
    SelectiveBispectrum::from_values(plan, values)
        .map_err(|e| Error::parse(path.display().to_string(), 0, e.to_string()))
}

pub fn read_full(path: &Path, cache: Option<&Path>) -> Result<FullBispectrum> {
    let env = read_bsp_envelope(path, "full")?;
    let plan = plan_for(env.size, env.truncation, &env.plan_hash, cache, path)?;
    let index = FullIndex::new(plan.clone());
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut values = Vec::new();
    let mut labels = index.labels();
    for row in r.deserialize::<FullRow>() {
        let row = row.map_err(|e| csv_error(path, e))?;
        match labels.next() {
            Some(l) if (l.j1, l.j2, l.k3) == (row.j1, row.j2, row.k3) => {}
            _ => {
                return Err(Error::parse(
                    path.display().to_string(),
                    0,
                    format!("unexpected label ({}, {}, {})", row.j1, row.j2, row.k3),
                ));
            }
        }
        values.push(Complex64::new(row.re, row.im));
    }
    FullBispectrum::from_values(plan, values)
        .map_err(|e| Error::parse(path.display().to_string(), 0, e.to_string()))
}
