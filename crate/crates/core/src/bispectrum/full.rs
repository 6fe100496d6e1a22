use std::sync::Arc;

use num_complex::Complex64;

use super::{triple, Bispectrum};
use crate::error::{Error, Result};
use crate::harmonics::HarmonicPlan;
use crate::transform::DHCoefficients;

/// Largest full bispectrum [`full_bispectrum`] will hold in memory. Bigger
/// ones go through [`full_bispectrum_chunks`].
pub const MAX_MATERIALISED: u64 = 60_000_000;

/// One full-bispectrum index `(j1, j2, k3)` with `j1 <= j2`; the third
/// harmonic is `(n_{j1} + n_{j2}, k3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FullLabel {
    pub j1: usize,
    pub j2: usize,
    pub k3: usize,
}

/// Number of admissible `(j1 <= j2, k3)` triples.
pub fn full_count(plan: &HarmonicPlan) -> u64 {
    let nm = plan.max_order();
    let k = |n: i32| -> u64 {
        if n.abs() > nm {
            0
        } else {
            plan.root_count(n.abs()) as u64
        }
    };
    // ordered pairs plus the diagonal, halved
    let mut ordered = 0u64;
    for n1 in -nm..=nm {
        for n2 in -nm..=nm {
            ordered += k(n1) * k(n2) * k(n1 + n2);
        }
    }
    let diagonal: u64 = plan.entries().iter().map(|e| k(2 * e.n)).sum();
    (ordered + diagonal) / 2
}

/// The full index in storage order: `j1` ascending, then `j2 >= j1`, then `k3`.
#[derive(Debug, Clone)]
pub struct FullIndex {
    plan: Arc<HarmonicPlan>,
    row_offsets: Vec<u64>,
}

impl FullIndex {
    pub fn new(plan: Arc<HarmonicPlan>) -> Self {
        let entries = plan.entries();
        let mut row_offsets = Vec::with_capacity(entries.len() + 1);
        let mut acc = 0u64;
        for e1 in entries {
            row_offsets.push(acc);
            for e2 in &entries[e1.j..] {
                acc += third_count(&plan, e1.n + e2.n) as u64;
            }
        }
        row_offsets.push(acc);
        Self { plan, row_offsets }
    }

    pub fn len(&self) -> u64 {
        *self.row_offsets.last().unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Storage position of `(j1, j2, k3)`, or `None` when not admissible.
    pub fn position(&self, label: FullLabel) -> Option<u64> {
        let FullLabel { j1, j2, k3 } = label;
        let entries = self.plan.entries();
        if j1 > j2 || j2 >= entries.len() || k3 == 0 {
            return None;
        }
        let n1 = entries[j1].n;
        if k3 > third_count(&self.plan, n1 + entries[j2].n) {
            return None;
        }
        let skip: u64 = entries[j1..j2]
            .iter()
            .map(|e| third_count(&self.plan, n1 + e.n) as u64)
            .sum();
        Some(self.row_offsets[j1] + skip + k3 as u64 - 1)
    }

    /// Every label in storage order.
    pub fn labels(&self) -> impl Iterator<Item = FullLabel> + '_ {
        let entries = self.plan.entries();
        entries.iter().flat_map(move |e1| {
            entries[e1.j..].iter().flat_map(move |e2| {
                (1..=third_count(&self.plan, e1.n + e2.n)).map(move |k3| FullLabel {
                    j1: e1.j,
                    j2: e2.j,
                    k3,
                })
            })
        })
    }
}

fn third_count(plan: &HarmonicPlan, n3: i32) -> usize {
    if n3.abs() > plan.max_order() {
        0
    } else {
        plan.root_count(n3.abs())
    }
}

/// Coefficients grouped by order, `k` ascending.
fn order_rows(coeffs: &DHCoefficients) -> Vec<Vec<Complex64>> {
    let plan = coeffs.plan();
    let nm = plan.max_order();
    (-nm..=nm)
        .map(|n| {
            plan.order_indices(n)
                .iter()
                .map(|&j| coeffs.values()[j])
                .collect()
        })
        .collect()
}

/// Stream the full bispectrum in storage order, `chunk_len` values at a time.
/// Only one chunk is alive at once, so any plan size fits in memory.
pub fn full_bispectrum_chunks(
    coeffs: &DHCoefficients,
    chunk_len: usize,
    mut sink: impl FnMut(&[Complex64]),
) {
    let plan = coeffs.plan();
    let nm = plan.max_order();
    let rows = order_rows(coeffs);
    let entries = plan.entries();
    let a = coeffs.values();
    let chunk_len = chunk_len.max(1);
    let mut buf = Vec::with_capacity(chunk_len);
    for e1 in entries {
        let a1 = a[e1.j];
        for e2 in &entries[e1.j..] {
            let n3 = e1.n + e2.n;
            if n3.abs() > nm {
                continue;
            }
            let a2 = a[e2.j];
            for &a3 in &rows[(n3 + nm) as usize] {
                buf.push(triple(a1, a2, a3));
                if buf.len() == chunk_len {
                    sink(&buf);
                    buf.clear();
                }
            }
        }
    }
    if !buf.is_empty() {
        sink(&buf);
    }
}

/// Materialised full bispectrum.
#[derive(Debug, Clone)]
pub struct FullBispectrum {
    index: FullIndex,
    values: Vec<Complex64>,
}

/// Every `b_{j1,j2,k3} = a_{j1} a_{j2} a*_{n_{j1}+n_{j2},k3}` with `j1 <= j2`.
pub fn full_bispectrum(coeffs: &DHCoefficients) -> Result<FullBispectrum> {
    let index = FullIndex::new(coeffs.plan().clone());
    let len = index.len();
    if len > MAX_MATERIALISED {
        return Err(Error::invalid(format!(
            "full bispectrum has {len} entries, above the in-memory limit {MAX_MATERIALISED}; stream it instead"
        )));
    }
    let mut values = Vec::with_capacity(len as usize);
    full_bispectrum_chunks(coeffs, 1 << 16, |c| values.extend_from_slice(c));
    Ok(FullBispectrum { index, values })
}

impl FullBispectrum {
    pub fn from_values(plan: Arc<HarmonicPlan>, values: Vec<Complex64>) -> Result<Self> {
        let index = FullIndex::new(plan);
        if values.len() as u64 != index.len() {
            return Err(Error::invalid(format!(
                "full index has {} entries, got {} values",
                index.len(),
                values.len()
            )));
        }
        Ok(Self { index, values })
    }

    pub fn index(&self) -> &FullIndex {
        &self.index
    }

    pub fn plan_arc(&self) -> &Arc<HarmonicPlan> {
        &self.index.plan
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, label: FullLabel) -> Option<Complex64> {
        self.index.position(label).map(|p| self.values[p as usize])
    }
}

impl Bispectrum for FullBispectrum {
    fn plan(&self) -> &HarmonicPlan {
        &self.index.plan
    }

    fn values(&self) -> &[Complex64] {
        &self.values
    }
}
