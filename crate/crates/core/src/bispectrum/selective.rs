use std::sync::Arc;

use num_complex::Complex64;

use super::full::FullLabel;
use super::{triple, Bispectrum};
use crate::error::{Error, Result};
use crate::harmonics::HarmonicPlan;
use crate::transform::DHCoefficients;

/// Label of one selective entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectiveLabel {
    /// `b_{0,0,k} = a_{0,1}² a*_{0,k}`.
    Zero { k: usize },
    /// `b_{2,n,k} = a_{1,1} a_{n,1} a*_{n+1,k}`.
    Two { n: i32, k: usize },
}

impl SelectiveLabel {
    /// Row tag used in files: `0` or `2`.
    pub fn row(&self) -> u8 {
        match self {
            SelectiveLabel::Zero { .. } => 0,
            SelectiveLabel::Two { .. } => 2,
        }
    }

    /// The full-bispectrum index holding the same value.
    pub fn full_label(&self, plan: &HarmonicPlan) -> FullLabel {
        let j01 = plan.index_of(0, 1).expect("plan holds (0,1)");
        match *self {
            SelectiveLabel::Zero { k } => FullLabel {
                j1: j01,
                j2: j01,
                k3: k,
            },
            SelectiveLabel::Two { n, k } => {
                let a = plan.index_of(1, 1).expect("plan holds (1,1)");
                let b = plan.index_of(n, 1).expect("order in plan");
                FullLabel {
                    j1: a.min(b),
                    j2: a.max(b),
                    k3: k,
                }
            }
        }
    }
}

/// Labels in storage order: row 0 by `k`, then row 2 by `n` then `k`.
pub fn selective_labels(plan: &HarmonicPlan) -> Vec<SelectiveLabel> {
    let mut out = Vec::with_capacity(plan.selective_len());
    for k in 1..=plan.root_count(0) {
        out.push(SelectiveLabel::Zero { k });
    }
    for n in 0..plan.max_order() {
        for k in 1..=plan.root_count(n + 1) {
            out.push(SelectiveLabel::Two { n, k });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SelectiveBispectrum {
    plan: Arc<HarmonicPlan>,
    values: Vec<Complex64>,
}

/// The selective entries, computed the same way as their full counterparts.
pub fn selective_bispectrum(coeffs: &DHCoefficients) -> SelectiveBispectrum {
    let plan = coeffs.plan().clone();
    let a = coeffs.values();
    let at = |n: i32, k: usize| a[plan.index_of(n, k).expect("order in plan")];
    let mut values = Vec::with_capacity(plan.selective_len());
    let a01 = at(0, 1);
    for k in 1..=plan.root_count(0) {
        values.push(triple(a01, a01, at(0, k)));
    }
    let j11 = plan.index_of(1, 1).expect("plan holds (1,1)");
    for n in 0..plan.max_order() {
        let jn1 = plan.index_of(n, 1).expect("order in plan");
        let (lo, hi) = (j11.min(jn1), j11.max(jn1));
        for k in 1..=plan.root_count(n + 1) {
            values.push(triple(a[lo], a[hi], at(n + 1, k)));
        }
    }
    SelectiveBispectrum { plan, values }
}

impl SelectiveBispectrum {
    pub fn from_values(plan: Arc<HarmonicPlan>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != plan.selective_len() {
            return Err(Error::invalid(format!(
                "selective index has {} entries, got {} values",
                plan.selective_len(),
                values.len()
            )));
        }
        Ok(Self { plan, values })
    }

    pub fn zeros(plan: Arc<HarmonicPlan>) -> Self {
        let values = vec![Complex64::default(); plan.selective_len()];
        Self { plan, values }
    }

    pub fn plan_arc(&self) -> &Arc<HarmonicPlan> {
        &self.plan
    }

    pub fn labels(&self) -> Vec<SelectiveLabel> {
        selective_labels(&self.plan)
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at `label`, if the label belongs to this plan.
    pub fn get(&self, label: SelectiveLabel) -> Option<Complex64> {
        let k0 = self.plan.root_count(0);
        let pos = match label {
            SelectiveLabel::Zero { k } => (k >= 1 && k <= k0).then(|| k - 1)?,
            SelectiveLabel::Two { n, k } => {
                if n < 0 || n >= self.plan.max_order() || k == 0 || k > self.plan.root_count(n + 1)
                {
                    return None;
                }
                let before: usize = (1..=n).map(|m| self.plan.root_count(m)).sum();
                k0 + before + k - 1
            }
        };
        Some(self.values[pos])
    }
}

impl Bispectrum for SelectiveBispectrum {
    fn plan(&self) -> &HarmonicPlan {
        &self.plan
    }

    fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bispectrum::full_bispectrum;
    use crate::harmonics::{build_plan, Truncation};

    fn sample(plan: Arc<HarmonicPlan>) -> DHCoefficients {
        let vals = (0..plan.len())
            .map(|j| Complex64::new((j as f64 * 0.37).sin() + 0.2, (j as f64 * 0.91).cos()))
            .collect();
        DHCoefficients::new(plan, vals).unwrap()
    }

    #[test]
    fn labels_count_matches_plan() {
        let plan = build_plan(16, Truncation::PixelCount).unwrap();
        assert_eq!(selective_labels(&plan).len(), 105);
    }

    #[test]
    fn first_entry_is_cube() {
        let plan = build_plan(8, Truncation::PixelCount).unwrap();
        let mut a = DHCoefficients::zeros(plan);
        a.set(0, 1, Complex64::new(-0.7, 0.0)).unwrap();
        let b = selective_bispectrum(&a);
        assert_eq!(b.values()[0], Complex64::new(-0.7f64.powi(3), 0.0));
    }

    #[test]
    fn entries_equal_full_entries_bitwise() {
        let plan = build_plan(8, Truncation::PixelCount).unwrap();
        let a = sample(plan.clone());
        let s = selective_bispectrum(&a);
        let f = full_bispectrum(&a).unwrap();
        for (label, v) in s.labels().into_iter().zip(s.values()) {
            let w = f.get(label.full_label(&plan)).unwrap();
            assert_eq!(v.re.to_bits(), w.re.to_bits());
            assert_eq!(v.im.to_bits(), w.im.to_bits());
        }
    }

    #[test]
    fn get_agrees_with_storage_order() {
        let plan = build_plan(16, Truncation::PixelCount).unwrap();
        let s = selective_bispectrum(&sample(plan));
        for (i, label) in s.labels().into_iter().enumerate() {
            assert_eq!(s.get(label), Some(s.values()[i]));
        }
        assert_eq!(s.get(SelectiveLabel::Zero { k: 0 }), None);
    }
}
