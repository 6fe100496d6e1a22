use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::HarmonicPlan;

/// Coefficients `a_j` aligned with a plan's harmonic table.
#[derive(Debug, Clone)]
pub struct DHCoefficients {
    plan: Arc<HarmonicPlan>,
    values: Vec<Complex64>,
}

impl DHCoefficients {
    pub fn new(plan: Arc<HarmonicPlan>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != plan.len() {
            return Err(Error::invalid(format!(
                "plan has {} harmonics, got {} coefficients",
                plan.len(),
                values.len()
            )));
        }
        Ok(Self { plan, values })
    }

    pub fn zeros(plan: Arc<HarmonicPlan>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); plan.len()];
        Self { plan, values }
    }

    pub fn plan(&self) -> &Arc<HarmonicPlan> {
        &self.plan
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
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

    /// `a_{n,k}`, zero if `(n, k)` is not in the plan.
    pub fn get(&self, n: i32, k: usize) -> Complex64 {
        self.plan
            .index_of(n, k)
            .map(|j| self.values[j])
            .unwrap_or_default()
    }

    pub fn set(&mut self, n: i32, k: usize, v: Complex64) -> Result<()> {
        let j = self
            .plan
            .index_of(n, k)
            .ok_or_else(|| Error::invalid(format!("(n={n}, k={k}) is not in the plan")))?;
        self.values[j] = v;
        Ok(())
    }

    /// Whether both vectors come from the same harmonic table.
    pub fn same_plan(&self, other: &DHCoefficients) -> bool {
        Arc::ptr_eq(&self.plan, &other.plan) || self.plan.hash() == other.plan.hash()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|a_{-n,k} - (-1)^n conj(a_{n,k})|` over the table.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for e in self.plan.entries() {
            if e.n < 0 {
                continue;
            }
            let a = self.values[e.j];
            let b = self.get(-e.n, e.k);
            let expect = if e.n % 2 == 0 { a.conj() } else { -a.conj() };
            worst = worst.max((b - expect).norm());
        }
        worst
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            plan: self.plan.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}

/// Multiply each `a_{n,k}` by `e^{inφ}`: the coefficients of `f ∘ R_φ`.
pub fn rotate_coeffs(coeffs: &DHCoefficients, phi: f64) -> DHCoefficients {
    let entries = coeffs.plan.entries();
    let values = coeffs
        .values
        .iter()
        .zip(entries)
        .map(|(v, e)| v * Complex64::from_polar(1.0, f64::from(e.n) * phi))
        .collect();
    DHCoefficients {
        plan: coeffs.plan.clone(),
        values,
    }
}

/// Keep `n >= 0`, zero the rest.
pub fn nonneg_half_extract(coeffs: &DHCoefficients) -> DHCoefficients {
    let values = coeffs
        .values
        .iter()
        .zip(coeffs.plan.entries())
        .map(|(&v, e)| if e.n >= 0 { v } else { Complex64::default() })
        .collect();
    DHCoefficients {
        plan: coeffs.plan.clone(),
        values,
    }
}

/// Fill `a_{-n,k} = (-1)^n conj(a_{n,k})` from the `n >= 0` half.
pub fn extend_negative(coeffs: &DHCoefficients) -> DHCoefficients {
    let plan = coeffs.plan.clone();
    let mut values = coeffs.values.clone();
    for e in plan.entries() {
        if e.n <= 0 {
            continue;
        }
        let a = coeffs.values[e.j];
        let mirrored = if e.n % 2 == 0 { a.conj() } else { -a.conj() };
        let j = plan.index_of(-e.n, e.k).expect("plan is symmetric in n");
        values[j] = mirrored;
    }
    DHCoefficients { plan, values }
}
