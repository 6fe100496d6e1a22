use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::synth::copy_rng;
use crate::bispectrum::{selective_bispectrum, Bispectrum, SelectiveBispectrum};
use crate::error::{Error, Result};
use crate::harmonics::HarmonicPlan;
use crate::transform::{dht_forward, rotate_coeffs, DHCoefficients, ImageGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasProvenance {
    Analytic,
    MonteCarlo,
}

/// Expected shift `δ` of the mean selective bispectrum under pixel noise.
#[derive(Debug, Clone)]
pub struct BiasTerm {
    pub delta: SelectiveBispectrum,
    pub provenance: BiasProvenance,
    pub sigma2: f64,
    /// Per-entry standard errors `(re, im)` of a simulated estimate.
    pub std_errors: Option<Vec<(f64, f64)>>,
    pub trials: usize,
}

impl BiasTerm {
    pub fn values(&self) -> &[Complex64] {
        self.delta.values()
    }

    /// `sqrt(se_re² + se_im²)` per entry, when simulated.
    pub fn combined_errors(&self) -> Option<Vec<f64>> {
        self.std_errors
            .as_ref()
            .map(|v| v.iter().map(|(a, b)| a.hypot(*b)).collect())
    }
}

/// Order-zero coefficient estimates `a_{0,k}` the bias depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalStats {
    pub a0: Vec<f64>,
}

impl SignalStats {
    pub fn from_coeffs(coeffs: &DHCoefficients) -> Self {
        let plan = coeffs.plan();
        Self {
            a0: (1..=plan.root_count(0))
                .map(|k| coeffs.get(0, k).re)
                .collect(),
        }
    }

    /// Mean over a dataset. Order-zero coefficients do not change under
    /// rotation and the noise has zero mean, so this is unbiased.
    pub fn mean<'a>(coeffs: impl IntoIterator<Item = &'a DHCoefficients>) -> Option<Self> {
        let mut sum: Option<Vec<f64>> = None;
        let mut count = 0usize;
        for c in coeffs {
            let s = Self::from_coeffs(c);
            match &mut sum {
                None => sum = Some(s.a0),
                Some(acc) => acc.iter_mut().zip(&s.a0).for_each(|(a, b)| *a += b),
            }
            count += 1;
        }
        sum.map(|mut a0| {
            a0.iter_mut().for_each(|v| *v /= count as f64);
            Self { a0 }
        })
    }
}

/// Second-order noise bias of the selective bispectrum.
///
/// With `η_j = Σ_p ε_p ψ_j*(x_p) Δx²`, `E[η_i η_j*] = σ²Δx² Ĝ_ij` where
/// `Ĝ_ij = Δx² Σ_p ψ_i* ψ_j`. Averaged over uniform rotations only two
/// patterns survive:
/// `δ_{0,0,k} = σ²Δx² (2 a_{0,1} Ĝ_{(0,1),(0,k)} + a_{0,k} Ĝ'_{(0,1),(0,1)})`
/// and `δ_{2,0,1} = σ²Δx² a_{0,1} Ĝ_{(1,1),(1,1)}`, with `Ĝ'` the
/// pseudo-covariance. Every other entry is zero.
pub fn analytic_bias(
    plan: &Arc<HarmonicPlan>,
    sigma2: f64,
    stats: &SignalStats,
) -> Result<BiasTerm> {
    if !(sigma2 >= 0.0) || !sigma2.is_finite() {
        return Err(Error::invalid("σ² must be finite and non-negative"));
    }
    let k0 = plan.root_count(0);
    if stats.a0.len() != k0 {
        return Err(Error::invalid(format!(
            "expected {k0} order-zero estimates, got {}",
            stats.a0.len()
        )));
    }
    let s = sigma2 * plan.grid().cell_area();
    let j01 = plan.index_of(0, 1).expect("plan holds (0,1)");
    let j11 = plan.index_of(1, 1).expect("plan holds (1,1)");
    let a01 = stats.a0[0];
    let pseudo = plan.pseudo_gram(j01, j01).conj();
    let mut delta = SelectiveBispectrum::zeros(plan.clone());
    let values = delta.values_mut();
    for k in 1..=k0 {
        let j0k = plan.index_of(0, k).expect("order in plan");
        let g = plan.gram(j0k, j01);
        values[k - 1] = (g * (2.0 * a01) + pseudo * stats.a0[k - 1]) * s;
    }
    values[k0] = plan.gram(j11, j11) * (a01 * s);
    Ok(BiasTerm {
        delta,
        provenance: BiasProvenance::Analytic,
        sigma2,
        std_errors: None,
        trials: 0,
    })
}

/// Simulated bias: mean of `selective(rotate(a, φ) + DHT(ε)) - selective(a)`
/// over `trials` draws, rotating in coefficient space so interpolation adds
/// nothing.
pub fn monte_carlo_bias(
    plan: &Arc<HarmonicPlan>,
    clean: &ImageGrid,
    sigma2: f64,
    trials: usize,
    seed: u64,
) -> Result<BiasTerm> {
    if trials < 2 {
        return Err(Error::invalid("need at least two trials"));
    }
    if !(sigma2 >= 0.0) || !sigma2.is_finite() {
        return Err(Error::invalid("σ² must be finite and non-negative"));
    }
    let a = dht_forward(clean, plan)?;
    let base = selective_bispectrum(&a);
    let n = base.len();
    let noise = Normal::new(0.0, sigma2.sqrt()).expect("σ checked above");
    let mut mean = vec![Complex64::default(); n];
    let mut m2 = vec![(0.0, 0.0); n];
    let mut eps = ImageGrid::zeros(plan.size());
    let disk: Vec<usize> = plan.grid().pixels().to_vec();
    for t in 0..trials {
        let mut rng = copy_rng(seed, sigma2, t as u64);
        let phi = rng.random_range(0.0..TAU);
        for &p in &disk {
            eps.pixels_mut()[p] = noise.sample(&mut rng);
        }
        let eta = dht_forward(&eps, plan)?;
        let mut noisy = rotate_coeffs(&a, phi);
        noisy
            .values_mut()
            .iter_mut()
            .zip(eta.values())
            .for_each(|(x, e)| *x += e);
        let b = selective_bispectrum(&noisy);
        let count = (t + 1) as f64;
        for i in 0..n {
            let d = b.values()[i] - base.values()[i];
            let before = mean[i];
            mean[i] += (d - before) / count;
            m2[i].0 += (d.re - before.re) * (d.re - mean[i].re);
            m2[i].1 += (d.im - before.im) * (d.im - mean[i].im);
        }
    }
    let denom = (trials * (trials - 1)) as f64;
    let std_errors = m2
        .iter()
        .map(|(r, i)| ((r / denom).sqrt(), (i / denom).sqrt()))
        .collect();
    Ok(BiasTerm {
        delta: SelectiveBispectrum::from_values(plan.clone(), mean)?,
        provenance: BiasProvenance::MonteCarlo,
        sigma2,
        std_errors: Some(std_errors),
        trials,
    })
}
