//! Multi-reference alignment in selective-bispectrum space.

mod bias;
mod pipeline;
mod synth;

pub use bias::{analytic_bias, monte_carlo_bias, BiasProvenance, BiasTerm, SignalStats};
pub use pipeline::{
    mra_estimate, mra_sweep, mra_sweep_with_plan, CellSummary, MRAEstimate, MRARecord, MRAReport,
    SweepGrid, Timing,
};
pub use synth::{synthesize_dataset, synthesize_with_angles};

use serde::{Deserialize, Serialize};

use crate::transform::Backend;

/// How the averaged bispectrum is corrected for noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correction {
    #[default]
    On,
    Off,
    /// Bias estimated by simulation around a pilot estimate.
    MonteCarlo,
}

impl std::str::FromStr for Correction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "on" => Ok(Correction::On),
            "off" => Ok(Correction::Off),
            "monte-carlo" => Ok(Correction::MonteCarlo),
            other => Err(format!(
                "unknown correction {other:?} (expected on|off|monte-carlo)"
            )),
        }
    }
}

impl std::fmt::Display for Correction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Correction::On => "on",
            Correction::Off => "off",
            Correction::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MRAConfig {
    pub n_x: usize,
    pub sigma2: f64,
    pub seed: u64,
    pub size: usize,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub correction: Correction,
    /// Rotate every copy by this angle instead of a random one.
    #[serde(default)]
    pub fixed_angle: Option<f64>,
    /// Simulation trials for [`Correction::MonteCarlo`].
    #[serde(default = "default_trials")]
    pub mc_trials: usize,
}

fn default_trials() -> usize {
    2000
}

impl MRAConfig {
    pub fn new(size: usize, n_x: usize, sigma2: f64, seed: u64) -> Self {
        Self {
            n_x,
            sigma2,
            seed,
            size,
            backend: Backend::Direct,
            correction: Correction::On,
            fixed_angle: None,
            mc_trials: default_trials(),
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.n_x == 0 {
            return Err(crate::Error::invalid("n_X must be at least 1"));
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return Err(crate::Error::invalid("σ² must be finite and non-negative"));
        }
        Ok(())
    }
}

/// SplitMix64 finaliser, used to derive independent stream keys.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
