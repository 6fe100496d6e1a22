//! Bessel functions, their zeros, and the disk-harmonic plan.

mod bessel;
mod grid;
mod plan;
mod roots;

pub use bessel::{bessel_j, MAX_ORDER};
pub use grid::DiskGrid;
pub use plan::{build_plan, HarmonicEntry, HarmonicPlan, Truncation};
pub use roots::{bessel_root, BesselRootTable, ROOT_RESIDUAL};
