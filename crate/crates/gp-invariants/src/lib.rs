//! Conservation-law densities and renormalized invariants of the GP flow.

mod density;
mod invariants;

pub use density::{density, explicit_all, DensityId, DensityMode};
pub use invariants::{
    drift, invariants, relative_drift, renormalization_check, InvariantId, InvariantVector,
    RenormalizationReport, SMALL_ENERGY,
};
