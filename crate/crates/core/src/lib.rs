//! Radial evolution and cone-energy diagnostics for equivariant wave maps
//! and the Adkins–Nappi model.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod exact;
pub mod grid;
pub mod model;
pub mod multiplier;
pub mod record;
pub mod region;
pub mod soliton;

pub use data::InitialData;
pub use diagnostics::{
    ball_energy, bulk_i_integral, concentration_series, cone_energy, cone_weighted_energy, flux,
    gh_bounds_report, local_energy, multiplier_balance, multiplier_identity_residual,
    sup_norm_series, topological_charge, weighted_local_energy, BoundsReport, DiagnosticSeries,
    MultiplierBalance,
};
pub use error::{Error, Result};
pub use evolve::{
    evolve, evolve_forced, rhs, step_rk4, Boundary, EvolveOptions, EvolveReport, FieldState,
    Forcing, Singularity, Thresholds, Trigger,
};
pub use grid::{make_grid, GridSpec};
pub use model::{energy_density, flux_density, nonlinearity, ModelKind};
pub use multiplier::{Coefficients, MultiplierTriple};
pub use record::{PointSample, Snapshot, SpacetimeRecord};
pub use region::{region_contains, region_segment_at_time, ConeRegion, RegionKind, Segment};
pub use soliton::{find_soliton, shoot, soliton_energy, ShootOutcome, SolitonProfile};
