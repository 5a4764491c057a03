//! Fixtures shared by the benchmarks.

use skwv::data::InitialData;
use skwv::{evolve, make_grid, EvolveOptions, FieldState, ModelKind, SpacetimeRecord};

pub const PULSE: InitialData = InitialData::Pulse { amplitude: 0.1, center: 4.0, width: 1.0 };
pub const R_MAX: f64 = 16.0;
pub const VERTEX: f64 = 4.0;

/// Pulse data on `n` cells.
pub fn pulse_state(n: usize, model: ModelKind) -> FieldState {
    let grid = make_grid(R_MAX, n).expect("valid grid");
    PULSE.build(grid, model).expect("valid data")
}

/// Full record of the pulse up to the vertex.
pub fn pulse_record(n: usize) -> SpacetimeRecord {
    let s = pulse_state(n, ModelKind::AdkinsNappi);
    evolve(&s, &EvolveOptions::new(VERTEX)).expect("smooth run").1
}
