#![allow(dead_code)]

use skwv::data::InitialData;
use skwv::{evolve, make_grid, EvolveOptions, GridSpec, ModelKind, SpacetimeRecord};

/// Smooth degree-zero shell used by the identity and conservation runs.
pub const PULSE: InitialData = InitialData::Pulse { amplitude: 0.1, center: 4.0, width: 1.0 };

/// Identity runs: vertex at the final time, cones well inside the grid.
pub const VERTEX: f64 = 4.0;
pub const T0: f64 = 0.5;
pub const T1: f64 = 1.5;
pub const IDENTITY_R_MAX: f64 = 16.0;

pub fn record(data: &InitialData, model: ModelKind, r_max: f64, n: usize, t_end: f64) -> SpacetimeRecord {
    let g = make_grid(r_max, n).unwrap();
    let s = data.build(g, model).unwrap();
    evolve(&s, &EvolveOptions::new(t_end)).unwrap().1
}

pub fn identity_record(n: usize) -> SpacetimeRecord {
    record(&PULSE, ModelKind::AdkinsNappi, IDENTITY_R_MAX, n, VERTEX)
}

/// `(∫ e² r² dr)^½` over `r ≤ r_lim`.
pub fn weighted_l2(grid: &GridSpec, e: &[f64], r_lim: f64) -> f64 {
    (0..grid.n_cells())
        .take_while(|&j| grid.r(j) <= r_lim)
        .map(|j| e[j] * e[j] * grid.r(j).powi(2) * grid.dr())
        .sum::<f64>()
        .sqrt()
}

pub fn max_abs(grid: &GridSpec, e: &[f64], r_lim: f64) -> f64 {
    (0..grid.n_cells())
        .take_while(|&j| grid.r(j) <= r_lim)
        .map(|j| e[j].abs())
        .fold(0.0, f64::max)
}

/// Successive ratios `e[k] / e[k+1]`.
pub fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

/// Width beyond which the dispersive tail of a discrete front has decayed
/// below round-off, after time `t`.
pub fn front_margin(dr: f64, t: f64) -> f64 {
    6.0 * (dr * dr * t).cbrt()
}
