//! Initial-data families.
//!
//! Degree-one families (winding from `0` at the centre to `π` at infinity)
//! are blended to exactly `π` over `[r_max - L, r_max - L/2]` with a quintic
//! smoothstep, `L = 0.2 r_max`, so the pinned outer node carries the full
//! winding and the charge is exactly one.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::evolve::FieldState;
use crate::exact::shatah_toward_vertex;
use crate::grid::GridSpec;
use crate::model::ModelKind;
use crate::soliton::{default_soliton, SolitonProfile};

/// Fraction of `r_max` used by the outer blend of degree-one data.
pub const TAPER_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Zero,
    /// `u = A r [e^{-(r-r₀)²/σ²} + e^{-(r+r₀)²/σ²}]`, `u_t = 0`. Degree zero.
    Pulse { amplitude: f64, center: f64, width: f64 },
    /// `u = 2 arctan(r/λ)`, `u_t = 0`. Degree one.
    Stereographic { lambda: f64 },
    /// Static Adkins–Nappi soliton. Degree one.
    Soliton,
    /// Soliton plus `A e^{-(r-r₀)²/σ²} tanh((r/σ)³)`. Degree one.
    SolitonPerturbed { amplitude: f64, center: f64, width: f64 },
    /// `u = 2 arctan(τ₀/r)` moving toward its singularity at time `τ₀`.
    /// Wave map only; no outer blend.
    Shatah { tau0: f64 },
}

impl InitialData {
    pub fn name(&self) -> &'static str {
        match self {
            InitialData::Zero => "zero",
            InitialData::Pulse { .. } => "pulse",
            InitialData::Stereographic { .. } => "stereographic",
            InitialData::Soliton => "soliton",
            InitialData::SolitonPerturbed { .. } => "soliton-perturbed",
            InitialData::Shatah { .. } => "shatah",
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            InitialData::Zero | InitialData::Pulse { .. } | InitialData::Shatah { .. } => 0,
            _ => 1,
        }
    }

    /// State at `t = 0` on `grid` for `model`.
    pub fn build(&self, grid: GridSpec, model: ModelKind) -> Result<FieldState> {
        let zero = |_: f64| 0.0;
        match *self {
            InitialData::Zero => Ok(FieldState::zeros(grid, model)),
            InitialData::Pulse { amplitude, center, width } => {
                check_width(width)?;
                FieldState::from_fn(grid, model, 0.0, |r| pulse(amplitude, center, width, r), zero)
            }
            InitialData::Stereographic { lambda } => {
                if !(lambda > 0.0) {
                    return invalid(format!("stereographic scale must be positive, got {lambda}"));
                }
                let f = |r: f64| 2.0 * (r / lambda).atan();
                FieldState::from_fn(grid, model, 0.0, |r| taper(grid, f, r), zero)
            }
            InitialData::Soliton => {
                let p = soliton_for(grid)?;
                FieldState::from_fn(grid, model, 0.0, |r| taper(grid, |r| p.sample(r), r), zero)
            }
            InitialData::SolitonPerturbed { amplitude, center, width } => {
                check_width(width)?;
                let p = soliton_for(grid)?;
                let f = |r: f64| {
                    p.sample(r)
                        + amplitude * (-((r - center) / width).powi(2)).exp() * (r / width).powi(3).tanh()
                };
                FieldState::from_fn(grid, model, 0.0, |r| taper(grid, f, r), zero)
            }
            InitialData::Shatah { tau0 } => {
                if model != ModelKind::WaveMap {
                    return invalid("the self-similar data solve the wave-map equation only");
                }
                shatah_toward_vertex(tau0, grid)
            }
        }
    }
}

fn check_width(width: f64) -> Result<()> {
    if width > 0.0 {
        Ok(())
    } else {
        invalid(format!("width must be positive, got {width}"))
    }
}

/// Odd-in-`r` Gaussian shell.
pub fn pulse(amplitude: f64, center: f64, width: f64, r: f64) -> f64 {
    let g = |x: f64| (-(x / width).powi(2)).exp();
    amplitude * r * (g(r - center) + g(r + center))
}

/// Soliton on the grid's radius with half its step.
fn soliton_for(grid: GridSpec) -> Result<SolitonProfile> {
    default_soliton(grid.r_max(), 0.5 * grid.dr())
}

/// `f` blended to `π` near `r_max`.
pub fn taper(grid: GridSpec, f: impl Fn(f64) -> f64, r: f64) -> f64 {
    let len = TAPER_FRACTION * grid.r_max();
    let (a, b) = (grid.r_max() - len, grid.r_max() - 0.5 * len);
    if r <= a {
        return f(r);
    }
    if r >= b {
        return PI;
    }
    let x = (r - a) / (b - a);
    let s = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    f(r) + s * (PI - f(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::topological_charge;
    use crate::grid::make_grid;

    #[test]
    fn degree_one_data_have_unit_charge() {
        let g = make_grid(20.0, 512).unwrap();
        for d in [
            InitialData::Stereographic { lambda: 1.0 },
            InitialData::Soliton,
            InitialData::SolitonPerturbed { amplitude: 0.3, center: 2.0, width: 0.5 },
        ] {
            let s = d.build(g, ModelKind::AdkinsNappi).unwrap();
            assert_eq!(s.u[511], PI);
            assert!((topological_charge(&s) - 1.0).abs() < 1e-15, "{}", d.name());
        }
    }

    #[test]
    fn pulse_is_odd_and_degree_zero() {
        assert_eq!(pulse(1.0, 2.0, 0.5, 0.0), 0.0);
        assert_eq!(pulse(1.0, 2.0, 0.5, -1.3), -pulse(1.0, 2.0, 0.5, 1.3));
        let g = make_grid(20.0, 256).unwrap();
        let s = InitialData::Pulse { amplitude: 0.5, center: 4.0, width: 1.0 }
            .build(g, ModelKind::AdkinsNappi)
            .unwrap();
        assert!(topological_charge(&s).abs() < 1e-15);
    }

    #[test]
    fn taper_is_identity_inside_and_pi_outside() {
        let g = make_grid(10.0, 100).unwrap();
        assert_eq!(taper(g, |r| r, 7.9), 7.9);
        assert_eq!(taper(g, |r| r, 9.0), PI);
        let mid = taper(g, |_| 0.0, 8.5);
        assert!((mid - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn bad_parameters() {
        let g = make_grid(10.0, 100).unwrap();
        assert!(InitialData::Stereographic { lambda: 0.0 }.build(g, ModelKind::WaveMap).is_err());
        assert!(InitialData::Pulse { amplitude: 1.0, center: 1.0, width: -1.0 }
            .build(g, ModelKind::WaveMap)
            .is_err());
        assert!(InitialData::Shatah { tau0: 1.0 }.build(g, ModelKind::AdkinsNappi).is_err());
    }
}
