//! Pointwise physics of the equivariant models.
//!
//! The evolved equation is `u_tt - u_rr - (2/r) u_r + N(u, r) = 0` with
//!
//! ```text
//! N(u, r) = sin 2u / r² + (u - sin u cos u)(1 - cos 2u) / r⁴      (Adkins–Nappi)
//! N(u, r) = sin 2u / r²                                           (wave map)
//! ```
//!
//! and the conserved energy density is `½(u_t² + u_r²) + P(u, r)` with
//! potential `P = sin²u / r² + (u - sin u cos u)² / (2 r⁴)`; `∂P/∂u = N`.
//! `1 - cos 2u` is always evaluated as `2 sin²u`.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Pure equivariant wave map (no quartic term).
    WaveMap,
    /// Wave map with the ω-meson repulsion term.
    AdkinsNappi,
    /// Free radial wave equation, `N ≡ 0`. Used as a control in tests.
    Linear,
}

impl ModelKind {
    /// Integer tag used by the snapshot file header.
    pub fn id(self) -> u32 {
        match self {
            ModelKind::WaveMap => 0,
            ModelKind::AdkinsNappi => 1,
            ModelKind::Linear => 2,
        }
    }

    pub fn from_id(id: u32) -> Option<Self> {
        match id {
            0 => Some(ModelKind::WaveMap),
            1 => Some(ModelKind::AdkinsNappi),
            2 => Some(ModelKind::Linear),
            _ => None,
        }
    }

    /// Equivariant models have odd-reflection regularity at the centre.
    pub fn is_equivariant(self) -> bool {
        !matches!(self, ModelKind::Linear)
    }

    /// `N(u, r)`; `r > 0` is assumed.
    #[inline]
    pub fn force(self, u: f64, r: f64) -> f64 {
        match self {
            ModelKind::Linear => 0.0,
            ModelKind::WaveMap => (2.0 * u).sin() / (r * r),
            ModelKind::AdkinsNappi => {
                let s = u.sin();
                let r2 = r * r;
                (2.0 * u).sin() / r2 + u_minus_sincos(u) * 2.0 * s * s / (r2 * r2)
            }
        }
    }

    /// Potential part `P(u, r)` of the energy density; `r > 0` is assumed.
    #[inline]
    pub fn potential(self, u: f64, r: f64) -> f64 {
        match self {
            ModelKind::Linear => 0.0,
            ModelKind::WaveMap => {
                let s = u.sin();
                s * s / (r * r)
            }
            ModelKind::AdkinsNappi => {
                let s = u.sin();
                let q = u_minus_sincos(u);
                let r2 = r * r;
                s * s / r2 + q * q / (2.0 * r2 * r2)
            }
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::WaveMap => "wavemap",
            ModelKind::AdkinsNappi => "adkins-nappi",
            ModelKind::Linear => "linear",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wavemap" | "wave-map" => Ok(ModelKind::WaveMap),
            "adkins-nappi" | "adkinsnappi" => Ok(ModelKind::AdkinsNappi),
            "linear" => Ok(ModelKind::Linear),
            other => Err(Error::InvalidArgument(format!("unknown model '{other}'"))),
        }
    }
}

/// Below this magnitude `u - sin u cos u` is summed from its Taylor series.
pub const SERIES_THRESHOLD: f64 = 0.05;

// (-1)^(k+1) 2^(2k) / (2k+1)!, k = 1..5
const SERIES: [f64; 5] = [
    2.0 / 3.0,
    -2.0 / 15.0,
    4.0 / 315.0,
    -2.0 / 2835.0,
    4.0 / 155925.0,
];

/// `u - sin u cos u` without cancellation near `u = 0`.
#[inline]
pub fn u_minus_sincos(u: f64) -> f64 {
    if u.abs() < SERIES_THRESHOLD {
        let v = u * u;
        let mut acc = SERIES[4];
        for c in SERIES[..4].iter().rev() {
            acc = acc * v + c;
        }
        acc * v * u
    } else {
        u - u.sin() * u.cos()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        domain(format!("radius must be positive, got {r}"))
    }
}

pub fn nonlinearity(model: ModelKind, u: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(model.force(u, r))
}

/// Energy density `½(u_t² + u_r²) + P(u, r)` (no `r²` volume factor).
pub fn energy_density(model: ModelKind, u: f64, u_t: f64, u_r: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(0.5 * (u_t * u_t + u_r * u_r) + model.potential(u, r))
}

/// Integrand of the flux through an outgoing cone, `½u₊² + P(u, r)`.
pub fn flux_density(u_plus: f64, u: f64, r: f64, model: ModelKind) -> Result<f64> {
    check_radius(r)?;
    Ok(0.5 * u_plus * u_plus + model.potential(u, r))
}

/// `u (u - sin u cos u)(1 - cos 2u)`, non-negative for every real `u`.
pub fn positivity_term(u: f64) -> f64 {
    let s = u.sin();
    u * u_minus_sincos(u) * 2.0 * s * s
}
