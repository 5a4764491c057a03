//! Multipliers `a u_t + b u_r + c u` and the terms of their divergence identity.
//!
//! Multiplying the equation by `a u_t + b u_r + c u` gives
//! `∂_t P - r⁻² ∂_r(r² Q) = I`, where, with `u_± = u_t ± u_r` and the
//! potential `V = sin²u/r² + (u - sin u cos u)²/(2r⁴)`,
//!
//! ```text
//! I = (a_t/2 - ∂_r(b r²)/(2r²) + c) u_t² + (b_t - a_r) u_t u_r
//!   + ((a_t - b_r)/2 + b/r - c) u_r² + (a_t + b_r) sin²u/r²
//!   + (a_t + r² ∂_r(b/r²)) (u - sin u cos u)²/(2r⁴) - (□c/2) u² + c u □u
//! ```
//!
//! with `□ = ∂_t² - Δ`. On solutions `□u = -N(u, r)`, which is how `I` is
//! evaluated here. All times in this module are cone times `τ`; the
//! derivatives `u_t`, `c_t`, ... are taken with respect to `τ`.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::model::{u_minus_sincos, ModelKind};

/// The four shipped multipliers `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierTriple {
    /// `(1, 0, 0)`: plain energy identity.
    Energy,
    /// `(1, r/τ, 1/τ)`.
    Scaling,
    /// `(1, 1, 1/r)`.
    NullFull,
    /// `(1, 1/2, 1/(2r))`.
    NullHalf,
}

pub const ALL_PRESETS: [MultiplierTriple; 4] = [
    MultiplierTriple::Energy,
    MultiplierTriple::Scaling,
    MultiplierTriple::NullFull,
    MultiplierTriple::NullHalf,
];

/// Values and first partials of `(a, b, c)` at a point, plus `□c`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_t: f64,
    pub a_r: f64,
    pub b_t: f64,
    pub b_r: f64,
    pub c_t: f64,
    pub c_r: f64,
    pub box_c: f64,
}

impl MultiplierTriple {
    /// Whether the coefficients blow up at `τ = 0`.
    pub fn needs_positive_tau(self) -> bool {
        matches!(self, MultiplierTriple::Scaling)
    }

    pub fn label(self) -> &'static str {
        match self {
            MultiplierTriple::Energy => "(1,0,0)",
            MultiplierTriple::Scaling => "(1,r/t,1/t)",
            MultiplierTriple::NullFull => "(1,1,1/r)",
            MultiplierTriple::NullHalf => "(1,1/2,1/(2r))",
        }
    }

    /// Closed-form coefficients; `r > 0` (and `τ > 0` for `Scaling`) assumed.
    #[inline]
    pub fn eval(self, tau: f64, r: f64) -> Coefficients {
        match self {
            MultiplierTriple::Energy => Coefficients {
                a: 1.0,
                ..Default::default()
            },
            MultiplierTriple::Scaling => {
                let it = 1.0 / tau;
                Coefficients {
                    a: 1.0,
                    b: r * it,
                    c: it,
                    b_t: -r * it * it,
                    b_r: it,
                    c_t: -it * it,
                    box_c: 2.0 * it * it * it,
                    ..Default::default()
                }
            }
            MultiplierTriple::NullFull | MultiplierTriple::NullHalf => {
                let k = if self == MultiplierTriple::NullFull { 1.0 } else { 0.5 };
                Coefficients {
                    a: 1.0,
                    b: k,
                    c: k / r,
                    c_r: -k / (r * r),
                    // c = k/r is harmonic away from the origin
                    box_c: 0.0,
                    ..Default::default()
                }
            }
        }
    }

    pub fn coefficients(self, tau: f64, r: f64) -> Result<Coefficients> {
        check_point(self, tau, r)?;
        Ok(self.eval(tau, r))
    }
}

impl fmt::Display for MultiplierTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MultiplierTriple::Energy => "energy",
            MultiplierTriple::Scaling => "scaling",
            MultiplierTriple::NullFull => "null-full",
            MultiplierTriple::NullHalf => "null-half",
        })
    }
}

impl FromStr for MultiplierTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_PRESETS
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown multiplier '{s}'")))
    }
}

fn check_point(m: MultiplierTriple, tau: f64, r: f64) -> Result<()> {
    if !(r > 0.0) {
        return domain(format!("radius must be positive, got {r}"));
    }
    if m.needs_positive_tau() && !(tau > 0.0) {
        return domain(format!("multiplier {} needs τ > 0, got {tau}", m.label()));
    }
    Ok(())
}

/// Bulk term `I` on shell, without domain checks.
#[inline]
pub fn bulk_unchecked(
    k: &Coefficients,
    model: ModelKind,
    r: f64,
    u: f64,
    u_t: f64,
    u_r: f64,
) -> f64 {
    let b_over_r = k.b / r;
    let c_tt = k.a_t / 2.0 - (k.b_r / 2.0 + b_over_r) + k.c;
    let c_tr = k.b_t - k.a_r;
    let c_rr = (k.a_t - k.b_r) / 2.0 + b_over_r - k.c;
    let mut i = c_tt * u_t * u_t + c_tr * u_t * u_r + c_rr * u_r * u_r;
    match model {
        ModelKind::Linear => {}
        ModelKind::WaveMap | ModelKind::AdkinsNappi => {
            let s = u.sin();
            let r2 = r * r;
            i += (k.a_t + k.b_r) * s * s / r2;
            if model == ModelKind::AdkinsNappi {
                let q = u_minus_sincos(u);
                i += (k.a_t + k.b_r - 2.0 * b_over_r) * q * q / (2.0 * r2 * r2);
            }
        }
    }
    i - 0.5 * k.box_c * u * u - k.c * u * model.force(u, r)
}

/// Bulk term `I` of the multiplier identity evaluated on solutions.
///
/// `u_t` is the cone-time derivative of `u` at `(τ, r)`.
pub fn multiplier_bulk_i(
    m: MultiplierTriple,
    model: ModelKind,
    tau: f64,
    r: f64,
    u: f64,
    u_t: f64,
    u_r: f64,
) -> Result<f64> {
    check_point(m, tau, r)?;
    Ok(bulk_unchecked(&m.eval(tau, r), model, r, u, u_t, u_r))
}

#[inline]
pub(crate) fn g_unchecked(k: &Coefficients, model: ModelKind, u_plus: f64, u: f64, r: f64) -> f64 {
    0.5 * (k.a + k.b) * u_plus * u_plus + (k.a - k.b) * model.potential(u, r)
}

#[inline]
pub(crate) fn h_unchecked(k: &Coefficients, model: ModelKind, u_minus: f64, u: f64, r: f64) -> f64 {
    0.5 * (k.a - k.b) * u_minus * u_minus + (k.a + k.b) * model.potential(u, r)
}

/// Outgoing-cone boundary density `G = (a+b)/2 u₊² + (a-b) V`.
pub fn boundary_g(
    m: MultiplierTriple,
    tau: f64,
    u_plus: f64,
    u: f64,
    r: f64,
    model: ModelKind,
) -> Result<f64> {
    check_point(m, tau, r)?;
    Ok(g_unchecked(&m.eval(tau, r), model, u_plus, u, r))
}

/// Backward-cone boundary density `H = (a-b)/2 u₋² + (a+b) V`.
pub fn boundary_h(
    m: MultiplierTriple,
    tau: f64,
    u_minus: f64,
    u: f64,
    r: f64,
    model: ModelKind,
) -> Result<f64> {
    check_point(m, tau, r)?;
    Ok(h_unchecked(&m.eval(tau, r), model, u_minus, u, r))
}

#[inline]
pub(crate) fn weights_unchecked(k: &Coefficients, r: f64) -> (f64, f64) {
    (k.c_r + k.c_t + k.c / r, k.c_r - k.c_t + k.c / r)
}

/// `(c_r + c_t + c/r, c_r - c_t + c/r)`, the `u²` weights on the outgoing
/// and backward cones respectively.
pub fn c_boundary_weights(m: MultiplierTriple, tau: f64, r: f64) -> Result<(f64, f64)> {
    check_point(m, tau, r)?;
    Ok(weights_unchecked(&m.eval(tau, r), r))
}
