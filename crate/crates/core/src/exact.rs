//! Closed-form reference solutions.
//!
//! Every [`ExactSolution`] is written in simulation time `t`. The
//! self-similar solution `u = 2 arctan(τ/r)` solves the wave-map equation
//! only; the quartic Adkins–Nappi term breaks it, so it must not be used as
//! a reference for that model.

use crate::error::{domain, Result};
use crate::evolve::{FieldState, Forcing};
use crate::grid::GridSpec;
use crate::model::ModelKind;

/// `u = 2 arctan(τ/r)`.
pub fn shatah_u(tau: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("self-similar solution needs r > 0, got {r}"));
    }
    if !(tau >= 0.0) {
        return domain(format!("self-similar solution needs τ ≥ 0, got {tau}"));
    }
    Ok(2.0 * (tau / r).atan())
}

/// `∂_τ u = 2r/(τ² + r²)`.
pub fn shatah_u_tau(tau: f64, r: f64) -> f64 {
    2.0 * r / (tau * tau + r * r)
}

/// `∂_τ² u = -4rτ/(τ² + r²)²`.
pub fn shatah_u_tautau(tau: f64, r: f64) -> f64 {
    let d = tau * tau + r * r;
    -4.0 * r * tau / (d * d)
}

/// The two components `(2τr, r² - τ²)/(τ² + r²)` of the map into the sphere,
/// restricted to a ray. They equal `(sin u, cos u)`.
pub fn shatah_components(tau: f64, r: f64) -> (f64, f64) {
    let d = tau * tau + r * r;
    (2.0 * tau * r / d, (r * r - tau * tau) / d)
}

/// Wave-map state at cone time `tau` with `v = u_τ`; its `t` field is `tau`.
pub fn shatah_state(tau: f64, grid: GridSpec) -> Result<FieldState> {
    if !(tau > 0.0) {
        return domain(format!("self-similar state needs τ > 0, got {tau}"));
    }
    FieldState::from_fn(
        grid,
        ModelKind::WaveMap,
        tau,
        |r| 2.0 * (tau / r).atan(),
        |r| shatah_u_tau(tau, r),
    )
}

/// Data at simulation time 0 that reaches the self-similar singularity at
/// simulation time `tau0` (`v = -u_τ`).
pub fn shatah_toward_vertex(tau0: f64, grid: GridSpec) -> Result<FieldState> {
    let mut s = shatah_state(tau0, grid)?.time_reflected();
    s.t = 0.0;
    Ok(s)
}

/// Reference solutions, evaluated with simulation-time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactSolution {
    /// `u = 2 arctan((t_v - t)/r)`; singular at `(t_v, 0)`. Wave map only.
    ShatahSelfSimilar { vertex: f64 },
    /// `u ≡ 0`.
    Vacuum,
    /// Free radial wave `r u = H(r - t) - H(-r - t)` with Gaussian
    /// `H(x) = A exp(-(x - x₀)²/w²)`. Linear model only.
    LinearRadialPulse { amplitude: f64, center: f64, width: f64 },
    /// `u = sin t · r exp(-r²)`; an exact solution once the forcing from
    /// [`manufactured_forcing`] is added.
    Manufactured,
}

/// Value and derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub u: f64,
    pub u_t: f64,
    pub u_r: f64,
    pub u_tt: f64,
    pub u_rr: f64,
}

impl ExactSolution {
    /// Value and derivatives at `(t, r)`, `r > 0`.
    pub fn jet(&self, t: f64, r: f64) -> Jet {
        match *self {
            ExactSolution::Vacuum => Jet::default(),
            ExactSolution::ShatahSelfSimilar { vertex } => {
                let tau = vertex - t;
                let d = tau * tau + r * r;
                Jet {
                    u: 2.0 * (tau / r).atan(),
                    u_t: -shatah_u_tau(tau, r),
                    u_r: -2.0 * tau / d,
                    u_tt: shatah_u_tautau(tau, r),
                    u_rr: 4.0 * tau * r / (d * d),
                }
            }
            ExactSolution::LinearRadialPulse { amplitude, center, width } => {
                let w2 = width * width;
                let h = |x: f64| amplitude * (-(x - center).powi(2) / w2).exp();
                let h1 = |x: f64| -2.0 * (x - center) / w2 * h(x);
                let h2 = |x: f64| (4.0 * (x - center).powi(2) / (w2 * w2) - 2.0 / w2) * h(x);
                let (p, m) = (r - t, -r - t);
                let u = (h(p) - h(m)) / r;
                let u_t = (h1(m) - h1(p)) / r;
                let u_tt = (h2(p) - h2(m)) / r;
                let u_r = (h1(p) + h1(m)) / r - u / r;
                Jet { u, u_t, u_r, u_tt, u_rr: u_tt - 2.0 * u_r / r }
            }
            ExactSolution::Manufactured => {
                let (s, c) = t.sin_cos();
                let e = (-r * r).exp();
                let g = r * e;
                let g1 = e * (1.0 - 2.0 * r * r);
                let g2 = e * (4.0 * r * r * r - 6.0 * r);
                Jet { u: s * g, u_t: c * g, u_r: s * g1, u_tt: -s * g, u_rr: s * g2 }
            }
        }
    }

    pub fn u(&self, t: f64, r: f64) -> f64 {
        self.jet(t, r).u
    }

    /// `u_tt - u_rr - (2/r) u_r + N(u, r)`; zero for a solution of `model`.
    pub fn residual(&self, model: ModelKind, t: f64, r: f64) -> f64 {
        let j = self.jet(t, r);
        j.u_tt - j.u_rr - 2.0 * j.u_r / r + model.force(j.u, r)
    }

    /// Sampled state at simulation time `t`.
    pub fn state(&self, grid: GridSpec, model: ModelKind, t: f64) -> Result<FieldState> {
        FieldState::from_fn(grid, model, t, |r| self.jet(t, r).u, |r| self.jet(t, r).u_t)
    }
}

/// Forcing `F = u_tt - u_rr - (2/r) u_r + N(u, r)` that makes `field` an
/// exact solution of the forced equation for `model`.
pub fn manufactured_forcing(field: ExactSolution, model: ModelKind) -> ManufacturedForcing {
    ManufacturedForcing { field, model }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedForcing {
    field: ExactSolution,
    model: ModelKind,
}

impl Forcing for ManufacturedForcing {
    fn eval(&self, t: f64, r: f64) -> f64 {
        self.field.residual(self.model, t, r)
    }
}
