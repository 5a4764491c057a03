//! Method-of-lines evolution of the radial equation.
//!
//! Space: the radial operator `r⁻² ∂_r(r² u_r)` in flux form on the
//! cell-centred grid. The flux through the face at `r = 0` vanishes, so the
//! centre needs no special treatment in the update. Time: classical RK4 with
//! a fixed step `dt ≤ cfl · dr`.
//!
//! The outer node is a boundary node. Under [`Boundary::Dirichlet`] it keeps
//! its initial value; the evolution is then exact for `r ≤ r_max - t` by
//! finite propagation speed.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::grid::GridSpec;
use crate::model::ModelKind;
use crate::record::SpacetimeRecord;

/// Outer boundary treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Outer node pinned to this value, with zero velocity.
    Dirichlet(f64),
    /// Zero flux through the outer face `r = r_max`.
    Neumann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub u: Vec<f64>,
    /// `u_t` at the nodes.
    pub v: Vec<f64>,
    pub grid: GridSpec,
    pub model: ModelKind,
    pub boundary: Boundary,
}

impl FieldState {
    /// State with a Dirichlet outer boundary pinned at the last node's value.
    pub fn new(grid: GridSpec, model: ModelKind, t: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != grid.n_cells() || v.len() != grid.n_cells() {
            return invalid(format!(
                "state arrays have lengths {} and {}, grid has {} cells",
                u.len(),
                v.len(),
                grid.n_cells()
            ));
        }
        if !u.iter().chain(v.iter()).all(|x| x.is_finite()) || !t.is_finite() {
            return invalid("state contains non-finite values");
        }
        let boundary = Boundary::Dirichlet(u[u.len() - 1]);
        let mut s = FieldState { t, u, v, grid, model, boundary };
        s.pin();
        Ok(s)
    }

    /// Sample `u = f(r)`, `u_t = g(r)` on the grid.
    pub fn from_fn(
        grid: GridSpec,
        model: ModelKind,
        t: f64,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::new(grid, model, t, grid.sample(f), grid.sample(g))
    }

    pub fn zeros(grid: GridSpec, model: ModelKind) -> Self {
        let n = grid.n_cells();
        FieldState {
            t: 0.0,
            u: vec![0.0; n],
            v: vec![0.0; n],
            grid,
            model,
            boundary: Boundary::Dirichlet(0.0),
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self.pin();
        self
    }

    /// Reverse the direction of time: `u_t → -u_t`.
    pub fn time_reflected(mut self) -> Self {
        for v in &mut self.v {
            *v = -*v;
        }
        self.pin();
        self
    }

    fn pin(&mut self) {
        if let Boundary::Dirichlet(b) = self.boundary {
            let last = self.u.len() - 1;
            self.u[last] = b;
            self.v[last] = 0.0;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(self.v.iter()).all(|x| x.is_finite())
    }
}

/// Value `u(t, 0)` forced by regularity: the multiple of π nearest to the
/// linear extrapolation from the first two nodes. `None` for models whose
/// fields are even in `r`.
pub fn center_value(model: ModelKind, u: &[f64]) -> Option<f64> {
    if !model.is_equivariant() {
        return None;
    }
    let extrapolated = 1.5 * u[0] - 0.5 * u[1];
    Some((extrapolated / PI).round() * PI)
}

/// `u_r` at node `j`.
///
/// Interior nodes use centred differences. The first node reflects `u`
/// across the centre (odd about `u(t, 0)` for equivariant models, even for
/// the linear control); the last node uses a one-sided second-order stencil.
#[inline]
pub fn gradient_at(grid: &GridSpec, center: Option<f64>, u: &[f64], j: usize) -> f64 {
    let n = u.len();
    let h2 = 2.0 * grid.dr();
    if j == 0 {
        let ghost = match center {
            Some(c) => 2.0 * c - u[0],
            None => u[0],
        };
        (u[1] - ghost) / h2
    } else if j == n - 1 {
        (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / h2
    } else {
        (u[j + 1] - u[j - 1]) / h2
    }
}

pub fn gradient(grid: &GridSpec, model: ModelKind, u: &[f64]) -> Vec<f64> {
    let center = center_value(model, u);
    (0..u.len()).map(|j| gradient_at(grid, center, u, j)).collect()
}

/// `u_r` at the nodes of a state.
pub fn spatial_gradient(state: &FieldState) -> Vec<f64> {
    gradient(&state.grid, state.model, &state.u)
}

/// Closed-form source term added to `u_tt`, as a function of `(t, r)`.
pub trait Forcing: Sync {
    fn eval(&self, t: f64, r: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64 + Sync> Forcing for F {
    fn eval(&self, t: f64, r: f64) -> f64 {
        self(t, r)
    }
}

#[allow(clippy::too_many_arguments)]
fn rhs_into(
    grid: &GridSpec,
    model: ModelKind,
    boundary: Boundary,
    t: f64,
    u: &[f64],
    v: &[f64],
    forcing: Option<&dyn Forcing>,
    du: &mut [f64],
    dv: &mut [f64],
) {
    let n = u.len();
    let inv_dr2 = 1.0 / (grid.dr() * grid.dr());
    du.copy_from_slice(v);
    // flux through face k, divided by dr³: k² (u_k - u_{k-1})
    let mut flux_in = 0.0;
    for j in 0..n {
        let k = (j + 1) as f64;
        let flux_out = if j + 1 < n { k * k * (u[j + 1] - u[j]) } else { 0.0 };
        let half = j as f64 + 0.5;
        let r = grid.r(j);
        let mut acc = (flux_out - flux_in) * inv_dr2 / (half * half) - model.force(u[j], r);
        if let Some(f) = forcing {
            acc += f.eval(t, r);
        }
        dv[j] = acc;
        flux_in = flux_out;
    }
    if let Boundary::Dirichlet(_) = boundary {
        du[n - 1] = 0.0;
        dv[n - 1] = 0.0;
    }
}

/// Time derivative `(u_t, u_tt)` of the semi-discrete system.
pub fn rhs(state: &FieldState) -> (Vec<f64>, Vec<f64>) {
    rhs_forced(state, None)
}

pub fn rhs_forced(state: &FieldState, forcing: Option<&dyn Forcing>) -> (Vec<f64>, Vec<f64>) {
    let n = state.u.len();
    let (mut du, mut dv) = (vec![0.0; n], vec![0.0; n]);
    rhs_into(
        &state.grid,
        state.model,
        state.boundary,
        state.t,
        &state.u,
        &state.v,
        forcing,
        &mut du,
        &mut dv,
    );
    (du, dv)
}

/// Reusable RK4 stage storage.
#[derive(Debug, Clone)]
pub struct Rk4 {
    ku: [Vec<f64>; 4],
    kv: [Vec<f64>; 4],
    su: Vec<f64>,
    sv: Vec<f64>,
}

impl Rk4 {
    pub fn new(n: usize) -> Self {
        Rk4 {
            ku: std::array::from_fn(|_| vec![0.0; n]),
            kv: std::array::from_fn(|_| vec![0.0; n]),
            su: vec![0.0; n],
            sv: vec![0.0; n],
        }
    }

    /// Advance `state` by `dt` in place.
    pub fn step(&mut self, state: &mut FieldState, dt: f64, forcing: Option<&dyn Forcing>) {
        let grid = state.grid;
        let (model, bc, t0) = (state.model, state.boundary, state.t);
        let n = state.u.len();
        let offsets = [0.0, 0.5, 0.5, 1.0];
        for stage in 0..4 {
            let (ku, kv) = (&mut self.ku, &mut self.kv);
            let (u, v): (&[f64], &[f64]) = if stage == 0 {
                (&state.u, &state.v)
            } else {
                let h = offsets[stage] * dt;
                for j in 0..n {
                    self.su[j] = state.u[j] + h * ku[stage - 1][j];
                    self.sv[j] = state.v[j] + h * kv[stage - 1][j];
                }
                (&self.su, &self.sv)
            };
            let (ku_s, kv_s) = (&mut ku[stage], &mut kv[stage]);
            rhs_into(&grid, model, bc, t0 + offsets[stage] * dt, u, v, forcing, ku_s, kv_s);
        }
        let w = dt / 6.0;
        for j in 0..n {
            state.u[j] += w * (self.ku[0][j] + 2.0 * (self.ku[1][j] + self.ku[2][j]) + self.ku[3][j]);
            state.v[j] += w * (self.kv[0][j] + 2.0 * (self.kv[1][j] + self.kv[2][j]) + self.kv[3][j]);
        }
        state.t = t0 + dt;
        state.pin();
    }
}

/// One classical RK4 step.
pub fn step_rk4(state: &FieldState, dt: f64) -> FieldState {
    let mut next = state.clone();
    Rk4::new(state.u.len()).step(&mut next, dt, None);
    next
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Halt when the energy density exceeds this anywhere.
    pub energy_density: f64,
    /// Halt when `|u_r|` or `|u_t|` exceeds this anywhere.
    pub gradient: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            energy_density: 1e8,
            gradient: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    NonFinite,
    EnergyDensity,
    Gradient,
}

impl Trigger {
    pub fn as_str(self) -> &'static str {
        match self {
            Trigger::NonFinite => "non-finite",
            Trigger::EnergyDensity => "energy-density",
            Trigger::Gradient => "gradient",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub time: f64,
    pub radius: f64,
    pub trigger: Trigger,
    /// The offending value (NaN for [`Trigger::NonFinite`]).
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub t_end: f64,
    pub cfl: f64,
    /// Keep every `record_every`-th step (plus the first and last).
    pub record_every: usize,
    pub thresholds: Thresholds,
}

impl EvolveOptions {
    pub fn new(t_end: f64) -> Self {
        EvolveOptions {
            t_end,
            cfl: 0.4,
            record_every: 1,
            thresholds: Thresholds::default(),
        }
    }

    pub fn cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn thresholds(mut self, thresholds: Thresholds) -> Self {
        self.thresholds = thresholds;
        self
    }
}

#[derive(Debug, Clone)]
pub struct EvolveReport {
    pub final_state: FieldState,
    pub steps: usize,
    pub dt: f64,
    pub singularity: Option<Singularity>,
}

fn scan(state: &FieldState, thresholds: &Thresholds) -> Option<Singularity> {
    let grid = &state.grid;
    if let Some(j) = (0..state.u.len()).find(|&j| !(state.u[j].is_finite() && state.v[j].is_finite())) {
        return Some(Singularity {
            time: state.t,
            radius: grid.r(j),
            trigger: Trigger::NonFinite,
            value: f64::NAN,
        });
    }
    let center = center_value(state.model, &state.u);
    let mut worst_g = (0.0, 0);
    let mut worst_e = (0.0, 0);
    for j in 0..state.u.len() {
        let ur = gradient_at(grid, center, &state.u, j);
        let g = ur.abs().max(state.v[j].abs());
        if g > worst_g.0 {
            worst_g = (g, j);
        }
        let e = 0.5 * (state.v[j] * state.v[j] + ur * ur) + state.model.potential(state.u[j], grid.r(j));
        if e > worst_e.0 {
            worst_e = (e, j);
        }
    }
    if worst_e.0 > thresholds.energy_density {
        Some(Singularity {
            time: state.t,
            radius: grid.r(worst_e.1),
            trigger: Trigger::EnergyDensity,
            value: worst_e.0,
        })
    } else if worst_g.0 > thresholds.gradient {
        Some(Singularity {
            time: state.t,
            radius: grid.r(worst_g.1),
            trigger: Trigger::Gradient,
            value: worst_g.0,
        })
    } else {
        None
    }
}

/// Evolve to `opts.t_end`, recording snapshots.
pub fn evolve(initial: &FieldState, opts: &EvolveOptions) -> Result<(EvolveReport, SpacetimeRecord)> {
    evolve_forced(initial, opts, None)
}

/// [`evolve`] with a source term added to `u_tt`.
pub fn evolve_forced(
    initial: &FieldState,
    opts: &EvolveOptions,
    forcing: Option<&dyn Forcing>,
) -> Result<(EvolveReport, SpacetimeRecord)> {
    if !(opts.cfl > 0.0 && opts.cfl <= 0.9) {
        return invalid(format!("cfl must lie in (0, 0.9], got {}", opts.cfl));
    }
    if !(opts.t_end > initial.t) || !opts.t_end.is_finite() {
        return invalid(format!("t_end {} must exceed the initial time {}", opts.t_end, initial.t));
    }
    if opts.record_every == 0 {
        return invalid("record_every must be at least 1");
    }
    if !initial.is_finite() {
        return invalid("initial state contains non-finite values");
    }
    let span = opts.t_end - initial.t;
    let steps = (span / (opts.cfl * initial.grid.dr()) - 1e-9).ceil().max(1.0) as usize;
    let dt = span / steps as f64;

    let mut state = initial.clone();
    state.pin();
    let mut record = SpacetimeRecord::new(state.grid, state.model);
    record.push(&state);
    let mut rk = Rk4::new(state.u.len());
    let mut singularity = scan(&state, &opts.thresholds);
    let mut taken = 0;
    if singularity.is_none() {
        for k in 1..=steps {
            let previous = state.clone();
            rk.step(&mut state, dt, forcing);
            state.t = initial.t + k as f64 * dt;
            taken = k;
            singularity = scan(&state, &opts.thresholds);
            if let Some(s) = singularity {
                if s.trigger == Trigger::NonFinite {
                    state = previous;
                    taken = k - 1;
                    if record.last_time() < state.t {
                        record.push(&state);
                    }
                } else {
                    record.push(&state);
                }
                break;
            }
            if k % opts.record_every == 0 || k == steps {
                record.push(&state);
            }
        }
    }
    Ok((
        EvolveReport {
            final_state: state,
            steps: taken,
            dt,
            singularity,
        },
        record,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn gradient_of_zero_and_linear() {
        let g = make_grid(4.0, 64).unwrap();
        let zero = vec![0.0; 64];
        assert!(gradient(&g, ModelKind::AdkinsNappi, &zero).iter().all(|&x| x == 0.0));
        let lin = g.nodes();
        let d = gradient(&g, ModelKind::AdkinsNappi, &lin);
        for (j, x) in d.iter().enumerate() {
            assert!((x - 1.0).abs() < 1e-12, "node {j}: {x}");
        }
    }

    #[test]
    fn gradient_converges_at_second_order() {
        let err = |n: usize| {
            let g = make_grid(3.0, n).unwrap();
            let u = g.sample(f64::sin);
            let d = gradient(&g, ModelKind::WaveMap, &u);
            d.iter()
                .enumerate()
                .map(|(j, x)| (x - g.r(j).cos()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(100), err(200));
        assert!(e1 / e2 > 3.8, "{e1} {e2}");
    }

    #[test]
    fn center_value_detects_branch() {
        let g = make_grid(2.0, 32).unwrap();
        let u = g.sample(|r| PI - 2.0 * r);
        assert_eq!(center_value(ModelKind::WaveMap, &u), Some(PI));
        let u = g.sample(|r| 0.3 * r);
        assert_eq!(center_value(ModelKind::AdkinsNappi, &u), Some(0.0));
        assert_eq!(center_value(ModelKind::Linear, &u), None);
    }

    #[test]
    fn zero_state_is_stationary() {
        let g = make_grid(5.0, 32).unwrap();
        let s = FieldState::zeros(g, ModelKind::AdkinsNappi);
        let (du, dv) = rhs(&s);
        assert!(du.iter().chain(dv.iter()).all(|&x| x == 0.0));
        let next = step_rk4(&s, 0.01);
        assert_eq!(next.u, s.u);
        assert_eq!(next.v, s.v);
    }

    #[test]
    fn dirichlet_node_is_pinned() {
        let g = make_grid(5.0, 32).unwrap();
        let s = FieldState::from_fn(g, ModelKind::AdkinsNappi, 0.0, |r| PI * (1.0 - (-r).exp()), |r| 0.1 * r)
            .unwrap();
        let pinned = s.u[31];
        assert_eq!(s.v[31], 0.0);
        let mut state = s.clone();
        let mut rk = Rk4::new(32);
        for _ in 0..20 {
            rk.step(&mut state, 0.05, None);
        }
        assert_eq!(state.u[31], pinned);
        assert_eq!(state.v[31], 0.0);
    }

    #[test]
    fn rk4_local_error_is_fifth_order() {
        let g = make_grid(6.0, 64).unwrap();
        let s = FieldState::from_fn(
            g,
            ModelKind::AdkinsNappi,
            0.0,
            |r| 0.8 * r * (-(r * r)).exp(),
            |r| 0.3 * r * (-(r - 1.0).powi(2)).exp(),
        )
        .unwrap();
        let defect = |dt: f64| {
            let one = step_rk4(&s, dt);
            let two = step_rk4(&step_rk4(&s, dt / 2.0), dt / 2.0);
            one.u
                .iter()
                .zip(&two.u)
                .chain(one.v.iter().zip(&two.v))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let (d1, d2) = (defect(0.02), defect(0.01));
        // O(dt⁵) local error: halving dt shrinks the defect by ≈ 32
        assert!(d1 / d2 > 24.0, "{d1} {d2} ratio {}", d1 / d2);
    }

    #[test]
    fn evolve_rejects_bad_options() {
        let g = make_grid(5.0, 32).unwrap();
        let s = FieldState::zeros(g, ModelKind::AdkinsNappi);
        assert!(evolve(&s, &EvolveOptions::new(1.0).cfl(0.0)).is_err());
        assert!(evolve(&s, &EvolveOptions::new(1.0).cfl(0.95)).is_err());
        assert!(evolve(&s, &EvolveOptions::new(0.0)).is_err());
        assert!(evolve(&s, &EvolveOptions::new(1.0).record_every(0)).is_err());
    }

    #[test]
    fn evolve_zero_data() {
        let g = make_grid(5.0, 32).unwrap();
        let s = FieldState::zeros(g, ModelKind::AdkinsNappi);
        let (rep, rec) = evolve(&s, &EvolveOptions::new(2.0).record_every(5)).unwrap();
        assert!(rep.singularity.is_none());
        assert!(rep.final_state.u.iter().all(|&x| x == 0.0));
        assert_eq!(rec.last_time(), 2.0);
        assert_eq!(rec.times()[0], 0.0);
    }

    #[test]
    fn non_finite_values_trigger_detection() {
        let g = make_grid(5.0, 32).unwrap();
        let mut s = FieldState::zeros(g, ModelKind::AdkinsNappi);
        s.u[3] = 1e300;
        s.v[3] = 1e300;
        let th = Thresholds { energy_density: f64::INFINITY, gradient: f64::INFINITY };
        let (rep, rec) = evolve(&s, &EvolveOptions::new(1.0).thresholds(th)).unwrap();
        let sing = rep.singularity.expect("overflow must be detected");
        assert_eq!(sing.trigger, Trigger::NonFinite);
        assert!(rep.final_state.is_finite());
        assert!(rec.snapshots().iter().all(|s| s.u.iter().all(|x| x.is_finite())));
    }

    #[test]
    fn dt_lands_on_t_end() {
        let g = make_grid(20.0, 1024).unwrap();
        let s = FieldState::zeros(g, ModelKind::AdkinsNappi);
        let (rep, _) = evolve(&s, &EvolveOptions::new(5.0).record_every(1000)).unwrap();
        assert_eq!(rep.steps, 640);
        assert_eq!(rep.dt, 0.4 * g.dr());
        assert_eq!(rep.final_state.t, 5.0);
    }
}
