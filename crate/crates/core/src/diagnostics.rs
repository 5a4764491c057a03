//! Energy, flux and multiplier functionals over time slices and cone regions.
//!
//! All functionals read a [`SpacetimeRecord`] and a *vertex*: the simulation
//! time `t_v` of the point `(t_v, r = 0)` toward which the cones close. Cone
//! time is `τ = t_v - t`, and derivatives entering the cone formulas are
//! cone-frame: `u_τ = -u_t`, `u₊ = u_τ + u_r`, `u₋ = u_τ - u_r`. Volume
//! integrals carry the `r²` weight (the `4π` is dropped throughout).
//!
//! Radial quadrature is the midpoint rule on the cell-centred grid: every
//! cell contributes its node value times the length of its overlap with the
//! integration interval. Along a cone line the cells are parameterised by
//! `r`, the node value being taken at the line's time over that node
//! (linear interpolation between snapshots). Time integrals use the
//! trapezoid rule over snapshots.
//!
//! Line integrals over `K_t`, `C` and `C̃` in [`multiplier_balance`] and
//! [`cone_weighted_energy`] are taken with respect to arc length
//! `ds = √2 dr`. The energy and flux functionals include the `1/√2`
//! normalisation, so they reduce to plain `dr` integrals.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, invalid, Error, Result};
use crate::evolve::{center_value, gradient_at, FieldState};
use crate::grid::GridSpec;
use crate::model::{u_minus_sincos, ModelKind};
use crate::multiplier::{bulk_unchecked, g_unchecked, h_unchecked, weights_unchecked, MultiplierTriple};
use crate::record::{PointSample, SpacetimeRecord};
use crate::region::{ConeRegion, RegionKind};

/// Ordered `(parameter, value)` pairs with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl DiagnosticSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        DiagnosticSeries {
            label: label.into(),
            points,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    /// Whether the parameters are strictly increasing or strictly decreasing.
    pub fn is_monotone(&self) -> bool {
        let p = &self.points;
        p.windows(2).all(|w| w[1].0 > w[0].0) || p.windows(2).all(|w| w[1].0 < w[0].0)
    }

    /// CSV with header `param,value` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,value\n");
        for (p, v) in &self.points {
            let _ = writeln!(out, "{p:.16e},{v:.16e}");
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    /// Parse the output of [`DiagnosticSeries::to_csv`].
    pub fn from_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("param,value") {
            return invalid("missing 'param,value' header");
        }
        let mut points = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidArgument(format!("bad CSV line '{line}'")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad number '{s}': {e}")))
            };
            points.push((parse(a)?, parse(b)?));
        }
        Ok(DiagnosticSeries::new(label, points))
    }
}

// ---------------------------------------------------------------------------
// quadrature helpers

/// Midpoint rule over `[lo, hi]`: `f(j)` is the integrand at node `j`.
fn cell_quadrature(grid: &GridSpec, lo: f64, hi: f64, mut f: impl FnMut(usize) -> f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let dr = grid.dr();
    let (first, last) = (grid.cell_of(lo), grid.cell_of(hi));
    let mut acc = 0.0;
    for j in first..=last {
        let a = (j as f64 * dr).max(lo);
        let b = ((j + 1) as f64 * dr).min(hi);
        if b > a {
            acc += (b - a) * f(j);
        }
    }
    acc
}

/// Cone-frame view of a simulation-frame sample.
#[derive(Debug, Clone, Copy)]
struct ConeSample {
    u: f64,
    u_tau: f64,
    u_r: f64,
}

impl ConeSample {
    fn from_sim(p: PointSample) -> Self {
        ConeSample {
            u: p.u,
            u_tau: -p.u_t,
            u_r: p.u_r,
        }
    }

    fn plus(&self) -> f64 {
        self.u_tau + self.u_r
    }

    fn minus(&self) -> f64 {
        self.u_tau - self.u_r
    }
}

fn check_times(rec: &SpacetimeRecord, lo: f64, hi: f64, what: &str) -> Result<()> {
    if rec.covers(lo) && rec.covers(hi) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{what} needs times [{lo}, {hi}], record covers [{}, {}]",
            rec.first_time(),
            rec.last_time()
        )))
    }
}

fn check_radius(rec: &SpacetimeRecord, r: f64, what: &str) -> Result<()> {
    if r > 0.0 && r <= rec.grid().r_max() * (1.0 + 1e-12) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{what}: radius {r} outside (0, {}]",
            rec.grid().r_max()
        )))
    }
}

/// `sin²u/r² + (u - sin u cos u)²/r⁴`: the potential with the quartic term at
/// full weight, as it appears in the weighted local energies.
fn potential_full(model: ModelKind, u: f64, r: f64) -> f64 {
    match model {
        ModelKind::Linear => 0.0,
        ModelKind::WaveMap => (u.sin() / r).powi(2),
        ModelKind::AdkinsNappi => {
            let q = u_minus_sincos(u);
            (u.sin() / r).powi(2) + q * q / (r * r * r * r)
        }
    }
}

/// Integral of `f(r, sample) r²` along the line `t = t_of(r)`, `r ∈ [lo, hi]`.
fn line_integral(
    rec: &SpacetimeRecord,
    lo: f64,
    hi: f64,
    t_of: impl Fn(f64) -> f64,
    f: impl Fn(f64, ConeSample) -> f64,
) -> f64 {
    let grid = *rec.grid();
    cell_quadrature(&grid, lo, hi, |j| {
        let r = grid.r(j);
        let s = ConeSample::from_sim(rec.node_at(t_of(r), j));
        f(r, s) * r * r
    })
}

// ---------------------------------------------------------------------------
// energies and fluxes

/// Energy in the ball `r ≤ radius` at simulation time `t`.
pub fn ball_energy(rec: &SpacetimeRecord, t: f64, radius: f64) -> Result<f64> {
    rec.check_time(t)?;
    check_radius(rec, radius, "ball_energy")?;
    let grid = *rec.grid();
    let model = rec.model();
    Ok(cell_quadrature(&grid, 0.0, radius, |j| {
        let r = grid.r(j);
        let p = rec.node_at(t, j);
        (0.5 * (p.u_t * p.u_t + p.u_r * p.u_r) + model.potential(p.u, r)) * r * r
    }))
}

/// Total energy of every snapshot.
pub fn energy_series(rec: &SpacetimeRecord) -> DiagnosticSeries {
    let r_max = rec.grid().r_max();
    let points = rec
        .times()
        .into_iter()
        .map(|t| (t, ball_energy(rec, t, r_max).unwrap_or(f64::NAN)))
        .collect();
    DiagnosticSeries::new("total_energy", points)
}

/// Energy on the backward cone `K_T`, normalised so that it equals the
/// energy of the ball of radius `T` at cone time `T` for exact solutions.
pub fn cone_energy(rec: &SpacetimeRecord, vertex: f64, big_t: f64) -> Result<f64> {
    if !(big_t > 0.0) {
        return domain(format!("cone parameter must be positive, got {big_t}"));
    }
    check_times(rec, vertex - 2.0 * big_t, vertex - big_t, "cone_energy")?;
    check_radius(rec, big_t, "cone_energy")?;
    let model = rec.model();
    Ok(line_integral(
        rec,
        0.0,
        big_t,
        |r| vertex - 2.0 * big_t + r,
        |r, s| 0.5 * s.minus() * s.minus() + model.potential(s.u, r),
    ))
}

/// Flux `F(t0, t1)` through the cone `C(t0, t1) = {τ = r, t0 ≤ τ ≤ t1}`.
///
/// Non-negative; for exact solutions `E(t1) - E(t0) = F(t0, t1)` where `E(T)`
/// is [`ball_energy`] at cone time `T` over radius `T`.
pub fn flux(rec: &SpacetimeRecord, vertex: f64, t0: f64, t1: f64) -> Result<f64> {
    ConeRegion::new(RegionKind::ForwardCone(t0, t1), vertex)?;
    check_times(rec, vertex - t1, vertex - t0, "flux")?;
    check_radius(rec, t1, "flux")?;
    let model = rec.model();
    Ok(line_integral(
        rec,
        t0,
        t1,
        |r| vertex - r,
        |r, s| 0.5 * s.plus() * s.plus() + model.potential(s.u, r),
    ))
}

/// Local energy `E(T)`: [`ball_energy`] at cone time `T` over radius `T`.
pub fn local_energy(rec: &SpacetimeRecord, vertex: f64, big_t: f64) -> Result<f64> {
    ball_energy(rec, vertex - big_t, big_t)
}

/// `E(t1) - E(t0) - F(t0, t1)`.
pub fn flux_identity_defect(rec: &SpacetimeRecord, vertex: f64, t0: f64, t1: f64) -> Result<f64> {
    Ok(local_energy(rec, vertex, t1)? - local_energy(rec, vertex, t0)? - flux(rec, vertex, t0, t1)?)
}

/// `E(T) - cone_energy(T)`.
pub fn ball_cone_defect(rec: &SpacetimeRecord, vertex: f64, big_t: f64) -> Result<f64> {
    Ok(local_energy(rec, vertex, big_t)? - cone_energy(rec, vertex, big_t)?)
}

/// Weighted local energy on the ball of radius `T` at simulation time
/// `vertex - T`:
/// `∫₀^T [(1 - r/T) u₋² + u₊² + sin²u/r² + (u - sin u cos u)²/r⁴] r² dr`,
/// with forward-time null derivatives `u_± = u_t ± u_r`.
pub fn weighted_local_energy(rec: &SpacetimeRecord, vertex: f64, big_t: f64) -> Result<f64> {
    if !(big_t > 0.0) {
        return domain(format!("ball radius must be positive, got {big_t}"));
    }
    let t = vertex - big_t;
    rec.check_time(t)?;
    check_radius(rec, big_t, "weighted_local_energy")?;
    let grid = *rec.grid();
    let model = rec.model();
    Ok(cell_quadrature(&grid, 0.0, big_t, |j| {
        let r = grid.r(j);
        let p = rec.node_at(t, j);
        let (up, um) = (p.u_t + p.u_r, p.u_t - p.u_r);
        ((1.0 - r / big_t).max(0.0) * um * um + up * up + potential_full(model, p.u, r)) * r * r
    }))
}

/// `∫_{K_T} [(1 - r/τ) u₋² + sin²u/r² + (u - sin u cos u)²/r⁴] ds` with
/// `τ = 2T - r` along the cone.
pub fn cone_weighted_energy(rec: &SpacetimeRecord, vertex: f64, big_t: f64) -> Result<f64> {
    if !(big_t > 0.0) {
        return domain(format!("cone parameter must be positive, got {big_t}"));
    }
    check_times(rec, vertex - 2.0 * big_t, vertex - big_t, "cone_weighted_energy")?;
    check_radius(rec, big_t, "cone_weighted_energy")?;
    let model = rec.model();
    let integral = line_integral(
        rec,
        0.0,
        big_t,
        |r| vertex - 2.0 * big_t + r,
        |r, s| {
            let tau = 2.0 * big_t - r;
            (1.0 - r / tau) * s.minus() * s.minus() + potential_full(model, s.u, r)
        },
    );
    Ok(SQRT_2 * integral)
}

// ---------------------------------------------------------------------------
// multiplier identity

/// The pieces of the integrated multiplier identity over `D(t0, t1)`:
///
/// ```text
/// √2 ∫_D I + ∫_C [G - (c_r + c_t + c/r) u²]
///     = ∫_{K_t1} - ∫_{K_t0} [H + (c_r - c_t + c/r) u²] - √2 [r² c u²]_(t0,t0)^(t1,t1)
/// ```
///
/// The last term collects the values at the two corners where `C` meets
/// `K_t0` and `K_t1`; it comes from integrating `c u u_±` by parts along the
/// null lines and vanishes when `c ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierBalance {
    /// `∫_D I r² dτ dr`.
    pub bulk: f64,
    /// `∫_C [G - w_C u²] ds`.
    pub outgoing: f64,
    /// `∫_{K_t1} [H + w_K u²] ds`.
    pub cone_t1: f64,
    /// `∫_{K_t0} [H + w_K u²] ds`.
    pub cone_t0: f64,
    /// `√2 ([r² c u²](t1, t1) - [r² c u²](t0, t0))`.
    pub corners: f64,
}

impl MultiplierBalance {
    pub fn lhs(&self) -> f64 {
        SQRT_2 * self.bulk + self.outgoing
    }

    pub fn rhs(&self) -> f64 {
        self.cone_t1 - self.cone_t0 - self.corners
    }

    pub fn residual(&self) -> f64 {
        (self.lhs() - self.rhs()).abs()
    }

    /// Sum of the magnitudes of all terms; a natural scale for the residual.
    pub fn scale(&self) -> f64 {
        SQRT_2 * self.bulk.abs()
            + self.outgoing.abs()
            + self.cone_t1.abs()
            + self.cone_t0.abs()
            + self.corners.abs()
    }
}

fn check_trapezoid(rec: &SpacetimeRecord, vertex: f64, t0: f64, t1: f64) -> Result<ConeRegion> {
    let region = ConeRegion::new(RegionKind::Trapezoid(t0, t1), vertex)?;
    let (lo, hi) = region.time_range();
    check_times(rec, lo, hi, "trapezoid D(t0,t1)")?;
    check_radius(rec, t1, "trapezoid D(t0,t1)")?;
    Ok(region)
}

fn check_multiplier(m: MultiplierTriple, t0: f64) -> Result<()> {
    if m.needs_positive_tau() && !(t0 > 0.0) {
        return domain(format!("multiplier {} needs τ > 0 on the region", m.label()));
    }
    Ok(())
}

fn bulk_over(rec: &SpacetimeRecord, region: &ConeRegion, m: MultiplierTriple) -> f64 {
    let grid = *rec.grid();
    let model = rec.model();
    let snaps = rec.snapshots();
    let (lo, hi) = region.time_range();
    let slice = |i: usize| -> f64 {
        let t = snaps[i].t;
        let tau = region.tau(t);
        let seg = region.segment_at_time(t);
        if seg.is_empty() || tau <= 0.0 {
            return 0.0;
        }
        let center = center_value(model, &snaps[i].u);
        cell_quadrature(&grid, seg.lo, seg.hi, |j| {
            let r = grid.r(j);
            let u = snaps[i].u[j];
            let u_r = gradient_at(&grid, center, &snaps[i].u, j);
            let k = m.eval(tau, r);
            bulk_unchecked(&k, model, r, u, -snaps[i].v[j], u_r) * r * r
        })
    };
    // trapezoid over the snapshots spanning [lo, hi]; the slice integral
    // vanishes at both ends of the region's time range
    let first = snaps.partition_point(|s| s.t < lo).saturating_sub(1);
    let last = (snaps.partition_point(|s| s.t <= hi) + 1).min(snaps.len());
    let mut acc = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for i in first..last {
        let cur = (snaps[i].t, slice(i));
        if let Some((tp, sp)) = prev {
            acc += 0.5 * (cur.0 - tp) * (sp + cur.1);
        }
        prev = Some(cur);
    }
    acc
}

/// `∫_{D(t0,t1)} I r² dτ dr` for multiplier `m`.
pub fn bulk_i_integral(
    rec: &SpacetimeRecord,
    vertex: f64,
    t0: f64,
    t1: f64,
    m: MultiplierTriple,
) -> Result<f64> {
    check_multiplier(m, t0)?;
    let region = check_trapezoid(rec, vertex, t0, t1)?;
    Ok(bulk_over(rec, &region, m))
}

/// `∫_{K_t} [H + (c_r - c_t + c/r) u²] ds`.
fn backward_cone_term(rec: &SpacetimeRecord, vertex: f64, t: f64, m: MultiplierTriple) -> f64 {
    let model = rec.model();
    SQRT_2
        * line_integral(
            rec,
            0.0,
            t,
            |r| vertex - 2.0 * t + r,
            |r, s| {
                let k = m.eval(2.0 * t - r, r);
                let (_, w_k) = weights_unchecked(&k, r);
                h_unchecked(&k, model, s.minus(), s.u, r) + w_k * s.u * s.u
            },
        )
}

fn corner_value(rec: &SpacetimeRecord, vertex: f64, t: f64, m: MultiplierTriple) -> f64 {
    let p = rec.sample(vertex - t, t);
    let k = m.eval(t, t);
    t * t * k.c * p.u * p.u
}

/// Assemble every term of the multiplier identity over `D(t0, t1)`.
pub fn multiplier_balance(
    rec: &SpacetimeRecord,
    vertex: f64,
    t0: f64,
    t1: f64,
    m: MultiplierTriple,
) -> Result<MultiplierBalance> {
    check_multiplier(m, t0)?;
    let region = check_trapezoid(rec, vertex, t0, t1)?;
    let model = rec.model();
    let bulk = bulk_over(rec, &region, m);
    let outgoing = SQRT_2
        * line_integral(
            rec,
            t0,
            t1,
            |r| vertex - r,
            |r, s| {
                let k = m.eval(r, r);
                let (w_c, _) = weights_unchecked(&k, r);
                g_unchecked(&k, model, s.plus(), s.u, r) - w_c * s.u * s.u
            },
        );
    Ok(MultiplierBalance {
        bulk,
        outgoing,
        cone_t1: backward_cone_term(rec, vertex, t1, m),
        cone_t0: backward_cone_term(rec, vertex, t0, m),
        corners: SQRT_2 * (corner_value(rec, vertex, t1, m) - corner_value(rec, vertex, t0, m)),
    })
}

/// `|LHS - RHS|` of the integrated multiplier identity over `D(t0, t1)`.
pub fn multiplier_identity_residual(
    rec: &SpacetimeRecord,
    vertex: f64,
    t0: f64,
    t1: f64,
    m: MultiplierTriple,
) -> Result<f64> {
    Ok(multiplier_balance(rec, vertex, t0, t1, m)?.residual())
}

// ---------------------------------------------------------------------------
// series

/// Largest admissible local-energy radius toward `vertex`.
fn local_energy_window(rec: &SpacetimeRecord, vertex: f64) -> Result<(f64, f64)> {
    let dr = rec.grid().dr();
    let t_max = (vertex - rec.first_time()).min(rec.grid().r_max());
    let t_min = (vertex - rec.last_time()).max(4.0 * dr);
    if !(t_max > t_min) {
        return Err(Error::OutOfRange(format!(
            "no room for balls toward vertex {vertex} in record [{}, {}]",
            rec.first_time(),
            rec.last_time()
        )));
    }
    Ok((t_min, t_max))
}

fn geometric(t_max: f64, t_min: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![t_max];
    }
    let ratio = (t_min / t_max).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| t_max * ratio.powi(k as i32)).collect()
}

/// Local energy `E(T)` on `n_points` geometrically spaced radii `T`
/// decreasing toward the vertex, between the widest ball the record holds
/// and `max(vertex - t_last, 4 dr)`.
pub fn concentration_series(rec: &SpacetimeRecord, vertex: f64, n_points: usize) -> Result<DiagnosticSeries> {
    let (t_min, t_max) = local_energy_window(rec, vertex)?;
    concentration_series_between(rec, vertex, t_max, t_min, n_points)
}

/// [`concentration_series`] on an explicit radius range.
pub fn concentration_series_between(
    rec: &SpacetimeRecord,
    vertex: f64,
    t_max: f64,
    t_min: f64,
    n_points: usize,
) -> Result<DiagnosticSeries> {
    if n_points == 0 || !(t_max >= t_min && t_min > 0.0) {
        return invalid(format!("bad series range [{t_min}, {t_max}] with {n_points} points"));
    }
    let points = geometric(t_max, t_min, n_points)
        .into_iter()
        .map(|t| Ok((t, local_energy(rec, vertex, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticSeries::new("local_energy", points))
}

/// [`cone_weighted_energy`] on the radii of [`concentration_series`] that fit
/// the record (the cone `K_T` reaches back to `vertex - 2T`).
pub fn cone_decay_series(rec: &SpacetimeRecord, vertex: f64, n_points: usize) -> Result<DiagnosticSeries> {
    let (t_min, t_max) = local_energy_window(rec, vertex)?;
    let t_max = t_max.min(0.5 * (vertex - rec.first_time()));
    if !(t_max > t_min) {
        return Err(Error::OutOfRange("record too short for backward cones".into()));
    }
    let points = geometric(t_max, t_min, n_points.max(1))
        .into_iter()
        .map(|t| Ok((t, cone_weighted_energy(rec, vertex, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticSeries::new("cone_weighted_energy", points))
}

/// `t ↦ max_j |u_j|`.
pub fn sup_norm_series(rec: &SpacetimeRecord) -> DiagnosticSeries {
    let points = rec
        .snapshots()
        .iter()
        .map(|s| (s.t, s.u.iter().fold(0.0f64, |m, x| m.max(x.abs()))))
        .collect();
    DiagnosticSeries::new("sup_norm", points)
}

/// Winding number `[u - sin u cos u]/π` between the centre and `r_max`.
pub fn topological_charge(state: &FieldState) -> f64 {
    charge_of(state.model, &state.u)
}

fn charge_of(model: ModelKind, u: &[f64]) -> f64 {
    let center = center_value(model, u).unwrap_or(0.0);
    let outer = u[u.len() - 1];
    (u_minus_sincos(outer) - u_minus_sincos(center)) / PI
}

pub fn charge_series(rec: &SpacetimeRecord) -> DiagnosticSeries {
    let points = rec
        .snapshots()
        .iter()
        .map(|s| (s.t, charge_of(rec.model(), &s.u)))
        .collect();
    DiagnosticSeries::new("charge", points)
}

// ---------------------------------------------------------------------------
// pointwise bounds

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BoundsReport {
    pub checked: usize,
    pub violations: usize,
}

/// Sample recorded points inside the cone `r ≤ τ` and count violations of
///
/// ```text
/// 0 ≤ G ≤ 2 (½u₊² + V),   0 ≤ H ≤ 2 (½u₋² + V),
/// |c_r + c_t + c/r| ≤ 2/r²,   0 ≤ c_r - c_t + c/r ≤ 2/r²
/// ```
///
/// with absolute/relative slack `1e-12`.
pub fn gh_bounds_report(
    rec: &SpacetimeRecord,
    vertex: f64,
    m: MultiplierTriple,
    samples: usize,
    seed: u64,
) -> BoundsReport {
    let grid = *rec.grid();
    let model = rec.model();
    let snaps = rec.snapshots();
    let inside: Vec<(usize, usize)> = snaps
        .iter()
        .enumerate()
        .filter(|(_, s)| vertex - s.t > 0.0)
        .map(|(i, s)| {
            let tau = vertex - s.t;
            let n_in = (0..grid.n_cells()).take_while(|&j| grid.r(j) <= tau).count();
            (i, n_in)
        })
        .filter(|&(_, n)| n > 0)
        .collect();
    let mut report = BoundsReport::default();
    if inside.is_empty() {
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slack = 1e-12;
    let le = |a: f64, b: f64| a <= b + slack * (1.0 + b.abs());
    for _ in 0..samples {
        let (i, n_in) = inside[rng.gen_range(0..inside.len())];
        let j = rng.gen_range(0..n_in);
        let tau = vertex - snaps[i].t;
        let r = grid.r(j);
        let s = ConeSample::from_sim(rec.node(i, j));
        let k = m.eval(tau, r);
        let pot = model.potential(s.u, r);
        let g = g_unchecked(&k, model, s.plus(), s.u, r);
        let h = h_unchecked(&k, model, s.minus(), s.u, r);
        let (w_c, w_k) = weights_unchecked(&k, r);
        let bound = 2.0 / (r * r);
        let ok = le(0.0, g)
            && le(g, 2.0 * (0.5 * s.plus() * s.plus() + pot))
            && le(0.0, h)
            && le(h, 2.0 * (0.5 * s.minus() * s.minus() + pot))
            && le(w_c.abs(), bound)
            && le(0.0, w_k)
            && le(w_k, bound);
        report.checked += 1;
        if !ok {
            report.violations += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::record::Snapshot;
    use approx::assert_relative_eq;

    fn zero_record() -> SpacetimeRecord {
        let g = make_grid(4.0, 64).unwrap();
        let snaps = (0..=40)
            .map(|k| Snapshot { t: 0.05 * k as f64, u: vec![0.0; 64], v: vec![0.0; 64] })
            .collect();
        SpacetimeRecord::from_snapshots(g, ModelKind::AdkinsNappi, snaps).unwrap()
    }

    /// A record whose every snapshot is the same static profile.
    fn static_record(f: impl Fn(f64) -> f64, model: ModelKind) -> SpacetimeRecord {
        let g = make_grid(6.0, 600).unwrap();
        let u = g.sample(&f);
        let snaps = (0..=60)
            .map(|k| Snapshot { t: 0.05 * k as f64, u: u.clone(), v: vec![0.0; 600] })
            .collect();
        SpacetimeRecord::from_snapshots(g, model, snaps).unwrap()
    }

    #[test]
    fn zero_record_gives_zero_everywhere() {
        let rec = zero_record();
        let v = 2.0;
        assert_eq!(ball_energy(&rec, 1.0, 3.0).unwrap(), 0.0);
        assert_eq!(cone_energy(&rec, v, 0.8).unwrap(), 0.0);
        assert_eq!(flux(&rec, v, 0.2, 0.9).unwrap(), 0.0);
        assert_eq!(weighted_local_energy(&rec, v, 0.5).unwrap(), 0.0);
        assert_eq!(cone_weighted_energy(&rec, v, 0.5).unwrap(), 0.0);
        for m in crate::multiplier::ALL_PRESETS {
            assert_eq!(multiplier_identity_residual(&rec, v, 0.2, 0.9, m).unwrap(), 0.0);
            assert_eq!(bulk_i_integral(&rec, v, 0.2, 0.9, m).unwrap(), 0.0);
        }
        assert!(concentration_series(&rec, v, 8).unwrap().values().iter().all(|&x| x == 0.0));
        assert!(sup_norm_series(&rec).values().iter().all(|&x| x == 0.0));
        assert_eq!(gh_bounds_report(&rec, v, MultiplierTriple::Scaling, 1000, 1).violations, 0);
        assert_eq!(topological_charge(&rec.state(3)), 0.0);
    }

    #[test]
    fn out_of_range_requests_fail() {
        let rec = zero_record();
        assert!(matches!(ball_energy(&rec, 5.0, 1.0), Err(Error::OutOfRange(_))));
        assert!(ball_energy(&rec, 1.0, 10.0).is_err());
        // K_T reaches back to vertex - 2T = -0.4
        assert!(cone_energy(&rec, 2.0, 1.2).is_err());
        assert!(flux(&rec, 2.0, 0.5, 0.4).is_err());
        assert!(multiplier_balance(&rec, 2.0, 0.5, 1.5, MultiplierTriple::Energy).is_err());
    }

    #[test]
    fn ball_energy_of_linear_profile() {
        // u = a r (wave map): ½a² + sin²(ar)/r², exact integral by quadrature oracle
        let a = 0.3;
        let rec = static_record(|r| a * r, ModelKind::WaveMap);
        let e = ball_energy(&rec, 1.0, 2.0).unwrap();
        let n = 200_000;
        let h = 2.0 / n as f64;
        let oracle: f64 = (0..n)
            .map(|k| {
                let r = (k as f64 + 0.5) * h;
                (0.5 * a * a + ((a * r).sin() / r).powi(2)) * r * r * h
            })
            .sum();
        assert_relative_eq!(e, oracle, max_relative = 1e-5);
    }

    #[test]
    fn static_record_has_time_independent_energy() {
        let rec = static_record(|r| 2.0 * r.atan(), ModelKind::AdkinsNappi);
        let a = ball_energy(&rec, 0.3, 5.0).unwrap();
        let b = ball_energy(&rec, 2.7, 5.0).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn weighted_local_energy_of_static_profile() {
        // v = 0: u₋² = u₊² = u_r²; integrand (2 - r/T) u_r² + sin²u/r² + q²/r⁴
        let f = |r: f64| 1.5 * (r / (1.0 + r * r)).atan();
        let rec = static_record(f, ModelKind::AdkinsNappi);
        let (vertex, big_t) = (2.5, 1.5);
        let got = weighted_local_energy(&rec, vertex, big_t).unwrap();
        let n = 100_000;
        let h = big_t / n as f64;
        let oracle: f64 = (0..n)
            .map(|k| {
                let r = (k as f64 + 0.5) * h;
                let ur = (f(r + 1e-6) - f(r - 1e-6)) / 2e-6;
                let u = f(r);
                ((2.0 - r / big_t) * ur * ur + potential_full(ModelKind::AdkinsNappi, u, r)) * r * r * h
            })
            .sum();
        assert_relative_eq!(got, oracle, max_relative = 1e-4);
    }

    #[test]
    fn static_record_satisfies_ball_cone_equality() {
        let rec = static_record(|r| 2.0 * (r / 0.7).atan(), ModelKind::AdkinsNappi);
        let e = local_energy(&rec, 3.0, 1.2).unwrap();
        let c = cone_energy(&rec, 3.0, 1.2).unwrap();
        assert_relative_eq!(e, c, max_relative = 1e-12);
        // cone-weighted energy of a static field is positive and grows with T
        let w1 = cone_weighted_energy(&rec, 3.0, 0.5).unwrap();
        let w2 = cone_weighted_energy(&rec, 3.0, 1.0).unwrap();
        assert!(w1 > 0.0 && w2 > w1);
    }

    #[test]
    fn charge_examples() {
        let g = make_grid(4.0, 32).unwrap();
        let mut s = FieldState::zeros(g, ModelKind::AdkinsNappi);
        assert_eq!(topological_charge(&s), 0.0);
        s.u = g.sample(|r| PI * (r / 4.0).min(1.0));
        s.u[31] = PI;
        assert!((topological_charge(&s) - 1.0).abs() < 1e-15);
        s.u[31] = PI / 2.0;
        assert!((topological_charge(&s) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = DiagnosticSeries::new("x", vec![(0.1, 1.0 / 3.0), (0.2, -2.5e-17), (0.3, PI)]);
        let csv = s.to_csv();
        assert!(csv.starts_with("param,value\n"));
        assert!(csv.lines().nth(1).unwrap().contains("1.0000000000000001e-1"));
        let back = DiagnosticSeries::from_csv("x", &csv).unwrap();
        assert_eq!(back, s);
        assert!(DiagnosticSeries::from_csv("x", "a,b\n1,2\n").is_err());
    }
}
