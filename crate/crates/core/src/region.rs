//! Spacetime regions bounded by time slices and light cones.
//!
//! Regions are written in *cone time* `τ`, measured from a vertex at
//! `(vertex_time, r = 0)`. Simulations run forward toward the vertex, so
//! `τ = vertex_time - t` and `τ` decreases as the simulation advances. With
//! `0 < t0 < t1` the regions are
//!
//! | variant              | set                                          |
//! |----------------------|----------------------------------------------|
//! | `BallSlice(t0)`      | `τ = t0`, `0 ≤ r ≤ t0`                       |
//! | `BackwardCone(t0)`   | `τ = 2 t0 - r`, `t0 ≤ τ ≤ 2 t0`              |
//! | `ForwardCone(t0,t1)` | `τ = r`, `t0 ≤ τ ≤ t1`                       |
//! | `ShiftedCone(t0,t1)` | `r = τ - 2 t0`, `0 ≤ r ≤ t1 - t0`            |
//! | `Trapezoid(t0,t1)`   | `2 t0 - τ ≤ r ≤ min(2 t1 - τ, τ)`            |
//! | `Domain(T)`          | `r ≤ min(2 T - τ, τ)`, `0 < τ ≤ 2 T`         |

use crate::error::{invalid, Result};

/// Absolute slack used when testing membership of the lower-dimensional sets.
pub const LINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionKind {
    BallSlice(f64),
    BackwardCone(f64),
    ForwardCone(f64, f64),
    ShiftedCone(f64, f64),
    Trapezoid(f64, f64),
    Domain(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeRegion {
    pub kind: RegionKind,
    /// Simulation time identified with the cone vertex `τ = 0`.
    pub vertex_time: f64,
}

/// Closed radial interval; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    pub const EMPTY: Segment = Segment { lo: 1.0, hi: 0.0 };

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn contains(&self, r: f64) -> bool {
        !self.is_empty() && r >= self.lo - LINE_TOL && r <= self.hi + LINE_TOL
    }

    pub fn length(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    fn clipped(lo: f64, hi: f64) -> Segment {
        let lo = lo.max(0.0);
        if hi < lo - LINE_TOL {
            Segment::EMPTY
        } else {
            Segment { lo, hi: hi.max(lo) }
        }
    }

    fn point_if(cond: bool, r: f64) -> Segment {
        if cond {
            Segment { lo: r, hi: r }
        } else {
            Segment::EMPTY
        }
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= LINE_TOL * (1.0 + a.abs().max(b.abs()))
}

impl RegionKind {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            RegionKind::BallSlice(t0) | RegionKind::BackwardCone(t0) | RegionKind::Domain(t0) => {
                t0 > 0.0 && t0.is_finite()
            }
            RegionKind::ForwardCone(t0, t1)
            | RegionKind::ShiftedCone(t0, t1)
            | RegionKind::Trapezoid(t0, t1) => t0 > 0.0 && t1 > t0 && t1.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("region parameters must satisfy 0 < t0 < t1: {self:?}"))
        }
    }

    /// Membership in cone time.
    pub fn contains(&self, tau: f64, r: f64) -> bool {
        if r < 0.0 {
            return false;
        }
        let le = |a: f64, b: f64| a <= b + LINE_TOL;
        match *self {
            RegionKind::BallSlice(t0) => near(tau, t0) && le(r, t0),
            RegionKind::BackwardCone(t0) => {
                near(tau, 2.0 * t0 - r) && le(t0, tau) && le(tau, 2.0 * t0)
            }
            RegionKind::ForwardCone(t0, t1) => near(tau, r) && le(t0, tau) && le(tau, t1),
            RegionKind::ShiftedCone(t0, t1) => near(r, tau - 2.0 * t0) && le(r, t1 - t0),
            RegionKind::Trapezoid(t0, t1) => {
                le(2.0 * t0 - tau, r) && le(r, 2.0 * t1 - tau) && le(r, tau)
            }
            RegionKind::Domain(tb) => {
                tau > 0.0 && le(tau, 2.0 * tb) && le(r, 2.0 * tb - tau) && le(r, tau)
            }
        }
    }

    /// Exact radial slice at cone time `tau`.
    pub fn segment(&self, tau: f64) -> Segment {
        let ge = |a: f64, b: f64| a >= b - LINE_TOL;
        match *self {
            RegionKind::BallSlice(t0) => {
                if near(tau, t0) {
                    Segment { lo: 0.0, hi: t0 }
                } else {
                    Segment::EMPTY
                }
            }
            RegionKind::BackwardCone(t0) => {
                Segment::point_if(ge(tau, t0) && ge(2.0 * t0, tau), (2.0 * t0 - tau).max(0.0))
            }
            RegionKind::ForwardCone(t0, t1) => Segment::point_if(ge(tau, t0) && ge(t1, tau), tau),
            RegionKind::ShiftedCone(t0, t1) => {
                let r = tau - 2.0 * t0;
                Segment::point_if(ge(r, 0.0) && ge(t1 - t0, r), r.max(0.0))
            }
            RegionKind::Trapezoid(t0, t1) => {
                Segment::clipped(2.0 * t0 - tau, (2.0 * t1 - tau).min(tau))
            }
            RegionKind::Domain(tb) => {
                if tau <= 0.0 || tau > 2.0 * tb + LINE_TOL {
                    Segment::EMPTY
                } else {
                    Segment::clipped(0.0, (2.0 * tb - tau).min(tau))
                }
            }
        }
    }

    /// Range of cone time over which the region is non-empty.
    pub fn tau_range(&self) -> (f64, f64) {
        match *self {
            RegionKind::BallSlice(t0) => (t0, t0),
            RegionKind::BackwardCone(t0) => (t0, 2.0 * t0),
            RegionKind::ForwardCone(t0, t1) => (t0, t1),
            RegionKind::ShiftedCone(t0, t1) => (2.0 * t0, t0 + t1),
            RegionKind::Trapezoid(t0, t1) => (t0, 2.0 * t1),
            RegionKind::Domain(tb) => (0.0, 2.0 * tb),
        }
    }
}

impl ConeRegion {
    pub fn new(kind: RegionKind, vertex_time: f64) -> Result<Self> {
        kind.validate()?;
        if !vertex_time.is_finite() {
            return invalid("vertex time must be finite");
        }
        Ok(ConeRegion { kind, vertex_time })
    }

    /// Cone time of simulation time `t`.
    #[inline]
    pub fn tau(&self, t: f64) -> f64 {
        self.vertex_time - t
    }

    /// Simulation time of cone time `tau`.
    #[inline]
    pub fn sim_time(&self, tau: f64) -> f64 {
        self.vertex_time - tau
    }

    /// Whether the simulation-frame point `(t, r)` belongs to the region.
    pub fn contains(&self, t: f64, r: f64) -> bool {
        self.kind.contains(self.tau(t), r)
    }

    /// Radial slice of the region at simulation time `t`.
    pub fn segment_at_time(&self, t: f64) -> Segment {
        self.kind.segment(self.tau(t))
    }

    /// Simulation-time interval `[t_lo, t_hi]` the region occupies.
    pub fn time_range(&self) -> (f64, f64) {
        let (a, b) = self.kind.tau_range();
        (self.sim_time(b), self.sim_time(a))
    }
}

/// Free-function form of [`ConeRegion::contains`].
pub fn region_contains(region: &ConeRegion, t: f64, r: f64) -> bool {
    region.contains(t, r)
}

/// Free-function form of [`ConeRegion::segment_at_time`].
pub fn region_segment_at_time(region: &ConeRegion, t: f64) -> Segment {
    region.segment_at_time(t)
}
