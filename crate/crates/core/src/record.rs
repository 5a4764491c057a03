//! Time-stamped solution history.

use crate::error::{Error, Result};
use crate::evolve::{center_value, gradient_at, FieldState};
use crate::grid::GridSpec;
use crate::model::ModelKind;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Field values at one spacetime point; `u_t` and `u_r` are simulation-frame
/// derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSample {
    pub u: f64,
    pub u_t: f64,
    pub u_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeRecord {
    grid: GridSpec,
    model: ModelKind,
    snaps: Vec<Snapshot>,
}

impl SpacetimeRecord {
    pub fn new(grid: GridSpec, model: ModelKind) -> Self {
        SpacetimeRecord {
            grid,
            model,
            snaps: Vec::new(),
        }
    }

    /// Build a record from explicit snapshots, validating them.
    pub fn from_snapshots(grid: GridSpec, model: ModelKind, snaps: Vec<Snapshot>) -> Result<Self> {
        let mut rec = SpacetimeRecord::new(grid, model);
        for s in snaps {
            rec.try_push(s)?;
        }
        Ok(rec)
    }

    fn try_push(&mut self, s: Snapshot) -> Result<()> {
        let n = self.grid.n_cells();
        if s.u.len() != n || s.v.len() != n {
            return Err(Error::InvalidArgument(format!(
                "snapshot length {} / {} does not match {n} cells",
                s.u.len(),
                s.v.len()
            )));
        }
        if !(s.t.is_finite() && s.u.iter().chain(s.v.iter()).all(|x| x.is_finite())) {
            return Err(Error::InvalidArgument("snapshot contains non-finite values".into()));
        }
        if let Some(last) = self.snaps.last() {
            if !(s.t > last.t) {
                return Err(Error::InvalidArgument(format!(
                    "snapshot times must increase: {} after {}",
                    s.t, last.t
                )));
            }
        }
        self.snaps.push(s);
        Ok(())
    }

    /// Append a state. Panics if its time does not follow the last snapshot
    /// or its grid differs from the record's.
    pub fn push(&mut self, state: &FieldState) {
        assert_eq!(state.grid, self.grid, "state grid differs from record grid");
        self.try_push(Snapshot {
            t: state.t,
            u: state.u.clone(),
            v: state.v.clone(),
        })
        .expect("invalid snapshot");
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snaps
    }

    /// Mutable access, for constructing controlled test records.
    pub fn snapshots_mut(&mut self) -> &mut [Snapshot] {
        &mut self.snaps
    }

    pub fn len(&self) -> usize {
        self.snaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snaps.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snaps.iter().map(|s| s.t).collect()
    }

    pub fn first_time(&self) -> f64 {
        self.snaps.first().map_or(f64::NAN, |s| s.t)
    }

    pub fn last_time(&self) -> f64 {
        self.snaps.last().map_or(f64::NAN, |s| s.t)
    }

    /// Snapshot `i` as a standalone state.
    pub fn state(&self, i: usize) -> FieldState {
        let s = &self.snaps[i];
        FieldState {
            t: s.t,
            u: s.u.clone(),
            v: s.v.clone(),
            grid: self.grid,
            model: self.model,
            boundary: crate::evolve::Boundary::Dirichlet(s.u[s.u.len() - 1]),
        }
    }

    /// Whether `t` lies in the recorded interval (with a rounding allowance).
    pub fn covers(&self, t: f64) -> bool {
        let slack = 1e-9 * (1.0 + self.last_time().abs());
        !self.is_empty() && t >= self.first_time() - slack && t <= self.last_time() + slack
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if self.covers(t) {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "time {t} outside recorded interval [{}, {}]",
                self.first_time(),
                self.last_time()
            )))
        }
    }

    /// Index `i` and weight `θ` such that `t = (1-θ) t_i + θ t_{i+1}`.
    pub(crate) fn bracket(&self, t: f64) -> (usize, f64) {
        let n = self.snaps.len();
        if n == 1 {
            return (0, 0.0);
        }
        let i = self.snaps.partition_point(|s| s.t <= t).clamp(1, n - 1) - 1;
        let (ta, tb) = (self.snaps[i].t, self.snaps[i + 1].t);
        (i, ((t - ta) / (tb - ta)).clamp(0.0, 1.0))
    }

    /// Snapshot-exact values at node `j` of snapshot `i`.
    #[inline]
    pub fn node(&self, i: usize, j: usize) -> PointSample {
        let s = &self.snaps[i];
        let center = center_value(self.model, &s.u);
        PointSample {
            u: s.u[j],
            u_t: s.v[j],
            u_r: gradient_at(&self.grid, center, &s.u, j),
        }
    }

    /// Values at node `j`, linearly interpolated in time.
    pub fn node_at(&self, t: f64, j: usize) -> PointSample {
        let (i, th) = self.bracket(t);
        let a = self.node(i, j);
        if th == 0.0 {
            return a;
        }
        let b = self.node(i + 1, j);
        lerp(a, b, th)
    }

    /// Values at an arbitrary `(t, r)`, bilinear in time and radius.
    pub fn sample(&self, t: f64, r: f64) -> PointSample {
        let (i, th) = self.bracket(t);
        let a = self.radial(i, r);
        if th == 0.0 {
            return a;
        }
        lerp(a, self.radial(i + 1, r), th)
    }

    fn radial(&self, i: usize, r: f64) -> PointSample {
        let g = &self.grid;
        let n = g.n_cells();
        let x = r / g.dr() - 0.5;
        if x <= 0.0 {
            // between the mirror image at -r_0 and r_0
            let s = &self.snaps[i];
            let node = self.node(i, 0);
            let w = (x + 1.0).clamp(0.0, 1.0);
            let (ghost_u, ghost_ur) = match center_value(self.model, &s.u) {
                Some(c) => (2.0 * c - node.u, node.u_r),
                None => (node.u, -node.u_r),
            };
            let ghost = PointSample {
                u: ghost_u,
                u_t: if center_value(self.model, &s.u).is_some() { -node.u_t } else { node.u_t },
                u_r: ghost_ur,
            };
            return lerp(ghost, node, w);
        }
        let j = (x.floor() as usize).min(n - 2);
        let w = (x - j as f64).clamp(0.0, 1.0);
        lerp(self.node(i, j), self.node(i, j + 1), w)
    }
}

#[inline]
fn lerp(a: PointSample, b: PointSample, th: f64) -> PointSample {
    PointSample {
        u: a.u + th * (b.u - a.u),
        u_t: a.u_t + th * (b.u_t - a.u_t),
        u_r: a.u_r + th * (b.u_r - a.u_r),
    }
}
