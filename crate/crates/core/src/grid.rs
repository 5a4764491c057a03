//! Uniform cell-centred radial grid.
//!
//! Nodes sit at the centres of `n_cells` equal cells covering `[0, r_max]`,
//! `r_j = (j + 1/2) dr`, so no node ever lands on the coordinate singularity
//! at `r = 0`. Cell `j` spans the faces `j dr` and `(j + 1) dr`.

use crate::error::{invalid, Result};

/// Smallest grid the evolver and the stencils accept.
pub const MIN_CELLS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    r_max: f64,
    n_cells: usize,
    dr: f64,
}

/// Build the staggered grid on `[0, r_max]` with `n_cells` cells.
pub fn make_grid(r_max: f64, n_cells: usize) -> Result<GridSpec> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return invalid(format!("r_max must be positive and finite, got {r_max}"));
    }
    if n_cells < MIN_CELLS {
        return invalid(format!("n_cells must be at least {MIN_CELLS}, got {n_cells}"));
    }
    Ok(GridSpec {
        r_max,
        n_cells,
        dr: r_max / n_cells as f64,
    })
}

impl GridSpec {
    pub fn new(r_max: f64, n_cells: usize) -> Result<Self> {
        make_grid(r_max, n_cells)
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    /// Radius of node `j`.
    #[inline]
    pub fn r(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr
    }

    /// Radius of the face between cells `k - 1` and `k`.
    #[inline]
    pub fn face(&self, k: usize) -> f64 {
        k as f64 * self.dr
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.r(j)).collect()
    }

    /// Evaluate `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n_cells).map(|j| f(self.r(j))).collect()
    }

    /// Index of the cell containing `r`, clamped to the grid.
    pub fn cell_of(&self, r: f64) -> usize {
        let k = (r / self.dr).floor();
        if k < 0.0 {
            0
        } else {
            (k as usize).min(self.n_cells - 1)
        }
    }
}
