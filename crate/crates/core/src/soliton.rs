//! Static Adkins–Nappi soliton by shooting on the central slope.
//!
//! The static equation `u'' + (2/r) u' = N(u, r)` is integrated outward with
//! RK4 from `r_start = 10 dr`, started on the regular branch
//! `u = a r + c₃ r³ + O(r⁵)`. Linearising at `r = 0` gives
//! `u'' + (2/r) u' - 2u/r² = 0`, with indicial equation `α² + α - 2 = 0` and
//! roots `1` and `-2`; regularity selects `α = 1`. Matching the `r³` terms
//! gives `c₃ = (2/15)(a⁵ - a³)` for Adkins–Nappi and `c₃ = -(2/15) a³` for
//! the wave map.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::ModelKind;

/// Radius, in steps, at which the series start is used.
pub const START_STEPS: f64 = 10.0;
/// Default `|u(r_max) - π|` accepted as converged.
pub const DEFAULT_GAP_TOL: f64 = 1e-2 * PI;
/// Default slope bracket for the Adkins–Nappi soliton.
pub const DEFAULT_BRACKET: (f64, f64) = (0.5, 5.0);

const OVERSHOOT_MARGIN: f64 = 1e-9;
const UNDERSHOOT_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShootOutcome {
    Overshoot,
    Undershoot,
    Converged,
}

/// Outward shooting solution of the static equation.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonProfile {
    pub model: ModelKind,
    /// Central slope `a = lim u/r`.
    pub slope: f64,
    /// Series coefficient of `r³`.
    pub c3: f64,
    /// Integration nodes, from `r_start` to where integration stopped.
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    /// `u'` at the nodes.
    pub du: Vec<f64>,
    pub dr: f64,
    pub r_max: f64,
    /// `|u(r_end) - π|` at the last integrated node.
    pub gap: f64,
    /// Integration produced non-finite values.
    pub blew_up: bool,
}

/// `r³` coefficient of the regular series with central slope `a`.
pub fn series_cubic(model: ModelKind, a: f64) -> f64 {
    let a3 = a * a * a;
    match model {
        ModelKind::AdkinsNappi => 2.0 / 15.0 * (a3 * a * a - a3),
        ModelKind::WaveMap => -2.0 / 15.0 * a3,
        ModelKind::Linear => 0.0,
    }
}

#[inline]
fn rhs(model: ModelKind, r: f64, u: f64, w: f64) -> (f64, f64) {
    (w, -2.0 * w / r + model.force(u, r))
}

/// Shoot the Adkins–Nappi static equation with central slope `a`.
pub fn shoot(a: f64, r_max: f64, dr: f64) -> Result<(SolitonProfile, ShootOutcome)> {
    shoot_with(ModelKind::AdkinsNappi, a, r_max, dr, DEFAULT_GAP_TOL)
}

/// Shoot `model`'s static equation with central slope `a`; `tol` is the
/// boundary gap accepted as converged.
pub fn shoot_with(
    model: ModelKind,
    a: f64,
    r_max: f64,
    dr: f64,
    tol: f64,
) -> Result<(SolitonProfile, ShootOutcome)> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("slope must be non-negative, got {a}")));
    }
    let r_start = START_STEPS * dr;
    if !(dr > 0.0 && r_max > r_start) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < 10 dr < r_max, got dr = {dr}, r_max = {r_max}"
        )));
    }
    let steps = ((r_max - r_start) / dr).ceil() as usize;
    let h = (r_max - r_start) / steps as f64;
    let c3 = series_cubic(model, a);
    let (mut u, mut w) = (a * r_start + c3 * r_start.powi(3), a + 3.0 * c3 * r_start * r_start);
    let mut prof = SolitonProfile {
        model,
        slope: a,
        c3,
        r: Vec::with_capacity(steps + 1),
        u: Vec::with_capacity(steps + 1),
        du: Vec::with_capacity(steps + 1),
        dr: h,
        r_max,
        gap: 0.0,
        blew_up: false,
    };
    prof.r.push(r_start);
    prof.u.push(u);
    prof.du.push(w);
    let mut outcome = None;
    for k in 0..steps {
        let r = r_start + k as f64 * h;
        let (k1u, k1w) = rhs(model, r, u, w);
        let (k2u, k2w) = rhs(model, r + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w);
        let (k3u, k3w) = rhs(model, r + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w);
        let (k4u, k4w) = rhs(model, r + h, u + h * k3u, w + h * k3w);
        u += h / 6.0 * (k1u + 2.0 * (k2u + k3u) + k4u);
        w += h / 6.0 * (k1w + 2.0 * (k2w + k3w) + k4w);
        if !(u.is_finite() && w.is_finite()) {
            prof.blew_up = true;
            outcome = Some(ShootOutcome::Overshoot);
            break;
        }
        prof.r.push(r_start + (k + 1) as f64 * h);
        prof.u.push(u);
        prof.du.push(w);
        if u > PI + OVERSHOOT_MARGIN {
            outcome = Some(ShootOutcome::Overshoot);
            break;
        }
        if w < 0.0 && u < PI - UNDERSHOOT_MARGIN {
            outcome = Some(ShootOutcome::Undershoot);
            break;
        }
    }
    let last = *prof.u.last().unwrap();
    prof.gap = (last - PI).abs();
    let outcome = outcome.unwrap_or(if prof.gap < tol {
        ShootOutcome::Converged
    } else {
        ShootOutcome::Undershoot
    });
    Ok((prof, outcome))
}

/// Bisect the central slope between an undershooting `a_lo` and an
/// overshooting `a_hi` until the bracket is narrower than `tol_a`.
pub fn find_soliton(a_lo: f64, a_hi: f64, r_max: f64, dr: f64, tol_a: f64) -> Result<SolitonProfile> {
    find_soliton_with(ModelKind::AdkinsNappi, a_lo, a_hi, r_max, dr, tol_a).map(|(p, _)| p)
}

/// [`find_soliton`] for any model, also returning the number of bisections.
pub fn find_soliton_with(
    model: ModelKind,
    mut a_lo: f64,
    mut a_hi: f64,
    r_max: f64,
    dr: f64,
    tol_a: f64,
) -> Result<(SolitonProfile, usize)> {
    if !(tol_a > 0.0 && a_hi > a_lo) {
        return Err(Error::InvalidBracket(format!(
            "need a_lo < a_hi and tol_a > 0, got [{a_lo}, {a_hi}], {tol_a}"
        )));
    }
    let classify = |a| shoot_with(model, a, r_max, dr, DEFAULT_GAP_TOL).map(|(_, o)| o);
    let (lo, hi) = (classify(a_lo)?, classify(a_hi)?);
    if lo != ShootOutcome::Undershoot || hi != ShootOutcome::Overshoot {
        return Err(Error::InvalidBracket(format!(
            "slope {a_lo} gives {lo:?} and {a_hi} gives {hi:?}; need Undershoot/Overshoot"
        )));
    }
    let mut iterations = 0;
    while a_hi - a_lo >= tol_a {
        let mid = 0.5 * (a_lo + a_hi);
        if mid <= a_lo || mid >= a_hi {
            break;
        }
        match classify(mid)? {
            ShootOutcome::Overshoot => a_hi = mid,
            _ => a_lo = mid,
        }
        iterations += 1;
    }
    let (p, _) = shoot_with(model, 0.5 * (a_lo + a_hi), r_max, dr, DEFAULT_GAP_TOL)?;
    Ok((p, iterations))
}

/// Adkins–Nappi soliton on `[0, r_max]` from the default bracket.
pub fn default_soliton(r_max: f64, dr: f64) -> Result<SolitonProfile> {
    find_soliton(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, r_max, dr, 1e-12)
}

impl SolitonProfile {
    pub fn r_start(&self) -> f64 {
        self.r[0]
    }

    pub fn r_end(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// `u(r)` for `0 ≤ r ≤ r_end`: the series below `r_start`, cubic Hermite
    /// interpolation of `(u, u')` between nodes, and the last value beyond.
    pub fn sample(&self, r: f64) -> f64 {
        if r <= self.r_start() {
            return self.slope * r + self.c3 * r * r * r;
        }
        let x = (r - self.r_start()) / self.dr;
        let k = x.floor() as usize;
        if k + 1 >= self.r.len() {
            return *self.u.last().unwrap();
        }
        let s = x - k as f64;
        let (h00, h10) = ((1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s), s * (1.0 - s) * (1.0 - s));
        let (h01, h11) = (s * s * (3.0 - 2.0 * s), s * s * (s - 1.0));
        h00 * self.u[k] + h10 * self.dr * self.du[k] + h01 * self.u[k + 1] + h11 * self.dr * self.du[k + 1]
    }

    /// Energy `∫ [½u'² + P] r² dr` over `[0, r_end]` by the midpoint rule.
    ///
    /// The tail beyond `r_end` (about `π²/(2 r_end)` for the `1/r²` decay of
    /// `π - u`) is not included.
    pub fn energy_midpoint(&self) -> f64 {
        let m = self.model;
        let mut e = self.core_energy();
        for k in 0..self.r.len() - 1 {
            let r = 0.5 * (self.r[k] + self.r[k + 1]);
            let u = 0.5 * (self.u[k] + self.u[k + 1]);
            let du = (self.u[k + 1] - self.u[k]) / self.dr;
            e += (0.5 * du * du + m.potential(u, r)) * r * r * self.dr;
        }
        e
    }

    /// Energy over `[0, r_end]` by composite Simpson on the nodal values.
    pub fn energy_simpson(&self) -> f64 {
        let m = self.model;
        let f: Vec<f64> = (0..self.r.len())
            .map(|k| (0.5 * self.du[k] * self.du[k] + m.potential(self.u[k], self.r[k])) * self.r[k] * self.r[k])
            .collect();
        self.core_energy() + simpson(&f, self.dr)
    }

    /// `[0, r_start]` from the series, by Gauss–Legendre.
    fn core_energy(&self) -> f64 {
        let (a, c3, m) = (self.slope, self.c3, self.model);
        let rs = self.r_start();
        // 5-point Gauss–Legendre on [0, rs]
        const X: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.236_926_885_056_189_1,
            0.478_628_670_499_366_5,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
        ];
        X.iter()
            .zip(W.iter())
            .map(|(&x, &w)| {
                let r = 0.5 * rs * (x + 1.0);
                let u = a * r + c3 * r * r * r;
                let du = a + 3.0 * c3 * r * r;
                0.5 * rs * w * (0.5 * du * du + m.potential(u, r)) * r * r
            })
            .sum()
    }

    /// CSV `r,u` with a comment header carrying slope, dr, r_max and gap.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# slope={:.16e} dr={:.16e} r_max={:.16e} gap={:.16e}",
            self.slope, self.dr, self.r_max, self.gap
        );
        out.push_str("r,u\n");
        for (r, u) in self.r.iter().zip(&self.u) {
            let _ = writeln!(out, "{r:.16e},{u:.16e}");
        }
        out
    }
}

fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    match n {
        0 => 0.0,
        1 => 0.5 * h * (f[0] + f[1]),
        2 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        _ => {
            // an odd number of intervals ends with a 3/8 panel
            let even = if n.is_multiple_of(2) { n } else { n - 3 };
            let mut s = f[0] + f[even];
            for k in 1..even {
                s += if k % 2 == 1 { 4.0 * f[k] } else { 2.0 * f[k] };
            }
            let mut total = h / 3.0 * s;
            if even < n {
                let g = &f[even..];
                total += 3.0 * h / 8.0 * (g[0] + 3.0 * g[1] + 3.0 * g[2] + g[3]);
            }
            total
        }
    }
}

/// Midpoint-rule energy of the profile over `[0, r_end]`.
pub fn soliton_energy(p: &SolitonProfile) -> f64 {
    p.energy_midpoint()
}

/// `max |u'' + (2/r) u' - N(u, r)|` over interior nodes, with `u''` from
/// centred second differences of the nodal values and `u'` the integrated
/// slope.
///
/// Differencing `u'` as well would leave an `O(dr²/r)` error in `(2/r) u'`,
/// which is `O(dr)` at the first node `r = 10 dr`.
pub fn ode_residual(p: &SolitonProfile) -> f64 {
    let h = p.dr;
    (1..p.u.len().saturating_sub(1))
        .map(|k| {
            let r = p.r[k];
            let upp = (p.u[k + 1] - 2.0 * p.u[k] + p.u[k - 1]) / (h * h);
            (upp + 2.0 * p.du[k] / r - p.model.force(p.u[k], r)).abs()
        })
        .fold(0.0, f64::max)
}
