mod common;

use std::f64::consts::SQRT_2;

use common::*;
use skwv::data::InitialData;
use skwv::diagnostics::{
    ball_cone_defect, charge_series, cone_decay_series, flux_identity_defect, DiagnosticSeries,
};
use skwv::model::positivity_term;
use skwv::multiplier::ALL_PRESETS;
use skwv::*;

#[test]
fn energy_preset_is_the_cone_flux_identity() {
    let rec = identity_record(512);
    let b = multiplier_balance(&rec, VERTEX, T0, T1, MultiplierTriple::Energy).unwrap();
    assert_eq!(b.bulk, 0.0);
    assert_eq!(b.corners, 0.0);
    let defect = cone_energy(&rec, VERTEX, T1).unwrap()
        - cone_energy(&rec, VERTEX, T0).unwrap()
        - flux(&rec, VERTEX, T0, T1).unwrap();
    assert!((b.residual() - SQRT_2 * defect.abs()).abs() < 1e-14 * b.scale());
}

#[test]
fn corner_terms_are_needed_when_c_is_nonzero() {
    let without: Vec<f64> = [512, 1024]
        .iter()
        .map(|&n| {
            let b = multiplier_balance(&identity_record(n), VERTEX, T0, T1, MultiplierTriple::Scaling).unwrap();
            (b.lhs() - (b.cone_t1 - b.cone_t0)).abs()
        })
        .collect();
    // dropping the corners leaves an O(1) mismatch that does not shrink
    assert!(without[1] > 0.5 * without[0] && without[1] > 1e-3, "{without:?}");
}

#[test]
fn flux_is_additive_and_nonnegative() {
    let rec = identity_record(512);
    let (a, b, c) = (
        flux(&rec, VERTEX, 0.3, 0.9).unwrap(),
        flux(&rec, VERTEX, 0.9, 1.7).unwrap(),
        flux(&rec, VERTEX, 0.3, 1.7).unwrap(),
    );
    assert!(a >= 0.0 && b >= 0.0);
    assert!((a + b - c).abs() <= 1e-13 * c);
}

#[test]
fn bulk_integral_is_additive_over_trapezoids() {
    let rec = identity_record(512);
    for m in ALL_PRESETS {
        let whole = bulk_i_integral(&rec, VERTEX, T0, T1, m).unwrap();
        let parts = bulk_i_integral(&rec, VERTEX, T0, 1.0, m).unwrap()
            + bulk_i_integral(&rec, VERTEX, 1.0, T1, m).unwrap();
        assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole.abs()), "{m:?}: {whole} vs {parts}");
    }
}

#[test]
fn quadratures_are_linear_in_the_data() {
    // the linear control makes every energy quadratic in the field
    let g = make_grid(16.0, 512).unwrap();
    let s = PULSE.build(g, ModelKind::Linear).unwrap();
    let (_, rec) = evolve(&s, &EvolveOptions::new(VERTEX)).unwrap();
    let mut doubled = rec.clone();
    for snap in doubled.snapshots_mut() {
        snap.u.iter_mut().chain(snap.v.iter_mut()).for_each(|x| *x *= 2.0);
    }
    let pairs = [
        (ball_energy(&rec, 1.0, 8.0).unwrap(), ball_energy(&doubled, 1.0, 8.0).unwrap()),
        (cone_energy(&rec, VERTEX, T1).unwrap(), cone_energy(&doubled, VERTEX, T1).unwrap()),
        (flux(&rec, VERTEX, T0, T1).unwrap(), flux(&doubled, VERTEX, T0, T1).unwrap()),
    ];
    for (a, b) in pairs {
        assert!((b - 4.0 * a).abs() <= 1e-13 * b.abs(), "{a} {b}");
    }
}

#[test]
fn local_energy_is_monotone_in_the_radius() {
    let rec = identity_record(1024);
    let total = ball_energy(&rec, 0.0, IDENTITY_R_MAX).unwrap();
    let e: Vec<f64> = (1..=40).map(|k| local_energy(&rec, VERTEX, 0.1 * k as f64).unwrap()).collect();
    for w in e.windows(2) {
        assert!(w[1] >= w[0] - 1e-3 * total);
    }
}

#[test]
fn identity_defects_shrink_under_refinement() {
    let runs: Vec<_> = [512, 1024].iter().map(|&n| identity_record(n)).collect();
    let fl: Vec<f64> = runs.iter().map(|r| flux_identity_defect(r, VERTEX, 0.2, 2.0).unwrap().abs()).collect();
    let bc: Vec<f64> = runs.iter().map(|r| ball_cone_defect(r, VERTEX, 1.8).unwrap().abs()).collect();
    assert!(fl[0] / fl[1] > 3.5, "{fl:?}");
    assert!(bc[0] / bc[1] > 3.5, "{bc:?}");
}

#[test]
fn tampered_record_fails_the_identities() {
    let rec = identity_record(1024);
    let total = ball_energy(&rec, 0.0, IDENTITY_R_MAX).unwrap();
    let clean = flux_identity_defect(&rec, VERTEX, T0, T1).unwrap().abs();
    let clean_scaling = multiplier_identity_residual(&rec, VERTEX, T0, T1, MultiplierTriple::Scaling).unwrap();
    let mut bad = rec.clone();
    // perturb the snapshot holding the ball of radius T1
    let i = bad.snapshots().iter().position(|s| s.t >= VERTEX - T1 - 1e-12).unwrap();
    let g = *bad.grid();
    let snap = &mut bad.snapshots_mut()[i];
    for j in 0..g.n_cells() {
        snap.u[j] += 0.05 * (-((g.r(j) - 1.0) / 0.1).powi(2)).exp();
    }
    let tampered = flux_identity_defect(&bad, VERTEX, T0, T1).unwrap().abs();
    assert!(clean < 1e-5 * total);
    assert!(tampered > 1e-3 * total, "{tampered}");
    // a single time level enters the bulk with weight dt; spoil a short window
    for snap in bad.snapshots_mut().iter_mut().filter(|s| (s.t - 2.5).abs() < 0.1) {
        for j in 0..g.n_cells() {
            snap.u[j] += 0.05 * (-((g.r(j) - 1.0) / 0.1).powi(2)).exp();
        }
    }
    let scaling = multiplier_identity_residual(&bad, VERTEX, T0, T1, MultiplierTriple::Scaling).unwrap();
    assert!(scaling > 10.0 * clean_scaling, "{scaling} vs {clean_scaling}");
}

#[test]
fn inequalities_hold_on_a_smooth_record_for_every_preset() {
    let rec = identity_record(512);
    for m in ALL_PRESETS {
        let rep = gh_bounds_report(&rec, VERTEX, m, 20_000, 11);
        assert_eq!(rep.checked, 20_000);
        assert_eq!(rep.violations, 0, "{m:?}");
    }
}

#[test]
fn weighted_cone_energy_decays_toward_the_vertex() {
    let rec = identity_record(1024);
    let s = cone_decay_series(&rec, VERTEX, 10).unwrap();
    assert!(s.is_monotone());
    let v = s.values();
    assert!(v.windows(2).all(|w| w[1] <= w[0]));
    assert!(v[v.len() - 1] < 1e-2 * v[0]);
    let w = weighted_local_energy(&rec, VERTEX, 0.05).unwrap();
    assert!((0.0..1e-3).contains(&w));
}

#[test]
fn series_csv_round_trips() {
    let rec = identity_record(512);
    let s = concentration_series(&rec, VERTEX, 9).unwrap();
    assert!(s.is_monotone());
    let back = DiagnosticSeries::from_csv("local_energy", &s.to_csv()).unwrap();
    assert_eq!(back, s);
    let sup = sup_norm_series(&rec);
    assert_eq!(sup.points.len(), rec.len());
}

#[test]
fn positivity_along_evolved_fields() {
    let rec = record(&InitialData::Stereographic { lambda: 0.5 }, ModelKind::AdkinsNappi, 10.0, 512, 3.0);
    for s in rec.snapshots() {
        assert!(s.u.iter().all(|&u| positivity_term(u) >= 0.0));
    }
    for q in charge_series(&rec).values() {
        assert!((q - 1.0).abs() < 1e-12);
    }
}
