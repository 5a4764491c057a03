mod common;

use std::f64::consts::PI;

use common::*;
use skwv::data::InitialData;
use skwv::diagnostics::{charge_series, energy_series};
use skwv::exact::{manufactured_forcing, shatah_toward_vertex, shatah_u, shatah_u_tautau, ExactSolution};
use skwv::*;

#[test]
fn static_soliton_is_a_discrete_equilibrium() {
    let errs: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let g = make_grid(20.0, n).unwrap();
            let s = InitialData::Soliton.build(g, ModelKind::AdkinsNappi).unwrap();
            let (du, dv) = rhs(&s);
            assert!(du.iter().all(|&x| x == 0.0));
            weighted_l2(&g, &dv, 12.0)
        })
        .collect();
    for q in ratios(&errs) {
        assert!(q > 3.5, "{errs:?}");
    }
}

#[test]
fn self_similar_rhs_matches_exact_acceleration() {
    let errs: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let g = make_grid(4.0, n).unwrap();
            let s = shatah_toward_vertex(1.0, g).unwrap();
            let (_, dv) = rhs(&s);
            let e: Vec<f64> = (0..n).map(|j| dv[j] - shatah_u_tautau(1.0, g.r(j))).collect();
            weighted_l2(&g, &e, 3.9)
        })
        .collect();
    for q in ratios(&errs) {
        assert!(q > 3.5, "{errs:?}");
    }
}

#[test]
fn outgoing_linear_pulse_follows_dalembert() {
    let pulse = ExactSolution::LinearRadialPulse { amplitude: 1.0, center: 3.0, width: 0.5 };
    let errs: Vec<f64> = [256, 512, 1024]
        .iter()
        .map(|&n| {
            let g = make_grid(8.0, n).unwrap();
            let s = pulse.state(g, ModelKind::Linear, 0.0).unwrap();
            let (rep, _) = evolve(&s, &EvolveOptions::new(2.0)).unwrap();
            let e: Vec<f64> = (0..n).map(|j| rep.final_state.u[j] - pulse.u(2.0, g.r(j))).collect();
            max_abs(&g, &e, 8.0)
        })
        .collect();
    assert!(errs[2] < 1e-4);
    for q in ratios(&errs) {
        assert!(q > 3.5, "{errs:?}");
    }
}

#[test]
fn self_similar_evolution_tracks_exact_solution() {
    let errs: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let g = make_grid(4.0, n).unwrap();
            let s = shatah_toward_vertex(1.0, g).unwrap();
            let (rep, _) = evolve(&s, &EvolveOptions::new(0.5)).unwrap();
            assert!(rep.singularity.is_none());
            let e: Vec<f64> = (0..n).map(|j| rep.final_state.u[j] - shatah_u(0.5, g.r(j)).unwrap()).collect();
            max_abs(&g, &e, 3.0)
        })
        .collect();
    for q in ratios(&errs) {
        assert!(q > 3.5, "{errs:?}");
    }
}

#[test]
fn manufactured_solution_with_wave_map_nonlinearity() {
    let ex = ExactSolution::Manufactured;
    let errs: Vec<f64> = [256, 512, 1024]
        .iter()
        .map(|&n| {
            let g = make_grid(8.0, n).unwrap();
            let f = manufactured_forcing(ex, ModelKind::WaveMap);
            let s = ex.state(g, ModelKind::WaveMap, 0.0).unwrap();
            let (rep, _) = evolve_forced(&s, &EvolveOptions::new(2.0), Some(&f)).unwrap();
            let e: Vec<f64> = (0..n).map(|j| rep.final_state.u[j] - ex.u(2.0, g.r(j))).collect();
            max_abs(&g, &e, 8.0)
        })
        .collect();
    for q in ratios(&errs) {
        assert!(q > 3.5, "{errs:?}");
    }
}

#[test]
fn global_error_against_fine_reference_is_second_order() {
    let t_end = 3.0;
    let finals: Vec<(GridSpec, FieldState)> = [256, 512, 1024, 2048, 4096]
        .iter()
        .map(|&n| {
            let g = make_grid(12.0, n).unwrap();
            let s = PULSE.build(g, ModelKind::AdkinsNappi).unwrap();
            (g, evolve(&s, &EvolveOptions::new(t_end)).unwrap().0.final_state)
        })
        .collect();
    // node j of a grid sits midway between nodes 4j+1 and 4j+2 of the 4x finer grid
    let errs: Vec<f64> = (0..3)
        .map(|k| {
            let (g, coarse) = &finals[k];
            let fine = &finals[k + 2].1;
            let e: Vec<f64> = (0..g.n_cells())
                .map(|j| coarse.u[j] - 0.5 * (fine.u[4 * j + 1] + fine.u[4 * j + 2]))
                .collect();
            max_abs(g, &e, 12.0)
        })
        .collect();
    for q in ratios(&errs) {
        assert!(q > 3.5, "{errs:?}");
    }
}

#[test]
fn energy_drift_vanishes_at_second_order() {
    let drift: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let rec = record(&PULSE, ModelKind::AdkinsNappi, 20.0, n, 5.0);
            let e = energy_series(&rec).values();
            e.iter().map(|x| (x - e[0]).abs()).fold(0.0, f64::max) / e[0].max(1.0)
        })
        .collect();
    for q in ratios(&drift) {
        assert!(q > 3.5, "{drift:?}");
    }
}

fn bump(r: f64) -> f64 {
    let x = r - 4.0;
    if x.abs() >= 1.0 {
        0.0
    } else {
        0.3 * r * (1.0 - x * x).powi(6)
    }
}

#[test]
fn compact_data_stay_inside_the_light_cone() {
    let t_end = 5.0;
    for n in [512, 1024, 2048] {
        let g = make_grid(20.0, n).unwrap();
        let s = FieldState::from_fn(g, ModelKind::AdkinsNappi, 0.0, bump, |_| 0.0).unwrap();
        let (rep, _) = evolve(&s, &EvolveOptions::new(t_end)).unwrap();
        let edge = 5.0 + t_end + 2.0 * g.dr() + front_margin(g.dr(), t_end);
        let outside = (0..n)
            .filter(|&j| g.r(j) > edge)
            .map(|j| rep.final_state.u[j].abs().max(rep.final_state.v[j].abs()))
            .fold(0.0, f64::max);
        assert!(outside <= 1e-12, "n = {n}: {outside}");
    }
}

#[test]
fn outer_boundary_cannot_reach_the_causal_buffer() {
    let t_end = 5.0;
    let data = |r: f64| 0.05 * r * (-(r - 18.0f64).powi(2)).exp();
    for n in [512, 1024, 2048] {
        let g = make_grid(20.0, n).unwrap();
        let s = FieldState::from_fn(g, ModelKind::AdkinsNappi, 0.0, data, |_| 0.0).unwrap();
        let (a, _) = evolve(&s, &EvolveOptions::new(t_end)).unwrap();
        let (b, _) = evolve(&s.clone().with_boundary(Boundary::Neumann), &EvolveOptions::new(t_end)).unwrap();
        let buffer = 20.0 - t_end - front_margin(g.dr(), t_end);
        let diff = (0..n)
            .filter(|&j| g.r(j) <= buffer)
            .map(|j| {
                (a.final_state.u[j] - b.final_state.u[j])
                    .abs()
                    .max((a.final_state.v[j] - b.final_state.v[j]).abs())
            })
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12, "n = {n}: {diff}");
        // the two conditions do differ near the boundary
        assert!((a.final_state.u[n - 1] - b.final_state.u[n - 1]).abs() > 1e-3);
    }
}

#[test]
fn evolution_is_bitwise_deterministic_across_threads() {
    let g = make_grid(10.0, 512).unwrap();
    let s = InitialData::SolitonPerturbed { amplitude: 0.3, center: 2.0, width: 0.5 }
        .build(g, ModelKind::AdkinsNappi)
        .unwrap();
    let opts = EvolveOptions::new(2.0).record_every(7);
    let (rep, rec) = evolve(&s, &opts).unwrap();
    let others: Vec<_> = std::thread::scope(|scope| {
        let hs: Vec<_> = (0..3).map(|_| scope.spawn(|| evolve(&s, &opts).unwrap())).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for (r, c) in others {
        assert_eq!(r.steps, rep.steps);
        assert_eq!(c, rec);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&r.final_state.u), bits(&rep.final_state.u));
        assert_eq!(bits(&r.final_state.v), bits(&rep.final_state.v));
    }
}

#[test]
fn records_first_last_and_cadence() {
    let g = make_grid(10.0, 128).unwrap();
    let s = PULSE.build(g, ModelKind::WaveMap).unwrap();
    let (rep, rec) = evolve(&s, &EvolveOptions::new(1.0).record_every(7)).unwrap();
    assert_eq!(rec.first_time(), 0.0);
    assert_eq!(rec.last_time(), 1.0);
    assert_eq!(rec.len(), 1 + rep.steps / 7 + usize::from(rep.steps % 7 != 0));
}

#[test]
fn degree_one_runs_keep_unit_charge() {
    let rec = record(&InitialData::Stereographic { lambda: 0.7 }, ModelKind::AdkinsNappi, 10.0, 512, 4.0);
    for q in charge_series(&rec).values() {
        assert!((q - 1.0).abs() < 1e-12);
    }
    assert!(rec.snapshots().iter().all(|s| s.u[511] == PI));
}

#[test]
fn shared_types_cross_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<FieldState>();
    assert_send_sync::<SpacetimeRecord>();
    assert_send_sync::<GridSpec>();
}
