use proptest::prelude::*;

use outflow_core::burgers::BurgersProfile;
use outflow_core::io::{pattern_table, Table};
use outflow_core::solver::Grid;
use outflow_core::waves::{r3_connect, r3_state, RarefactionMode, RarefactionWave, WavePattern};
use outflow_core::{FluidState, GasModel};

fn gas(gamma: f64) -> GasModel {
    GasModel::new(1.0, gamma, 1.0, 1.0).unwrap()
}

/// Riemann invariants of the 3-family: `rho^(1-gamma) theta` and `u - k c`.
fn invariants(g: &GasModel, s: &FluidState) -> (f64, f64) {
    let k = 2.0 / (g.gamma() - 1.0);
    (s.rho().powf(1.0 - g.gamma()) * s.theta(), s.u() - k * g.sound_speed(s.theta()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn burgers_solution_is_bounded_and_monotone(
        wm in -3.0f64..1.0, jump in 0.0f64..3.0, q in 16u32..40, t in 0.0f64..500.0,
    ) {
        let p = BurgersProfile::new(wm, wm + jump, q).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..400 {
            let x = -20.0 + i as f64 * (60.0 + 4.0 * t) / 400.0;
            let (w, _) = p.exact_solution(t, x).unwrap();
            prop_assert!(w >= wm - 1e-14 && w <= wm + jump + 1e-14);
            prop_assert!(w >= prev - 1e-14);
            prev = w;
        }
    }

    #[test]
    fn connect_then_state_round_trips(
        gamma in 1.1f64..2.5, rho in 0.2f64..5.0, u in -2.0f64..2.0, theta in 0.2f64..5.0, frac in 0.05f64..1.0,
    ) {
        let g = gas(gamma);
        let right = FluidState::new(rho, u, theta).unwrap();
        let theta_minus = frac * theta;
        let (rho_minus, u_minus) = r3_connect(&g, &right, theta_minus).unwrap();
        let left = FluidState::new(rho_minus, u_minus, theta_minus).unwrap();
        let back = r3_state(&g, &left, theta).unwrap();
        prop_assert!((back.rho() - rho).abs() <= 1e-12 * rho);
        prop_assert!((back.u() - u).abs() <= 1e-12 * (1.0 + u.abs()));
        let (a, b) = (invariants(&g, &left), invariants(&g, &right));
        prop_assert!((a.0 - b.0).abs() <= 1e-12 * a.0);
        prop_assert!((a.1 - b.1).abs() <= 1e-12 * (1.0 + a.1.abs()));
    }

    #[test]
    fn smoothed_wave_keeps_riemann_invariants(
        gamma in 1.1f64..2.5, u in -0.5f64..2.0, frac in 0.3f64..1.0, t in 0.0f64..200.0,
    ) {
        let g = gas(gamma);
        let right = FluidState::new(1.0, u, 1.0).unwrap();
        let w = RarefactionWave::from_right(g, right, frac, RarefactionMode::Smoothed, 16).unwrap();
        let r = invariants(&g, &right);
        let mut prev = 0.0;
        for i in 0..200 {
            let s = w.smoothed_at(t, i as f64 * (80.0 + 3.0 * t) / 200.0).unwrap();
            let v = invariants(&g, &s);
            prop_assert!((v.0 - r.0).abs() <= 1e-11 * r.0);
            prop_assert!((v.1 - r.1).abs() <= 1e-11 * (1.0 + r.1.abs()));
            prop_assert!(s.theta() >= prev - 1e-14);
            prev = s.theta();
        }
    }
}

#[test]
fn exact_fan_table_round_trips_through_text() {
    let g = GasModel::default();
    let right = FluidState::new(1.0, 0.5, 1.0).unwrap();
    let w = RarefactionWave::from_right(g, right, 0.7, RarefactionMode::ExactFan, 16).unwrap();
    let grid = Grid::new(30.0, 60).unwrap();
    let table = pattern_table(&WavePattern::Rarefaction(w), &grid, 5.0).unwrap();
    let mut buf = Vec::new();
    table.write_to(&mut buf).unwrap();
    let back = Table::read_from(buf.as_slice()).unwrap();
    assert_eq!(back, table);
    let x = back.column("x").unwrap();
    let u = back.column("u").unwrap();
    for (xi, ui) in x.iter().zip(&u) {
        assert_eq!(*ui, w.eval(5.0, *xi).unwrap().u());
    }
}
