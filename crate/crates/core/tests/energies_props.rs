//! Energy functionals on seeded rotating geometries.

mod common;

use std::f64::consts::PI;

use proptest::prelude::*;

use freesurf::disk_spectral::{make_cutoffs, Grid, GridSpec, VectorFieldDisk};
use freesurf::elliptic::{pressure_solve, taylor_sign, SolverParams};
use freesurf::energies::{
    boundary_traces, energy_e, energy_e2, energy_e3, energy_report, reconstruct_x_bound, top_normal_trace, EnergyContext,
};
use freesurf::geometry::{boundary_geometry, jacobian, FlowState};

use common::random_map;

/// Seeded map carrying the Eulerian rotation v = ω(−x₂, x₁).
fn rotating(grid: &Grid, seed: u64, omega: f64) -> FlowState {
    let x = random_map(grid, seed, 0.02);
    let v = VectorFieldDisk::new(x.c[1].scale(-omega), x.c[0].scale(omega)).unwrap();
    FlowState::new(0.0, x, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn running_energy_is_monotone(seeds in proptest::collection::vec(any::<u64>(), 4)) {
        let g = GridSpec::new(24, 24).unwrap();
        let mut sup = 0.0;
        for s in seeds {
            let st = rotating(&g, s, 0.4);
            let jac = jacobian(&st.x).unwrap();
            let (e, comp) = energy_e(&st, &jac, sup).unwrap();
            prop_assert!(e >= sup);
            prop_assert!(e >= comp.norm_v_5 + comp.norm_x_5p5 + comp.norm_curl_4p5);
            sup = e;
        }
    }

    #[test]
    fn boundary_energy_is_nonnegative_and_bounds_trace(seed in any::<u64>(), omega in -0.6f64..0.6) {
        let g = GridSpec::new(32, 32).unwrap();
        let st = rotating(&g, seed, omega);
        let (_, grad_p) = pressure_solve(&st, -1.0, &SolverParams::default()).unwrap();
        let geom = boundary_geometry(&st.x).unwrap();
        let c0 = taylor_sign(&grad_p, &geom);
        prop_assert!(c0 > 0.0, "c0 = {c0}");
        let e3 = energy_e3(&geom, &grad_p);
        prop_assert!(e3 >= 0.0, "E3 = {e3}");
        let cutoffs = make_cutoffs(0.5, 1, &g).unwrap();
        let jac = jacobian(&st.x).unwrap();
        let ctx = EnergyContext { jac: &jac, geom: &geom, grad_p: &grad_p, cutoffs: &cutoffs };
        let report = energy_report(&st, &ctx, 0.0).unwrap();
        let bound = reconstruct_x_bound(report.e3, report.e4, report.c0, &boundary_traces(&geom)).unwrap();
        prop_assert!(bound >= top_normal_trace(&geom));
    }

    #[test]
    fn constant_curl_gives_constant_e2(seed in any::<u64>(), omega in -1.0f64..1.0) {
        let g = GridSpec::new(32, 32).unwrap();
        let st = rotating(&g, seed, omega);
        let jac = jacobian(&st.x).unwrap();
        let e2 = energy_e2(&st, &jac).unwrap();
        let want = 2.0 * omega.abs() * PI.sqrt();
        prop_assert!((e2 - want).abs() <= 1e-6 * want.max(1e-3), "E2 = {e2}, expected {want}");
    }
}
