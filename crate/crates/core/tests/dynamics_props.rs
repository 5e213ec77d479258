//! Conservation and reversibility of the time stepper.

use std::f64::consts::PI;

use freesurf::disk_spectral::{GridSpec, VectorFieldDisk};
use freesurf::dynamics::{material_vorticity, step, vorticity_drift, InitialCondition, StepParams};
use freesurf::geometry::{boundary_geometry, jacobian, FlowState};

fn perturbed(k: usize, m: usize) -> FlowState {
    let g = GridSpec::new(k, m).unwrap();
    InitialCondition::Perturbed {
        omega: 0.5,
        mode: 3,
        amplitude: 1e-2,
    }
    .build(&g)
    .unwrap()
}

fn run(mut s: FlowState, params: &StepParams, n: usize) -> Vec<FlowState> {
    let mut out = vec![s.clone()];
    for _ in 0..n {
        s = step(&s, params).unwrap();
        out.push(s.clone());
    }
    out
}

fn reversed(s: &FlowState) -> FlowState {
    FlowState::new(s.t, s.x.clone(), s.v.scale(-1.0)).unwrap()
}

fn distance(a: &VectorFieldDisk, b: &VectorFieldDisk) -> f64 {
    (a - b).l2_norm()
}

#[test]
fn volume_is_conserved() {
    let params = StepParams { dt: 2e-3, ..StepParams::default() };
    let states = run(perturbed(16, 16), &params, 25);
    let d0 = jacobian(&states[0].x).unwrap().det_drift();
    for s in &states {
        let area = boundary_geometry(&s.x).unwrap().area();
        assert!((area - PI).abs() < 1e-9, "t = {}: area {area}", s.t);
        let drift = jacobian(&s.x).unwrap().det_drift();
        assert!(drift < d0 + 1e-9, "t = {}: det drift {drift:e}", s.t);
    }
}

#[test]
fn vorticity_is_conserved() {
    let params = StepParams { dt: 2e-3, ..StepParams::default() };
    let states = run(perturbed(16, 16), &params, 25);
    let series: Vec<_> = states.iter().map(|s| material_vorticity(s).unwrap()).collect();
    let drift = vorticity_drift(&series);
    assert!(drift < 1e-6, "vorticity drift {drift:e}");
}

#[test]
fn reversal_returns_to_start() {
    let n = 10;
    let coarse = StepParams { dt: 2e-3, ..StepParams::default() };
    let fine = StepParams { dt: 1e-3, ..StepParams::default() };
    let start = perturbed(16, 16);
    let forward = run(start.clone(), &coarse, n).pop().unwrap();
    let forward_fine = run(start.clone(), &fine, 2 * n).pop().unwrap();
    let one_way = distance(&forward.x, &forward_fine.x) + distance(&forward.v, &forward_fine.v);
    let back = reversed(&run(reversed(&forward), &coarse, n).pop().unwrap());
    let round_trip = distance(&back.x, &start.x) + distance(&back.v, &start.v);
    assert!(round_trip <= 100.0 * one_way.max(1e-14), "round trip {round_trip:e}, one way {one_way:e}");
}
