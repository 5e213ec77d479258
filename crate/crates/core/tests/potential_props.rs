//! Newtonian potential: direct quadrature, Eulerian residual and resolution stability.

mod common;

use freesurf::disk_spectral::{sobolev_norm_vector, GridSpec};
use freesurf::elliptic::SolverParams;
use freesurf::geometry::{div_curl, jacobian};
use freesurf::potential::{potential_at_point, solve_potential};

use common::random_map;

const PROBES: [(f64, f64); 8] = [
    (0.0, 0.0),
    (0.2, 0.3),
    (0.35, 1.9),
    (0.5, 3.0),
    (0.6, 4.4),
    (0.7, 5.6),
    (0.8, 0.9),
    (0.85, 2.6),
];

#[test]
fn interior_values_match_direct_quadrature() {
    let g = GridSpec::new(32, 32).unwrap();
    for seed in [3u64, 11, 29] {
        let x = random_map(&g, seed, 0.03);
        let res = solve_potential(&x, 1.0, &SolverParams::default()).unwrap();
        for &(r, t) in &PROBES {
            let y = [r * t.cos(), r * t.sin()];
            let direct = potential_at_point(&x, x.eval(y)).unwrap();
            let solved = res.phi.eval(y).re;
            assert!((direct - solved).abs() < 1e-6, "seed {seed} at {y:?}: {direct} vs {solved}");
        }
    }
}

#[test]
fn eulerian_laplacian_is_minus_sigma() {
    let g = GridSpec::new(32, 32).unwrap();
    let x = random_map(&g, 7, 0.03);
    let jac = jacobian(&x).unwrap();
    for sigma in [1.0, -1.0] {
        let res = solve_potential(&x, sigma, &SolverParams::default()).unwrap();
        let (div, curl) = div_curl(&res.grad_phi, &jac).unwrap();
        let div_err = div.physical_values().iter().map(|v| (v + sigma).abs()).fold(0.0, f64::max);
        let curl_err = curl.physical_values().iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(div_err < 1e-6, "sigma {sigma}: div residual {div_err:e}");
        assert!(curl_err < 1e-6, "sigma {sigma}: curl residual {curl_err:e}");
    }
}

#[test]
fn gradient_norm_is_resolution_stable() {
    let norms: Vec<f64> = [(24, 24), (32, 32), (40, 40)]
        .iter()
        .map(|&(k, m)| {
            let g = GridSpec::new(k, m).unwrap();
            let res = solve_potential(&random_map(&g, 5, 0.03), 1.0, &SolverParams::default()).unwrap();
            sobolev_norm_vector(&res.grad_phi, 5.0, None).unwrap()
        })
        .collect();
    for w in norms.windows(2) {
        assert!((w[0] - w[1]).abs() < 1e-4 * w[1], "{norms:?}");
    }
}
