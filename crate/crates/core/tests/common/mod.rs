//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use freesurf::disk_spectral::{Grid, VectorFieldDisk};
use freesurf::dynamics::harmonic_flow_map;
use freesurf::geometry::FlowState;

/// Area-preserving polynomial map R(β)(y₁ + a y₂², y₂).
pub fn shear_map(grid: &Grid, a: f64, beta: f64) -> VectorFieldDisk {
    let (s, c) = beta.sin_cos();
    VectorFieldDisk::from_cartesian(grid, |y1, y2| {
        let u = y1 + a * y2 * y2;
        [c * u - s * y2, s * u + c * y2]
    })
}

/// Composition of two seeded harmonic flows, modes in [2, 6], amplitudes ≤ `amp`.
pub fn random_map(grid: &Grid, seed: u64, amp: f64) -> VectorFieldDisk {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k1: u32 = rng.gen_range(2..=6);
    let k2: u32 = rng.gen_range(2..=6);
    let a1: f64 = rng.gen_range(-amp..=amp);
    let a2: f64 = rng.gen_range(-amp..=amp);
    VectorFieldDisk::from_cartesian(grid, |a, b| harmonic_flow_map(harmonic_flow_map([a, b], k1, a1), k2, a2))
}

pub fn at_rest(x: VectorFieldDisk) -> FlowState {
    let g = x.grid().clone();
    FlowState::new(0.0, x, VectorFieldDisk::zeros(&g)).unwrap()
}

/// Seeded trigonometric polynomial terms (k, power, a, b) with power = k + 2n.
pub fn random_terms(seed: u64, max_mode: usize, max_degree: usize) -> Vec<(f64, i32, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    for k in 0..=max_mode {
        for n in 0..=max_degree {
            t.push((k as f64, (k + 2 * n) as i32, rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)));
        }
    }
    t
}

pub fn eval_terms(terms: &[(f64, i32, f64, f64)], rho: f64, theta: f64) -> f64 {
    terms
        .iter()
        .map(|&(k, p, a, b)| rho.powi(p) * (a * (k * theta).cos() + b * (k * theta).sin()))
        .sum()
}
