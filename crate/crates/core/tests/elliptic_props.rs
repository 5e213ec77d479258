//! Maximum principle, rotation equivariance and symmetry of the variable-coefficient solver.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freesurf::disk_spectral::{BoundaryFieldCircle, GridSpec, ScalarFieldDisk, VectorFieldDisk};
use freesurf::elliptic::{solve_dirichlet, Coefficient, EllipticProblem, SolverParams};
use freesurf::geometry::jacobian;
use freesurf::hodge::random_trig_field;

use common::shear_map;

#[test]
fn maximum_principle() {
    let g = GridSpec::new(24, 24).unwrap();
    let params = SolverParams::default();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = shear_map(&g, 0.1 + 0.01 * seed as f64, seed as f64);
        let jac = jacobian(&x).unwrap();
        let h = random_trig_field(&g, &mut rng, 3, 2);
        let rhs = ScalarFieldDisk::from_cartesian(&g, |a, b| {
            let v = h.eval([a, b]).re;
            -(0.2 + v * v)
        });
        let problem = EllipticProblem::from_jacobian(&jac, rhs, BoundaryFieldCircle::zeros(24)).unwrap();
        let u = solve_dirichlet(&problem, &params).unwrap();
        let min = u.to_physical(48).iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-8, "seed {seed}: min u = {min:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rotation_equivariance(a in -0.2f64..0.2, beta in 0.0f64..6.3, alpha in 0.0f64..6.3, seed in any::<u64>()) {
        let g = GridSpec::new(24, 24).unwrap();
        let params = SolverParams::default();
        let (s, c) = f64::sin_cos(alpha);
        let rot = |p: [f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
        let x = shear_map(&g, a, beta);
        let x_rot = VectorFieldDisk::from_cartesian(&g, |p, q| x.eval(rot([p, q])));
        let h = random_trig_field(&g, &mut ChaCha8Rng::seed_from_u64(seed), 4, 2);
        let h_rot = ScalarFieldDisk::from_cartesian(&g, |p, q| h.eval(rot([p, q])).re);
        let solve = |x: &VectorFieldDisk, f: ScalarFieldDisk| {
            let jac = jacobian(x).unwrap();
            solve_dirichlet(&EllipticProblem::from_jacobian(&jac, f, BoundaryFieldCircle::zeros(24)).unwrap(), &params).unwrap()
        };
        let u = solve(&x, h);
        let u_rot = solve(&x_rot, h_rot);
        let scale = u.sup_norm().max(1e-3);
        for &(r, t) in &[(0.0, 0.0), (0.3, 0.7), (0.6, 2.0), (0.9, 3.9), (0.99, 5.1)] {
            let y = [r * f64::cos(t), r * f64::sin(t)];
            let d = (u_rot.eval(y).re - u.eval(rot(y)).re).abs();
            prop_assert!(d <= 10.0 * params.tol * scale, "at {y:?}: {d:e}");
        }
    }

    #[test]
    fn operator_is_symmetric(a in -0.2f64..0.2, beta in 0.0f64..6.3, seed in any::<u64>()) {
        let g = GridSpec::new(24, 24).unwrap();
        let coeff = Coefficient::from_jacobian(&jacobian(&shear_map(&g, a, beta)).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bubble: Vec<f64> = g.nodes().iter().map(|r| 1.0 - r * r).collect();
        let u = random_trig_field(&g, &mut rng, 4, 2).mul_radial(&bubble);
        let w = random_trig_field(&g, &mut rng, 4, 2).mul_radial(&bubble);
        let lhs = coeff.apply(&u).unwrap().inner(&w);
        let rhs = u.inner(&coeff.apply(&w).unwrap());
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * scale, "{lhs} vs {rhs}");
    }
}
