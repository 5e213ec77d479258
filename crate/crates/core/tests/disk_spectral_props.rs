//! Property tests of the disk transforms, multipliers and norms.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freesurf::disk_spectral::{sobolev_norm, GridSpec, ScalarFieldDisk};
use freesurf::hodge::random_trig_field;

fn field(seed: u64) -> ScalarFieldDisk {
    let g = GridSpec::new(16, 16).unwrap();
    random_trig_field(&g, &mut ChaCha8Rng::seed_from_u64(seed), 4, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval(seed in any::<u64>()) {
        let f = field(seed);
        let g = f.grid().clone();
        let n = g.n_modes();
        let phys = f.to_physical(n);
        let w = g.weights();
        let m = g.n_radial();
        let quad: f64 = phys.iter().enumerate().map(|(i, v)| v.norm_sqr() * w[i % m]).sum::<f64>() * 2.0 * PI / n as f64;
        let spec = f.l2_norm_sq();
        prop_assert!((quad - spec).abs() <= 1e-10 * spec);
    }

    #[test]
    fn multipliers_commute(seed in any::<u64>(), s in 0.0f64..6.0) {
        let f = field(seed);
        let a = f.tangential_derivative().fractional_tangential(s);
        let b = f.fractional_tangential(s).tangential_derivative();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).norm() <= 4.0 * f64::EPSILON * x.norm());
        }
    }

    #[test]
    fn sobolev_norm_is_monotone(seed in any::<u64>(), s1 in 0.0f64..6.0, s2 in 0.0f64..6.0) {
        let f = field(seed);
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let a = sobolev_norm(&f, lo, None).unwrap();
        let b = sobolev_norm(&f, hi, None).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12), "{lo} -> {a}, {hi} -> {b}");
    }

    #[test]
    fn operations_preserve_reality(seed in any::<u64>(), s in 0.0f64..3.0) {
        let f = field(seed);
        let h = field(seed.wrapping_add(1));
        prop_assert!(f.is_real(1e-13));
        prop_assert!(f.tangential_derivative().is_real(1e-13));
        prop_assert!(f.fractional_tangential(s).is_real(1e-13));
        let g = f.gradient();
        prop_assert!(g.c[0].is_real(1e-12) && g.c[1].is_real(1e-12));
        prop_assert!(f.product(&h).unwrap().is_real(1e-12));
        let profile: Vec<f64> = f.grid().nodes().iter().map(|r| 1.0 - r * r).collect();
        prop_assert!(f.mul_radial(&profile).is_real(1e-13));
        prop_assert!((f.integral().im).abs() <= 1e-12);
    }
}
