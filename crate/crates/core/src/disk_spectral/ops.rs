//! Sobolev norms on Ω and Ω_t built from Cartesian derivatives plus the
//! fractional tangential multiplier.

use super::field::{ScalarFieldDisk, VectorFieldDisk};
use crate::error::{Error, Result};
use crate::geometry::{eulerian_gradient, JacobianData};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn derivative(f: &ScalarFieldDisk, jac: Option<&JacobianData>) -> Result<[ScalarFieldDisk; 2]> {
    let g = match jac {
        Some(j) => eulerian_gradient(f, j)?,
        None => f.gradient(),
    };
    let [a, b] = g.c;
    Ok([a, b])
}

/// Squared H^s norm, 0 ≤ s ≤ 6.
///
/// Integer order: Σ_{|α| ≤ s} ‖D^α f‖² over ordered multi-indices.
/// For s = m + σ with 0 < σ < 1 the order-m terms are replaced by
/// ‖⟨∂θ⟩^σ D^α f‖², which keeps the norm nondecreasing in s.
pub fn sobolev_norm_sq(f: &ScalarFieldDisk, s: f64, jac: Option<&JacobianData>) -> Result<f64> {
    if !(0.0..=6.0).contains(&s) || !s.is_finite() {
        return Err(Error::SobolevOrder(s));
    }
    let mut m = s.floor() as usize;
    let mut sigma = s - m as f64;
    if sigma < 1e-12 {
        sigma = 0.0;
    } else if 1.0 - sigma < 1e-12 {
        m += 1;
        sigma = 0.0;
    }
    // level[a] = ∂₁^a ∂₂^{i−a} f
    let mut level = vec![f.clone()];
    let mut total = 0.0;
    for i in 0..=m {
        let top = i == m;
        for (a, d) in level.iter().enumerate() {
            let mult = binomial(i, a);
            let norm = if top && sigma > 0.0 {
                d.fractional_tangential(sigma).l2_norm_sq()
            } else {
                d.l2_norm_sq()
            };
            total += mult * norm;
        }
        if top {
            break;
        }
        let mut next = Vec::with_capacity(i + 2);
        let mut d1s = Vec::with_capacity(i + 1);
        let mut d2_first = None;
        for (a, d) in level.iter().enumerate() {
            let [d1, d2] = derivative(d, jac)?;
            if a == 0 {
                d2_first = Some(d2);
            }
            d1s.push(d1);
        }
        next.push(d2_first.expect("nonempty level"));
        next.extend(d1s);
        level = next;
    }
    Ok(total)
}

pub fn sobolev_norm(f: &ScalarFieldDisk, s: f64, jac: Option<&JacobianData>) -> Result<f64> {
    Ok(sobolev_norm_sq(f, s, jac)?.sqrt())
}

pub fn sobolev_norm_vector_sq(v: &VectorFieldDisk, s: f64, jac: Option<&JacobianData>) -> Result<f64> {
    Ok(sobolev_norm_sq(&v.c[0], s, jac)? + sobolev_norm_sq(&v.c[1], s, jac)?)
}

pub fn sobolev_norm_vector(v: &VectorFieldDisk, s: f64, jac: Option<&JacobianData>) -> Result<f64> {
    Ok(sobolev_norm_vector_sq(v, s, jac)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::grid::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn constant_has_no_derivatives() {
        let g = GridSpec::new(16, 24).unwrap();
        let one = ScalarFieldDisk::constant(&g, 1.0);
        assert!((sobolev_norm(&one, 5.0, None).unwrap() - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn linear_field_h1() {
        let g = GridSpec::new(16, 24).unwrap();
        let f = ScalarFieldDisk::from_polar(&g, |r, t| r * t.cos());
        let n = sobolev_norm(&f, 1.0, None).unwrap();
        assert!((n - (PI / 4.0 + PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identity_map_h55() {
        let g = GridSpec::new(32, 48).unwrap();
        let x = VectorFieldDisk::identity(&g);
        let n = sobolev_norm_vector(&x, 5.5, None).unwrap();
        assert!((n - (2.5 * PI).sqrt()).abs() < 1e-10, "{n}");
    }

    #[test]
    fn rejects_out_of_range_order() {
        let g = GridSpec::new(16, 24).unwrap();
        let one = ScalarFieldDisk::constant(&g, 1.0);
        assert!(sobolev_norm(&one, -0.5, None).is_err());
        assert!(sobolev_norm(&one, 6.5, None).is_err());
    }

    #[test]
    fn half_order_between_integers() {
        let g = GridSpec::new(16, 24).unwrap();
        let f = ScalarFieldDisk::from_cartesian(&g, |a, b| (a * b + 0.2 * a).exp());
        let n0 = sobolev_norm(&f, 0.0, None).unwrap();
        let nh = sobolev_norm(&f, 0.5, None).unwrap();
        let n1 = sobolev_norm(&f, 1.0, None).unwrap();
        assert!(n0 <= nh && nh <= n1);
    }
}
