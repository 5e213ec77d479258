//! Flow map, Jacobian calculus and boundary geometry of Ω_t.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::disk_spectral::{pointwise, BoundaryFieldCircle, Grid, ScalarFieldDisk, VectorFieldDisk};
use crate::error::{Error, Result};

/// Default tolerance on |det B − 1|.
pub const DEFAULT_DET_TOLERANCE: f64 = 1e-6;

/// Lagrangian state: positions x(t, y) and material velocity V(t, y).
#[derive(Clone, Debug)]
pub struct FlowState {
    pub t: f64,
    pub x: VectorFieldDisk,
    pub v: VectorFieldDisk,
}

impl FlowState {
    pub fn new(t: f64, x: VectorFieldDisk, v: VectorFieldDisk) -> Result<Self> {
        if !x.grid().same_shape(v.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { t, x, v })
    }

    pub fn grid(&self) -> &Grid {
        self.x.grid()
    }

    /// Checks det B against `det_tolerance` and that the boundary is a simple curve.
    pub fn validate(&self, det_tolerance: f64) -> Result<JacobianData> {
        let jac = jacobian(&self.x)?;
        let drift = jac.det_drift();
        if drift > det_tolerance {
            return Err(Error::DetDrift {
                drift,
                tolerance: det_tolerance,
                t: self.t,
            });
        }
        boundary_geometry(&self.x)?;
        Ok(jac)
    }
}

/// B^i_a = ∂x^i/∂y^a, its inverse A^a_i, and det B.
#[derive(Clone, Debug)]
pub struct JacobianData {
    /// `b[i][a]` = ∂_a x^i
    pub b: [[ScalarFieldDisk; 2]; 2],
    /// `a[a][i]` = A^a_i = ∂y^a/∂x^i
    pub a: [[ScalarFieldDisk; 2]; 2],
    pub det: ScalarFieldDisk,
}

impl JacobianData {
    /// Max |det B − 1| over the padded physical grid.
    pub fn det_drift(&self) -> f64 {
        let one = ScalarFieldDisk::constant(self.det.grid(), 1.0);
        (&self.det - &one).sup_norm()
    }

    /// Largest pointwise entry of A·B − I on the padded grid.
    pub fn inverse_defect(&self) -> f64 {
        let n = self.det.grid().padded_len();
        let b: Vec<Vec<Complex64>> = self.b.iter().flatten().map(|f| f.to_physical(n)).collect();
        let a: Vec<Vec<Complex64>> = self.a.iter().flatten().map(|f| f.to_physical(n)).collect();
        let mut worst = 0.0f64;
        for idx in 0..b[0].len() {
            for r in 0..2 {
                for c in 0..2 {
                    // (A B)^a_b = A^a_i B^i_b
                    let v = a[r * 2] [idx] * b[c][idx] + a[r * 2 + 1][idx] * b[2 + c][idx];
                    let target = if r == c { 1.0 } else { 0.0 };
                    worst = worst.max((v.re - target).abs());
                }
            }
        }
        worst
    }
}

/// Computes B, A and det B of the map `x`.
pub fn jacobian(x: &VectorFieldDisk) -> Result<JacobianData> {
    let g0 = x.c[0].gradient();
    let g1 = x.c[1].gradient();
    let [b00, b01] = g0.c;
    let [b10, b11] = g1.c;
    let out = pointwise(&[&b00, &b01, &b10, &b11], 5, |pt, v, o| {
        let det = v[0] * v[3] - v[1] * v[2];
        if !(det.re > 0.0) {
            return Err(Error::MapDegenerate {
                det: det.re,
                theta_index: pt.theta_index,
                radial_index: pt.radial_index,
            });
        }
        let inv = 1.0 / det.re;
        o[0] = v[3] * inv;
        o[1] = -v[1] * inv;
        o[2] = -v[2] * inv;
        o[3] = v[0] * inv;
        o[4] = det;
        Ok(())
    })?;
    let mut it = out.into_iter();
    let mut next = || it.next().expect("five outputs");
    let a = [[next(), next()], [next(), next()]];
    let det = next();
    Ok(JacobianData {
        b: [[b00, b01], [b10, b11]],
        a,
        det,
    })
}

/// (∂_i f)∘x = A^a_i ∂_a f.
pub fn eulerian_gradient(f: &ScalarFieldDisk, jac: &JacobianData) -> Result<VectorFieldDisk> {
    let g = f.gradient();
    let out = pointwise(
        &[&g.c[0], &g.c[1], &jac.a[0][0], &jac.a[0][1], &jac.a[1][0], &jac.a[1][1]],
        2,
        |_, v, o| {
            o[0] = v[2] * v[0] + v[4] * v[1];
            o[1] = v[3] * v[0] + v[5] * v[1];
            Ok(())
        },
    )?;
    let [e0, e1]: [ScalarFieldDisk; 2] = out.try_into().expect("two outputs");
    VectorFieldDisk::new(e0, e1)
}

/// Eulerian velocity gradient `m[i][j]` = (∂_j v^i)∘x.
pub fn eulerian_jacobian(v: &VectorFieldDisk, jac: &JacobianData) -> Result<[[ScalarFieldDisk; 2]; 2]> {
    let [r0, r1] = [eulerian_gradient(&v.c[0], jac)?, eulerian_gradient(&v.c[1], jac)?];
    let [m00, m01] = r0.c;
    let [m10, m11] = r1.c;
    Ok([[m00, m01], [m10, m11]])
}

/// Eulerian divergence and scalar curl ∂₁v² − ∂₂v¹.
pub fn div_curl(v: &VectorFieldDisk, jac: &JacobianData) -> Result<(ScalarFieldDisk, ScalarFieldDisk)> {
    let m = eulerian_jacobian(v, jac)?;
    let div = &m[0][0] + &m[1][1];
    let curl = &m[1][0] - &m[0][1];
    Ok((div, curl))
}

/// Geometry of the curve x|_{ρ=1}, sampled at `n_samples` equispaced angles.
#[derive(Clone, Debug)]
pub struct BoundaryGeometry {
    pub n_modes: usize,
    pub n_samples: usize,
    /// Trace of x as Fourier series.
    pub x_trace: [BoundaryFieldCircle; 2],
    pub position: [Vec<f64>; 2],
    /// Unit tangent ∂θx/|∂θx|.
    pub tangent: [Vec<f64>; 2],
    /// Unit outward normal.
    pub normal: [Vec<f64>; 2],
    /// |∂θx|.
    pub density: Vec<f64>,
}

impl BoundaryGeometry {
    pub fn theta(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.n_samples as f64
    }

    /// ∫₀^{2π} g |∂θx| dθ for samples on this geometry's angles.
    pub fn integrate_samples(&self, g: &[f64]) -> f64 {
        let h = 2.0 * PI / self.n_samples as f64;
        g.iter().zip(&self.density).map(|(a, b)| a * b).sum::<f64>() * h
    }

    /// Q^{jk} = δ^{jk} − N^j N^k at sample `i`.
    pub fn projection(&self, i: usize) -> [[f64; 2]; 2] {
        let n = [self.normal[0][i], self.normal[1][i]];
        [
            [1.0 - n[0] * n[0], -n[0] * n[1]],
            [-n[1] * n[0], 1.0 - n[1] * n[1]],
        ]
    }

    pub fn normal_coeffs(&self) -> [BoundaryFieldCircle; 2] {
        [
            BoundaryFieldCircle::from_samples(self.n_modes, &self.normal[0]),
            BoundaryFieldCircle::from_samples(self.n_modes, &self.normal[1]),
        ]
    }

    pub fn tangent_coeffs(&self) -> [BoundaryFieldCircle; 2] {
        [
            BoundaryFieldCircle::from_samples(self.n_modes, &self.tangent[0]),
            BoundaryFieldCircle::from_samples(self.n_modes, &self.tangent[1]),
        ]
    }

    pub fn density_coeffs(&self) -> BoundaryFieldCircle {
        BoundaryFieldCircle::from_samples(self.n_modes, &self.density)
    }

    /// Enclosed area ½∮ x·N dS.
    pub fn area(&self) -> f64 {
        let g: Vec<f64> = (0..self.n_samples)
            .map(|i| self.position[0][i] * self.normal[0][i] + self.position[1][i] * self.normal[1][i])
            .collect();
        0.5 * self.integrate_samples(&g)
    }

    pub fn length(&self) -> f64 {
        self.integrate_samples(&vec![1.0; self.n_samples])
    }

    /// Winding number of the sampled boundary curve around `p`.
    pub fn winding_number(&self, p: [f64; 2]) -> i64 {
        let n = self.n_samples;
        let mut total = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let a = [self.position[0][i] - p[0], self.position[1][i] - p[1]];
            let b = [self.position[0][j] - p[0], self.position[1][j] - p[1]];
            total += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
        }
        (total / (2.0 * PI)).round() as i64
    }
}

/// Boundary geometry of the map `x`, with the simple-curve probe check.
pub fn boundary_geometry(x: &VectorFieldDisk) -> Result<BoundaryGeometry> {
    let k = x.grid().n_modes();
    let nb = 4 * k;
    let x_trace = x.trace();
    let dt = [x_trace[0].tangential_derivative(), x_trace[1].tangential_derivative()];
    let position = [x_trace[0].samples(nb), x_trace[1].samples(nb)];
    let d = [dt[0].samples(nb), dt[1].samples(nb)];
    let density: Vec<f64> = (0..nb).map(|i| d[0][i].hypot(d[1][i])).collect();
    let min_density = density.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_density >= 1e-8) {
        return Err(Error::BoundaryDegenerate(min_density));
    }
    let tangent = [
        (0..nb).map(|i| d[0][i] / density[i]).collect::<Vec<_>>(),
        (0..nb).map(|i| d[1][i] / density[i]).collect::<Vec<_>>(),
    ];
    let mut normal = [tangent[1].clone(), tangent[0].iter().map(|t| -t).collect::<Vec<_>>()];
    let flux: f64 = (0..nb)
        .map(|i| (position[0][i] * normal[0][i] + position[1][i] * normal[1][i]) * density[i])
        .sum();
    if flux < 0.0 {
        for c in normal.iter_mut() {
            c.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let geom = BoundaryGeometry {
        n_modes: k,
        n_samples: nb,
        x_trace,
        position,
        tangent,
        normal,
        density,
    };
    let probes: Vec<[f64; 2]> = (0..64)
        .map(|probe| {
            let ring = if probe < 32 { 0.3 } else { 0.7 };
            let ang = 2.0 * PI * (probe % 32) as f64 / 32.0;
            [ring * ang.cos(), ring * ang.sin()]
        })
        .collect();
    for (probe, p) in x.eval_points(&probes).into_iter().enumerate() {
        let w = geom.winding_number(p).abs();
        if w != 1 {
            return Err(Error::NotSimple { probe, winding: w });
        }
    }
    Ok(geom)
}

/// ∫_{∂Ω_t} g dS as the trapezoid rule in the Lagrangian angle.
pub fn surface_integral(g: &BoundaryFieldCircle, geom: &BoundaryGeometry) -> f64 {
    geom.integrate_samples(&g.samples(geom.n_samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::GridSpec;

    fn rotation(g: &Grid, alpha: f64) -> VectorFieldDisk {
        let (s, c) = alpha.sin_cos();
        VectorFieldDisk::from_cartesian(g, |a, b| [c * a - s * b, s * a + c * b])
    }

    #[test]
    fn identity_jacobian() {
        let g = GridSpec::new(16, 24).unwrap();
        let j = jacobian(&VectorFieldDisk::identity(&g)).unwrap();
        assert!(j.det_drift() < 1e-13);
        assert!(j.inverse_defect() < 1e-13);
    }

    #[test]
    fn shear_inverse() {
        let g = GridSpec::new(16, 24).unwrap();
        let x = VectorFieldDisk::from_cartesian(&g, |a, b| [a + 0.1 * b, b]);
        let j = jacobian(&x).unwrap();
        assert!(j.det_drift() < 1e-13);
        let p = [0.3, -0.2];
        assert!((j.a[0][0].eval(p).re - 1.0).abs() < 1e-13);
        assert!((j.a[0][1].eval(p).re + 0.1).abs() < 1e-13);
        assert!(j.a[1][0].eval(p).re.abs() < 1e-13);
        assert!((j.a[1][1].eval(p).re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_map_rejected() {
        let g = GridSpec::new(16, 24).unwrap();
        let x = VectorFieldDisk::from_cartesian(&g, |a, b| [a, -b]);
        assert!(matches!(jacobian(&x), Err(Error::MapDegenerate { .. })));
    }

    #[test]
    fn rotation_div_curl() {
        let g = GridSpec::new(16, 24).unwrap();
        let x = rotation(&g, 0.4);
        let j = jacobian(&x).unwrap();
        let w = 0.7;
        let v = VectorFieldDisk::from_cartesian(&g, |a, b| {
            let p = [0.4f64.cos() * a - 0.4f64.sin() * b, 0.4f64.sin() * a + 0.4f64.cos() * b];
            [-w * p[1], w * p[0]]
        });
        let (d, c) = div_curl(&v, &j).unwrap();
        assert!(d.max_coeff() < 1e-12);
        let two = ScalarFieldDisk::constant(&g, 2.0 * w);
        assert!((&c - &two).max_coeff() < 1e-12);
    }

    #[test]
    fn identity_boundary() {
        let g = GridSpec::new(16, 24).unwrap();
        let geom = boundary_geometry(&VectorFieldDisk::identity(&g)).unwrap();
        for i in 0..geom.n_samples {
            let t = geom.theta(i);
            assert!((geom.normal[0][i] - t.cos()).abs() < 1e-13);
            assert!((geom.normal[1][i] - t.sin()).abs() < 1e-13);
            assert!((geom.density[i] - 1.0).abs() < 1e-13);
        }
        let one = BoundaryFieldCircle::from_fn(16, |_| 1.0);
        assert!((surface_integral(&one, &geom) - 2.0 * PI).abs() < 1e-12);
        let cos = BoundaryFieldCircle::from_fn(16, |t| t.cos());
        assert!(surface_integral(&cos, &geom).abs() < 1e-13);
        assert!((geom.area() - PI).abs() < 1e-12);
    }

    #[test]
    fn rotated_boundary_normal() {
        let g = GridSpec::new(16, 24).unwrap();
        let alpha = 0.9;
        let geom = boundary_geometry(&rotation(&g, alpha)).unwrap();
        for i in 0..geom.n_samples {
            let t = geom.theta(i) + alpha;
            assert!((geom.normal[0][i] - t.cos()).abs() < 1e-12);
            assert!((geom.normal[1][i] - t.sin()).abs() < 1e-12);
        }
    }
}
