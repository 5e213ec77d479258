//! Newtonian potential of the uniform body Ω_t and its mollified variants.
//!
//! Boundary values use the identity Δ[(r²/4)(ln r − 1)] = ln r to turn the
//! area integral of ln|x_b − z| into a curve integral, whose logarithmic
//! kernel is split off and integrated exactly in Fourier space.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::disk_spectral::{smoothstep_quintic, BoundaryFieldCircle, ScalarFieldDisk, VectorFieldDisk};
use crate::elliptic::{solve_dirichlet_full, EllipticProblem, SolverParams};
use crate::error::{Error, Result};
use crate::geometry::{boundary_geometry, eulerian_gradient, jacobian};
use crate::quadrature::integrate;

/// Φ(r) = ln(r)/(2π).
pub fn fundamental_solution(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    Ok(r.ln() / (2.0 * PI))
}

/// Φ′(r) = 1/(2πr).
pub fn fundamental_solution_derivative(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    Ok(1.0 / (2.0 * PI * r))
}

/// Radial mollifier χ_m: 1 for ρ ≤ 1 − 1/m, 0 for ρ ≥ 1 + 1/m, quintic between.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollifierSpec {
    pub m: usize,
}

impl MollifierSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Parameter(format!("mollifier index must be at least 2, got {m}")));
        }
        Ok(Self { m })
    }

    pub fn inner(&self) -> f64 {
        1.0 - 1.0 / self.m as f64
    }

    pub fn outer(&self) -> f64 {
        1.0 + 1.0 / self.m as f64
    }

    pub fn profile(&self, rho: f64) -> f64 {
        let (a, b) = (self.inner(), self.outer());
        1.0 - smoothstep_quintic((rho - a) / (b - a))
    }

    /// ∫₀^r χ_m(s) s ds.
    pub fn mass_within(&self, r: f64) -> f64 {
        let a = self.inner();
        if r <= a {
            return 0.5 * r * r;
        }
        let top = r.min(self.outer());
        0.5 * a * a + integrate(|s| self.profile(s) * s, a, top, 12, 8)
    }

    /// Radial potential of the density χ_m (sign as for the uniform body):
    /// φ_m(r) = −[ln r ∫₀^r χ s ds + ∫_r^∞ χ s ln s ds].
    pub fn potential(&self, r: f64) -> f64 {
        let (a, b) = (self.inner(), self.outer());
        let tail = |lo: f64| -> f64 {
            let mut t = 0.0;
            if lo < a {
                // ∫_lo^a s ln s ds
                let f = |s: f64| 0.5 * s * s * s.ln() - 0.25 * s * s;
                t += f(a) - if lo > 0.0 { f(lo) } else { 0.0 };
            }
            let start = lo.max(a);
            if start < b {
                t += integrate(|s| self.profile(s) * s * s.ln(), start, b, 12, 8);
            }
            t
        };
        let head = if r > 0.0 { r.ln() * self.mass_within(r) } else { 0.0 };
        -(head + tail(r))
    }

    /// Radial component of ∇φ_m: −(1/r)∫₀^r χ s ds.
    pub fn radial_gradient(&self, r: f64) -> f64 {
        if r == 0.0 {
            0.0
        } else {
            -self.mass_within(r) / r
        }
    }
}

/// φ and ∇φ of the body, as seen in the Lagrangian frame.
#[derive(Clone, Debug)]
pub struct PotentialResult {
    /// σ times the Newtonian potential (so Δφ = −σ).
    pub phi: ScalarFieldDisk,
    pub grad_phi: VectorFieldDisk,
    pub boundary_values: BoundaryFieldCircle,
    pub iterations: usize,
}

fn is_identity(x: &VectorFieldDisk) -> bool {
    let id = VectorFieldDisk::identity(x.grid());
    (x - &id).max_coeff() < 1e-12
}

struct CurveSamples {
    z: [Vec<f64>; 2],
    dz: [Vec<f64>; 2],
}

fn curve_samples(trace: &[BoundaryFieldCircle; 2], nq: usize) -> CurveSamples {
    let d = [trace[0].tangential_derivative(), trace[1].tangential_derivative()];
    CurveSamples {
        z: [trace[0].samples(nq), trace[1].samples(nq)],
        dz: [d[0].samples(nq), d[1].samples(nq)],
    }
}

/// Curve samples: at least max(8K, 256), a multiple of 2K.
fn quadrature_points(n_modes: usize) -> usize {
    let base = 2 * n_modes;
    (8 * n_modes).max(256).div_ceil(base) * base
}

/// −(1/2π)∫_{Ω_t} ln|p − z| dz for a point p on the curve at parameter index
/// `target` of the curve samples.
fn boundary_target_value(c: &CurveSamples, target: usize, planner: &mut FftPlanner<f64>) -> f64 {
    let nq = c.z[0].len();
    let h = 2.0 * PI / nq as f64;
    let p = [c.z[0][target], c.z[1][target]];
    let cross: Vec<f64> = (0..nq)
        .map(|i| (c.z[0][i] - p[0]) * c.dz[1][i] - (c.z[1][i] - p[1]) * c.dz[0][i])
        .collect();
    let j_c: f64 = cross.iter().sum::<f64>() * h;
    // smooth part ln(r / |2 sin((θ′−θ)/2)|); the integrand vanishes at the target
    let mut smooth = 0.0;
    for i in 0..nq {
        if i == target {
            continue;
        }
        let r = (c.z[0][i] - p[0]).hypot(c.z[1][i] - p[1]);
        let s = (2.0 * (PI * (i as f64 - target as f64) / nq as f64).sin()).abs();
        smooth += (r / s).ln() * cross[i];
    }
    smooth *= h;
    // log kernel: ∫ ln|2 sin((θ′−θ)/2)| e^{inθ′} dθ′ = −π e^{inθ}/|n|
    let mut buf: Vec<Complex64> = cross.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(nq).process(&mut buf);
    let theta_t = h * target as f64;
    let mut singular = 0.0;
    for (idx, b) in buf.iter().enumerate() {
        let n = if idx <= nq / 2 { idx as i64 } else { idx as i64 - nq as i64 };
        if n == 0 || (nq % 2 == 0 && idx == nq / 2) {
            continue;
        }
        let coeff = b / nq as f64;
        singular += -PI / n.unsigned_abs() as f64 * (coeff * Complex64::from_polar(1.0, n as f64 * theta_t)).re;
    }
    let j_log = smooth + singular;
    -(0.5 * j_log - 0.25 * j_c) / (2.0 * PI)
}

/// Boundary values of φ = −χ_Ω ∗ Φ (or of φ_m for the mollified density,
/// identity map only), as a Fourier series on the unit circle.
pub fn potential_boundary_values(x: &VectorFieldDisk, weight: Option<&MollifierSpec>) -> Result<BoundaryFieldCircle> {
    let k = x.grid().n_modes();
    if let Some(w) = weight {
        if !is_identity(x) {
            return Err(Error::MollifierNeedsIdentity);
        }
        let v = w.potential(1.0);
        return Ok(BoundaryFieldCircle::from_fn(k, |_| v));
    }
    let geom = boundary_geometry(x)?;
    let nq = quadrature_points(k);
    let c = curve_samples(&geom.x_trace, nq);
    let n_targets = 2 * k;
    let stride = nq / n_targets;
    let mut planner = FftPlanner::new();
    let values: Vec<f64> = (0..n_targets)
        .map(|t| boundary_target_value(&c, t * stride, &mut planner))
        .collect();
    Ok(BoundaryFieldCircle::from_samples(k, &values))
}

/// −(1/2π)∫_{Ω_t} ln|p − z| dz at a point strictly inside the body.
pub fn potential_at_point(x: &VectorFieldDisk, p: [f64; 2]) -> Result<f64> {
    let geom = boundary_geometry(x)?;
    if geom.winding_number(p) == 0 {
        return Err(Error::QuadratureTarget(format!("point {p:?} is outside the body")));
    }
    let nq = quadrature_points(x.grid().n_modes());
    let c = curve_samples(&geom.x_trace, nq);
    let h = 2.0 * PI / nq as f64;
    let mut total = 0.0;
    for i in 0..nq {
        let dx = c.z[0][i] - p[0];
        let dy = c.z[1][i] - p[1];
        let r = dx.hypot(dy);
        if r < 1e-3 {
            return Err(Error::QuadratureTarget(format!("point {p:?} too close to the boundary")));
        }
        let cross = dx * c.dz[1][i] - dy * c.dz[0][i];
        total += (0.5 * r.ln() - 0.25) * cross;
    }
    Ok(-total * h / (2.0 * PI))
}

/// Interior φ by a Dirichlet solve with rhs −σ and boundary values σ·φ|_∂.
pub fn solve_potential(x: &VectorFieldDisk, gravity_sign: f64, params: &SolverParams) -> Result<PotentialResult> {
    let grid = x.grid().clone();
    let jac = jacobian(x)?;
    let bv = potential_boundary_values(x, None)?;
    let bc = bv.map_modes(|_| Complex64::new(gravity_sign, 0.0));
    let rhs = ScalarFieldDisk::constant(&grid, -gravity_sign);
    let problem = EllipticProblem::from_jacobian(&jac, rhs, bc)?;
    let out = solve_dirichlet_full(&problem, params)?;
    let grad_phi = eulerian_gradient(&out.u, &jac)?;
    Ok(PotentialResult {
        phi: out.u,
        grad_phi,
        boundary_values: bv,
        iterations: out.iterations,
    })
}

/// One row of the mollifier convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct MollifierRow {
    pub m: usize,
    /// ‖∇φ_m − ∇φ‖_{L²(Ω)}
    pub grad_error: f64,
    /// ‖χ_m − χ_Ω‖_{L²(ℝ²)}
    pub indicator_error: f64,
    pub ratio: Option<f64>,
}

/// ‖∇φ_m − ∇φ‖ over the unit disk for the identity map, by radial quadrature.
pub fn mollified_gradient_error(spec: &MollifierSpec) -> f64 {
    let a = spec.inner();
    // ∇φ = −(r/2) e_r on the unit disk
    let sq = integrate(
        |r| {
            let d = spec.radial_gradient(r) + 0.5 * r;
            d * d * r
        },
        a,
        1.0,
        12,
        8,
    );
    (2.0 * PI * sq).sqrt()
}

/// ‖χ_m − χ_Ω‖_{L²(ℝ²)}.
pub fn mollifier_indicator_error(spec: &MollifierSpec) -> f64 {
    let inside = integrate(|s| (1.0 - spec.profile(s)).powi(2) * s, spec.inner(), 1.0, 12, 8);
    let outside = integrate(|s| spec.profile(s).powi(2) * s, 1.0, spec.outer(), 12, 8);
    (2.0 * PI * (inside + outside)).sqrt()
}

/// Table of (m, ‖∇φ_m − ∇φ‖, ‖χ_m − χ_Ω‖, ratio) for increasing m.
pub fn mollifier_convergence_report(ms: &[usize]) -> Result<Vec<MollifierRow>> {
    if ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("mollifier indices must be increasing".into()));
    }
    ms.iter()
        .map(|&m| {
            let spec = MollifierSpec::new(m)?;
            let grad_error = mollified_gradient_error(&spec);
            let indicator_error = mollifier_indicator_error(&spec);
            let ratio = (indicator_error > 0.0).then(|| grad_error / indicator_error);
            Ok(MollifierRow {
                m,
                grad_error,
                indicator_error,
                ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::GridSpec;

    #[test]
    fn fundamental_solution_values() {
        assert_eq!(fundamental_solution(1.0).unwrap(), 0.0);
        assert!((fundamental_solution(std::f64::consts::E).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((fundamental_solution_derivative(2.0).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!(fundamental_solution(0.0).is_err());
    }

    #[test]
    fn unit_disk_boundary_values_vanish() {
        let g = GridSpec::new(16, 24).unwrap();
        let bv = potential_boundary_values(&VectorFieldDisk::identity(&g), None).unwrap();
        assert!(bv.samples(32).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn translated_disk_boundary_values_vanish() {
        let g = GridSpec::new(16, 24).unwrap();
        let x = VectorFieldDisk::from_cartesian(&g, |a, b| [a + 0.3, b]);
        let bv = potential_boundary_values(&x, None).unwrap();
        assert!(bv.samples(32).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn centre_value() {
        let g = GridSpec::new(16, 24).unwrap();
        let v = potential_at_point(&VectorFieldDisk::identity(&g), [0.0, 0.0]).unwrap();
        assert!((v - 0.25).abs() < 1e-13);
    }

    #[test]
    fn ellipse_like_boundary_matches_interior_rule_limit() {
        // potential continuity: boundary value is the limit of interior values
        let g = GridSpec::new(16, 24).unwrap();
        let e = 0.05;
        let x = VectorFieldDisk::from_cartesian(&g, |a, b| [a + e * b * b, b]);
        let bv = potential_boundary_values(&x, None).unwrap();
        let solved = solve_potential(&x, 1.0, &SolverParams::default()).unwrap();
        for &p in &[[0.2, 0.1], [-0.4, 0.3], [0.0, -0.6]] {
            let direct = potential_at_point(&x, x.eval(p)).unwrap();
            assert!((solved.phi.eval(p).re - direct).abs() < 1e-9, "{p:?}");
        }
        assert!(bv.trace_norm(0.0) > 0.0);
    }

    #[test]
    fn mollifier_profile_and_potential() {
        let s = MollifierSpec::new(8).unwrap();
        assert_eq!(s.profile(0.5), 1.0);
        assert_eq!(s.profile(1.2), 0.0);
        assert!((s.profile(1.0) - 0.5).abs() < 1e-15);
        let direct = integrate(|t| s.profile(t) * t, 0.0, 1.2, 12, 48);
        assert!((s.mass_within(1.2) - direct).abs() < 1e-13);
        assert!((s.potential(1.0) + integrate(|t| s.profile(t) * t * t.ln(), 1.0, 1.125, 12, 8)).abs() < 1e-14);
        assert!(MollifierSpec::new(1).is_err());
    }

    #[test]
    fn indicator_error_scales_as_inverse_sqrt_m() {
        let rows = mollifier_convergence_report(&[8, 16, 32, 64]).unwrap();
        for w in rows.windows(2) {
            let q = w[1].indicator_error / w[0].indicator_error;
            assert!((q - 0.5f64.sqrt()).abs() < 0.02, "{q}");
        }
    }
}
