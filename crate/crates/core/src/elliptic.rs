//! Divergence-form elliptic solves ∂_a(G^{ab}∂_b u) = f on the reference
//! disk, the pressure solve, and the Taylor sign.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::disk_spectral::{grid::mode_parity, pointwise, BoundaryFieldCircle, Grid, ScalarFieldDisk, VectorFieldDisk};
use crate::error::{Error, Result};
use crate::geometry::{eulerian_gradient, eulerian_jacobian, jacobian, BoundaryGeometry, FlowState, JacobianData};
use crate::krylov::{bicgstab, Vector};

/// Krylov tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Parameter(format!("invalid solver parameters {self:?}")));
        }
        Ok(())
    }
}

/// Symmetric coefficient field G^{ab}; `None` stands for the identity.
#[derive(Clone, Debug)]
pub struct Coefficient {
    g: Option<[[ScalarFieldDisk; 2]; 2]>,
    kappa: f64,
}

impl Coefficient {
    pub fn identity() -> Self {
        Self { g: None, kappa: 1.0 }
    }

    /// G^{ab} = A^a_i A^b_i from a Jacobian. Returns the identity
    /// coefficient when G = I to roundoff (rigid motions).
    pub fn from_jacobian(jac: &JacobianData) -> Result<Self> {
        let a = &jac.a;
        let out = pointwise(&[&a[0][0], &a[0][1], &a[1][0], &a[1][1]], 3, |_, v, o| {
            o[0] = v[0] * v[0] + v[1] * v[1];
            o[1] = v[0] * v[2] + v[1] * v[3];
            o[2] = v[2] * v[2] + v[3] * v[3];
            Ok(())
        })?;
        let [g00, g01, g11]: [ScalarFieldDisk; 3] = out.try_into().expect("three outputs");
        let one = ScalarFieldDisk::constant(g00.grid(), 1.0);
        let defect = (&g00 - &one)
            .max_coeff()
            .max(g01.max_coeff())
            .max((&g11 - &one).max_coeff());
        if defect < 1e-14 {
            return Ok(Self::identity());
        }
        Self::from_fields(g00, g01, g11)
    }

    /// Validates ellipticity of the symmetric field (g00, g01; g01, g11).
    pub fn from_fields(g00: ScalarFieldDisk, g01: ScalarFieldDisk, g11: ScalarFieldDisk) -> Result<Self> {
        let n = g00.grid().padded_len();
        let p = [g00.to_physical(n), g01.to_physical(n), g11.to_physical(n)];
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for idx in 0..p[0].len() {
            let (a, b, c) = (p[0][idx].re, p[1][idx].re, p[2][idx].re);
            let mean = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            lo = lo.min(mean - rad);
            hi = hi.max(mean + rad);
        }
        if !(lo > 0.0) {
            return Err(Error::NotElliptic(lo));
        }
        let kappa = hi.max(1.0 / lo);
        let g10 = g01.clone();
        Ok(Self {
            g: Some([[g00, g01], [g10, g11]]),
            kappa,
        })
    }

    /// Conditioning diagnostic κ: eigenvalues of G lie in [1/κ, κ].
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_none()
    }

    /// Flux F^a = G^{ab}∂_b u.
    pub fn flux(&self, u: &ScalarFieldDisk) -> Result<VectorFieldDisk> {
        let grad = u.gradient();
        match &self.g {
            None => Ok(grad),
            Some(g) => {
                let out = pointwise(&[&grad.c[0], &grad.c[1], &g[0][0], &g[0][1], &g[1][1]], 2, |_, v, o| {
                    o[0] = v[2] * v[0] + v[3] * v[1];
                    o[1] = v[3] * v[0] + v[4] * v[1];
                    Ok(())
                })?;
                let [f0, f1]: [ScalarFieldDisk; 2] = out.try_into().expect("two outputs");
                VectorFieldDisk::new(f0, f1)
            }
        }
    }

    /// ∂_a(G^{ab}∂_b u).
    pub fn apply(&self, u: &ScalarFieldDisk) -> Result<ScalarFieldDisk> {
        let f = self.flux(u)?;
        Ok(&f.c[0].gradient().c[0] + &f.c[1].gradient().c[1])
    }

    /// Conormal derivative y_a G^{ab}∂_b u on the unit circle.
    pub fn conormal_trace(&self, u: &ScalarFieldDisk) -> Result<BoundaryFieldCircle> {
        let f = self.flux(u)?;
        let grid = u.grid().clone();
        let y = VectorFieldDisk::identity(&grid);
        let out = pointwise(&[&f.c[0], &f.c[1], &y.c[0], &y.c[1]], 1, |_, v, o| {
            o[0] = v[0] * v[2] + v[1] * v[3];
            Ok(())
        })?;
        Ok(out[0].trace())
    }
}

/// Dirichlet problem ∂_a(G^{ab}∂_b u) = rhs, u = bc on ρ = 1.
#[derive(Clone, Debug)]
pub struct EllipticProblem {
    pub coeff: Coefficient,
    pub rhs: ScalarFieldDisk,
    pub bc: BoundaryFieldCircle,
}

impl EllipticProblem {
    pub fn new(coeff: Coefficient, rhs: ScalarFieldDisk, bc: BoundaryFieldCircle) -> Result<Self> {
        if bc.n_modes() != rhs.grid().n_modes() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { coeff, rhs, bc })
    }

    pub fn laplacian(rhs: ScalarFieldDisk, bc: BoundaryFieldCircle) -> Result<Self> {
        Self::new(Coefficient::identity(), rhs, bc)
    }

    pub fn from_jacobian(jac: &JacobianData, rhs: ScalarFieldDisk, bc: BoundaryFieldCircle) -> Result<Self> {
        Self::new(Coefficient::from_jacobian(jac)?, rhs, bc)
    }
}

/// Solution with solver statistics.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub u: ScalarFieldDisk,
    pub iterations: usize,
    pub relative_residual: f64,
    pub kappa: f64,
}

enum BoundaryRow {
    Dirichlet,
    Neumann,
}

/// Per-mode LU factors of the constant-coefficient disk operator.
struct ModePreconditioner {
    m: usize,
    factors: Vec<Option<nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>>,
}

impl ModePreconditioner {
    fn new(grid: &Grid, row: BoundaryRow) -> Result<Self> {
        let m = grid.n_radial();
        let ops = grid.radial();
        let nodes = grid.nodes();
        let d = [ops.nodal_derivative_matrix(0), ops.nodal_derivative_matrix(1)];
        let mut factors = Vec::with_capacity(grid.n_modes());
        let bordered = matches!(row, BoundaryRow::Neumann);
        for slot in 0..grid.n_modes() {
            if slot == grid.nyquist_slot() {
                factors.push(None);
                continue;
            }
            let k = grid.wavenumber(slot);
            let p = mode_parity(k);
            let q = 1 - p;
            let dd = &d[q] * &d[p];
            let k2 = (k * k) as f64;
            let size = if bordered && k == 0 { m + 1 } else { m };
            let mut mat = DMatrix::zeros(size, size);
            for i in 0..m - 1 {
                for j in 0..m {
                    mat[(i, j)] = dd[(i, j)] + d[p][(i, j)] / nodes[i];
                }
                mat[(i, i)] -= k2 / (nodes[i] * nodes[i]);
            }
            match row {
                BoundaryRow::Dirichlet => mat[(m - 1, m - 1)] = 1.0,
                BoundaryRow::Neumann => {
                    for j in 0..m {
                        mat[(m - 1, j)] = d[p][(m - 1, j)];
                    }
                }
            }
            if size == m + 1 {
                for i in 0..m - 1 {
                    mat[(i, m)] = 1.0;
                }
                for j in 0..m {
                    mat[(m, j)] = grid.weights()[j];
                }
            }
            let lu = mat.lu();
            if !lu.is_invertible() {
                return Err(Error::InvalidGrid(format!("singular preconditioner block for mode {k}")));
            }
            factors.push(Some(lu));
        }
        Ok(Self { m, factors })
    }

    fn apply(&self, r: &[Complex64]) -> Vector {
        let m = self.m;
        let mut z = r.to_vec();
        for (slot, f) in self.factors.iter().enumerate() {
            let Some(lu) = f else {
                continue;
            };
            let size = lu.l().nrows();
            for part in 0..2 {
                let mut b = DVector::from_fn(size, |i, _| {
                    let c = if i < m { r[slot * m + i] } else { r[r.len() - 1] };
                    if part == 0 {
                        c.re
                    } else {
                        c.im
                    }
                });
                lu.solve_mut(&mut b);
                for i in 0..size {
                    let dest = if i < m { &mut z[slot * m + i] } else { z.last_mut().expect("bordered") };
                    if part == 0 {
                        dest.re = b[i];
                    } else {
                        dest.im = b[i];
                    }
                }
            }
        }
        z
    }
}

fn residual_reference(parts: &[f64]) -> f64 {
    parts.iter().cloned().fold(0.0, f64::max)
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Harmonic-polynomial lift b_k ρ^{|k|} e^{ikθ} of boundary data.
pub fn harmonic_lift(grid: &Grid, bc: &BoundaryFieldCircle) -> ScalarFieldDisk {
    let m = grid.n_radial();
    let mut lift = ScalarFieldDisk::zeros(grid);
    for slot in 0..grid.n_modes() {
        let k = grid.wavenumber(slot);
        let b = bc.coeff(k);
        if slot == grid.nyquist_slot() || b == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..m {
            lift.coeffs_mut()[slot * m + j] = b * grid.nodes()[j].powi(k.unsigned_abs() as i32);
        }
    }
    lift
}

/// Solves the Dirichlet problem by preconditioned BiCGSTAB.
pub fn solve_dirichlet_full(problem: &EllipticProblem, params: &SolverParams) -> Result<SolveOutcome> {
    params.validate()?;
    let grid = problem.rhs.grid().clone();
    let m = grid.n_radial();
    let nyq = grid.nyquist_slot();
    let lift = harmonic_lift(&grid, &problem.bc);
    let l_lift = problem.coeff.apply(&lift)?;
    let n = grid.len();
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for slot in 0..grid.n_modes() {
        if slot == nyq {
            continue;
        }
        for j in 0..m - 1 {
            let idx = slot * m + j;
            b[idx] = problem.rhs.coeffs()[idx] - l_lift.coeffs()[idx];
        }
    }
    let coeff = &problem.coeff;
    let apply = |w: &[Complex64]| -> Result<Vector> {
        let field = ScalarFieldDisk::from_coeffs(&grid, w.to_vec())?;
        let lw = coeff.apply(&field)?;
        let mut out = lw.into_coeffs();
        for slot in 0..grid.n_modes() {
            if slot == nyq {
                for j in 0..m {
                    out[slot * m + j] = w[slot * m + j];
                }
            } else {
                out[slot * m + m - 1] = w[slot * m + m - 1];
            }
        }
        Ok(out)
    };
    let pre = ModePreconditioner::new(&grid, BoundaryRow::Dirichlet)?;
    let reference = residual_reference(&[
        vec_norm(&b),
        vec_norm(problem.rhs.coeffs()),
        vec_norm(&problem.bc.coeffs),
    ]);
    let x0 = pre.apply(&b);
    let out = bicgstab(apply, |r| pre.apply(r), &b, x0, params.tol, params.max_iter, reference)?;
    let w = ScalarFieldDisk::from_coeffs(&grid, out.solution)?;
    Ok(SolveOutcome {
        u: &w + &lift,
        iterations: out.iterations,
        relative_residual: out.relative_residual,
        kappa: coeff.kappa(),
    })
}

pub fn solve_dirichlet(problem: &EllipticProblem, params: &SolverParams) -> Result<ScalarFieldDisk> {
    Ok(solve_dirichlet_full(problem, params)?.u)
}

/// Solves ∂_a(G^{ab}∂_b ψ) = rhs with conormal data y_aG^{ab}∂_bψ = `flux` on
/// ρ = 1, normalized by ∫ψ dy = 0. A Lagrange multiplier absorbs any
/// incompatibility between rhs and flux; it is returned alongside ψ.
pub fn solve_neumann(
    coeff: &Coefficient,
    rhs: &ScalarFieldDisk,
    flux: &BoundaryFieldCircle,
    params: &SolverParams,
) -> Result<(SolveOutcome, f64)> {
    solve_neumann_scaled(coeff, rhs, flux, params, 0.0)
}

/// As [`solve_neumann`], with the residual measured against at least `scale`.
pub(crate) fn solve_neumann_scaled(
    coeff: &Coefficient,
    rhs: &ScalarFieldDisk,
    flux: &BoundaryFieldCircle,
    params: &SolverParams,
    scale: f64,
) -> Result<(SolveOutcome, f64)> {
    params.validate()?;
    let grid = rhs.grid().clone();
    let m = grid.n_radial();
    let nyq = grid.nyquist_slot();
    let n = grid.len();
    let zero_slot = grid.slot(0).expect("mode 0");
    let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
    for slot in 0..grid.n_modes() {
        if slot == nyq {
            continue;
        }
        for j in 0..m - 1 {
            b[slot * m + j] = rhs.coeffs()[slot * m + j];
        }
        b[slot * m + m - 1] = flux.coeff(grid.wavenumber(slot));
    }
    let weights = grid.weights().to_vec();
    let apply = |w: &[Complex64]| -> Result<Vector> {
        let field = ScalarFieldDisk::from_coeffs(&grid, w[..n].to_vec())?;
        let lw = coeff.apply(&field)?;
        let tr = coeff.conormal_trace(&field)?;
        let lambda = w[n];
        let mut out = lw.into_coeffs();
        for slot in 0..grid.n_modes() {
            if slot == nyq {
                for j in 0..m {
                    out[slot * m + j] = w[slot * m + j];
                }
                continue;
            }
            out[slot * m + m - 1] = tr.coeffs[slot];
        }
        for j in 0..m - 1 {
            out[zero_slot * m + j] += lambda;
        }
        let mean: Complex64 = (0..m).map(|j| w[zero_slot * m + j] * weights[j]).sum();
        out.push(mean);
        Ok(out)
    };
    let pre = ModePreconditioner::new(&grid, BoundaryRow::Neumann)?;
    let reference = residual_reference(&[vec_norm(&b), vec_norm(rhs.coeffs()), vec_norm(&flux.coeffs), scale]);
    let x0 = pre.apply(&b);
    let out = bicgstab(apply, |r| pre.apply(r), &b, x0, params.tol, params.max_iter, reference)?;
    let lambda = out.solution[n].re;
    let u = ScalarFieldDisk::from_coeffs(&grid, out.solution[..n].to_vec())?;
    Ok((
        SolveOutcome {
            u,
            iterations: out.iterations,
            relative_residual: out.relative_residual,
            kappa: coeff.kappa(),
        },
        lambda,
    ))
}

/// tr((∂v)²) = Σ_{ij} ∂_i v^j ∂_j v^i in Lagrangian variables.
pub fn velocity_gradient_trace(v: &VectorFieldDisk, jac: &JacobianData) -> Result<ScalarFieldDisk> {
    let m = eulerian_jacobian(v, jac)?;
    let out = pointwise(&[&m[0][0], &m[0][1], &m[1][0], &m[1][1]], 1, |_, a, o| {
        o[0] = a[0] * a[0] + 2.0 * a[1] * a[2] + a[3] * a[3];
        Ok(())
    })?;
    Ok(out.into_iter().next().expect("one output"))
}

/// Pressure and its Eulerian gradient.
#[derive(Clone, Debug)]
pub struct PressureResult {
    pub p: ScalarFieldDisk,
    pub grad_p: VectorFieldDisk,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves Δp = −tr((∂v)²) + σ with p = 0 on the free boundary.
pub fn pressure_solve_with(
    state: &FlowState,
    jac: &JacobianData,
    gravity_sign: f64,
    params: &SolverParams,
) -> Result<PressureResult> {
    let grid = state.grid().clone();
    let tr = velocity_gradient_trace(&state.v, jac)?;
    let rhs = &ScalarFieldDisk::constant(&grid, gravity_sign) - &tr;
    let coeff = Coefficient::from_jacobian(jac)?;
    let problem = EllipticProblem::new(coeff, rhs, BoundaryFieldCircle::zeros(grid.n_modes()))?;
    let out = solve_dirichlet_full(&problem, params)?;
    let grad_p = eulerian_gradient(&out.u, jac)?;
    Ok(PressureResult {
        p: out.u,
        grad_p,
        iterations: out.iterations,
        relative_residual: out.relative_residual,
    })
}

pub fn pressure_solve(state: &FlowState, gravity_sign: f64, params: &SolverParams) -> Result<(ScalarFieldDisk, VectorFieldDisk)> {
    let jac = jacobian(&state.x)?;
    let r = pressure_solve_with(state, &jac, gravity_sign, params)?;
    Ok((r.p, r.grad_p))
}

/// −∇p·N sampled on the boundary geometry.
pub fn normal_pressure_gradient(grad_p: &VectorFieldDisk, geom: &BoundaryGeometry) -> Vec<f64> {
    let tr = grad_p.trace();
    let g = [tr[0].samples(geom.n_samples), tr[1].samples(geom.n_samples)];
    (0..geom.n_samples)
        .map(|i| -(g[0][i] * geom.normal[0][i] + g[1][i] * geom.normal[1][i]))
        .collect()
}

/// c₀ = min over the boundary of −∇p·N.
pub fn taylor_sign(grad_p: &VectorFieldDisk, geom: &BoundaryGeometry) -> f64 {
    normal_pressure_gradient(grad_p, geom)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}
