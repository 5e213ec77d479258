//! Lagrangian time stepping: dx/dt = V, dV/dt = −(∇p + ∇φ)∘x.

use std::f64::consts::PI;

use crate::disk_spectral::{make_cutoffs, BoundaryFieldCircle, Grid, ScalarFieldDisk, VectorFieldDisk};
use crate::elliptic::{pressure_solve_with, solve_neumann_scaled, taylor_sign, Coefficient, SolverParams};
use crate::energies::{energy_report, EnergyContext, EnergyReport};
use crate::error::{Error, Result};
use crate::geometry::{boundary_geometry, div_curl, eulerian_gradient, jacobian, FlowState, JacobianData, DEFAULT_DET_TOLERANCE};
use crate::potential::solve_potential;

/// What to do when the Taylor constant c₀ is not positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaylorPolicy {
    /// Continue for one output interval, then abort if it persists.
    Warn,
    Abort,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    pub dt: f64,
    pub gravity_sign: f64,
    pub project_divergence: bool,
    pub det_tolerance: f64,
    pub taylor_policy: TaylorPolicy,
    /// C in dt ≤ C·h^{3/2}, h = 2π/K.
    pub cfl: f64,
    pub solver: SolverParams,
}

impl Default for StepParams {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            gravity_sign: -1.0,
            project_divergence: true,
            det_tolerance: DEFAULT_DET_TOLERANCE,
            taylor_policy: TaylorPolicy::Warn,
            cfl: 0.5,
            solver: SolverParams::default(),
        }
    }
}

impl StepParams {
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Parameter(format!("dt must be positive, got {}", self.dt)));
        }
        if self.gravity_sign != 1.0 && self.gravity_sign != -1.0 {
            return Err(Error::Parameter(format!("gravity sign must be ±1, got {}", self.gravity_sign)));
        }
        let limit = timestep_limit(grid, self.cfl);
        if self.dt > limit {
            return Err(Error::Timestep { dt: self.dt, limit });
        }
        self.solver.validate()
    }
}

/// C·h^{3/2} with h = 2π/K.
pub fn timestep_limit(grid: &Grid, cfl: f64) -> f64 {
    let h = 2.0 * PI / grid.n_modes() as f64;
    cfl * h.powf(1.5)
}

/// Monitors refreshed at each output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimDiagnostics {
    pub det_drift: f64,
    pub vorticity_drift: f64,
    pub div_v: f64,
    pub c0: f64,
}

/// Acceleration together with the fields it was built from.
#[derive(Clone, Debug)]
pub struct Acceleration {
    pub a: VectorFieldDisk,
    pub grad_p: VectorFieldDisk,
    pub grad_phi: VectorFieldDisk,
    pub jac: JacobianData,
}

/// dV/dt = −(∇p + ∇φ)∘x.
pub fn acceleration(state: &FlowState, gravity_sign: f64, solver: &SolverParams) -> Result<Acceleration> {
    let jac = jacobian(&state.x)?;
    let pr = pressure_solve_with(state, &jac, gravity_sign, solver)?;
    let pot = solve_potential(&state.x, gravity_sign, solver)?;
    let a = (&pr.grad_p + &pot.grad_phi).scale(-1.0);
    Ok(Acceleration {
        a,
        grad_p: pr.grad_p,
        grad_phi: pot.grad_phi,
        jac,
    })
}

/// V − (∇ψ)∘x with Δψ = div v and constant normal derivative
/// ∂_Nψ = ∫div v / |∂Ω_t| (the compatible choice, which is zero for
/// divergence-free input).
pub fn project_divergence(v: &VectorFieldDisk, x: &VectorFieldDisk, solver: &SolverParams) -> Result<VectorFieldDisk> {
    let jac = jacobian(x)?;
    project_divergence_with(v, x, &jac, solver)
}

pub fn project_divergence_with(
    v: &VectorFieldDisk,
    x: &VectorFieldDisk,
    jac: &JacobianData,
    solver: &SolverParams,
) -> Result<VectorFieldDisk> {
    let (div, _) = div_curl(v, jac)?;
    let geom = boundary_geometry(x)?;
    let flux_const = div.integral().re / geom.length();
    let density: BoundaryFieldCircle = geom.density_coeffs();
    let flux = density.map_modes(|_| flux_const.into());
    let coeff = Coefficient::from_jacobian(jac)?;
    let (out, _) = solve_neumann_scaled(&coeff, &div, &flux, solver, v.l2_norm())?;
    let grad = eulerian_gradient(&out.u, jac)?;
    v.axpy(-1.0, &grad)
}

/// Scalar curl of v at the material points.
pub fn material_vorticity(state: &FlowState) -> Result<ScalarFieldDisk> {
    let jac = jacobian(&state.x)?;
    Ok(div_curl(&state.v, &jac)?.1)
}

/// max_t ‖curl(t) − curl(0)‖_{L²} over a series of material vorticities.
pub fn vorticity_drift(series: &[ScalarFieldDisk]) -> f64 {
    match series.first() {
        None => 0.0,
        Some(first) => series.iter().map(|w| (w - first).l2_norm()).fold(0.0, f64::max),
    }
}

fn rk_stage(state: &FlowState, kx: &VectorFieldDisk, kv: &VectorFieldDisk, h: f64) -> Result<FlowState> {
    FlowState::new(state.t + h, state.x.axpy(h, kx)?, state.v.axpy(h, kv)?)
}

/// One classical RK4 step on (x, V), followed by the optional projection
/// and the det-drift check.
pub fn step(state: &FlowState, params: &StepParams) -> Result<FlowState> {
    let dt = params.dt;
    let s = params.gravity_sign;
    let k1v = acceleration(state, s, &params.solver)?.a;
    let k1x = state.v.clone();
    let s2 = rk_stage(state, &k1x, &k1v, 0.5 * dt)?;
    let k2v = acceleration(&s2, s, &params.solver)?.a;
    let k2x = s2.v.clone();
    let s3 = rk_stage(state, &k2x, &k2v, 0.5 * dt)?;
    let k3v = acceleration(&s3, s, &params.solver)?.a;
    let k3x = s3.v.clone();
    let s4 = rk_stage(state, &k3x, &k3v, dt)?;
    let k4v = acceleration(&s4, s, &params.solver)?.a;
    let k4x = s4.v.clone();
    let combine = |base: &VectorFieldDisk, k: [&VectorFieldDisk; 4]| -> Result<VectorFieldDisk> {
        base.axpy(dt / 6.0, k[0])?
            .axpy(dt / 3.0, k[1])?
            .axpy(dt / 3.0, k[2])?
            .axpy(dt / 6.0, k[3])
    };
    let x = combine(&state.x, [&k1x, &k2x, &k3x, &k4x])?;
    let mut v = combine(&state.v, [&k1v, &k2v, &k3v, &k4v])?;
    let jac = jacobian(&x)?;
    let drift = jac.det_drift();
    let t = state.t + dt;
    if drift > params.det_tolerance {
        return Err(Error::DetDrift {
            drift,
            tolerance: params.det_tolerance,
            t,
        });
    }
    if params.project_divergence {
        v = project_divergence_with(&v, &x, &jac, &params.solver)?;
    }
    FlowState::new(t, x, v)
}

/// Initial data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialCondition {
    Static,
    Rotation { omega: f64 },
    /// Base rotation ω (0 for the static drop) with the boundary displaced by
    /// the area-preserving flow of ε∇(ρ^k cos kθ / k).
    Perturbed { omega: f64, mode: u32, amplitude: f64 },
}

/// Time-one flow of ε∇h, h = Re(z^k)/k, by RK4 substeps.
pub fn harmonic_flow_map(y: [f64; 2], mode: u32, amplitude: f64) -> [f64; 2] {
    let field = |p: [f64; 2]| -> [f64; 2] {
        // ∇h = (Re z^{k−1}, −Im z^{k−1})
        let z = num_complex::Complex64::new(p[0], p[1]).powu(mode.saturating_sub(1));
        [amplitude * z.re, -amplitude * z.im]
    };
    let n = 64;
    let h = 1.0 / n as f64;
    let mut p = y;
    for _ in 0..n {
        let k1 = field(p);
        let k2 = field([p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1]]);
        let k3 = field([p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1]]);
        let k4 = field([p[0] + h * k3[0], p[1] + h * k3[1]]);
        p[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        p[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    p
}

impl InitialCondition {
    pub fn build(&self, grid: &Grid) -> Result<FlowState> {
        let (x, omega) = match *self {
            InitialCondition::Static => (VectorFieldDisk::identity(grid), 0.0),
            InitialCondition::Rotation { omega } => (VectorFieldDisk::identity(grid), omega),
            InitialCondition::Perturbed { omega, mode, amplitude } => {
                if mode < 2 {
                    return Err(Error::Parameter(format!("perturbation mode must be at least 2, got {mode}")));
                }
                let x = VectorFieldDisk::from_cartesian(grid, |a, b| harmonic_flow_map([a, b], mode, amplitude));
                (x, omega)
            }
        };
        let v = VectorFieldDisk::new(x.c[1].scale(-omega), x.c[0].scale(omega))?;
        FlowState::new(0.0, x, v)
    }
}

/// Everything a run needs.
#[derive(Clone, Debug)]
pub struct RunSetup {
    pub initial: FlowState,
    pub params: StepParams,
    pub t_end: f64,
    pub output_interval: f64,
    pub d0: f64,
}

/// Why a run stopped.
#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    Completed,
    DetDrift(String),
    TaylorViolated(String),
    SolverFailure(String),
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::DetDrift(_) => "det_drift",
            Termination::TaylorViolated(_) => "taylor_violated",
            Termination::SolverFailure(_) => "numerical_failure",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Termination::Completed => "",
            Termination::DetDrift(s) | Termination::TaylorViolated(s) | Termination::SolverFailure(s) => s,
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::DetDrift { .. } => Termination::DetDrift(e.to_string()),
            Error::TaylorViolated { .. } => Termination::TaylorViolated(e.to_string()),
            _ => Termination::SolverFailure(e.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimRecord {
    pub t: f64,
    pub energy: EnergyReport,
    pub diag: SimDiagnostics,
}

#[derive(Clone, Debug)]
pub struct SimOutput {
    pub records: Vec<SimRecord>,
    pub status: Termination,
    pub final_state: FlowState,
    /// Non-fatal notices such as a first Taylor-sign warning.
    pub warnings: Vec<String>,
}

/// Output schedule: (number of intervals, steps per interval, step size).
pub fn schedule(t_end: f64, output_interval: f64, dt: f64) -> Result<(usize, usize, f64)> {
    if !(output_interval > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Parameter("t_end must be ≥ 0 and output_interval > 0".into()));
    }
    let n_out = (t_end / output_interval + 1e-9).floor() as usize;
    let steps = (output_interval / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((n_out, steps, output_interval / steps as f64))
}

struct Recorder {
    running_sup: f64,
    curl0: Option<ScalarFieldDisk>,
    vort_drift: f64,
}

impl Recorder {
    fn record(&mut self, state: &FlowState, setup: &RunSetup) -> Result<SimRecord> {
        let grid = state.grid().clone();
        let jac = jacobian(&state.x)?;
        let geom = boundary_geometry(&state.x)?;
        let pr = pressure_solve_with(state, &jac, setup.params.gravity_sign, &setup.params.solver)?;
        let c0 = taylor_sign(&pr.grad_p, &geom);
        let (div, curl) = div_curl(&state.v, &jac)?;
        let first = self.curl0.get_or_insert_with(|| curl.clone());
        self.vort_drift = self.vort_drift.max((&curl - first).l2_norm());
        let cutoffs = make_cutoffs(setup.d0, 1, &grid)?;
        let ctx = EnergyContext {
            jac: &jac,
            geom: &geom,
            grad_p: &pr.grad_p,
            cutoffs: &cutoffs,
        };
        let energy = energy_report(state, &ctx, self.running_sup)?;
        self.running_sup = energy.e;
        Ok(SimRecord {
            t: state.t,
            energy,
            diag: SimDiagnostics {
                det_drift: jac.det_drift(),
                vorticity_drift: self.vort_drift,
                div_v: div.l2_norm(),
                c0,
            },
        })
    }
}

/// Runs to t_end, recording at t = 0 and every output interval.
pub fn simulate(setup: &RunSetup) -> Result<SimOutput> {
    let grid = setup.initial.grid().clone();
    let (n_out, steps, dt) = schedule(setup.t_end, setup.output_interval, setup.params.dt)?;
    let mut params = setup.params;
    params.dt = dt;
    params.validate(&grid)?;
    setup.initial.validate(params.det_tolerance)?;
    let mut rec = Recorder {
        running_sup: 0.0,
        curl0: None,
        vort_drift: 0.0,
    };
    let mut records = Vec::with_capacity(n_out + 1);
    let mut warnings = Vec::new();
    let mut state = setup.initial.clone();
    let mut taylor_warned = false;
    let mut status = Termination::Completed;
    for out in 0..=n_out {
        if out > 0 {
            for _ in 0..steps {
                match step(&state, &params) {
                    Ok(s) => state = s,
                    Err(e) => {
                        status = Termination::from_error(&e);
                        break;
                    }
                }
            }
            if status != Termination::Completed {
                break;
            }
            state.t = setup.output_interval * out as f64;
        }
        let r = match rec.record(&state, setup) {
            Ok(r) => r,
            Err(e) => {
                status = Termination::from_error(&e);
                break;
            }
        };
        let c0 = r.diag.c0;
        records.push(r);
        if c0 <= 0.0 {
            let err = Error::TaylorViolated { c0, t: state.t };
            match (params.taylor_policy, taylor_warned) {
                (TaylorPolicy::Warn, false) => {
                    taylor_warned = true;
                    warnings.push(err.to_string());
                }
                _ => {
                    status = Termination::from_error(&err);
                    break;
                }
            }
        } else {
            taylor_warned = false;
        }
    }
    Ok(SimOutput {
        records,
        status,
        final_state: state,
        warnings,
    })
}
