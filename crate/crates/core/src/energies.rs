//! Energy functionals E, E₁–E₄ and the trace bound on x assembled from E₃, E₄.

use crate::disk_spectral::{
    localized_norm_sq, sobolev_norm, sobolev_norm_sq, sobolev_norm_vector, CutoffFamily, CutoffKind, VectorFieldDisk,
};
use crate::elliptic::normal_pressure_gradient;
use crate::error::{Error, Result};
use crate::geometry::{div_curl, BoundaryGeometry, FlowState, JacobianData};

/// Energies and norms at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    /// Running sup of ‖V‖₅ + ‖x‖₅.₅ + ‖curl v‖_{H^{4.5}(Ω_t)}.
    pub e: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub c0: f64,
    pub norm_v_5: f64,
    pub norm_x_5p5: f64,
    pub norm_curl_4p5: f64,
    /// NaN when c₀ ≤ 0.
    pub x_norm_bound: f64,
}

/// Precomputed fields shared by the energy functionals.
pub struct EnergyContext<'a> {
    pub jac: &'a JacobianData,
    pub geom: &'a BoundaryGeometry,
    pub grad_p: &'a VectorFieldDisk,
    pub cutoffs: &'a CutoffFamily,
}

/// The three norms entering E.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EComponents {
    pub norm_v_5: f64,
    pub norm_x_5p5: f64,
    pub norm_curl_4p5: f64,
}

/// Returns (max(running_sup, ‖V‖₅ + ‖x‖₅.₅ + ‖curl v‖_{H^{4.5}(Ω_t)}), components).
pub fn energy_e(state: &FlowState, jac: &JacobianData, running_sup: f64) -> Result<(f64, EComponents)> {
    let norm_v_5 = sobolev_norm_vector(&state.v, 5.0, None)?;
    let norm_x_5p5 = sobolev_norm_vector(&state.x, 5.5, None)?;
    let (_, curl) = div_curl(&state.v, jac)?;
    let norm_curl_4p5 = sobolev_norm(&curl, 4.5, Some(jac))?;
    let total = norm_v_5 + norm_x_5p5 + norm_curl_4p5;
    Ok((
        running_sup.max(total),
        EComponents {
            norm_v_5,
            norm_x_5p5,
            norm_curl_4p5,
        },
    ))
}

/// E₁ = ‖ζ∂θ⁵v‖²_{L²(Ω_t)} + ‖ηv‖²_{H⁵(Ω_t)} with ∂θ acting on the pulled-back components.
pub fn energy_e1(state: &FlowState, jac: &JacobianData, cutoffs: &CutoffFamily) -> Result<f64> {
    let mut total = 0.0;
    for c in &state.v.c {
        let mut d = c.clone();
        for _ in 0..5 {
            d = d.tangential_derivative();
        }
        total += localized_norm_sq(&d, cutoffs, CutoffKind::Zeta, 0, Some(jac))?;
        total += localized_norm_sq(c, cutoffs, CutoffKind::Eta, 5, Some(jac))?;
    }
    Ok(total)
}

/// E₂ = ‖curl v‖_{H^{4.5}(Ω_t)}.
pub fn energy_e2(state: &FlowState, jac: &JacobianData) -> Result<f64> {
    let (_, curl) = div_curl(&state.v, jac)?;
    sobolev_norm(&curl, 4.5, Some(jac))
}

/// ∂θ^j x on the boundary as Fourier multipliers on the trace, sampled on the geometry.
fn trace_derivative_samples(geom: &BoundaryGeometry, j: u32) -> [Vec<f64>; 2] {
    let n = geom.n_samples;
    [
        geom.x_trace[0].tangential_derivative_n(j).samples(n),
        geom.x_trace[1].tangential_derivative_n(j).samples(n),
    ]
}

fn project(geom: &BoundaryGeometry, v: &[Vec<f64>; 2], frame: &[Vec<f64>; 2]) -> Vec<f64> {
    (0..geom.n_samples)
        .map(|i| v[0][i] * frame[0][i] + v[1][i] * frame[1][i])
        .collect()
}

/// E₃ = ∫_{∂Ω_t} (−∇p·N)[(∂θ⁵x)·N]² dS.
pub fn energy_e3(geom: &BoundaryGeometry, grad_p: &VectorFieldDisk) -> f64 {
    let weight = normal_pressure_gradient(grad_p, geom);
    let d5 = trace_derivative_samples(geom, 5);
    let dn = project(geom, &d5, &geom.normal);
    let g: Vec<f64> = weight.iter().zip(&dn).map(|(w, d)| w * d * d).collect();
    geom.integrate_samples(&g)
}

/// E₄ = Σ_a ‖div[∂_a x]‖²_{H^{3.5}(Ω_t)} + ‖curl[∂_a x]‖²_{H^{3.5}(Ω_t)}.
pub fn energy_e4(jac: &JacobianData) -> Result<f64> {
    let mut total = 0.0;
    for a in 0..2 {
        let col = VectorFieldDisk::new(jac.b[0][a].clone(), jac.b[1][a].clone())?;
        let (div, curl) = div_curl(&col, jac)?;
        total += sobolev_norm_sq(&div, 3.5, Some(jac))?;
        total += sobolev_norm_sq(&curl, 3.5, Some(jac))?;
    }
    Ok(total)
}

/// Squared L²(∂Ω_t) norms of the normal and tangential parts of ∂θ^j x, j = 0..=5.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTraces {
    pub normal: [f64; 6],
    pub tangential: [f64; 6],
    /// max |∂θx| / min |∂θx|.
    pub density_ratio: f64,
}

pub fn boundary_traces(geom: &BoundaryGeometry) -> BoundaryTraces {
    let mut normal = [0.0; 6];
    let mut tangential = [0.0; 6];
    for j in 0..6 {
        let d = trace_derivative_samples(geom, j as u32);
        let n: Vec<f64> = project(geom, &d, &geom.normal).iter().map(|v| v * v).collect();
        let q: Vec<f64> = project(geom, &d, &geom.tangent).iter().map(|v| v * v).collect();
        normal[j] = geom.integrate_samples(&n);
        tangential[j] = geom.integrate_samples(&q);
    }
    let lo = geom.density.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = geom.density.iter().cloned().fold(0.0, f64::max);
    BoundaryTraces {
        normal,
        tangential,
        density_ratio: hi / lo,
    }
}

/// ‖(⟨∂θ⟩⁵x)·N‖²_{L²(∂Ω_t)} computed directly.
pub fn top_normal_trace(geom: &BoundaryGeometry) -> f64 {
    let n = geom.n_samples;
    let s = [
        geom.x_trace[0].fractional_tangential(5.0).samples(n),
        geom.x_trace[1].fractional_tangential(5.0).samples(n),
    ];
    let d: Vec<f64> = project(geom, &s, &geom.normal).iter().map(|v| v * v).collect();
    geom.integrate_samples(&d)
}

/// Bound on ‖(⟨∂θ⟩⁵x)·N‖² from E₃, E₄ and the lower-order traces.
///
/// Per Fourier mode (1 + k²)⁵ ≤ 10 Σ_{j≤5} k^{2j}; the top normal term is
/// replaced by E₃/c₀; tangential parts and the change between dθ and dS
/// (density ratio) are carried explicitly. E₄ is added as the interior part.
pub fn reconstruct_x_bound(e3: f64, e4: f64, c0: f64, traces: &BoundaryTraces) -> Result<f64> {
    if !(c0 > 0.0) {
        return Err(Error::BoundUnavailable(c0));
    }
    let low: f64 = (0..5).map(|j| traces.normal[j] + traces.tangential[j]).sum();
    let top = traces.tangential[5] + e3 / c0;
    Ok(10.0 * traces.density_ratio * (low + top) + e4)
}

/// max over |k| ≤ k_max of (1 + k²)⁵ / (10 Σ_{j=0}^{5} k^{2j}).
pub fn binomial_inequality_ratio(k_max: u64) -> f64 {
    (0..=k_max)
        .map(|k| {
            let k2 = (k as f64) * (k as f64);
            let lhs = (1.0 + k2).powi(5);
            let rhs = 10.0 * (0..=5).map(|j| k2.powi(j)).sum::<f64>();
            lhs / rhs
        })
        .fold(0.0, f64::max)
}

/// Full report at one instant.
pub fn energy_report(state: &FlowState, ctx: &EnergyContext<'_>, running_sup: f64) -> Result<EnergyReport> {
    let (e, comp) = energy_e(state, ctx.jac, running_sup)?;
    let e1 = energy_e1(state, ctx.jac, ctx.cutoffs)?;
    let e2 = comp.norm_curl_4p5;
    let e3 = energy_e3(ctx.geom, ctx.grad_p);
    let e4 = energy_e4(ctx.jac)?;
    let c0 = crate::elliptic::taylor_sign(ctx.grad_p, ctx.geom);
    let traces = boundary_traces(ctx.geom);
    let x_norm_bound = reconstruct_x_bound(e3, e4, c0, &traces).unwrap_or(f64::NAN);
    Ok(EnergyReport {
        t: state.t,
        e,
        e1,
        e2,
        e3,
        e4,
        c0,
        norm_v_5: comp.norm_v_5,
        norm_x_5p5: comp.norm_x_5p5,
        norm_curl_4p5: comp.norm_curl_4p5,
        x_norm_bound,
    })
}

/// Centered-difference rates of E, E₁..E₄ at interior samples.
#[derive(Clone, Debug, PartialEq)]
pub struct RateRow {
    pub t: f64,
    /// Values (E, E₁, E₂, E₃, E₄).
    pub values: [f64; 5],
    pub rates: [f64; 5],
    /// Some |rate| exceeds the polynomial bound Σ_n c_n E^n.
    pub flagged: bool,
}

/// Empirical d/dt of the energies; rows are flagged when a rate exceeds
/// the polynomial Σ_n coeffs[n]·E^n at that instant.
pub fn energy_rate_report(series: &[EnergyReport], coeffs: &[f64]) -> Vec<RateRow> {
    let vals = |r: &EnergyReport| [r.e, r.e1, r.e2, r.e3, r.e4];
    let poly = |e: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * e + c);
    series
        .windows(3)
        .map(|w| {
            let (a, m, b) = (vals(&w[0]), vals(&w[1]), vals(&w[2]));
            let dt = w[2].t - w[0].t;
            let mut rates = [0.0; 5];
            for i in 0..5 {
                rates[i] = (b[i] - a[i]) / dt;
            }
            let cap = poly(w[1].e);
            let flagged = !coeffs.is_empty() && rates.iter().any(|r| r.abs() > cap);
            RateRow {
                t: w[1].t,
                values: m,
                rates,
                flagged,
            }
        })
        .collect()
}
