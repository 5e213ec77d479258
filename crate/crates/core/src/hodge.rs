//! Numerical checks of the div/curl toolbox: the pointwise decomposition,
//! graded and boundary Hodge estimates, the normal/tangential trade and the
//! tangential multiplier lemmas.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::disk_spectral::{
    localized_norm, localized_norm_vector, pointwise, sobolev_norm, sobolev_norm_vector, CutoffFamily, CutoffKind, Grid,
    ScalarFieldDisk, VectorFieldDisk,
};
use crate::error::{Error, Result};
use crate::geometry::{boundary_geometry, div_curl, eulerian_jacobian, jacobian, FlowState};

const TRIVIAL: f64 = 1e-14;

/// One side-by-side evaluation of an inequality `lhs ≤ C·rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs/rhs; 0 when both sides vanish, ∞ when only the right side does.
    pub empirical_constant: f64,
    pub sample_descriptor: String,
    pub ceiling: f64,
    /// Whether `pass` is a hard requirement or the constant is only reported.
    pub asserted: bool,
    /// Error of an exact identity checked alongside, if any.
    pub identity_error: Option<f64>,
    pub pass: bool,
}

impl InequalityReport {
    fn new(name: &str, lhs: f64, rhs: f64, descriptor: String, ceiling: f64, asserted: bool) -> Self {
        let empirical_constant = if rhs > TRIVIAL {
            lhs / rhs
        } else if lhs <= TRIVIAL {
            0.0
        } else {
            f64::INFINITY
        };
        let pass = empirical_constant.is_finite() && empirical_constant <= ceiling;
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            empirical_constant,
            sample_descriptor: descriptor,
            ceiling,
            asserted,
            identity_error: None,
            pass,
        }
    }

    /// Report whose constant is recorded but not bounded.
    fn reported(name: &str, lhs: f64, rhs: f64, descriptor: String) -> Self {
        Self::new(name, lhs, rhs, descriptor, f64::INFINITY, false)
    }

    fn with_identity(mut self, error: f64, tol: f64) -> Self {
        self.identity_error = Some(error);
        if !(error <= tol) {
            self.pass = false;
        }
        self
    }
}

/// ⟨k⟩ = (1 + k²)^{1/2}.
pub fn japanese_bracket(k: f64) -> f64 {
    (1.0 + k * k).sqrt()
}

fn matrix_norm(m: &[[f64; 2]; 2]) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Pointwise check of |ζ∇α| ≤ |ζ curl α| + |ζ div α| + |ζ∂θα| on the support of ζ.
///
/// `alpha` holds α∘x. Also recovers ∇α from (div α, curl α, ∂θα) by solving
/// the 4×4 linear system with ∂θα = (∇α)·∂θx, and reports the largest
/// reconstruction error relative to the largest |∇α|.
pub fn pointwise_decomposition_check(
    alpha: &VectorFieldDisk,
    state: &FlowState,
    zeta: &CutoffFamily,
) -> Result<InequalityReport> {
    let jac = jacobian(&state.x)?;
    let m = eulerian_jacobian(alpha, &jac)?;
    let dt_alpha = alpha.tangential_derivative();
    let t = state.x.tangential_derivative();
    let inputs = [
        &m[0][0], &m[0][1], &m[1][0], &m[1][1], &dt_alpha.c[0], &dt_alpha.c[1], &t.c[0], &t.c[1],
    ];
    let mut worst = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut max_grad = 0.0f64;
    let mut max_err = 0.0f64;
    pointwise(&inputs, 0, |pt, v, _| {
        if zeta.zeta[pt.radial_index] <= 0.0 {
            return Ok(());
        }
        let g = [[v[0].re, v[1].re], [v[2].re, v[3].re]];
        let dta = [v[4].re, v[5].re];
        let tv = [v[6].re, v[7].re];
        let div = g[0][0] + g[1][1];
        let curl = g[1][0] - g[0][1];
        let sys = Matrix4::new(
            1.0, 0.0, 0.0, 1.0, //
            0.0, -1.0, 1.0, 0.0, //
            tv[0], tv[1], 0.0, 0.0, //
            0.0, 0.0, tv[0], tv[1],
        );
        let rhs = Vector4::new(div, curl, dta[0], dta[1]);
        let rec = sys
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Parameter(format!("tangential field vanishes at rho = {}", pt.rho)))?;
        let err = ((rec[0] - g[0][0]).powi(2)
            + (rec[1] - g[0][1]).powi(2)
            + (rec[2] - g[1][0]).powi(2)
            + (rec[3] - g[1][1]).powi(2))
        .sqrt();
        let lhs = matrix_norm(&g);
        let rhs = 2f64.sqrt() * curl.abs() + div.abs() + dta[0].hypot(dta[1]);
        max_err = max_err.max(err);
        max_grad = max_grad.max(lhs);
        let ratio = if rhs > TRIVIAL { lhs / rhs } else if lhs > TRIVIAL { f64::INFINITY } else { 0.0 };
        if ratio > worst.0 {
            worst = (ratio, lhs, rhs, pt.rho);
        }
        Ok(())
    })?;
    let rel_err = if max_grad > TRIVIAL { max_err / max_grad } else { max_err };
    let desc = format!("max ratio at rho = {:.6}, zeta support from {:.4}", worst.3, zeta.transition().0);
    Ok(InequalityReport::reported("pointwise_decomposition", worst.1, worst.2, desc).with_identity(rel_err, 1e-10))
}

/// ‖ζα‖_{H^s(Ω_t)} against ‖ζα‖ + ‖ζ curl α‖_{H^{s−1}} + ‖ζ div α‖_{H^{s−1}} + Σ_{j≤s}‖ζ∂θ^jα‖.
pub fn graded_estimate_check(
    alpha: &VectorFieldDisk,
    state: &FlowState,
    s: usize,
    zeta: &CutoffFamily,
) -> Result<InequalityReport> {
    if !(1..=5).contains(&s) {
        return Err(Error::SobolevOrder(s as f64));
    }
    let jac = jacobian(&state.x)?;
    let (div, curl) = div_curl(alpha, &jac)?;
    let z = CutoffKind::Zeta;
    let lhs = localized_norm_vector(alpha, zeta, z, s, Some(&jac))?;
    let mut rhs = localized_norm_vector(alpha, zeta, z, 0, Some(&jac))?
        + localized_norm(&curl, zeta, z, s - 1, Some(&jac))?
        + localized_norm(&div, zeta, z, s - 1, Some(&jac))?;
    let mut d = alpha.clone();
    for _ in 0..s {
        d = d.tangential_derivative();
        rhs += localized_norm_vector(&d, zeta, z, 0, Some(&jac))?;
    }
    Ok(InequalityReport::reported("graded_estimate", lhs, rhs, format!("s = {s}")))
}

/// Which boundary component enters the boundary Hodge estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceSide {
    Normal,
    Tangential,
}

/// ‖α‖_{H^s(Ω_t)} against ‖α‖ + ‖div α‖_{H^{s−1}} + ‖curl α‖_{H^{s−1}} + ‖(⟨∂θ⟩^{s−1/2}α)·N‖_{L²(∂Ω_t)}
/// (or ·Q on the tangential side).
pub fn full_hodge_check(alpha: &VectorFieldDisk, state: &FlowState, s: f64, side: TraceSide) -> Result<InequalityReport> {
    if !(1.0..=5.0).contains(&s) {
        return Err(Error::SobolevOrder(s));
    }
    let jac = jacobian(&state.x)?;
    let geom = boundary_geometry(&state.x)?;
    let (div, curl) = div_curl(alpha, &jac)?;
    let lhs = sobolev_norm_vector(alpha, s, Some(&jac))?;
    let tr = alpha.trace();
    let n = geom.n_samples;
    let lifted: [Vec<f64>; 2] = [
        tr[0].fractional_tangential(s - 0.5).samples(n),
        tr[1].fractional_tangential(s - 0.5).samples(n),
    ];
    let frame = match side {
        TraceSide::Normal => &geom.normal,
        TraceSide::Tangential => &geom.tangent,
    };
    let sq: Vec<f64> = (0..n)
        .map(|i| (lifted[0][i] * frame[0][i] + lifted[1][i] * frame[1][i]).powi(2))
        .collect();
    let boundary = geom.integrate_samples(&sq).sqrt();
    let rhs = alpha.l2_norm()
        + sobolev_norm(&div, s - 1.0, Some(&jac))?
        + sobolev_norm(&curl, s - 1.0, Some(&jac))?
        + boundary;
    let name = match side {
        TraceSide::Normal => "full_hodge_normal",
        TraceSide::Tangential => "full_hodge_tangential",
    };
    Ok(InequalityReport::reported(name, lhs, rhs, format!("s = {s}")))
}

/// |‖α·N‖² − ‖α·Q‖²| on ∂Ω_t against ‖x‖_{H⁵}[‖α‖² + ‖div α‖ + ‖curl α‖].
pub fn normal_tangential_trade_check(alpha: &VectorFieldDisk, state: &FlowState) -> Result<InequalityReport> {
    let jac = jacobian(&state.x)?;
    let geom = boundary_geometry(&state.x)?;
    let n = geom.n_samples;
    let tr = alpha.trace();
    let a = [tr[0].samples(n), tr[1].samples(n)];
    let diff: Vec<f64> = (0..n)
        .map(|i| {
            let an = a[0][i] * geom.normal[0][i] + a[1][i] * geom.normal[1][i];
            let aq = a[0][i] * geom.tangent[0][i] + a[1][i] * geom.tangent[1][i];
            an * an - aq * aq
        })
        .collect();
    let lhs = geom.integrate_samples(&diff).abs();
    let (div, curl) = div_curl(alpha, &jac)?;
    let weight = sobolev_norm_vector(&state.x, 5.0, None)?;
    let rhs = weight * (alpha.l2_norm_sq() + div.l2_norm() + curl.l2_norm());
    Ok(InequalityReport::reported("normal_tangential_trade", lhs, rhs, format!("weight ||x||_5 = {weight:.6}")))
}

/// Tangential Fourier profiles k ↦ f_k(ρ_j) at the radial nodes, closed under
/// exact mode convolution.
#[derive(Clone, Debug)]
struct Profiles {
    grid: Grid,
    modes: BTreeMap<i64, Vec<Complex64>>,
}

impl Profiles {
    fn of(f: &ScalarFieldDisk) -> Self {
        let grid = f.grid().clone();
        let mut modes = BTreeMap::new();
        for slot in 0..grid.n_modes() {
            let k = grid.wavenumber(slot);
            let p = f.mode(k);
            if p.iter().any(|c| c.norm_sqr() > 0.0) {
                modes.insert(k, p.to_vec());
            }
        }
        Profiles { grid, modes }
    }

    fn product(&self, other: &Self) -> Self {
        let mut modes: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
        for (&k, a) in &self.modes {
            for (&l, b) in &other.modes {
                let out = modes.entry(k + l).or_insert_with(|| vec![Complex64::new(0.0, 0.0); a.len()]);
                for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
                    *o += x * y;
                }
            }
        }
        Profiles { grid: self.grid.clone(), modes }
    }

    /// ⟨∂θ⟩^s.
    fn bracket(&self, s: f64) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|(&k, p)| {
                let w = japanese_bracket(k as f64).powf(s);
                (k, p.iter().map(|c| c * w).collect())
            })
            .collect();
        Profiles { grid: self.grid.clone(), modes }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut modes = self.modes.clone();
        for (&k, b) in &other.modes {
            let out = modes.entry(k).or_insert_with(|| vec![Complex64::new(0.0, 0.0); b.len()]);
            for (o, y) in out.iter_mut().zip(b) {
                *o -= y;
            }
        }
        Profiles { grid: self.grid.clone(), modes }
    }

    fn l2_norm(&self) -> f64 {
        let w = self.grid.weights();
        let total: f64 = self
            .modes
            .values()
            .map(|p| p.iter().zip(w).map(|(c, w)| c.norm_sqr() * w).sum::<f64>())
            .sum();
        (2.0 * PI * total).sqrt()
    }
}

/// ‖⟨∂θ⟩^{1/2}[fg] − ⟨∂θ⟩^{1/2}[f]g‖ against ‖f‖‖⟨∂θ⟩^{1/2+a}g‖, with products
/// formed by exact mode convolution.
pub fn product_commutator_check(f: &ScalarFieldDisk, g: &ScalarFieldDisk, a: f64) -> Result<InequalityReport> {
    if !(a > 0.5) {
        return Err(Error::Parameter(format!("commutator exponent a must exceed 1/2, got {a}")));
    }
    if !f.grid().same_shape(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let (pf, pg) = (Profiles::of(f), Profiles::of(g));
    let comm = pf.product(&pg).bracket(0.5).sub(&pf.bracket(0.5).product(&pg));
    let lhs = comm.l2_norm();
    let rhs = pf.l2_norm() * pg.bracket(0.5 + a).l2_norm();
    Ok(InequalityReport::reported("product_commutator", lhs, rhs, format!("a = {a}")))
}

/// Closed-form constant of the commutator check for f = ρ^k e^{ikθ}, g = ρ^l e^{ilθ}.
pub fn commutator_single_mode_constant(k: i64, l: i64, a: f64) -> f64 {
    let norm = |n: i64| (2.0 * PI / (2 * n.abs() + 2) as f64).sqrt();
    let b = |n: i64| japanese_bracket(n as f64).sqrt();
    (b(k + l) - b(k)).abs() * japanese_bracket(l as f64).powf(-(0.5 + a)) * norm(k.abs() + l.abs())
        / (norm(k) * norm(l))
}

/// Commutator check on single modes, measured against the closed form.
pub fn commutator_single_mode_check(grid: &Grid, k: i64, l: i64, a: f64) -> Result<InequalityReport> {
    let f = ScalarFieldDisk::single_mode(grid, k, |r| r.powi(k.abs() as i32).into())?;
    let g = ScalarFieldDisk::single_mode(grid, l, |r| r.powi(l.abs() as i32).into())?;
    let mut rep = product_commutator_check(&f, &g, a)?;
    let exact = commutator_single_mode_constant(k, l, a);
    let err = (rep.empirical_constant - exact).abs() / exact;
    rep.name = "commutator_single_mode".into();
    rep.sample_descriptor = format!("k = {k}, l = {l}, a = {a}, closed form {exact:.15e}");
    rep.asserted = true;
    Ok(rep.with_identity(err, 1e-12))
}

/// |⟨k+l⟩^{1/2} − ⟨k⟩^{1/2}| / ⟨l⟩^{1/2}.
pub fn frequency_ratio(k: i64, l: i64) -> f64 {
    let b = |n: i64| japanese_bracket(n as f64).sqrt();
    (b(k + l) - b(k)).abs() / b(l)
}

/// Brute-force maximum of the frequency ratio over |k|, |l| ≤ k_max, asserted ≤ 1.
pub fn frequency_lemma_check(k_max: usize) -> InequalityReport {
    let n = k_max as i64;
    let root: Vec<f64> = (-2 * n..=2 * n).map(|j| japanese_bracket(j as f64).sqrt()).collect();
    let at = |j: i64| root[(j + 2 * n) as usize];
    let mut best = (0.0, 0.0, 1.0, 0i64, 0i64);
    for l in -n..=n {
        let bl = at(l);
        for k in -n..=n {
            let num = (at(k + l) - at(k)).abs();
            if num / bl > best.0 {
                best = (num / bl, num, bl, k, l);
            }
        }
    }
    let desc = format!("k_max = {k_max}, argmax k = {}, l = {}", best.3, best.4);
    InequalityReport::new("frequency_lemma", best.1, best.2, desc, 1.0, true)
}

/// |(f, ∂θg)| against ‖⟨∂θ⟩^{1/2}f‖‖⟨∂θ⟩^{1/2}g‖ with constant 1.
pub fn half_ibp_check(f: &ScalarFieldDisk, g: &ScalarFieldDisk) -> Result<InequalityReport> {
    if !f.grid().same_shape(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let lhs = f.inner(&g.tangential_derivative()).norm();
    let rhs = f.fractional_tangential(0.5).l2_norm() * g.fractional_tangential(0.5).l2_norm();
    Ok(InequalityReport::new("half_ibp", lhs, rhs, String::new(), 1.0 + 1e-12, true))
}

/// Real field Σ ρ^{k+2n}(a cos kθ + b sin kθ) over k ≤ `max_mode`, n ≤ `max_degree`
/// with coefficients uniform in [−1, 1].
pub fn random_trig_field<R: Rng>(grid: &Grid, rng: &mut R, max_mode: usize, max_degree: usize) -> ScalarFieldDisk {
    let mut terms = Vec::new();
    for k in 0..=max_mode {
        for n in 0..=max_degree {
            let a: f64 = rng.gen_range(-1.0..=1.0);
            let b: f64 = if k == 0 { 0.0 } else { rng.gen_range(-1.0..=1.0) };
            terms.push((k, k + 2 * n, a, b));
        }
    }
    ScalarFieldDisk::from_polar(grid, |rho, theta| {
        terms
            .iter()
            .map(|&(k, p, a, b)| {
                let (s, c) = (k as f64 * theta).sin_cos();
                rho.powi(p as i32) * (a * c + b * s)
            })
            .sum()
    })
}

pub fn random_vector_field<R: Rng>(grid: &Grid, rng: &mut R, max_mode: usize, max_degree: usize) -> VectorFieldDisk {
    let a = random_trig_field(grid, rng, max_mode, max_degree);
    let b = random_trig_field(grid, rng, max_mode, max_degree);
    VectorFieldDisk { c: [a, b] }
}

/// Folds a sample of reports into one: largest constant, largest identity
/// error, pass only if every sample passes.
pub fn worst_of(name: &str, reports: &[InequalityReport]) -> Option<InequalityReport> {
    let worst = reports
        .iter()
        .max_by(|a, b| a.empirical_constant.total_cmp(&b.empirical_constant))?;
    let mut out = worst.clone();
    out.name = name.to_string();
    out.pass = reports.iter().all(|r| r.pass);
    out.identity_error = reports.iter().filter_map(|r| r.identity_error).reduce(f64::max);
    out.sample_descriptor = if worst.sample_descriptor.is_empty() {
        format!("worst of {} samples", reports.len())
    } else {
        format!("worst of {} samples; {}", reports.len(), worst.sample_descriptor)
    };
    Some(out)
}


/// Settings of the lemma suite run by `verify-lemmas`.
#[derive(Clone, Debug)]
pub struct LemmaSuiteParams {
    pub k_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub grid: Grid,
}

/// Identity map at rest, the reference geometry of the suite.
pub fn identity_state(grid: &Grid) -> Result<FlowState> {
    FlowState::new(0.0, VectorFieldDisk::identity(grid), VectorFieldDisk::zeros(grid))
}

/// Runs every check on seeded random samples. Asserted reports carry the
/// hard pass criteria; the rest record constants.
pub fn lemma_suite(params: &LemmaSuiteParams) -> Result<Vec<InequalityReport>> {
    use rand::SeedableRng;
    let grid = &params.grid;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(params.seed);
    let state = identity_state(grid)?;
    let zeta = crate::disk_spectral::make_cutoffs(0.5, 1, grid)?;
    let n = params.samples.max(1);
    let mut out = vec![frequency_lemma_check(params.k_max)];

    let mut ibp = Vec::new();
    let mut comm = Vec::new();
    for _ in 0..n {
        let f = random_trig_field(grid, &mut rng, 6, 3);
        let g = random_trig_field(grid, &mut rng, 6, 3);
        ibp.push(half_ibp_check(&f, &g)?);
        comm.push(product_commutator_check(&f, &g, 0.75)?);
    }
    out.extend(worst_of("half_ibp", &ibp));
    out.push(commutator_single_mode_check(grid, 7, 2, 0.75)?);
    out.extend(worst_of("product_commutator", &comm));

    let mut pw = Vec::new();
    let mut graded = Vec::new();
    let mut normal = Vec::new();
    let mut tangential = Vec::new();
    for _ in 0..n.min(20) {
        let alpha = random_vector_field(grid, &mut rng, 4, 2);
        let mut p = pointwise_decomposition_check(&alpha, &state, &zeta)?;
        p.asserted = true;
        pw.push(p);
        graded.push(graded_estimate_check(&alpha, &state, 2, &zeta)?);
        normal.push(full_hodge_check(&alpha, &state, 2.0, TraceSide::Normal)?);
        tangential.push(full_hodge_check(&alpha, &state, 2.0, TraceSide::Tangential)?);
    }
    out.extend(worst_of("pointwise_decomposition", &pw));
    out.extend(worst_of("graded_estimate", &graded));
    out.extend(worst_of("full_hodge_normal", &normal));
    out.extend(worst_of("full_hodge_tangential", &tangential));
    out.push(normal_tangential_trade_check(&state.x, &state)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::{make_cutoffs, GridSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Grid, FlowState, CutoffFamily) {
        let g = GridSpec::new(32, 48).unwrap();
        let st = identity_state(&g).unwrap();
        let z = make_cutoffs(0.5, 1, &g).unwrap();
        (g, st, z)
    }

    #[test]
    fn constant_field_is_trivial() {
        let (g, st, z) = setup();
        let alpha = VectorFieldDisk::from_cartesian(&g, |_, _| [1.5, -0.5]);
        let r = pointwise_decomposition_check(&alpha, &st, &z).unwrap();
        assert_eq!(r.empirical_constant, 0.0);
        assert!(r.identity_error.unwrap() < 1e-14);
        assert!(r.pass);
    }

    #[test]
    fn harmonic_gradient_ratio_is_sqrt2_over_rho() {
        let (g, st, z) = setup();
        let alpha = VectorFieldDisk::from_cartesian(&g, |a, b| [2.0 * a, -2.0 * b]);
        let r = pointwise_decomposition_check(&alpha, &st, &z).unwrap();
        let rho_min = g
            .nodes()
            .iter()
            .zip(&z.zeta)
            .filter(|(_, &zv)| zv > 0.0)
            .map(|(&r, _)| r)
            .fold(f64::INFINITY, f64::min);
        assert!((r.empirical_constant - 2f64.sqrt() / rho_min).abs() < 1e-10);
    }

    #[test]
    fn position_field_reconstructs() {
        let (g, st, z) = setup();
        let r = pointwise_decomposition_check(&VectorFieldDisk::identity(&g), &st, &z).unwrap();
        assert!(r.identity_error.unwrap() <= 1e-10);
    }

    #[test]
    fn graded_and_full_hodge_zero_field() {
        let (g, st, z) = setup();
        let zero = VectorFieldDisk::zeros(&g);
        assert_eq!(graded_estimate_check(&zero, &st, 3, &z).unwrap().empirical_constant, 0.0);
        assert_eq!(full_hodge_check(&zero, &st, 2.0, TraceSide::Normal).unwrap().empirical_constant, 0.0);
        assert!(graded_estimate_check(&zero, &st, 6, &z).is_err());
    }

    #[test]
    fn harmonic_gradient_full_hodge_constant_is_finite() {
        let (g, st, _) = setup();
        let alpha = VectorFieldDisk::from_cartesian(&g, |a, b| [3.0 * (a * a - b * b), -6.0 * a * b]);
        for side in [TraceSide::Normal, TraceSide::Tangential] {
            let r = full_hodge_check(&alpha, &st, 1.0, side).unwrap();
            assert!(r.empirical_constant.is_finite() && r.empirical_constant > 0.0);
        }
    }

    #[test]
    fn trade_examples() {
        let (g, st, _) = setup();
        let radial = normal_tangential_trade_check(&VectorFieldDisk::identity(&g), &st).unwrap();
        assert!((radial.lhs - 2.0 * PI).abs() < 1e-10);
        let tangent = VectorFieldDisk::from_cartesian(&g, |a, b| [-b, a]);
        let t = normal_tangential_trade_check(&tangent, &st).unwrap();
        assert!((t.lhs - 2.0 * PI).abs() < 1e-10);
        let s = 0.5f64.sqrt();
        let diag = VectorFieldDisk::from_cartesian(&g, |a, b| [s * (a - b), s * (a + b)]);
        assert!(normal_tangential_trade_check(&diag, &st).unwrap().lhs <= 1e-10);
    }

    #[test]
    fn commutator_closed_form_and_constant_g() {
        let (g, _, _) = setup();
        let r = commutator_single_mode_check(&g, 7, 2, 0.75).unwrap();
        assert!(r.identity_error.unwrap() < 1e-12, "{:?}", r);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_trig_field(&g, &mut rng, 5, 2);
        let c = ScalarFieldDisk::constant(&g, 2.0);
        assert!(product_commutator_check(&f, &c, 0.75).unwrap().lhs < 1e-13);
        assert!(product_commutator_check(&f, &c, 0.5).is_err());
    }

    #[test]
    fn frequency_examples() {
        assert_eq!(frequency_ratio(5, 0), 0.0);
        let expect = (2f64.powf(0.25) - 1.0) / 2f64.powf(0.25);
        assert!((frequency_ratio(0, 1) - expect).abs() < 1e-15);
        assert!((frequency_ratio(0, 1) - 0.159).abs() < 1e-3);
        let r = frequency_lemma_check(200);
        assert!(r.pass && r.empirical_constant < 1.0);
    }

    #[test]
    fn half_ibp_single_mode_and_constant() {
        let (g, _, _) = setup();
        for k in 1..6i64 {
            let f = ScalarFieldDisk::single_mode(&g, k, |r| r.powi(k as i32).into()).unwrap();
            let r = half_ibp_check(&f, &f).unwrap();
            let expect = k as f64 / japanese_bracket(k as f64);
            assert!((r.empirical_constant - expect).abs() < 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_trig_field(&g, &mut rng, 5, 2);
        let c = ScalarFieldDisk::constant(&g, 1.0);
        assert!(half_ibp_check(&f, &c).unwrap().lhs < 1e-13);
    }

    #[test]
    fn random_fields_are_real_and_seeded() {
        let (g, _, _) = setup();
        let a = random_trig_field(&g, &mut ChaCha8Rng::seed_from_u64(9), 4, 2);
        let b = random_trig_field(&g, &mut ChaCha8Rng::seed_from_u64(9), 4, 2);
        assert!(a.is_real(1e-13));
        assert_eq!(a.coeffs(), b.coeffs());
    }
}
