//! Scalar, vector and boundary fields in Fourier × radial-collocation form.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::grid::{mode_parity, Grid};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Scalar field on the reference disk.
///
/// `coeffs[slot * M + j]` is the θ-Fourier coefficient c_k(ρ_j) of wavenumber
/// `grid.wavenumber(slot)` at radial node j.
#[derive(Clone, Debug)]
pub struct ScalarFieldDisk {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

/// Location of a physical sample handed to [`pointwise`] closures.
#[derive(Clone, Copy, Debug)]
pub struct SamplePoint {
    pub theta_index: usize,
    pub radial_index: usize,
    pub rho: f64,
    pub theta: f64,
}

impl ScalarFieldDisk {
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        let mut f = Self::zeros(grid);
        for c in f.mode_mut(0) {
            *c = Complex64::new(value, 0.0);
        }
        f
    }

    /// Samples `f(ρ, θ)` on the K-point angular grid and transforms.
    pub fn from_polar<F: Fn(f64, f64) -> f64>(grid: &Grid, f: F) -> Self {
        let k = grid.n_modes();
        let m = grid.n_radial();
        let mut values = vec![Complex64::new(0.0, 0.0); k * m];
        for i in 0..k {
            let theta = 2.0 * PI * i as f64 / k as f64;
            for (j, &rho) in grid.nodes().iter().enumerate() {
                values[i * m + j] = Complex64::new(f(rho, theta), 0.0);
            }
        }
        Self::from_physical(grid, k, &values)
    }

    /// Samples `f(y₁, y₂)` on the grid and transforms.
    pub fn from_cartesian<F: Fn(f64, f64) -> f64>(grid: &Grid, f: F) -> Self {
        Self::from_polar(grid, |r, t| f(r * t.cos(), r * t.sin()))
    }

    /// Single tangential mode `k` with radial profile `g(ρ)`: g(ρ)e^{ikθ}.
    pub fn single_mode<F: Fn(f64) -> Complex64>(grid: &Grid, k: i64, g: F) -> Result<Self> {
        let slot = grid
            .slot(k)
            .filter(|&s| s != grid.nyquist_slot())
            .ok_or_else(|| Error::Parameter(format!("mode {k} not representable")))?;
        let mut f = Self::zeros(grid);
        let m = grid.n_radial();
        for j in 0..m {
            f.coeffs[slot * m + j] = g(grid.nodes()[j]);
        }
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Radial profile of wavenumber `k` at the nodes.
    pub fn mode(&self, k: i64) -> &[Complex64] {
        let m = self.grid.n_radial();
        let s = self.grid.slot(k).expect("wavenumber out of range");
        &self.coeffs[s * m..(s + 1) * m]
    }

    pub fn mode_mut(&mut self, k: i64) -> &mut [Complex64] {
        let m = self.grid.n_radial();
        let s = self.grid.slot(k).expect("wavenumber out of range");
        &mut self.coeffs[s * m..(s + 1) * m]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grid.same_shape(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Values on an `n`-point angular grid (n ≥ K), laid out `[i * M + j]`.
    pub fn to_physical(&self, n: usize) -> Vec<Complex64> {
        let k = self.grid.n_modes();
        let m = self.grid.n_radial();
        let mut out = vec![Complex64::new(0.0, 0.0); n * m];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..m {
            buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for slot in 0..k {
                let kk = self.grid.wavenumber(slot);
                buf[kk.rem_euclid(n as i64) as usize] = self.coeffs[slot * m + j];
            }
            self.grid.inverse(n, &mut buf);
            for i in 0..n {
                out[i * m + j] = buf[i];
            }
        }
        out
    }

    /// Inverse of [`to_physical`]; modes outside the K-range and the Nyquist
    /// slot are discarded.
    pub fn from_physical(grid: &Grid, n: usize, values: &[Complex64]) -> Self {
        let k = grid.n_modes();
        let m = grid.n_radial();
        let mut f = Self::zeros(grid);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let nyq = grid.nyquist_slot();
        for j in 0..m {
            for i in 0..n {
                buf[i] = values[i * m + j];
            }
            grid.forward(n, &mut buf);
            for slot in 0..k {
                if slot == nyq {
                    continue;
                }
                let kk = grid.wavenumber(slot);
                f.coeffs[slot * m + j] = buf[kk.rem_euclid(n as i64) as usize];
            }
        }
        f
    }

    /// Real part of the physical values on the native K-point grid.
    pub fn physical_values(&self) -> Vec<f64> {
        self.to_physical(self.grid.n_modes())
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// Evaluates the field at an arbitrary point of the closed disk.
    pub fn eval(&self, y: [f64; 2]) -> Complex64 {
        self.eval_points(&[y])[0]
    }

    pub fn eval_polar(&self, rho: f64, theta: f64) -> Complex64 {
        self.eval_points(&[[rho * theta.cos(), rho * theta.sin()]])[0]
    }

    /// Evaluates at many points, converting each mode to modal form once.
    pub fn eval_points(&self, pts: &[[f64; 2]]) -> Vec<Complex64> {
        let ops = self.grid.radial();
        let polar: Vec<(f64, f64)> = pts
            .iter()
            .map(|y| ((y[0] * y[0] + y[1] * y[1]).sqrt(), y[1].atan2(y[0])))
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); pts.len()];
        let m = self.grid.n_radial();
        // basis[p][i * m + n] = T_{2n+p}(ρ_i)
        let basis: [Vec<f64>; 2] = [0, 1].map(|p| {
            polar
                .iter()
                .flat_map(|&(rho, _)| {
                    let t = rho.clamp(-1.0, 1.0).acos();
                    (0..m).map(move |n| (((2 * n + p) as f64) * t).cos())
                })
                .collect()
        });
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        let mut are = vec![0.0; m];
        let mut aim = vec![0.0; m];
        for slot in 0..self.grid.n_modes() {
            let prof = &self.coeffs[slot * m..(slot + 1) * m];
            if prof.iter().all(|c| c.norm_sqr() == 0.0) {
                continue;
            }
            let k = self.grid.wavenumber(slot);
            let p = mode_parity(k);
            for j in 0..m {
                re[j] = prof[j].re;
                im[j] = prof[j].im;
            }
            ops.to_modal(p, &re, &mut are);
            ops.to_modal(p, &im, &mut aim);
            for (i, (o, &(_, theta))) in out.iter_mut().zip(&polar).enumerate() {
                let b = &basis[p][i * m..(i + 1) * m];
                let gr: f64 = b.iter().zip(&are).map(|(x, y)| x * y).sum();
                let gi: f64 = b.iter().zip(&aim).map(|(x, y)| x * y).sum();
                *o += Complex64::new(gr, gi) * Complex64::from_polar(1.0, k as f64 * theta);
            }
        }
        out
    }

    /// Values on the polar tensor grid (ρ_r, 2πt/n) for n = K or the padded
    /// length, laid out `[r * n + t]`.
    pub fn eval_tensor(&self, rhos: &[f64], n: usize) -> Vec<Complex64> {
        let ops = self.grid.radial();
        let m = self.grid.n_radial();
        let nr = rhos.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut spec = vec![zero; nr * n];
        // basis[p][r * m + n] = T_{2n+p}(ρ_r)
        let basis: [Vec<f64>; 2] = [0, 1].map(|p| {
            rhos.iter()
                .flat_map(|&rho| {
                    let t = rho.clamp(-1.0, 1.0).acos();
                    (0..m).map(move |n| (((2 * n + p) as f64) * t).cos())
                })
                .collect()
        });
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        let mut are = vec![0.0; m];
        let mut aim = vec![0.0; m];
        for slot in 0..self.grid.n_modes() {
            let prof = &self.coeffs[slot * m..(slot + 1) * m];
            if prof.iter().all(|c| c.norm_sqr() == 0.0) {
                continue;
            }
            let k = self.grid.wavenumber(slot);
            let p = mode_parity(k);
            for j in 0..m {
                re[j] = prof[j].re;
                im[j] = prof[j].im;
            }
            ops.to_modal(p, &re, &mut are);
            ops.to_modal(p, &im, &mut aim);
            let col = k.rem_euclid(n as i64) as usize;
            for r in 0..nr {
                let b = &basis[p][r * m..(r + 1) * m];
                let gr: f64 = b.iter().zip(&are).map(|(x, y)| x * y).sum();
                let gi: f64 = b.iter().zip(&aim).map(|(x, y)| x * y).sum();
                spec[r * n + col] = Complex64::new(gr, gi);
            }
        }
        for row in spec.chunks_mut(n) {
            self.grid.inverse(n, row);
        }
        spec
    }

    /// ∂θ: c_k ↦ ik c_k.
    pub fn tangential_derivative(&self) -> Self {
        self.map_modes(|k| I * k as f64)
    }

    /// ⟨∂θ⟩^s: c_k ↦ (1 + k²)^{s/2} c_k.
    pub fn fractional_tangential(&self, s: f64) -> Self {
        self.map_modes(|k| Complex64::new((1.0 + (k * k) as f64).powf(0.5 * s), 0.0))
    }

    /// Applies a Fourier multiplier depending on the wavenumber; the
    /// Nyquist slot is zeroed.
    pub fn map_modes<F: Fn(i64) -> Complex64>(&self, symbol: F) -> Self {
        let m = self.grid.n_radial();
        let nyq = self.grid.nyquist_slot();
        let mut out = self.clone();
        for slot in 0..self.grid.n_modes() {
            let factor = if slot == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                symbol(self.grid.wavenumber(slot))
            };
            for c in &mut out.coeffs[slot * m..(slot + 1) * m] {
                *c *= factor;
            }
        }
        out
    }

    /// Per-mode modal radial coefficients (real and imaginary parts
    /// transformed separately), with entries below the chop threshold zeroed.
    fn modal_chopped(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.grid.n_radial();
        let ops = self.grid.radial();
        let n = self.grid.len();
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        let mut tr = vec![0.0; m];
        let mut ti = vec![0.0; m];
        for slot in 0..self.grid.n_modes() {
            let p = mode_parity(self.grid.wavenumber(slot));
            let prof = &self.coeffs[slot * m..(slot + 1) * m];
            for j in 0..m {
                tr[j] = prof[j].re;
                ti[j] = prof[j].im;
            }
            ops.to_modal(p, &tr, &mut re[slot * m..(slot + 1) * m]);
            ops.to_modal(p, &ti, &mut im[slot * m..(slot + 1) * m]);
        }
        let scale = re
            .iter()
            .chain(im.iter())
            .fold(0.0f64, |a, &b| a.max(b.abs()));
        let thresh = self.grid.chop_tol() * scale;
        for v in re.iter_mut().chain(im.iter_mut()) {
            if v.abs() <= thresh {
                *v = 0.0;
            }
        }
        (re, im)
    }

    /// For each mode k, the nodal values of g′ − k g/ρ and g′ + k g/ρ.
    fn radial_combinations(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let m = self.grid.n_radial();
        let ops = self.grid.radial();
        let (re, im) = self.modal_chopped();
        let n = self.grid.len();
        let mut minus = vec![Complex64::new(0.0, 0.0); n];
        let mut plus = vec![Complex64::new(0.0, 0.0); n];
        let mut d = vec![0.0; m];
        let mut q = vec![0.0; m];
        let mut comb = vec![0.0; m];
        let mut nodal = vec![0.0; m];
        for slot in 0..self.grid.n_modes() {
            let k = self.grid.wavenumber(slot);
            let p = mode_parity(k);
            let kf = k as f64;
            for (part, src) in [(0usize, &re), (1usize, &im)] {
                let a = &src[slot * m..(slot + 1) * m];
                if a.iter().all(|&v| v == 0.0) {
                    continue;
                }
                ops.modal_derivative(p, a, &mut d);
                ops.modal_divide_rho(p, a, &mut q);
                for (sign, dest) in [(-1.0, &mut minus), (1.0, &mut plus)] {
                    for n in 0..m {
                        comb[n] = d[n] + sign * kf * q[n];
                    }
                    ops.to_nodal(1 - p, &comb, &mut nodal);
                    let out = &mut dest[slot * m..(slot + 1) * m];
                    for j in 0..m {
                        if part == 0 {
                            out[j].re = nodal[j];
                        } else {
                            out[j].im = nodal[j];
                        }
                    }
                }
            }
        }
        (minus, plus)
    }

    /// Cartesian gradient (∂₁f, ∂₂f) with respect to the reference coordinates y.
    pub fn gradient(&self) -> VectorFieldDisk {
        let m = self.grid.n_radial();
        let (minus, plus) = self.radial_combinations();
        let mut d1 = Self::zeros(&self.grid);
        let mut d2 = Self::zeros(&self.grid);
        let half = Complex64::new(0.5, 0.0);
        let ihalf = Complex64::new(0.0, 0.5);
        let nyq = self.grid.nyquist_slot();
        for slot in 0..self.grid.n_modes() {
            let k = self.grid.wavenumber(slot);
            // e^{i(k+1)θ}(g′ − kg/ρ)/2 and e^{i(k−1)θ}(g′ + kg/ρ)/2
            for (target, src, c1, c2) in [
                (k + 1, &minus, half, -ihalf),
                (k - 1, &plus, half, ihalf),
            ] {
                let Some(ts) = self.grid.slot(target) else {
                    continue;
                };
                if ts == nyq {
                    continue;
                }
                let s = &src[slot * m..(slot + 1) * m];
                for j in 0..m {
                    d1.coeffs[ts * m + j] += c1 * s[j];
                    d2.coeffs[ts * m + j] += c2 * s[j];
                }
            }
        }
        VectorFieldDisk::new(d1, d2).expect("same grid")
    }

    /// Pointwise product with 2× zero padding.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = pointwise(&[self, other], 1, |_, v, o| {
            o[0] = v[0] * v[1];
            Ok(())
        })?;
        Ok(out.pop().expect("one output"))
    }

    /// Multiplies by a real radial profile given at the nodes.
    pub fn mul_radial(&self, profile: &[f64]) -> Self {
        let m = self.grid.n_radial();
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            *c *= profile[idx % m];
        }
        out
    }

    /// Boundary trace (the node ρ = 1 is on the grid).
    pub fn trace(&self) -> BoundaryFieldCircle {
        let m = self.grid.n_radial();
        let coeffs = (0..self.grid.n_modes())
            .map(|s| self.coeffs[s * m + m - 1])
            .collect();
        BoundaryFieldCircle { coeffs }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        let m = self.grid.n_radial();
        let w = self.grid.weights();
        2.0 * PI
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(idx, c)| c.norm_sqr() * w[idx % m])
                .sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Hermitian L² inner product ∫ conj(f) g.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let m = self.grid.n_radial();
        let w = self.grid.weights();
        2.0 * PI
            * self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .enumerate()
                .map(|(idx, (a, b))| a.conj() * b * w[idx % m])
                .sum::<Complex64>()
    }

    /// ∫_Ω f dy.
    pub fn integral(&self) -> Complex64 {
        let w = self.grid.weights();
        2.0 * PI * self.mode(0).iter().zip(w).map(|(c, w)| c * w).sum::<Complex64>()
    }

    /// Largest deviation from the reality symmetry c_{−k} = conj(c_k),
    /// relative to the largest coefficient.
    pub fn reality_defect(&self) -> f64 {
        let m = self.grid.n_radial();
        let scale = self.max_coeff().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for slot in 0..self.grid.n_modes() {
            let k = self.grid.wavenumber(slot);
            let partner = match self.grid.slot(-k) {
                Some(s) => s,
                None => continue,
            };
            for j in 0..m {
                let d = self.coeffs[slot * m + j] - self.coeffs[partner * m + j].conj();
                worst = worst.max(d.norm());
            }
        }
        worst / scale
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect() <= tol
    }

    /// Projects onto real fields.
    pub fn real_part(&self) -> Self {
        let m = self.grid.n_radial();
        let mut out = self.clone();
        for slot in 0..self.grid.n_modes() {
            let k = self.grid.wavenumber(slot);
            match self.grid.slot(-k) {
                Some(s) => {
                    for j in 0..m {
                        out.coeffs[slot * m + j] =
                            0.5 * (self.coeffs[slot * m + j] + self.coeffs[s * m + j].conj());
                    }
                }
                None => out.coeffs[slot * m..(slot + 1) * m]
                    .iter_mut()
                    .for_each(|c| *c = Complex64::new(0.0, 0.0)),
            }
        }
        out
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, c| a.max(c.norm()))
    }

    /// Max |f| over the padded physical grid.
    pub fn sup_norm(&self) -> f64 {
        self.to_physical(self.grid.padded_len())
            .iter()
            .fold(0.0f64, |a, c| a.max(c.norm()))
    }

    /// Diagnostic: worst value of |c_k(ρ_min)| / (ρ_min^{min(|k|,6)} max_j |c_k|)
    /// over the modes. Values above the slack (default 10) suggest a field
    /// that is not smooth at the origin.
    pub fn origin_smoothness_ratio(&self) -> f64 {
        let m = self.grid.n_radial();
        let r0 = self.grid.nodes()[0];
        let mut worst = 0.0f64;
        for slot in 0..self.grid.n_modes() {
            let k = self.grid.wavenumber(slot).unsigned_abs().min(6) as i32;
            let prof = &self.coeffs[slot * m..(slot + 1) * m];
            let peak = prof.iter().fold(0.0f64, |a, c| a.max(c.norm()));
            if peak == 0.0 {
                continue;
            }
            worst = worst.max(prof[0].norm() / (r0.powi(k) * peak));
        }
        worst
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    pub fn scale_complex(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    /// self + a·other
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += a * o;
        }
        Ok(out)
    }
}

impl Add for &ScalarFieldDisk {
    type Output = ScalarFieldDisk;
    fn add(self, rhs: Self) -> ScalarFieldDisk {
        self.axpy(1.0, rhs).expect("grid mismatch")
    }
}

impl Sub for &ScalarFieldDisk {
    type Output = ScalarFieldDisk;
    fn sub(self, rhs: Self) -> ScalarFieldDisk {
        self.axpy(-1.0, rhs).expect("grid mismatch")
    }
}

impl Neg for &ScalarFieldDisk {
    type Output = ScalarFieldDisk;
    fn neg(self) -> ScalarFieldDisk {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &ScalarFieldDisk {
    type Output = ScalarFieldDisk;
    fn mul(self, rhs: f64) -> ScalarFieldDisk {
        self.scale(rhs)
    }
}

/// Evaluates a pointwise map of several fields on the 2×-padded physical
/// grid and transforms the outputs back, truncating to K modes.
pub fn pointwise<F>(inputs: &[&ScalarFieldDisk], n_out: usize, mut f: F) -> Result<Vec<ScalarFieldDisk>>
where
    F: FnMut(SamplePoint, &[Complex64], &mut [Complex64]) -> Result<()>,
{
    let grid = inputs
        .first()
        .map(|f| f.grid.clone())
        .ok_or_else(|| Error::Parameter("pointwise needs at least one input".into()))?;
    for g in inputs {
        if !g.grid.same_shape(&grid) {
            return Err(Error::GridMismatch);
        }
    }
    let n = grid.padded_len();
    let m = grid.n_radial();
    let phys: Vec<Vec<Complex64>> = inputs.iter().map(|g| g.to_physical(n)).collect();
    let mut outs = vec![vec![Complex64::new(0.0, 0.0); n * m]; n_out];
    let mut vin = vec![Complex64::new(0.0, 0.0); inputs.len()];
    let mut vout = vec![Complex64::new(0.0, 0.0); n_out];
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / n as f64;
        for j in 0..m {
            let idx = i * m + j;
            for (v, p) in vin.iter_mut().zip(&phys) {
                *v = p[idx];
            }
            vout.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            let pt = SamplePoint {
                theta_index: i,
                radial_index: j,
                rho: grid.nodes()[j],
                theta,
            };
            f(pt, &vin, &mut vout)?;
            for (o, v) in outs.iter_mut().zip(&vout) {
                o[idx] = *v;
            }
        }
    }
    Ok(outs
        .iter()
        .map(|o| ScalarFieldDisk::from_physical(&grid, n, o))
        .collect())
}

/// Vector field given by Cartesian components.
#[derive(Clone, Debug)]
pub struct VectorFieldDisk {
    pub c: [ScalarFieldDisk; 2],
}

impl VectorFieldDisk {
    pub fn new(c0: ScalarFieldDisk, c1: ScalarFieldDisk) -> Result<Self> {
        c0.check(&c1)?;
        Ok(Self { c: [c0, c1] })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            c: [ScalarFieldDisk::zeros(grid), ScalarFieldDisk::zeros(grid)],
        }
    }

    pub fn from_cartesian<F: Fn(f64, f64) -> [f64; 2]>(grid: &Grid, f: F) -> Self {
        Self {
            c: [
                ScalarFieldDisk::from_cartesian(grid, |a, b| f(a, b)[0]),
                ScalarFieldDisk::from_cartesian(grid, |a, b| f(a, b)[1]),
            ],
        }
    }

    /// The identity map y ↦ y.
    pub fn identity(grid: &Grid) -> Self {
        Self::from_cartesian(grid, |a, b| [a, b])
    }

    pub fn grid(&self) -> &Grid {
        self.c[0].grid()
    }

    pub fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        [self.c[0].eval(y).re, self.c[1].eval(y).re]
    }

    pub fn eval_points(&self, pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let a = self.c[0].eval_points(pts);
        let b = self.c[1].eval_points(pts);
        a.iter().zip(&b).map(|(a, b)| [a.re, b.re]).collect()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.c[0].l2_norm_sq() + self.c[1].l2_norm_sq()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn map<F: Fn(&ScalarFieldDisk) -> ScalarFieldDisk>(&self, f: F) -> Self {
        Self {
            c: [f(&self.c[0]), f(&self.c[1])],
        }
    }

    pub fn tangential_derivative(&self) -> Self {
        self.map(|f| f.tangential_derivative())
    }

    pub fn fractional_tangential(&self, s: f64) -> Self {
        self.map(|f| f.fractional_tangential(s))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|f| f.scale(a))
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        Ok(Self {
            c: [self.c[0].axpy(a, &other.c[0])?, self.c[1].axpy(a, &other.c[1])?],
        })
    }

    pub fn trace(&self) -> [BoundaryFieldCircle; 2] {
        [self.c[0].trace(), self.c[1].trace()]
    }

    pub fn max_coeff(&self) -> f64 {
        self.c[0].max_coeff().max(self.c[1].max_coeff())
    }
}

impl Add for &VectorFieldDisk {
    type Output = VectorFieldDisk;
    fn add(self, rhs: Self) -> VectorFieldDisk {
        self.axpy(1.0, rhs).expect("grid mismatch")
    }
}

impl Sub for &VectorFieldDisk {
    type Output = VectorFieldDisk;
    fn sub(self, rhs: Self) -> VectorFieldDisk {
        self.axpy(-1.0, rhs).expect("grid mismatch")
    }
}

/// Fourier coefficients b_k on the unit circle, FFT-ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFieldCircle {
    pub coeffs: Vec<Complex64>,
}

impl BoundaryFieldCircle {
    pub fn zeros(n_modes: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); n_modes],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.coeffs.len();
        if idx < n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    }

    /// Coefficient of wavenumber `k` (zero if not represented).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.coeffs.len() as i64;
        if k >= -n / 2 && k < n / 2 {
            self.coeffs[k.rem_euclid(n) as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Builds from a function of θ sampled at `n_modes` equispaced angles.
    pub fn from_fn<F: Fn(f64) -> f64>(n_modes: usize, f: F) -> Self {
        let samples: Vec<f64> = (0..n_modes)
            .map(|i| f(2.0 * PI * i as f64 / n_modes as f64))
            .collect();
        Self::from_samples(n_modes, &samples)
    }

    /// Coefficients from `n ≥ n_modes` equispaced real samples, truncated to
    /// `n_modes` with the Nyquist slot zeroed. Uses a direct DFT.
    pub fn from_samples(n_modes: usize, samples: &[f64]) -> Self {
        let n = samples.len();
        let mut out = Self::zeros(n_modes);
        for idx in 0..n_modes {
            if idx == n_modes / 2 {
                continue;
            }
            let k = out.wavenumber(idx);
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &s) in samples.iter().enumerate() {
                let t = 2.0 * PI * i as f64 / n as f64;
                acc += s * Complex64::from_polar(1.0, -(k as f64) * t);
            }
            out.coeffs[idx] = acc / n as f64;
        }
        out
    }

    /// Real values at `n` equispaced angles (n ≥ n_modes).
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| self.eval(2.0 * PI * i as f64 / n as f64))
            .collect()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| (c * Complex64::from_polar(1.0, self.wavenumber(idx) as f64 * theta)).re)
            .sum()
    }

    pub fn map_modes<F: Fn(i64) -> Complex64>(&self, symbol: F) -> Self {
        let nyq = self.coeffs.len() / 2;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                if idx == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * symbol(self.wavenumber(idx))
                }
            })
            .collect();
        Self { coeffs }
    }

    pub fn tangential_derivative(&self) -> Self {
        self.map_modes(|k| I * k as f64)
    }

    /// ∂θ^j applied as the multiplier (ik)^j.
    pub fn tangential_derivative_n(&self, j: u32) -> Self {
        self.map_modes(|k| (I * k as f64).powu(j))
    }

    pub fn fractional_tangential(&self, s: f64) -> Self {
        self.map_modes(|k| Complex64::new((1.0 + (k * k) as f64).powf(0.5 * s), 0.0))
    }

    /// (2π Σ_k ⟨k⟩^{2s} |b_k|²)^{1/2}
    pub fn trace_norm(&self, s: f64) -> f64 {
        (2.0 * PI
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    let k = self.wavenumber(idx) as f64;
                    (1.0 + k * k).powf(s) * c.norm_sqr()
                })
                .sum::<f64>())
        .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::grid::GridSpec;

    fn grid() -> Grid {
        GridSpec::new(16, 24).unwrap()
    }

    #[test]
    fn transform_round_trip() {
        let g = grid();
        let f = ScalarFieldDisk::from_cartesian(&g, |a, b| a * a * b + 0.3 * b - a.powi(4));
        let back = ScalarFieldDisk::from_physical(&g, g.padded_len(), &f.to_physical(g.padded_len()));
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn gradient_of_polynomial_is_exact() {
        let g = grid();
        let f = ScalarFieldDisk::from_cartesian(&g, |a, b| a * a * b - 2.0 * a * b * b + a.powi(5));
        let grad = f.gradient();
        let e1 = ScalarFieldDisk::from_cartesian(&g, |a, b| 2.0 * a * b - 2.0 * b * b + 5.0 * a.powi(4));
        let e2 = ScalarFieldDisk::from_cartesian(&g, |a, b| a * a - 4.0 * a * b);
        assert!((&grad.c[0] - &e1).max_coeff() < 1e-12);
        assert!((&grad.c[1] - &e2).max_coeff() < 1e-12);
    }

    #[test]
    fn fifth_derivative_of_quadratic_vanishes() {
        let g = GridSpec::new(32, 48).unwrap();
        let mut f = ScalarFieldDisk::from_cartesian(&g, |a, b| a + 0.3 * b * b);
        for _ in 0..5 {
            f = f.gradient().c[1].clone();
        }
        assert!(f.max_coeff() < 1e-12, "{}", f.max_coeff());
    }

    #[test]
    fn eval_matches_function() {
        let g = GridSpec::new(32, 24).unwrap();
        let f = ScalarFieldDisk::from_cartesian(&g, |a, b| (a + 0.5 * b).sin());
        for &p in &[[0.1, 0.2], [-0.5, 0.3], [0.0, -0.9]] {
            assert!((f.eval(p).re - (p[0] + 0.5 * p[1]).sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn l2_examples() {
        let g = grid();
        assert!((ScalarFieldDisk::constant(&g, 1.0).l2_norm() - PI.sqrt()).abs() < 1e-13);
        assert_eq!(ScalarFieldDisk::zeros(&g).l2_norm(), 0.0);
        let f = ScalarFieldDisk::from_polar(&g, |r, t| r * t.cos());
        assert!((f.l2_norm() - PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn product_dealiased() {
        let g = GridSpec::new(32, 24).unwrap();
        let f = ScalarFieldDisk::from_polar(&g, |r, t| r.powi(5) * (5.0 * t).cos());
        let sq = f.product(&f).unwrap();
        let e = ScalarFieldDisk::from_polar(&g, |r, t| r.powi(10) * (5.0 * t).cos().powi(2));
        assert!((&sq - &e).max_coeff() < 1e-13);
    }

    #[test]
    fn boundary_trace_norm_examples() {
        let h = BoundaryFieldCircle::from_fn(16, |t| t.cos());
        // ‖cos‖² + ‖sin‖² on the circle
        assert!((h.trace_norm(1.0) - (2.0 * PI).sqrt()).abs() < 1e-13);
        let one = BoundaryFieldCircle::from_fn(16, |_| 1.0);
        assert!((one.trace_norm(0.0) - (2.0 * PI).sqrt()).abs() < 1e-13);
    }
}
