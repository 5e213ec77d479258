//! Tensor grid on the unit disk: periodic Fourier modes in θ and a parity-split
//! Chebyshev collocation in ρ.
//!
//! The radial nodes are the positive half of the 2M-point Chebyshev–Lobatto set
//! on [-1, 1]. An even node count keeps ρ = 0 off the grid while ρ = 1 is a
//! node, so boundary traces are read off directly. Each tangential mode k
//! carries a radial profile of parity |k| mod 2, expanded in T_{2n} (even) or
//! T_{2n+1} (odd).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative threshold below which modal radial coefficients are discarded
/// before differentiation.
pub const DEFAULT_CHOP_TOL: f64 = 1e-13;

/// Parity of a radial profile (0 = even, 1 = odd).
pub type Parity = usize;

pub fn mode_parity(k: i64) -> Parity {
    (k.unsigned_abs() % 2) as usize
}

/// Radial collocation operators shared by all fields on one grid.
pub struct RadialOps {
    m: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// eval[p][j * m + n] = T_{2n+p}(ρ_j)
    eval: [Vec<f64>; 2],
    /// inverse of eval[p]: modal = inv[p] · nodal
    inv: [Vec<f64>; 2],
}

impl RadialOps {
    fn new(m: usize) -> Result<Self> {
        let n_full = 2 * m - 1;
        // increasing order, last node is ρ = 1
        let nodes: Vec<f64> = (0..m)
            .map(|j| (PI * (m - 1 - j) as f64 / n_full as f64).cos())
            .collect();
        let angles: Vec<f64> = (0..m)
            .map(|j| PI * (m - 1 - j) as f64 / n_full as f64)
            .collect();
        let mut eval = [vec![0.0; m * m], vec![0.0; m * m]];
        for p in 0..2 {
            for j in 0..m {
                for n in 0..m {
                    eval[p][j * m + n] = (((2 * n + p) as f64) * angles[j]).cos();
                }
            }
        }
        let mut inv = [vec![0.0; m * m], vec![0.0; m * m]];
        for p in 0..2 {
            let mat = DMatrix::from_row_slice(m, m, &eval[p]);
            let inverse = mat
                .try_inverse()
                .ok_or_else(|| Error::InvalidGrid("singular radial collocation".into()))?;
            for r in 0..m {
                for c in 0..m {
                    inv[p][r * m + c] = inverse[(r, c)];
                }
            }
        }
        // ∫_0^1 T_{2n}(ρ) ρ dρ = (1/4) ∫_{-1}^{1} T_n(u) du
        let moments: Vec<f64> = (0..m)
            .map(|n| {
                if n % 2 == 1 {
                    0.0
                } else {
                    0.5 / (1.0 - (n * n) as f64)
                }
            })
            .collect();
        let weights: Vec<f64> = (0..m)
            .map(|j| (0..m).map(|n| inv[0][n * m + j] * moments[n]).sum())
            .collect();
        Ok(Self {
            m,
            nodes,
            weights,
            eval,
            inv,
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodal values of parity `p` to modal coefficients.
    pub fn to_modal(&self, p: Parity, nodal: &[f64], out: &mut [f64]) {
        let m = self.m;
        let inv = &self.inv[p];
        for (n, o) in out.iter_mut().enumerate().take(m) {
            let row = &inv[n * m..(n + 1) * m];
            *o = row.iter().zip(nodal).map(|(a, b)| a * b).sum();
        }
    }

    /// Modal coefficients of parity `p` to nodal values.
    pub fn to_nodal(&self, p: Parity, modal: &[f64], out: &mut [f64]) {
        let m = self.m;
        let ev = &self.eval[p];
        for (j, o) in out.iter_mut().enumerate().take(m) {
            let row = &ev[j * m..(j + 1) * m];
            *o = row.iter().zip(modal).map(|(a, b)| a * b).sum();
        }
    }

    /// d/dρ of a parity-`p` modal series; the result has parity 1 − p.
    pub fn modal_derivative(&self, p: Parity, a: &[f64], out: &mut [f64]) {
        let m = self.m;
        let len = 2 * m;
        let mut c = vec![0.0; len];
        for n in 0..m {
            c[2 * n + p] = a[n];
        }
        let mut d = vec![0.0; len + 2];
        for n in (0..len - 1).rev() {
            d[n] = d[n + 2] + 2.0 * (n + 1) as f64 * c[n + 1];
        }
        d[0] *= 0.5;
        let q = 1 - p;
        for n in 0..m {
            out[n] = d[2 * n + q];
        }
    }

    /// g/ρ for a parity-`p` modal series (result parity 1 − p). For even input
    /// the constant remainder g(0) is dropped.
    pub fn modal_divide_rho(&self, p: Parity, a: &[f64], out: &mut [f64]) {
        let m = self.m;
        let len = 2 * m;
        let mut g = vec![0.0; len];
        for n in 0..m {
            g[2 * n + p] = a[n];
        }
        let mut h = vec![0.0; len + 2];
        // ρ T_0 = T_1, ρ T_n = (T_{n+1} + T_{n-1}) / 2
        for n in (2..len).rev() {
            h[n - 1] = 2.0 * g[n] - h[n + 1];
        }
        h[0] = g[1] - 0.5 * h[2];
        let q = 1 - p;
        for n in 0..m {
            out[n] = h[2 * n + q];
        }
    }

    /// Evaluates a parity-`p` modal series at an arbitrary radius.
    pub fn eval_modal(&self, p: Parity, a: &[f64], rho: f64) -> f64 {
        let t = rho.clamp(-1.0, 1.0).acos();
        a.iter()
            .enumerate()
            .map(|(n, c)| c * (((2 * n + p) as f64) * t).cos())
            .sum()
    }

    /// Dense nodal differentiation matrix from parity `p` to parity 1 − p.
    pub fn nodal_derivative_matrix(&self, p: Parity) -> DMatrix<f64> {
        self.nodal_operator(p, |ops, a, out| ops.modal_derivative(p, a, out))
    }

    /// Dense nodal matrix of g ↦ g/ρ from parity `p` to parity 1 − p.
    pub fn nodal_division_matrix(&self, p: Parity) -> DMatrix<f64> {
        self.nodal_operator(p, |ops, a, out| ops.modal_divide_rho(p, a, out))
    }

    fn nodal_operator<F>(&self, p: Parity, op: F) -> DMatrix<f64>
    where
        F: Fn(&Self, &[f64], &mut [f64]),
    {
        let m = self.m;
        let mut mat = DMatrix::zeros(m, m);
        let mut unit = vec![0.0; m];
        let mut modal = vec![0.0; m];
        let mut dmodal = vec![0.0; m];
        let mut col = vec![0.0; m];
        for j in 0..m {
            unit.iter_mut().for_each(|v| *v = 0.0);
            unit[j] = 1.0;
            self.to_modal(p, &unit, &mut modal);
            op(self, &modal, &mut dmodal);
            self.to_nodal(1 - p, &dmodal, &mut col);
            for i in 0..m {
                mat[(i, j)] = col[i];
            }
        }
        mat
    }
}

/// Discretization of the reference disk Ω = {|y| < 1}.
pub struct GridSpec {
    n_modes: usize,
    radial: RadialOps,
    chop_tol: f64,
    fft: FftPair,
    fft_padded: FftPair,
}

struct FftPair {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// Shared handle to a grid; fields hold one of these.
pub type Grid = Arc<GridSpec>;

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("n_modes", &self.n_modes)
            .field("n_radial", &self.radial.m)
            .field("chop_tol", &self.chop_tol)
            .finish()
    }
}

impl GridSpec {
    /// Builds a grid with `n_modes` tangential modes (even, ≥ 4) and
    /// `n_radial` radial nodes (≥ 4).
    pub fn new(n_modes: usize, n_radial: usize) -> Result<Grid> {
        Self::with_chop(n_modes, n_radial, DEFAULT_CHOP_TOL)
    }

    pub fn with_chop(n_modes: usize, n_radial: usize, chop_tol: f64) -> Result<Grid> {
        if n_modes < 4 || n_modes % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n_modes must be even and at least 4, got {n_modes}"
            )));
        }
        if n_radial < 4 {
            return Err(Error::InvalidGrid(format!(
                "n_radial must be at least 4, got {n_radial}"
            )));
        }
        if !(chop_tol >= 0.0 && chop_tol < 1e-6) {
            return Err(Error::InvalidGrid(format!("chop tolerance {chop_tol} out of range")));
        }
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            n_modes,
            radial: RadialOps::new(n_radial)?,
            chop_tol,
            fft: FftPair::new(&mut planner, n_modes),
            fft_padded: FftPair::new(&mut planner, 2 * n_modes),
        }))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_radial(&self) -> usize {
        self.radial.m
    }

    pub fn radial(&self) -> &RadialOps {
        &self.radial
    }

    pub fn nodes(&self) -> &[f64] {
        &self.radial.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.radial.weights
    }

    pub fn chop_tol(&self) -> f64 {
        self.chop_tol
    }

    /// Number of coefficients in a scalar field.
    pub fn len(&self) -> usize {
        self.n_modes * self.radial.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Wavenumber stored at FFT-ordered slot `idx`.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let half = self.n_modes / 2;
        if idx < half {
            idx as i64
        } else {
            idx as i64 - self.n_modes as i64
        }
    }

    /// Slot of wavenumber `k`, if it lies in [−K/2, K/2 − 1].
    pub fn slot(&self, k: i64) -> Option<usize> {
        let half = (self.n_modes / 2) as i64;
        if k >= -half && k < half {
            Some(k.rem_euclid(self.n_modes as i64) as usize)
        } else {
            None
        }
    }

    /// The Nyquist slot (k = −K/2); kept at zero by differential operators.
    pub fn nyquist_slot(&self) -> usize {
        self.n_modes / 2
    }

    /// Size of the padded physical grid used for pointwise products.
    pub fn padded_len(&self) -> usize {
        self.fft_padded.n
    }

    /// Same-shape check used by binary operations.
    pub fn same_shape(&self, other: &GridSpec) -> bool {
        self.n_modes == other.n_modes && self.radial.m == other.radial.m
    }

    /// Forward transform in place (physical θ samples → coefficients), scaled by 1/n.
    pub(crate) fn forward(&self, n: usize, buf: &mut [Complex64]) {
        let pair = self.pair(n);
        pair.forward.process(buf);
        let s = 1.0 / n as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }

    /// Inverse transform in place (coefficients → physical θ samples), unscaled.
    pub(crate) fn inverse(&self, n: usize, buf: &mut [Complex64]) {
        self.pair(n).inverse.process(buf);
    }

    fn pair(&self, n: usize) -> &FftPair {
        if n == self.fft.n {
            &self.fft
        } else if n == self.fft_padded.n {
            &self.fft_padded
        } else {
            panic!("no FFT plan for length {n}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_exclude_origin_and_include_one() {
        let g = GridSpec::new(16, 24).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 24);
        assert!(nodes[0] > 0.0);
        assert_eq!(nodes[23], 1.0);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn weights_positive_and_exact_on_even_polynomials() {
        for m in [24, 36, 48] {
            let g = GridSpec::new(16, m).unwrap();
            assert!(g.weights().iter().all(|&w| w > 0.0));
            for n in 0..m {
                let deg = 2 * n as i32;
                let q: f64 = g
                    .nodes()
                    .iter()
                    .zip(g.weights())
                    .map(|(r, w)| w * r.powi(deg))
                    .sum();
                let exact = 1.0 / (deg as f64 + 2.0);
                assert!((q - exact).abs() <= 1e-12 * exact, "m={m} deg={deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(7, 24).is_err());
        assert!(GridSpec::new(16, 2).is_err());
    }

    #[test]
    fn modal_derivative_and_division_on_monomials() {
        let g = GridSpec::new(16, 12).unwrap();
        let ops = g.radial();
        let m = ops.len();
        // f = ρ^3 (odd)
        let nodal: Vec<f64> = ops.nodes().iter().map(|r| r.powi(3)).collect();
        let mut a = vec![0.0; m];
        ops.to_modal(1, &nodal, &mut a);
        let mut d = vec![0.0; m];
        ops.modal_derivative(1, &a, &mut d);
        let mut q = vec![0.0; m];
        ops.modal_divide_rho(1, &a, &mut q);
        for &r in [0.1, 0.5, 0.9].iter() {
            assert!((ops.eval_modal(0, &d, r) - 3.0 * r * r).abs() < 1e-12);
            assert!((ops.eval_modal(0, &q, r) - r * r).abs() < 1e-12);
        }
    }
}
