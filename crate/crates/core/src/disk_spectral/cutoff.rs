//! Radial cutoffs η_i (interior) and ζ_i (boundary layer) with η_i + ζ_i = 1.

use super::field::ScalarFieldDisk;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Coefficients of S(t) = t⁷ Σ_n C_n tⁿ, the degree-13 C⁶ step.
pub(crate) const C6_COEFFS: [f64; 7] = [1716.0, -9009.0, 20020.0, -24024.0, 16380.0, -6006.0, 924.0];

/// C⁶ polynomial step on [0, 1] (degree 13): S(0) = 0, S(1) = 1 and the
/// first six derivatives vanish at both ends.
pub fn smoothstep_c6(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let mut p = 0.0;
    for &c in C6_COEFFS.iter().rev() {
        p = p * t + c;
    }
    t.powi(7) * p
}

/// Quintic step 6t⁵ − 15t⁴ + 10t³ clamped to [0, 1].
pub fn smoothstep_quintic(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

#[derive(Clone, Debug)]
pub struct CutoffFamily {
    pub d0: f64,
    pub index: usize,
    /// η_i at the radial nodes.
    pub eta: Vec<f64>,
    /// ζ_i at the radial nodes.
    pub zeta: Vec<f64>,
    grid: Grid,
}

impl CutoffFamily {
    /// Start and end of the transition layer: η = 1 below `inner`, ζ = 1 above `outer`.
    pub fn transition(&self) -> (f64, f64) {
        transition(self.d0, self.index)
    }

    pub fn zeta_at(&self, rho: f64) -> f64 {
        let (a, b) = self.transition();
        smoothstep_c6((rho - a) / (b - a))
    }

    pub fn eta_at(&self, rho: f64) -> f64 {
        1.0 - self.zeta_at(rho)
    }

    pub fn eta_field(&self) -> ScalarFieldDisk {
        let mut f = ScalarFieldDisk::zeros(&self.grid);
        for (c, &v) in f.mode_mut(0).iter_mut().zip(&self.eta) {
            c.re = v;
        }
        f
    }

    pub fn zeta_field(&self) -> ScalarFieldDisk {
        let mut f = ScalarFieldDisk::zeros(&self.grid);
        for (c, &v) in f.mode_mut(0).iter_mut().zip(&self.zeta) {
            c.re = v;
        }
        f
    }
}

fn transition(d0: f64, i: usize) -> (f64, f64) {
    let i = i as f64;
    (1.0 - d0 / i, 1.0 - d0 / (2.0 * i))
}

pub fn make_cutoffs(d0: f64, i: usize, grid: &Grid) -> Result<CutoffFamily> {
    if !(d0 > 0.0 && d0 < 1.0) {
        return Err(Error::InvalidCutoff(format!("d0 must lie in (0, 1), got {d0}")));
    }
    if i < 1 {
        return Err(Error::InvalidCutoff("index must be at least 1".into()));
    }
    let (a, _) = transition(d0, i);
    if a <= 0.0 {
        return Err(Error::InvalidCutoff(format!("1 - d0/i = {a} is not positive")));
    }
    let mut fam = CutoffFamily {
        d0,
        index: i,
        eta: Vec::new(),
        zeta: Vec::new(),
        grid: grid.clone(),
    };
    fam.zeta = grid.nodes().iter().map(|&r| fam.zeta_at(r)).collect();
    fam.eta = fam.zeta.iter().map(|z| 1.0 - z).collect();
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::grid::GridSpec;

    #[test]
    fn plateaus_and_partition() {
        let g = GridSpec::new(16, 24).unwrap();
        let c = make_cutoffs(0.5, 1, &g).unwrap();
        assert_eq!(c.eta_at(0.0), 1.0);
        assert_eq!(c.zeta_at(1.0), 1.0);
        for (e, z) in c.eta.iter().zip(&c.zeta) {
            assert!((e + z - 1.0).abs() < 1e-12);
        }
        let c2 = make_cutoffs(0.5, 2, &g).unwrap();
        for (&r, &z) in g.nodes().iter().zip(&c2.zeta) {
            if r <= 1.0 - 0.5 {
                assert_eq!(z, 0.0);
            }
        }
    }

    #[test]
    fn step_endpoint_derivatives_vanish() {
        let h = 1e-2;
        for &t in &[0.0, 1.0] {
            let d1 = (smoothstep_c6(t + h) - smoothstep_c6(t - h)) / (2.0 * h);
            assert!(d1.abs() < 1e-8);
        }
        assert!((smoothstep_c6(0.5) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = GridSpec::new(16, 24).unwrap();
        assert!(make_cutoffs(1.5, 1, &g).is_err());
        assert!(make_cutoffs(0.5, 0, &g).is_err());
    }
}
