//! Sobolev norms of cutoff products χf with χ = η_i or ζ_i.
//!
//! The cutoff is not a polynomial in ρ, so its nodal interpolant loses the
//! high derivatives. Here χ is differentiated exactly through truncated
//! Taylor series, f spectrally, and D^α(χf) assembled by the Leibniz rule on
//! a Gauss–Legendre rule split at the transition radii.

use num_complex::Complex64;

use super::cutoff::{CutoffFamily, C6_COEFFS};
use super::field::{ScalarFieldDisk, VectorFieldDisk};
use crate::error::{Error, Result};
use crate::geometry::{eulerian_gradient, JacobianData};
use crate::quadrature::gauss_legendre;

/// Highest Sobolev order accepted by the localized norms.
pub const MAX_LOCALIZED_ORDER: usize = 6;

const P: usize = MAX_LOCALIZED_ORDER;
const LEN: usize = (P + 1) * (P + 2) / 2;

/// Slot of the monomial h₁^i h₂^j.
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Truncated bivariate Taylor series Σ c_ij h₁^i h₂^j, i + j ≤ P.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Jet([f64; LEN]);

impl Jet {
    fn constant(v: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Jet(c)
    }

    fn variable(v: f64, axis: usize) -> Self {
        let mut j = Self::constant(v);
        j.0[if axis == 0 { idx(1, 0) } else { idx(0, 1) }] = 1.0;
        j
    }

    fn add(&self, o: &Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(&o.0).for_each(|(a, b)| *a += b);
        Jet(c)
    }

    /// a·self + b.
    fn affine(&self, a: f64, b: f64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|v| *v *= a);
        c[0] += b;
        Jet(c)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut c = [0.0; LEN];
        for d1 in 0..=P {
            for i1 in 0..=d1 {
                let x = self.0[idx(i1, d1 - i1)];
                if x == 0.0 {
                    continue;
                }
                for d2 in 0..=P - d1 {
                    for i2 in 0..=d2 {
                        c[idx(i1 + i2, d1 - i1 + d2 - i2)] += x * o.0[idx(i2, d2 - i2)];
                    }
                }
            }
        }
        Jet(c)
    }

    /// Square root of a series with positive constant term.
    fn sqrt(&self) -> Self {
        let s0 = self.0[0].sqrt();
        let mut s = [0.0; LEN];
        s[0] = s0;
        for d in 1..=P {
            for i in 0..=d {
                let j = d - i;
                let mut acc = self.0[idx(i, j)];
                for p in 0..=i {
                    for q in 0..=j {
                        let e = p + q;
                        if e != 0 && e != d {
                            acc -= s[idx(p, q)] * s[idx(i - p, j - q)];
                        }
                    }
                }
                s[idx(i, j)] = acc / (2.0 * s0);
            }
        }
        Jet(s)
    }

    /// ∂/∂h_axis; the top degree is lost.
    fn derivative(&self, axis: usize) -> Self {
        let mut c = [0.0; LEN];
        for d in 0..P {
            for i in 0..=d {
                let j = d - i;
                c[idx(i, j)] = if axis == 0 {
                    (i + 1) as f64 * self.0[idx(i + 1, j)]
                } else {
                    (j + 1) as f64 * self.0[idx(i, j + 1)]
                };
            }
        }
        Jet(c)
    }

    /// ∂₁^i ∂₂^j at the expansion point.
    fn partial(&self, i: usize, j: usize) -> f64 {
        self.0[idx(i, j)] * factorial(i) * factorial(j)
    }
}

fn step_jet(t: &Jet) -> Jet {
    let mut p = Jet::constant(C6_COEFFS[6]);
    for &c in C6_COEFFS[..6].iter().rev() {
        p = p.mul(t).affine(1.0, c);
    }
    let t2 = t.mul(t);
    let t4 = t2.mul(&t2);
    t4.mul(&t2).mul(t).mul(&p)
}

/// Which member of the partition of unity multiplies the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffKind {
    Eta,
    Zeta,
}

impl CutoffKind {
    /// Values below and above the transition layer.
    fn plateaus(self) -> (f64, f64) {
        match self {
            CutoffKind::Eta => (1.0, 0.0),
            CutoffKind::Zeta => (0.0, 1.0),
        }
    }
}

/// Series of χ(y) for y given as series in the expansion variables.
fn profile_of(family: &CutoffFamily, kind: CutoffKind, y1: &Jet, y2: &Jet) -> Jet {
    let (a, b) = family.transition();
    let (lo, hi) = kind.plateaus();
    let rho = y1.0[0].hypot(y2.0[0]);
    if rho <= a {
        return Jet::constant(lo);
    }
    if rho >= b {
        return Jet::constant(hi);
    }
    let r = y1.mul(y1).add(&y2.mul(y2)).sqrt();
    let z = step_jet(&r.affine(1.0 / (b - a), -a / (b - a)));
    match kind {
        CutoffKind::Zeta => z,
        CutoffKind::Eta => z.affine(-1.0, 1.0),
    }
}

fn profile_at(family: &CutoffFamily, kind: CutoffKind, y: [f64; 2]) -> Jet {
    profile_of(family, kind, &Jet::variable(y[0], 0), &Jet::variable(y[1], 1))
}

/// ∂₁^i ∂₂^j of η_i or ζ_i at the reference point `y`, i + j ≤ 6.
pub fn cutoff_partial(family: &CutoffFamily, kind: CutoffKind, y: [f64; 2], i: usize, j: usize) -> Result<f64> {
    if i + j > P {
        return Err(Error::SobolevOrder((i + j) as f64));
    }
    Ok(profile_at(family, kind, y).partial(i, j))
}

/// Values of D₁^p D₂^q χ at the expansion point, slot idx(p, q), p + q ≤ s,
/// with D_i = A^a_i ∂_a (∂_i when `amat` is None).
fn eulerian_values(chi: &Jet, amat: Option<&[[Jet; 2]; 2]>, s: usize) -> [f64; LEN] {
    let apply = |j: &Jet, i: usize| -> Jet {
        match amat {
            None => j.derivative(i),
            Some(am) => am[0][i].mul(&j.derivative(0)).add(&am[1][i].mul(&j.derivative(1))),
        }
    };
    let mut out = [0.0; LEN];
    out[0] = chi.0[0];
    let mut level = vec![*chi];
    for n in 0..s {
        let mut next = Vec::with_capacity(n + 2);
        next.push(apply(&level[0], 1));
        for j in &level {
            next.push(apply(j, 0));
        }
        for (a, j) in next.iter().enumerate() {
            out[idx(a, n + 1 - a)] = j.0[0];
        }
        level = next;
    }
    out
}

/// D₁^p D₂^q f at slot idx(p, q) for p + q ≤ order.
fn derivative_table<D>(f: &ScalarFieldDisk, order: usize, d: D) -> Result<Vec<ScalarFieldDisk>>
where
    D: Fn(&ScalarFieldDisk) -> Result<[ScalarFieldDisk; 2]>,
{
    let mut out: Vec<Option<ScalarFieldDisk>> = vec![None; (order + 1) * (order + 2) / 2];
    out[0] = Some(f.clone());
    let mut level = vec![f.clone()];
    for n in 0..order {
        let mut next = Vec::with_capacity(n + 2);
        let mut d1s = Vec::with_capacity(n + 1);
        for (a, g) in level.iter().enumerate() {
            let [d1, d2] = d(g)?;
            if a == 0 {
                next.push(d2);
            }
            d1s.push(d1);
        }
        next.extend(d1s);
        for (a, g) in next.iter().enumerate() {
            out[idx(a, n + 1 - a)] = Some(g.clone());
        }
        level = next;
    }
    Ok(out.into_iter().map(|g| g.expect("filled by the recursion")).collect())
}

fn spatial_table(f: &ScalarFieldDisk, order: usize, jac: Option<&JacobianData>) -> Result<Vec<ScalarFieldDisk>> {
    match jac {
        Some(j) => derivative_table(f, order, |g| Ok(eulerian_gradient(g, j)?.c)),
        None => derivative_table(f, order, |g| Ok(g.gradient().c)),
    }
}

/// Radial Gauss–Legendre piece with the plateau value of χ, or None in the layer.
struct Piece {
    rhos: Vec<f64>,
    weights: Vec<f64>,
    plateau: Option<f64>,
}

fn pieces(family: &CutoffFamily, kind: CutoffKind, n_per_piece: usize) -> Vec<Piece> {
    let (a, b) = family.transition();
    let (lo, hi) = kind.plateaus();
    [(0.0, a, Some(lo)), (a, b, None), (b, 1.0, Some(hi))]
        .into_iter()
        .filter(|&(_, _, p)| p != Some(0.0))
        .map(|(r0, r1, plateau)| {
            let (rhos, w) = gauss_legendre(n_per_piece, r0, r1);
            let weights = rhos.iter().zip(&w).map(|(r, w)| r * w).collect();
            Piece { rhos, weights, plateau }
        })
        .collect()
}

/// D₁^p D₂^q χ on the layer points of `piece`, `[point][idx(p, q)]`.
fn layer_cutoff_values(
    family: &CutoffFamily,
    kind: CutoffKind,
    piece: &Piece,
    n_theta: usize,
    s: usize,
    jac: Option<&JacobianData>,
) -> Result<Vec<[f64; LEN]>> {
    let nr = piece.rhos.len();
    // A^a_i and its reference partials up to order s − 1 on the layer points
    let a_vals: Option<Vec<Vec<Vec<Complex64>>>> = match (jac, s) {
        (Some(j), s) if s > 0 => {
            let mut comps = Vec::with_capacity(4);
            for a in 0..2 {
                for i in 0..2 {
                    let table = spatial_table(&j.a[a][i], s - 1, None)?;
                    comps.push(table.iter().map(|g| g.eval_tensor(&piece.rhos, n_theta)).collect());
                }
            }
            Some(comps)
        }
        _ => None,
    };
    let mut out = Vec::with_capacity(nr * n_theta);
    for (r, &rho) in piece.rhos.iter().enumerate() {
        for t in 0..n_theta {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / n_theta as f64;
            let chi = profile_at(family, kind, [rho * theta.cos(), rho * theta.sin()]);
            let pt = r * n_theta + t;
            let amat = a_vals.as_ref().map(|comps| {
                let jet = |c: usize| {
                    let mut j = [0.0; LEN];
                    for d in 0..s {
                        for p in 0..=d {
                            let q = d - p;
                            j[idx(p, q)] = comps[c][idx(p, q)][pt].re / (factorial(p) * factorial(q));
                        }
                    }
                    Jet(j)
                };
                [[jet(0), jet(1)], [jet(2), jet(3)]]
            });
            out.push(eulerian_values(&chi, amat.as_ref(), s));
        }
    }
    Ok(out)
}

fn localized_sq(fields: &[&ScalarFieldDisk], family: &CutoffFamily, kind: CutoffKind, s: usize, jac: Option<&JacobianData>) -> Result<f64> {
    if s > P {
        return Err(Error::SobolevOrder(s as f64));
    }
    let grid = fields[0].grid();
    let n_theta = grid.padded_len();
    let h = 2.0 * std::f64::consts::PI / n_theta as f64;
    let pieces = pieces(family, kind, grid.n_radial() + 8);
    let layer: Vec<Option<Vec<[f64; LEN]>>> = pieces
        .iter()
        .map(|p| match p.plateau {
            None => layer_cutoff_values(family, kind, p, n_theta, s, jac).map(Some),
            Some(_) => Ok(None),
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for f in fields {
        let table = spatial_table(f, s, jac)?;
        for (piece, chi) in pieces.iter().zip(&layer) {
            let vals: Vec<Vec<Complex64>> = table.iter().map(|g| g.eval_tensor(&piece.rhos, n_theta)).collect();
            for (r, &w) in piece.weights.iter().enumerate() {
                for t in 0..n_theta {
                    let pt = r * n_theta + t;
                    let mut acc = 0.0;
                    for order in 0..=s {
                        for a1 in 0..=order {
                            let a2 = order - a1;
                            let v = match (piece.plateau, chi) {
                                (Some(c), _) => vals[idx(a1, a2)][pt] * c,
                                (None, Some(chi)) => {
                                    let c = &chi[pt];
                                    let mut v = Complex64::new(0.0, 0.0);
                                    for p in 0..=a1 {
                                        for q in 0..=a2 {
                                            v += vals[idx(a1 - p, a2 - q)][pt]
                                                * (binomial(a1, p) * binomial(a2, q) * c[idx(p, q)]);
                                        }
                                    }
                                    v
                                }
                                (None, None) => unreachable!("layer values are computed for layer pieces"),
                            };
                            acc += binomial(order, a1) * v.norm_sqr();
                        }
                    }
                    total += acc * w * h;
                }
            }
        }
    }
    Ok(total)
}

/// ‖χf‖²_{H^s} for integer s ≤ 6, over Ω_t (det = 1) when `jac` is given
/// and over the unit disk otherwise.
pub fn localized_norm_sq(f: &ScalarFieldDisk, family: &CutoffFamily, kind: CutoffKind, s: usize, jac: Option<&JacobianData>) -> Result<f64> {
    localized_sq(&[f], family, kind, s, jac)
}

pub fn localized_norm(f: &ScalarFieldDisk, family: &CutoffFamily, kind: CutoffKind, s: usize, jac: Option<&JacobianData>) -> Result<f64> {
    Ok(localized_norm_sq(f, family, kind, s, jac)?.sqrt())
}

pub fn localized_norm_vector_sq(v: &VectorFieldDisk, family: &CutoffFamily, kind: CutoffKind, s: usize, jac: Option<&JacobianData>) -> Result<f64> {
    localized_sq(&[&v.c[0], &v.c[1]], family, kind, s, jac)
}

pub fn localized_norm_vector(v: &VectorFieldDisk, family: &CutoffFamily, kind: CutoffKind, s: usize, jac: Option<&JacobianData>) -> Result<f64> {
    Ok(localized_norm_vector_sq(v, family, kind, s, jac)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_spectral::{make_cutoffs, GridSpec};
    use crate::geometry::jacobian;

    /// ‖χ‖_{H^s}, s = 0..=5, for d0 = 1/2, i = 1, from exact derivatives and
    /// 200-point Gauss–Legendre quadrature of the layer.
    const ZETA_NORMS: [f64; 6] = [
        1.356_124_205_933_593_6,
        5.946_834_771_579_564,
        121.452_648_440_660_4,
        4_251.166_176_588_917,
        186_410.164_493_389_46,
        9_428_736.807_056_366,
    ];
    const ETA_NORMS: [f64; 6] = [
        1.076_287_347_152_824_7,
        5.889_326_395_453_899,
        121.449_846_178_517_76,
        4_251.166_096_531_07,
        186_410.164_491_563_7,
        9_428_736.807_056_328,
    ];

    #[test]
    fn jet_square_root_squares_back() {
        let mut u = Jet::constant(2.0);
        u.0[idx(1, 0)] = 0.3;
        u.0[idx(0, 1)] = -0.7;
        u.0[idx(1, 1)] = 0.25;
        u.0[idx(0, 3)] = 0.1;
        let s = u.sqrt();
        let back = s.mul(&s);
        for (a, b) in back.0.iter().zip(&u.0) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        let g = GridSpec::new(16, 16).unwrap();
        let fam = make_cutoffs(0.5, 1, &g).unwrap();
        let y = [0.4, 0.45];
        let z = |p: [f64; 2]| fam.zeta_at(p[0].hypot(p[1]));
        let h = 1e-4;
        let d1 = (z([y[0] + h, y[1]]) - z([y[0] - h, y[1]])) / (2.0 * h);
        let d12 = (z([y[0] + h, y[1] + h]) - z([y[0] + h, y[1] - h]) - z([y[0] - h, y[1] + h]) + z([y[0] - h, y[1] - h]))
            / (4.0 * h * h);
        let e1 = cutoff_partial(&fam, CutoffKind::Zeta, y, 1, 0).unwrap();
        let e12 = cutoff_partial(&fam, CutoffKind::Zeta, y, 1, 1).unwrap();
        assert!((e1 - d1).abs() < 1e-6 * e1.abs(), "{e1} vs {d1}");
        assert!((e12 - d12).abs() < 1e-5 * e12.abs(), "{e12} vs {d12}");
        assert!((cutoff_partial(&fam, CutoffKind::Eta, y, 0, 0).unwrap() + z(y) - 1.0).abs() < 1e-15);
        assert_eq!(cutoff_partial(&fam, CutoffKind::Zeta, [0.1, 0.2], 2, 1).unwrap(), 0.0);
        assert!(cutoff_partial(&fam, CutoffKind::Zeta, y, 4, 3).is_err());
    }

    #[test]
    fn cutoff_norms_match_exact_values() {
        let g = GridSpec::new(16, 24).unwrap();
        let fam = make_cutoffs(0.5, 1, &g).unwrap();
        let one = ScalarFieldDisk::constant(&g, 1.0);
        for s in 0..=5 {
            let z = localized_norm(&one, &fam, CutoffKind::Zeta, s, None).unwrap();
            let e = localized_norm(&one, &fam, CutoffKind::Eta, s, None).unwrap();
            assert!((z / ZETA_NORMS[s] - 1.0).abs() < 1e-9, "zeta s = {s}: {z}");
            assert!((e / ETA_NORMS[s] - 1.0).abs() < 1e-9, "eta s = {s}: {e}");
        }
    }

    #[test]
    fn rotated_frame_gives_reference_norm() {
        let g = GridSpec::new(16, 24).unwrap();
        let fam = make_cutoffs(0.5, 1, &g).unwrap();
        let (s, c) = 0.7f64.sin_cos();
        let x = VectorFieldDisk::from_cartesian(&g, |a, b| [c * a - s * b, s * a + c * b]);
        let jac = jacobian(&x).unwrap();
        let f = ScalarFieldDisk::from_cartesian(&g, |a, b| a * a * b - 0.3 * b + 0.5 * a * b * b * b);
        for kind in [CutoffKind::Eta, CutoffKind::Zeta] {
            let reference = localized_norm_sq(&f, &fam, kind, 5, None).unwrap();
            let eulerian = localized_norm_sq(&f, &fam, kind, 5, Some(&jac)).unwrap();
            assert!((eulerian / reference - 1.0).abs() < 1e-10, "{kind:?}: {eulerian} vs {reference}");
        }
    }

    #[test]
    fn shear_frame_matches_explicit_inverse() {
        // x = (y₁ + c y₂², y₂) has inverse y = (x₁ − c x₂², x₂)
        let g = GridSpec::new(16, 24).unwrap();
        let fam = make_cutoffs(0.5, 1, &g).unwrap();
        let c = 0.2;
        let x = VectorFieldDisk::from_cartesian(&g, |a, b| [a + c * b * b, b]);
        let jac = jacobian(&x).unwrap();
        let one = ScalarFieldDisk::constant(&g, 1.0);
        let s = 4;
        let got = localized_norm_sq(&one, &fam, CutoffKind::Zeta, s, Some(&jac)).unwrap();
        let n_theta = g.padded_len();
        let h = 2.0 * std::f64::consts::PI / n_theta as f64;
        let mut want = 0.0;
        for piece in pieces(&fam, CutoffKind::Zeta, g.n_radial() + 8) {
            for (&rho, &w) in piece.rhos.iter().zip(&piece.weights) {
                for t in 0..n_theta {
                    let th = t as f64 * h;
                    let y = [rho * th.cos(), rho * th.sin()];
                    let x0 = [y[0] + c * y[1] * y[1], y[1]];
                    let x1 = Jet::variable(x0[0], 0);
                    let x2 = Jet::variable(x0[1], 1);
                    let y1 = x1.add(&x2.mul(&x2).affine(-c, 0.0));
                    let chi = profile_of(&fam, CutoffKind::Zeta, &y1, &x2);
                    let mut acc = 0.0;
                    for order in 0..=s {
                        for a1 in 0..=order {
                            acc += binomial(order, a1) * chi.partial(a1, order - a1).powi(2);
                        }
                    }
                    want += acc * w * h;
                }
            }
        }
        assert!((got / want - 1.0).abs() < 1e-10, "{got} vs {want}");
    }
}
