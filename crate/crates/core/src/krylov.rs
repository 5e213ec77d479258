//! Right-preconditioned BiCGSTAB on complex vectors with the real inner
//! product Re Σ conj(a) b.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vector = Vec<Complex64>;

/// Outcome of a converged solve.
#[derive(Clone, Debug)]
pub struct KrylovOutcome {
    pub solution: Vector,
    pub iterations: usize,
    /// Final ‖b − Ax‖ / reference.
    pub relative_residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves A x = b until ‖b − A x‖ ≤ tol · reference.
pub fn bicgstab<A, P>(
    mut apply: A,
    mut precond: P,
    b: &[Complex64],
    x0: Vector,
    tol: f64,
    max_iter: usize,
    reference: f64,
) -> Result<KrylovOutcome>
where
    A: FnMut(&[Complex64]) -> Result<Vector>,
    P: FnMut(&[Complex64]) -> Vector,
{
    let n = b.len();
    let reference = if reference > 0.0 { reference } else { 1.0 };
    let target = tol * reference;
    let mut x = x0;
    let ax = apply(&x)?;
    let mut r: Vector = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut res = norm(&r);
    if res <= target {
        return Ok(KrylovOutcome {
            solution: x,
            iterations: 0,
            relative_residual: res / reference,
        });
    }
    let mut r_hat = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    let mut restarts = 0;
    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new.abs() < 1e-300 || omega == 0.0 {
            if restarts > 5 {
                return Err(Error::Breakdown(it));
            }
            restarts += 1;
            r_hat = r.clone();
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            v.iter_mut().for_each(|c| *c = zero);
            p.iter_mut().for_each(|c| *c = zero);
            continue;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let p_hat = precond(&p);
        v = apply(&p_hat)?;
        let denom = dot(&r_hat, &v);
        if denom.abs() < 1e-300 {
            return Err(Error::Breakdown(it));
        }
        alpha = rho / denom;
        let s: Vector = r.iter().zip(&v).map(|(r, v)| r - alpha * v).collect();
        if norm(&s) <= target {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            let ax = apply(&x)?;
            let res = norm(&b.iter().zip(&ax).map(|(b, a)| b - a).collect::<Vec<_>>());
            return Ok(KrylovOutcome {
                solution: x,
                iterations: it,
                relative_residual: res / reference,
            });
        }
        let s_hat = precond(&s);
        let t = apply(&s_hat)?;
        let tt = dot(&t, &t);
        omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm(&r);
        if res <= target {
            let ax = apply(&x)?;
            let res = norm(&b.iter().zip(&ax).map(|(b, a)| b - a).collect::<Vec<_>>());
            if res <= 10.0 * target {
                return Ok(KrylovOutcome {
                    solution: x,
                    iterations: it,
                    relative_residual: res / reference,
                });
            }
            r = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: res / reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_nonsymmetric_system() {
        let a = [[4.0, 1.0, 0.0], [2.0, 5.0, 1.0], [0.0, 1.0, 3.0]];
        let b: Vector = [1.0, 2.0, 3.0].iter().map(|&v| Complex64::new(v, -v)).collect();
        let apply = |x: &[Complex64]| -> Result<Vector> {
            Ok((0..3).map(|i| (0..3).map(|j| a[i][j] * x[j]).sum()).collect())
        };
        let out = bicgstab(apply, |r| r.to_vec(), &b, vec![Complex64::new(0.0, 0.0); 3], 1e-14, 50, 1.0).unwrap();
        let check = apply(&out.solution).unwrap();
        for (c, b) in check.iter().zip(&b) {
            assert!((c - b).norm() < 1e-12);
        }
    }
}
