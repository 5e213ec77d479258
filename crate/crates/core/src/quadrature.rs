//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

/// ∫_a^b f by composite Gauss–Legendre with `panels` panels of `n` points.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let (x, w) = gauss_legendre(n, 0.0, h);
    let mut total = 0.0;
    for p in 0..panels {
        let base = a + p as f64 * h;
        total += x.iter().zip(&w).map(|(xi, wi)| wi * f(base + xi)).sum::<f64>();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let (x, w) = gauss_legendre(8, 0.0, 2.0);
        for deg in 0..16 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = 2f64.powi(deg + 1) / (deg + 1) as f64;
            assert!((q - exact).abs() < 1e-12 * exact, "deg {deg}");
        }
    }

    #[test]
    fn composite_log() {
        let v = integrate(|s| s * s.ln(), 1.0, 2.0, 10, 4);
        let exact = 2.0 * 2f64.ln() - 0.75;
        assert!((v - exact).abs() < 1e-14);
    }
}
