//! Gauss-Legendre rules and collapsed (Duffy) product rules on the reference triangle.

use crate::mesh::Point;

/// `n`-point Gauss-Legendre rule on `[0, 1]` as `(nodes, weights)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "empty quadrature rule");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        // Newton iteration on P_n from the Chebyshev guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// `n²`-point collapsed Gauss rule on the reference triangle, exact for
/// polynomials of degree `2n - 2`; weights sum to `1/2`.
pub fn triangle_rule(n: usize) -> Vec<(Point, f64)> {
    let (x, w) = gauss_legendre(n);
    let mut rule = Vec::with_capacity(n * n);
    for (a, wa) in x.iter().zip(&w) {
        for (b, wb) in x.iter().zip(&w) {
            // (a, b) in the unit square -> (a, (1 - a) b)
            rule.push(([*a, (1.0 - a) * b], wa * wb * (1.0 - a)));
        }
    }
    rule
}
