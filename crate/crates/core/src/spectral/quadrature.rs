//! Gauss–Legendre rules and exact polynomial integration over intervals and
//! polygons.

use std::f64::consts::PI;

/// Nodes and weights of the k-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    for i in 0..k.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(k, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_k(x), P_k'(x))`.
fn legendre(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature points `(x, weight)` on `[lo, hi]`, exact for polynomials of
/// degree `2k − 1`.
pub fn interval_rule(lo: f64, hi: f64, k: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(k);
    let half = (hi - lo) / 2.0;
    let mid = (hi + lo) / 2.0;
    x.iter().zip(&w).map(|(t, wt)| (mid + half * t, wt * half)).collect()
}

/// Quadrature points `(x, weight)` for the triangle `(a, b, c)` through the
/// collapsed map `a + s((b − a) + t(c − b))`, exact for polynomials of
/// degree `2k − 2`.
pub fn triangle_rule(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2], k: usize) -> Vec<([f64; 2], f64)> {
    let (x, w) = gauss_legendre(k);
    let e1 = [b[0] - a[0], b[1] - a[1]];
    let e2 = [c[0] - b[0], c[1] - b[1]];
    let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let mut out = Vec::with_capacity(k * k);
    for (si, swi) in x.iter().zip(&w) {
        let s = 0.5 * (si + 1.0);
        for (ti, twi) in x.iter().zip(&w) {
            let t = 0.5 * (ti + 1.0);
            let p = [a[0] + s * (e1[0] + t * e2[0]), a[1] + s * (e1[1] + t * e2[1])];
            out.push((p, 0.25 * swi * twi * s * jac));
        }
    }
    out
}
