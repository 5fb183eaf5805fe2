//! Gauss-Legendre quadrature on [0, 1] and a dense complex LU, the two
//! numerical-linear-algebra pieces the Fredholm discretizations need.

use crate::C64;
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].
/// Newton iteration on P_n with the Chebyshev initial guess; converges to
/// machine precision in a handful of steps for any practical n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate f over the straight segment [0, z] with an n-point rule.
pub fn integrate_segment(f: impl Fn(C64) -> C64, z: C64, n: usize) -> C64 {
    let (nodes, weights) = gauss_legendre(n);
    let mut acc = C64::new(0.0, 0.0);
    for (&t, &w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(z * t);
    }
    acc * z
}

/// log det of a dense complex matrix via partial-pivot LU, as the sum of
/// principal logs of the pivots. The matrix is consumed.
pub fn log_det(mut a: Vec<Vec<C64>>) -> C64 {
    let n = a.len();
    let mut log_sum = C64::new(0.0, 0.0);
    let mut sign_flips = 0usize;
    for col in 0..n {
        let (piv_row, piv_norm) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        assert!(piv_norm > 0.0, "singular matrix in log_det");
        if piv_row != col {
            a.swap(piv_row, col);
            sign_flips += 1;
        }
        let piv = a[col][col];
        log_sum += piv.ln();
        for r in col + 1..n {
            let f = a[r][col] / piv;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col + 1..n {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    if sign_flips % 2 == 1 {
        log_sum += C64::new(0.0, PI);
    }
    log_sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_exact_on_polynomials() {
        let (nodes, weights) = gauss_legendre(8);
        // int_0^1 x^9 dx = 1/10, degree 9 < 2*8
        let v: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| w * x.powi(9))
            .sum();
        assert!((v - 0.1).abs() < 1e-15);
        let s: f64 = weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn segment_integration_of_exp() {
        let z = C64::new(0.3, 0.7);
        let v = integrate_segment(|w| w.exp(), z, 24);
        let want = z.exp() - 1.0;
        assert!((v - want).norm() < 1e-14);
    }

    #[test]
    fn log_det_of_diagonal_and_permuted() {
        let a = vec![
            vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(3.0, 0.0)],
        ];
        assert!((log_det(a).re - 6f64.ln()).abs() < 1e-14);
        let b = vec![
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
        ];
        // det = 1; log det is only defined mod 2 pi i
        assert!((log_det(b).exp() - 1.0).norm() < 1e-14);
    }
}
