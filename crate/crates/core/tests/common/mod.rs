#![allow(dead_code)]

use nalgebra::DMatrix;

/// `min det(sum A^T X A)` over symmetric positive definite 2x2 `X` with
/// `det X = 1`, by a coarse-to-fine grid over `X = R(t) diag(e^s, e^-s) R(t)^T`.
pub fn grid_capacity_2x2(kraus: &[DMatrix<f64>]) -> f64 {
    let value = |t: f64, s: f64| {
        let (c, sn) = (t.cos(), t.sin());
        let r = DMatrix::from_row_slice(2, 2, &[c, -sn, sn, c]);
        let x = &r * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![s.exp(), (-s).exp()])) * r.transpose();
        kraus
            .iter()
            .fold(DMatrix::zeros(2, 2), |acc, a| acc + a.transpose() * &x * a)
            .determinant()
    };
    let steps = 60;
    let (mut t_lo, mut t_hi, mut s_lo, mut s_hi) = (0.0, std::f64::consts::PI, -6.0, 6.0);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for _ in 0..40 {
        for i in 0..=steps {
            for j in 0..=steps {
                let t = t_lo + (t_hi - t_lo) * i as f64 / steps as f64;
                let s = s_lo + (s_hi - s_lo) * j as f64 / steps as f64;
                let v = value(t, s);
                if v < best.0 {
                    best = (v, t, s);
                }
            }
        }
        let (dt, ds) = ((t_hi - t_lo) / steps as f64 * 3.0, (s_hi - s_lo) / steps as f64 * 3.0);
        (t_lo, t_hi, s_lo, s_hi) = (best.1 - dt, best.1 + dt, best.2 - ds, best.2 + ds);
    }
    best.0
}

pub fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}
