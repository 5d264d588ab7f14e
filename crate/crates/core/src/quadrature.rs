//! Composite trapezoidal rule on uniform axes.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

/// Trapezoid weights for `n` uniformly spaced nodes of spacing `step`.
pub fn trapezoid_weights(n: usize, step: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let mut w = vec![step; n];
            w[0] *= 0.5;
            w[n - 1] *= 0.5;
            w
        }
    }
}

pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    values
        .iter()
        .zip(trapezoid_weights(values.len(), step))
        .map(|(v, w)| v * w)
        .sum()
}

/// 2D trapezoidal rule of `f(values[[i, j]])`.
///
/// Rows are reduced in parallel and summed in index order so the result does not
/// depend on the thread count.
pub fn trapezoid_2d<F>(values: &Array2<Complex64>, step0: f64, step1: f64, f: F) -> f64
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let (n0, n1) = values.dim();
    let w0 = trapezoid_weights(n0, step0);
    let w1 = trapezoid_weights(n1, step1);
    let rows: Vec<f64> = (0..n0)
        .into_par_iter()
        .map(|i| {
            let row = values.row(i);
            row.iter().zip(&w1).map(|(v, w)| f(*v) * w).sum::<f64>() * w0[i]
        })
        .collect();
    rows.iter().sum()
}

/// 2D trapezoidal rule of `a * conj(b)` over two arrays of equal shape.
pub fn inner_product_2d(a: &Array2<Complex64>, b: &Array2<Complex64>, step0: f64, step1: f64) -> Complex64 {
    assert_eq!(a.dim(), b.dim(), "inner product of mismatched grids");
    let (n0, n1) = a.dim();
    let w0 = trapezoid_weights(n0, step0);
    let w1 = trapezoid_weights(n1, step1);
    let rows: Vec<Complex64> = (0..n0)
        .into_par_iter()
        .map(|i| {
            let s: Complex64 = a
                .row(i)
                .iter()
                .zip(b.row(i).iter())
                .zip(&w1)
                .map(|((x, y), w)| x * y.conj() * w)
                .sum();
            s * w0[i]
        })
        .collect();
    rows.iter().sum()
}
