//! Small numeric helpers shared by the quadrature and the lattice propagator.

use num_complex::Complex64;

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise summation with a fixed split, so the result does not depend on how
/// callers chunk the work.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Largest pointwise distance between two equally long complex series.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Least-squares slope of `ys` against `xs`.
pub fn linear_fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (num, den) = xs.iter().zip(ys).fold((0.0, 0.0), |(num, den), (x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    num / den
}

/// Symmetric time grid on `[-tmax, tmax]` with `n` points; `t[n-1-i] == -t[i]`
/// exactly, and an odd `n` puts `t = 0` on the grid.
pub fn symmetric_grid(tmax: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| tmax * (2.0 * i as f64 - last) / last)
        .collect()
}
