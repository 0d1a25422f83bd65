use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::enumerate::for_each_in_ellipsoid;
use super::tail::ellipsoid_tail;
use super::SeriesParams;
use crate::error::{Error, Result};

/// `sum_{lambda in Z^n} exp(i pi x^T Omega x + 2 pi i x^T w)` with
/// `x = lambda + a`, accurate to `params.tol` in absolute value.
///
/// Let `Y = Im Omega` and `v = Im w`. The modulus of a term is
/// `exp(pi v^T Y^{-1} v) exp(-pi (x - x0)^T Y (x - x0))` with
/// `x0 = -Y^{-1} v`, so the sum is taken over an ellipsoid around `x0` whose
/// radius makes the certified tail (scaled by the prefactor) drop below `tol`.
pub fn lattice_theta(omega: &DMatrix<Complex64>, a: &[f64], w: &[Complex64], params: &SeriesParams) -> Result<Complex64> {
    let n = a.len();
    if omega.nrows() != n || omega.ncols() != n || w.len() != n {
        return Err(Error::Input(format!(
            "theta series shapes disagree: Omega {}x{}, a {}, w {}",
            omega.nrows(),
            omega.ncols(),
            n,
            w.len()
        )));
    }
    let omega = (omega + omega.transpose()) * Complex64::new(0.5, 0.0);
    let y = omega.map(|z| z.im);
    let chol = y
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Convergence("imaginary part of the period matrix is not positive definite".into()))?;
    let v = nalgebra::DVector::from_iterator(n, w.iter().map(|z| z.im));
    let yinv_v = chol.solve(&v);
    let x0: Vec<f64> = yinv_v.iter().map(|t| -t).collect();
    let log_prefactor = PI * v.dot(&yinv_v);
    let mu = y.clone().symmetric_eigenvalues().min();
    let yinv_diag = chol.inverse().diagonal();
    let extent_per_radius = yinv_diag.iter().cloned().fold(0.0, f64::max).sqrt();

    // grow the radius until the certified tail is below tol
    let log_tol = params.tol.ln();
    let mut radius = 0.5;
    loop {
        let tail = ellipsoid_tail(n, mu, radius);
        if tail == 0.0 || tail.ln() + log_prefactor < log_tol {
            break;
        }
        radius += 0.5;
        if radius * extent_per_radius > params.max_radius as f64 {
            return Err(Error::Precision(format!(
                "truncation radius exceeds max_radius = {} before the tail bound reaches tol = {:e}",
                params.max_radius, params.tol
            )));
        }
    }

    let center: Vec<f64> = (0..n).map(|i| x0[i] - a[i]).collect();
    let upper = chol.l().transpose();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut x = vec![0.0; n];
    for_each_in_ellipsoid(&upper, &center, radius, |lambda| {
        for i in 0..n {
            x[i] = lambda[i] as f64 + a[i];
        }
        let mut phase = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += omega[(i, j)] * x[j];
            }
            phase += x[i] * (row * 0.5 + w[i]);
        }
        sum += (Complex64::new(0.0, 2.0 * PI) * phase).exp();
    });
    Ok(sum)
}

/// Theta function with characteristics,
/// `theta[a, b](tau, z) = sum_m exp(i pi (m+a)^T tau (m+a) + 2 pi i (m+a)^T (z+b))`.
pub fn theta_char(a: &[f64], b: &[f64], tau: &DMatrix<Complex64>, z: &[Complex64], params: &SeriesParams) -> Result<Complex64> {
    if b.len() != z.len() {
        return Err(Error::Input(format!("characteristic b has length {}, z has {}", b.len(), z.len())));
    }
    let shifted: Vec<Complex64> = z.iter().zip(b).map(|(z, b)| z + b).collect();
    lattice_theta(tau, a, &shifted, params)
}
