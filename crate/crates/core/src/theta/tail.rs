use std::f64::consts::PI;

use nalgebra::DMatrix;
use statrs::function::erf::erfc;

/// Upper incomplete gamma `Gamma((j+1)/2, x)` for `j = 0..=jmax`, by the
/// recurrence `Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}`.
fn half_integer_upper_gamma(jmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let value = match j {
            0 => PI.sqrt() * erfc(x.sqrt()),
            1 => (-x).exp(),
            _ => {
                let s = (j - 1) as f64 / 2.0;
                s * out[j - 2] + x.powf(s) * (-x).exp()
            }
        };
        out.push(value);
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bound on `sum exp(-pi |y|_Y^2)` over the points of a translated copy of
/// `Z^n` with `|y|_Y > radius`, given the smallest eigenvalue `mu` of `Y`.
///
/// Points are at least `sqrt(mu)` apart in the `Y`-norm, so the balls of
/// radius `r0 = sqrt(mu)/2` around them are disjoint. On each ball the
/// Gaussian at the center is dominated by `exp(-pi (|z| - r0)_+^2)`; summing
/// turns into a radial integral over `|z| > radius - r0`.
pub(crate) fn ellipsoid_tail(n: usize, mu: f64, radius: f64) -> f64 {
    let r0 = mu.sqrt() / 2.0;
    let t0 = (radius - r0).max(0.0);
    let nf = n as f64;
    let inner = if t0 < r0 { (r0.powi(n as i32) - t0.powi(n as i32)) / nf } else { 0.0 };
    let a = (t0 - r0).max(0.0);
    let gammas = half_integer_upper_gamma(n - 1, PI * a * a);
    let outer: f64 = (0..n)
        .map(|j| {
            let ij = 0.5 * PI.powf(-((j + 1) as f64) / 2.0) * gammas[j];
            binomial(n - 1, j) * r0.powi((n - 1 - j) as i32) * ij
        })
        .sum();
    nf / r0.powi(n as i32) * (inner + outer)
}

/// Rigorous bound on the mass omitted by a box truncation,
/// `sum_{|lambda|_inf > radius} exp(-pi kappa lambda^T Re(G) lambda)`.
///
/// Returns `+inf` when `kappa Re(G)` is not positive definite.
pub fn tail_bound(re_form: &DMatrix<f64>, kappa: f64, radius: f64) -> f64 {
    let y = (re_form + re_form.transpose()) * (0.5 * kappa);
    let mu = y.clone().symmetric_eigenvalues().min();
    if !(mu > 0.0) {
        return f64::INFINITY;
    }
    // |lambda|_inf > R forces |lambda|_Y >= sqrt(mu) |lambda|_2 > sqrt(mu) R.
    ellipsoid_tail(re_form.nrows(), mu, mu.sqrt() * radius.max(0.0))
}
