use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::series::lattice_theta;
use super::SeriesParams;
use crate::error::{Error, Result};
use crate::lattice::TorusSpec;

/// The complex pairing `G(x, y) = (omega - i b)(x, f(y)) = x^T (N^T M - i N^T B) y`
/// on `Lambda_0 (x) R`.
///
/// `G = -i Omega` where `Omega = N^T (B + i M)` is the mirror period matrix,
/// so `exp(-pi kappa x^T G x) = exp(i pi kappa x^T Omega x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingForm {
    omega: DMatrix<Complex64>,
    shift: Vec<f64>,
}

impl PairingForm {
    pub fn new(spec: &TorusSpec) -> Self {
        PairingForm { omega: spec.period_matrix(), shift: spec.shift().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    /// `G = N^T M - i N^T B`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        self.omega.map(|z| z * Complex64::new(0.0, -1.0))
    }

    /// Mirror period matrix `Omega = i G`.
    pub fn period_matrix(&self) -> &DMatrix<Complex64> {
        &self.omega
    }

    /// `Re G = N^T M`.
    pub fn real_part(&self) -> DMatrix<f64> {
        self.omega.map(|z| z.im)
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn eval(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let g = self.matrix();
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| x[i] * g[(i, j)] * y[j]).sum::<Complex64>()).sum()
    }

    /// `sum_{lambda in Z^n} exp(-pi kappa (x - lambda)^T G (x - lambda))`.
    pub fn gaussian_sum(&self, kappa: f64, x: &[f64], params: &SeriesParams) -> Result<Complex64> {
        if !(kappa > 0.0) {
            return Err(Error::Input(format!("weight must be positive, got {kappa}")));
        }
        let zero = vec![Complex64::new(0.0, 0.0); self.dim()];
        lattice_theta(&self.omega.map(|z| z * kappa), x, &zero, params)
    }

    /// `A^[kappa]_c`, with the affine shift entering as the offset `shift/2`
    /// of the characteristic: for `n = 1, N = 3` and `kappa = 2` this is
    /// `theta[c + b/2, 0](6 tau, 0)`.
    pub fn structure_coefficient(&self, kappa: f64, c: &[f64], params: &SeriesParams) -> Result<Complex64> {
        let x: Vec<f64> = c.iter().zip(&self.shift).map(|(c, s)| c + s / 2.0).collect();
        self.gaussian_sum(kappa, &x, params)
    }
}

/// `A^[kappa]_c` for `spec`; see [`PairingForm::structure_coefficient`].
pub fn structure_coefficient(spec: &TorusSpec, kappa: f64, c: &[f64], params: &SeriesParams) -> Result<Complex64> {
    if c.len() != spec.dim() {
        return Err(Error::Input(format!("class has {} coordinates, spec has n = {}", c.len(), spec.dim())));
    }
    PairingForm::new(spec).structure_coefficient(kappa, c, params)
}

/// Canonical theta function of `L^power` with characteristic `c` at the
/// real point `v = (v0, v1)` of `(Lambda_0 + Lambda'^*) (x) R`.
///
/// With `k = power/2`, `w = Omega v0 + N^T v1` and `Y = Im Omega`, the value is
/// `exp((pi/2) k w^T Y^{-1} w) * sum_lambda exp(i pi k x^T Omega x + 2 pi i k x^T w)`,
/// `x = lambda + c`. At `v = 0` this is `A^[k]_c`, and
/// `|theta| exp(-(pi/2) k w^* Y^{-1} w)` is periodic in `v`.
pub fn canonical_theta(spec: &TorusSpec, power: u32, c: &[f64], v: &[f64], params: &SeriesParams) -> Result<Complex64> {
    let n = spec.dim();
    if power == 0 {
        return Err(Error::Input("power must be positive".into()));
    }
    if c.len() != n || v.len() != 2 * n {
        return Err(Error::Input(format!("need a {n}-vector characteristic and a {}-vector point", 2 * n)));
    }
    let omega = spec.period_matrix();
    let w = mirror_point(spec, v);
    let k = f64::from(power) / 2.0;
    let y = omega.map(|z| z.im);
    let chol = y
        .cholesky()
        .ok_or_else(|| Error::Convergence("imaginary part of the period matrix is not positive definite".into()))?;
    let w_re = chol.solve(&w.map(|z| z.re));
    let w_im = chol.solve(&w.map(|z| z.im));
    let yinv_w = DVector::from_fn(n, |i, _| Complex64::new(w_re[i], w_im[i]));
    let quad: Complex64 = w.iter().zip(yinv_w.iter()).map(|(a, b)| a * b).sum();
    let kw: Vec<Complex64> = w.iter().map(|z| z * k).collect();
    let sum = lattice_theta(&omega.map(|z| z * k), c, &kw, params)?;
    Ok(sum * (quad * (PI / 2.0 * k)).exp())
}

/// `w = Omega v0 + N^T v1`.
pub(crate) fn mirror_point(spec: &TorusSpec, v: &[f64]) -> DVector<Complex64> {
    let n = spec.dim();
    let omega = spec.period_matrix();
    let nmat = spec.monodromy();
    DVector::from_fn(n, |i, _| {
        (0..n).map(|j| omega[(i, j)] * v[j] + Complex64::new((nmat[(j, i)] as f64) * v[n + j], 0.0)).sum()
    })
}

/// `k w^* Y^{-1} w`, the hermitian form of `L^power` at the mirror point of `v`.
pub fn hermitian_weight(spec: &TorusSpec, power: u32, v: &[f64]) -> Result<f64> {
    let w = mirror_point(spec, v);
    let y = spec.period_matrix().map(|z| z.im);
    let chol = y
        .cholesky()
        .ok_or_else(|| Error::Convergence("imaginary part of the period matrix is not positive definite".into()))?;
    let a = chol.solve(&w.map(|z| z.re));
    let b = chol.solve(&w.map(|z| z.im));
    let h: f64 = (0..w.len()).map(|i| w[i].re * a[i] + w[i].im * b[i]).sum();
    Ok(f64::from(power) / 2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hesse(b: f64) -> TorusSpec {
        TorusSpec::one_dimensional(Complex64::i(), 3).unwrap().with_shift(vec![b]).unwrap()
    }

    #[test]
    fn pairing_is_minus_i_omega() {
        let spec: TorusSpec = "M = 2 1; 1 3\nB = 0.5 0; 0 0.25\nN = 1 0; 0 1\n".parse().unwrap();
        let form = PairingForm::new(&spec);
        let g = form.matrix();
        assert_eq!(g[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(g[(0, 0)], Complex64::new(2.0, -0.5));
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert_eq!(form.eval(&x, &x), g[(0, 0)]);
    }

    #[test]
    fn shifted_coefficient_is_theta_with_half_shift() {
        let b = 0.3;
        let form = PairingForm::new(&hesse(b));
        let p = SeriesParams::default();
        for k in 0..6 {
            let got = form.structure_coefficient(2.0, &[k as f64 / 6.0], &p).unwrap();
            let x = k as f64 / 6.0 + b / 2.0;
            let direct: Complex64 = (-8i32..=8).map(|m| (Complex64::new(0.0, PI * 6.0) * Complex64::i() * (m as f64 + x).powi(2)).exp()).sum();
            assert!((got - direct).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn canonical_theta_at_origin() {
        let spec = hesse(0.0);
        let form = PairingForm::new(&spec);
        let p = SeriesParams::default();
        for k in 1..=3u32 {
            for j in 0..(3 * k) {
                let c = [j as f64 / (3 * k) as f64];
                let lhs = canonical_theta(&spec, 2 * k, &c, &[0.0, 0.0], &p).unwrap();
                let rhs = form.structure_coefficient(k as f64, &c, &p).unwrap();
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn canonical_theta_is_quasi_periodic() {
        let spec: TorusSpec = "M = 1 0.2; 0.2 0.9\nB = 0.1 0; 0 -0.2\nN = 2 0; 0 2\n".parse().unwrap();
        let p = SeriesParams::default();
        let c = [0.25, 0.5];
        let v = [0.13, -0.21, 0.4, 0.07];
        let base = canonical_theta(&spec, 4, &c, &v, &p).unwrap().norm() * (-PI / 2.0 * hermitian_weight(&spec, 4, &v).unwrap()).exp();
        for e in 0..4 {
            let mut u = v;
            u[e] += 1.0;
            let moved = canonical_theta(&spec, 4, &c, &u, &p).unwrap().norm() * (-PI / 2.0 * hermitian_weight(&spec, 4, &u).unwrap()).exp();
            assert!((moved - base).abs() < 1e-10 * base, "direction {e}");
        }
    }
}
