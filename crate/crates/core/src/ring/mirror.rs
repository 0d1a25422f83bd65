use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::element::{Coordinates, RingElement};
use super::fukaya::FukayaRing;
use crate::error::{Error, Result};
use crate::lattice::MorphismClass;
use crate::theta::canonical_theta;

/// A product computed on the mirror side, with the relative least-squares
/// residual of the fit.
#[derive(Clone, Debug)]
pub struct MirrorProduct {
    pub element: RingElement,
    pub residual: f64,
}

/// Deterministic low-discrepancy points in `[-1/2, 1/2)^dim` (additive
/// recurrence with the generalized golden ratio).
fn sample_points(dim: usize, count: usize) -> Vec<Vec<f64>> {
    // phi_d solves x^(d+1) = x + 1
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|j| phi.powi(-(j as i32)).fract()).collect();
    (1..=count).map(|m| alpha.iter().map(|a| (0.5 + a * m as f64).fract() - 0.5).collect()).collect()
}

/// Product of canonical theta functions `theta_{c1} theta_{c2}` of `L^{2k1}`
/// and `L^{2k2}`, expanded in the canonical basis of `L^{2(k1+k2)}`.
///
/// The expansion is found by sampling both sides at deterministic points of
/// the real torus and solving the overdetermined linear system.
pub fn mirror_compose(ring: &FukayaRing, c1: &MorphismClass, c2: &MorphismClass) -> Result<MirrorProduct> {
    let spec = ring.spec();
    if !spec.shift().iter().all(|s| *s == 0.0) {
        return Err(Error::Unsupported("mirror products are only defined for zero shift".into()));
    }
    let (k1, k2) = (c1.level(), c2.level());
    let big_k = k1 + k2;
    let targets = ring.classes(big_k)?;
    let n = spec.dim();
    let rows = 2 * targets.len() + 16;
    let points = sample_points(2 * n, rows);
    let params = ring.params();
    let f1 = c1.to_f64();
    let f2 = c2.to_f64();
    let mut a = DMatrix::<Complex64>::zeros(rows, targets.len());
    let mut b = DVector::<Complex64>::zeros(rows);
    for (r, v) in points.iter().enumerate() {
        let lhs = canonical_theta(spec, 2 * k1, &f1, v, params)? * canonical_theta(spec, 2 * k2, &f2, v, params)?;
        let mut scale = lhs.norm();
        for (col, c3) in targets.iter().enumerate() {
            a[(r, col)] = canonical_theta(spec, 2 * big_k, &c3.to_f64(), v, params)?;
            scale = scale.max(a[(r, col)].norm());
        }
        let inv = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        b[r] = lhs * inv;
        for col in 0..targets.len() {
            a[(r, col)] *= inv;
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd
        .solve(&b, smax * 1e-13)
        .map_err(|e| Error::Precision(format!("least-squares fit failed: {e}")))?;
    let residual = (&a * &x - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    let element = ring.element(big_k, x.iter().cloned().collect(), Coordinates::Classes)?;
    Ok(MirrorProduct { element, residual })
}
