use num_complex::Complex64;

use super::element::RingElement;
use super::fukaya::FukayaRing;
use crate::error::{Error, Result};

/// `alpha_y * (x_1 ... x_k) - alpha_x * (y_1 ... y_k) = 0`, where the two
/// products are `alpha_x z` and `alpha_y z`.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannRelation {
    pub alpha_x: Complex64,
    pub alpha_y: Complex64,
    /// Relative distance of each product from the line through `z`.
    pub residual_x: f64,
    pub residual_y: f64,
}

impl RiemannRelation {
    /// Coefficients of the two words in the relation.
    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (self.alpha_y, -self.alpha_x)
    }
}

fn proportionality(p: &RingElement, z: &RingElement) -> (Complex64, f64) {
    let zz: f64 = z.coeffs().iter().map(|c| c.norm_sqr()).sum();
    let alpha: Complex64 = z.coeffs().iter().zip(p.coeffs()).map(|(zc, pc)| zc.conj() * pc).sum::<Complex64>() / zz;
    let resid: f64 = z
        .coeffs()
        .iter()
        .zip(p.coeffs())
        .map(|(zc, pc)| (pc - alpha * zc).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = p.norm().max(alpha.norm() * zz.sqrt());
    (alpha, if scale > 0.0 { resid / scale } else { 0.0 })
}

/// Riemann-type relation between two words whose products are both
/// proportional to `z`. Returns `None` when either product is not
/// proportional to `z` within `tol`.
pub fn riemann_relation(ring: &FukayaRing, x: &[RingElement], y: &[RingElement], z: &RingElement, tol: f64) -> Result<Option<RiemannRelation>> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Input("both words must be nonempty and of equal length".into()));
    }
    if z.max_abs() == 0.0 {
        return Err(Error::Degenerate("target element is zero".into()));
    }
    let px = ring.evaluate_monomial(x)?;
    let py = ring.evaluate_monomial(y)?;
    if px.level() != z.level() || py.level() != z.level() || px.coordinates() != z.coordinates() {
        return Err(Error::Misuse("products and target live in different graded pieces".into()));
    }
    let (alpha_x, residual_x) = proportionality(&px, z);
    let (alpha_y, residual_y) = proportionality(&py, z);
    if residual_x > tol || residual_y > tol {
        return Ok(None);
    }
    Ok(Some(RiemannRelation { alpha_x, alpha_y, residual_x, residual_y }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TorusSpec;
    use crate::theta::SeriesParams;

    fn hesse() -> FukayaRing {
        FukayaRing::new(TorusSpec::one_dimensional(Complex64::i(), 3).unwrap(), SeriesParams::default()).unwrap()
    }

    #[test]
    fn identical_words_give_equal_constants() {
        let r = hesse();
        let x = r.degree_one_generators().unwrap();
        let word = [x[0].clone(), x[2].clone()];
        let z = r.evaluate_monomial(&word).unwrap();
        let rel = riemann_relation(&r, &word, &word, &z, 1e-10).unwrap().unwrap();
        assert!((rel.alpha_x - rel.alpha_y).norm() < 1e-15);
        assert!((rel.alpha_x - 1.0).norm() < 1e-14);
    }

    #[test]
    fn swapped_words_at_zero_shift() {
        let r = hesse();
        let x = r.degree_one_generators().unwrap();
        let z = r.compose(&x[0], &x[1]).unwrap();
        let rel = riemann_relation(&r, &[x[0].clone(), x[1].clone()], &[x[1].clone(), x[0].clone()], &z, 1e-10).unwrap().unwrap();
        let (a, b) = rel.coefficients();
        assert!((a + b).norm() < 1e-12);
    }

    #[test]
    fn non_proportional_products_give_none() {
        let r = hesse();
        let x = r.degree_one_generators().unwrap();
        let z = r.compose(&x[0], &x[0]).unwrap();
        assert!(riemann_relation(&r, &[x[0].clone(), x[1].clone()], &[x[0].clone(), x[0].clone()], &z, 1e-10).unwrap().is_none());
        let zero = r.zero(2, crate::ring::Coordinates::Classes).unwrap();
        assert!(matches!(riemann_relation(&r, &x[..1], &x[..1], &zero, 1e-10), Err(Error::Degenerate(_))));
    }
}
