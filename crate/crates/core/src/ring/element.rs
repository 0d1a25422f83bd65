use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which basis the coefficients of a [`RingElement`] refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coordinates {
    /// `basis_classes(spec, level)`.
    Classes,
    /// `invariant_basis(spec, level)` (orbit sums under `c -> -c`).
    Invariant,
}

/// A homogeneous element of `R = sum_k Hom(L_0, L_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RingElement {
    level: u32,
    coeffs: Vec<Complex64>,
    coordinates: Coordinates,
    ring_id: u64,
}

impl RingElement {
    pub(crate) fn from_parts(level: u32, coeffs: Vec<Complex64>, coordinates: Coordinates, ring_id: u64) -> Self {
        RingElement { level, coeffs, coordinates, ring_id }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coordinates(&self) -> Coordinates {
        self.coordinates
    }

    pub fn is_invariant(&self) -> bool {
        self.coordinates == Coordinates::Invariant
    }

    pub(crate) fn ring_id(&self) -> u64 {
        self.ring_id
    }

    fn check_compatible(&self, other: &RingElement) -> Result<()> {
        if self.ring_id != other.ring_id {
            return Err(Error::Misuse("elements belong to different rings".into()));
        }
        if self.level != other.level || self.coordinates != other.coordinates {
            return Err(Error::Misuse(format!(
                "cannot combine level {} ({:?}) with level {} ({:?})",
                self.level, self.coordinates, other.level, other.coordinates
            )));
        }
        Ok(())
    }

    pub fn scale(&self, z: Complex64) -> RingElement {
        RingElement { coeffs: self.coeffs.iter().map(|c| c * z).collect(), ..self.clone() }
    }

    /// `self + z * other`.
    pub fn add_scaled(&self, z: Complex64, other: &RingElement) -> Result<RingElement> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + z * b).collect();
        Ok(RingElement { coeffs, ..self.clone() })
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.add_scaled(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i].norm() > threshold).collect()
    }
}
