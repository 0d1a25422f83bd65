//! Gaussian lattice sums: theta functions with characteristics, the
//! structure constants `A^[k]_c`, and canonical theta functions on the mirror.

mod enumerate;
mod form;
mod series;
mod tail;

pub use form::{canonical_theta, hermitian_weight, structure_coefficient, PairingForm};
pub use series::{lattice_theta, theta_char};
pub use tail::tail_bound;

use crate::error::{Error, Result};

/// Truncation controls for every theta series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesParams {
    /// Absolute error target for a single series.
    pub tol: f64,
    /// Largest coordinate extent of the summation region.
    pub max_radius: u32,
}

impl Default for SeriesParams {
    fn default() -> Self {
        SeriesParams { tol: 1e-14, max_radius: 64 }
    }
}

impl SeriesParams {
    pub fn new(tol: f64, max_radius: u32) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Input(format!("tol must be positive, got {tol}")));
        }
        if max_radius == 0 {
            return Err(Error::Input("max_radius must be at least 1".into()));
        }
        Ok(SeriesParams { tol, max_radius })
    }
}
