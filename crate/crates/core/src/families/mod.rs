//! The worked families: the `N = 3` ring (Sklyanin relations and the Hesse
//! cubic), the weighted `(1, 2, 3)` ring with its sextic, Weierstrass form
//! and `j`-expansion, and Kummer surfaces.

mod kummer;
pub mod quasi_poly;
mod sextic;
mod sklyanin;
mod veronese;

pub use kummer::{kummer_generators, kummer_spec, verify_kummer};
pub use quasi_poly::QuasiPoly;
pub use sextic::{
    default_samples, derive_sextic, j_invariant, j_qseries, j_qseries_with, quasihomogeneous_generators, quasihomogeneous_spec,
    verify_jseries, verify_quasihomogeneous, weierstrass_reduce, JSeries, SexticCurve, Weierstrass, INTEGRALITY_TOL, MU_NU_GUARD, SEXTIC_MONOMIALS,
};
pub use sklyanin::{hesse_coefficient, hesse_spec, sklyanin_coefficients, verify_hesse, verify_sklyanin, SklyaninParams};
pub use veronese::{veronese_quadrics, verify_p123_veronese};
