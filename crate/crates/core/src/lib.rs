//! Numerical reconstruction of the homogeneous coordinate ring of the mirror
//! of a symplectic torus.
//!
//! The input is a [`TorusSpec`]: the symplectic and B-field blocks `M`, `B`
//! of a complexified symplectic form, an integer matrix `N` describing the
//! large complex structure monodromy `rho(x, y) = (x + shift, y + N x)`, and
//! an optional `-1` involution for Kummer quotients. From this data the crate
//!
//! * enumerates the intersection classes `K(L_k)_0` that label the basis of
//!   `Hom(L_0, L_k)` ([`lattice`]),
//! * evaluates the Gaussian lattice sums that appear as structure constants,
//!   with rigorous truncation ([`theta`]),
//! * multiplies in the graded ring `R = sum_k Hom(L_0, L_k)` and discovers
//!   polynomial relations numerically ([`ring`]),
//! * runs the worked families: Sklyanin/Hesse cubics, the quasihomogeneous
//!   sextic in `P(1,2,3)` together with its j-invariant, and Kummer surfaces
//!   ([`families`]).

pub mod builtin;
pub mod cli;
pub mod error;
pub mod families;
pub mod json;
pub mod lattice;
pub mod report;
pub mod ring;
pub mod theta;

pub use error::{Error, Result};
pub use lattice::{basis_classes, fixed_classes, invariant_basis, validate, CheckReport, MorphismClass, OrbitVector, TorusSpec};
pub use ring::{FukayaRing, RelationSet, RingElement};
pub use theta::{PairingForm, SeriesParams};

pub use num_complex::Complex64;
