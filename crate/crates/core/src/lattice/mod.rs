//! Exact bookkeeping on the lattice side: the torus input, its validation,
//! and the intersection classes `K(L_k)_0` that label ring bases.

mod classes;
mod parse;
mod snf;
mod spec;
mod validate;

pub use classes::{basis_classes, class_count, fixed_classes, invariant_basis, MorphismClass, OrbitVector};
pub use parse::parse_rational;
pub use snf::{smith_normal_form, SmithForm};
pub use spec::TorusSpec;
pub use validate::{validate, CheckReport, ConditionCheck};
