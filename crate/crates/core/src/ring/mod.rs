//! The graded ring `sum_k Hom(L_0, L_k)`: triangle products, the mirror-side
//! theta product, and numerical relation discovery.

mod element;
mod fukaya;
pub(crate) mod linalg;
mod mirror;
mod relations;
mod riemann;

pub use element::{Coordinates, RingElement};
pub use fukaya::FukayaRing;
pub use mirror::{mirror_compose, MirrorProduct};
pub use relations::{enumerate_words, find_relations, standard_generators, Generator, RelationSet};
pub use riemann::{riemann_relation, RiemannRelation};

pub(crate) use relations::evaluate_words;
