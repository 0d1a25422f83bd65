//! Specs shipped with the crate.

use crate::error::{Error, Result};
use crate::lattice::TorusSpec;

const BUILTINS: [(&str, &str); 5] = [
    ("hesse", include_str!("../specs/hesse.spec")),
    ("sklyanin", include_str!("../specs/sklyanin.spec")),
    ("quasihomogeneous", include_str!("../specs/quasihomogeneous.spec")),
    ("kummer-degenerate", include_str!("../specs/kummer-degenerate.spec")),
    ("kummer-generic", include_str!("../specs/kummer-generic.spec")),
];

pub fn names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

/// Config text of a built-in spec.
pub fn source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin(name: &str) -> Result<TorusSpec> {
    let text = source(name).ok_or_else(|| Error::Input(format!("unknown built-in spec {name:?}; known: {}", names().join(", "))))?;
    text.parse()
}
