//! Stable JSON output: floats are written with 17 significant digits so
//! that identical inputs give byte-identical reports.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// An `f64` that serializes as a JSON number in `%.16e` form.
/// Non-finite values become the strings `"NaN"`, `"inf"`, `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let number = serde_json::Number::from_str(&format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
            number.serialize(serializer)
        } else if self.0.is_nan() {
            serializer.serialize_str("NaN")
        } else if self.0 > 0.0 {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_str("-inf")
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

/// `[re, im]`.
pub fn complex(z: Complex64) -> [Real; 2] {
    [Real(z.re), Real(z.im)]
}

pub fn complex_vec(zs: &[Complex64]) -> Vec<[Real; 2]> {
    zs.iter().map(|z| complex(*z)).collect()
}

/// `serde_json::Value` of anything serializable; the types in this crate
/// never fail to serialize.
pub fn value<T: Serialize>(x: T) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable value")
}
