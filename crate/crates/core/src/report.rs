//! Verification reports: a list of named checks with residuals and
//! tolerances, serialized with fixed field order.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json::{complex, value, Real};
use crate::lattice::TorusSpec;
use crate::theta::SeriesParams;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub lhs: Value,
    pub rhs: Value,
    pub residual: Real,
    pub tolerance: Real,
    pub pass: bool,
}

impl Check {
    /// `|lhs - rhs| / max(1, |rhs|) <= tol`.
    pub fn close(id: &str, lhs: Complex64, rhs: Complex64, tol: f64) -> Check {
        let residual = (lhs - rhs).norm() / rhs.norm().max(1.0);
        Check { id: id.into(), lhs: value(complex(lhs)), rhs: value(complex(rhs)), residual: Real(residual), tolerance: Real(tol), pass: residual <= tol }
    }

    /// A nonnegative quantity that must not exceed `tol`.
    pub fn small(id: &str, quantity: f64, tol: f64) -> Check {
        Check { id: id.into(), lhs: value(Real(quantity)), rhs: value(Real(0.0)), residual: Real(quantity), tolerance: Real(tol), pass: quantity <= tol }
    }

    /// Exact integer equality.
    pub fn count(id: &str, got: usize, expected: usize) -> Check {
        let residual = got.abs_diff(expected) as f64;
        Check { id: id.into(), lhs: value(got), rhs: value(expected), residual: Real(residual), tolerance: Real(0.0), pass: got == expected }
    }

    /// `got >= minimum`.
    pub fn at_least(id: &str, got: usize, minimum: usize) -> Check {
        let residual = minimum.saturating_sub(got) as f64;
        Check { id: id.into(), lhs: value(got), rhs: value(format!(">= {minimum}")), residual: Real(residual), tolerance: Real(0.0), pass: got >= minimum }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportParams {
    pub tol: Real,
    pub max_radius: u32,
    pub svd_tol: Real,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub spec_hash: Option<String>,
    pub params: ReportParams,
    pub inputs: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub observations: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(name: &str, params: &SeriesParams, svd_tol: f64) -> Report {
        Report {
            name: name.into(),
            spec_hash: None,
            params: ReportParams { tol: Real(params.tol), max_radius: params.max_radius, svd_tol: Real(svd_tol) },
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            observations: BTreeMap::new(),
        }
    }

    pub fn for_spec(mut self, spec: &TorusSpec) -> Report {
        self.spec_hash = Some(spec.fingerprint());
        self
    }

    pub fn input<T: Serialize>(&mut self, key: &str, v: T) {
        self.inputs.insert(key.into(), value(v));
    }

    pub fn observe<T: Serialize>(&mut self, key: &str, v: T) {
        self.observations.insert(key.into(), value(v));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check: `report,id,residual,tolerance,pass`.
    pub fn write_csv<W: Write>(reports: &[Report], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Input(format!("writing CSV: {e}"));
        w.write_record(["report", "id", "residual", "tolerance", "pass"]).map_err(io)?;
        for r in reports {
            for c in &r.checks {
                w.write_record([r.name.clone(), c.id.clone(), format!("{:.16e}", c.residual.0), format!("{:.16e}", c.tolerance.0), c.pass.to_string()])
                    .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Input(format!("writing CSV: {e}")))?;
        Ok(())
    }
}
