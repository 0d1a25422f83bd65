use std::fmt;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::spec::TorusSpec;

/// Relative tolerance for symmetry and pivots when the blocks are floats.
const FLOAT_TOL: f64 = 1e-12;

/// Outcome of one torus condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionCheck {
    pub id: &'static str,
    pub passed: bool,
    /// Advisory conditions are reported but do not gate `passed()`.
    pub advisory: bool,
    /// First offending entry, when the condition is entrywise.
    pub witness: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub exact: bool,
    pub conditions: Vec<ConditionCheck>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed || c.advisory)
    }

    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| !c.passed && !c.advisory)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            let status = match (c.passed, c.advisory) {
                (true, _) => "pass",
                (false, true) => "warn",
                (false, false) => "FAIL",
            };
            write!(f, "{status:4} {}", c.id)?;
            if let Some((i, j)) = c.witness {
                write!(f, " at ({i},{j})")?;
            }
            writeln!(f, ": {}", c.detail)?;
        }
        Ok(())
    }
}

/// Checks the torus conditions: `N` nonsingular, `M` invertible,
/// `N^T M` and `N^T B` symmetric, `N^T M` positive definite (ampleness of the
/// mirror line bundle). Invertibility of `B` is reported as advisory: the
/// worked examples all have `B = 0`.
pub fn validate(spec: &TorusSpec) -> CheckReport {
    let n = spec.dim();
    let nmat = spec.monodromy();
    let mut conditions = Vec::new();

    let det_n = bareiss_det(&(0..n).map(|i| (0..n).map(|j| i128::from(nmat[(i, j)])).collect()).collect::<Vec<_>>());
    conditions.push(ConditionCheck {
        id: "n_nonsingular",
        passed: det_n != 0,
        advisory: false,
        witness: None,
        detail: format!("det N = {det_n}"),
    });

    let exact = spec.exact().is_some();
    match spec.exact() {
        Some(ex) => {
            let nt: Vec<Vec<BigRational>> =
                (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(nmat[(j, i)].into())).collect()).collect();
            let ntm = mat_mul(&nt, &ex.m);
            let ntb = mat_mul(&nt, &ex.b);
            conditions.push(invertible_exact("m_invertible", &ex.m, false));
            conditions.push(invertible_exact("b_invertible", &ex.b, true));
            conditions.push(symmetric_exact("ntm_symmetric", &ntm));
            conditions.push(symmetric_exact("ntb_symmetric", &ntb));
            conditions.push(positive_definite_exact(&ntm));
        }
        None => {
            let nt = nmat.map(|x| x as f64).transpose();
            let ntm = &nt * spec.symplectic();
            let ntb = &nt * spec.b_field();
            conditions.push(invertible_float("m_invertible", spec.symplectic(), false));
            conditions.push(invertible_float("b_invertible", spec.b_field(), true));
            conditions.push(symmetric_float("ntm_symmetric", &ntm));
            conditions.push(symmetric_float("ntb_symmetric", &ntb));
            conditions.push(positive_definite_float(&ntm));
        }
    }
    CheckReport { exact, conditions }
}

fn bareiss_det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

fn symmetric_exact(id: &'static str, m: &[Vec<BigRational>]) -> ConditionCheck {
    let n = m.len();
    let witness = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| m[i][j] != m[j][i]);
    ConditionCheck {
        id,
        passed: witness.is_none(),
        advisory: false,
        witness,
        detail: match witness {
            Some((i, j)) => format!("entry ({i},{j}) = {} but ({j},{i}) = {}", m[i][j], m[j][i]),
            None => "symmetric (exact)".into(),
        },
    }
}

fn symmetric_float(id: &'static str, m: &DMatrix<f64>) -> ConditionCheck {
    let n = m.nrows();
    let scale = m.amax().max(1.0);
    let witness = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| (m[(i, j)] - m[(j, i)]).abs() > FLOAT_TOL * scale);
    ConditionCheck {
        id,
        passed: witness.is_none(),
        advisory: false,
        witness,
        detail: match witness {
            Some((i, j)) => format!("entry ({i},{j}) = {} but ({j},{i}) = {}", m[(i, j)], m[(j, i)]),
            None => format!("symmetric within {FLOAT_TOL:e}"),
        },
    }
}

fn invertible_exact(id: &'static str, m: &[Vec<BigRational>], advisory: bool) -> ConditionCheck {
    let n = m.len();
    let mut a = m.to_vec();
    let mut defect = None;
    for k in 0..n {
        match (k..n).find(|&i| !a[i][k].is_zero()) {
            Some(p) => {
                a.swap(k, p);
                for i in k + 1..n {
                    let factor = &a[i][k] / &a[k][k];
                    for j in k..n {
                        let delta = &factor * &a[k][j];
                        a[i][j] -= delta;
                    }
                }
            }
            None => {
                defect = Some(k);
                break;
            }
        }
    }
    ConditionCheck {
        id,
        passed: defect.is_none(),
        advisory,
        witness: defect.map(|k| (k, k)),
        detail: match defect {
            Some(k) => format!("singular: no pivot in column {k}"),
            None => "invertible (exact)".into(),
        },
    }
}

fn invertible_float(id: &'static str, m: &DMatrix<f64>, advisory: bool) -> ConditionCheck {
    let n = m.nrows();
    let scale = m.amax();
    let mut a = m.clone();
    let mut defect = if scale == 0.0 { Some(0) } else { None };
    if defect.is_none() {
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs())).expect("nonempty");
            if a[(p, k)].abs() <= FLOAT_TOL * scale {
                defect = Some(k);
                break;
            }
            a.swap_rows(k, p);
            for i in k + 1..n {
                let factor = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    a[(i, j)] -= factor * a[(k, j)];
                }
            }
        }
    }
    ConditionCheck {
        id,
        passed: defect.is_none(),
        advisory,
        witness: defect.map(|k| (k, k)),
        detail: match defect {
            Some(k) => format!("singular within {FLOAT_TOL:e}: no pivot in column {k}"),
            None => "invertible".into(),
        },
    }
}

/// Leading principal minors via elimination without pivoting: every pivot is
/// a ratio of consecutive minors, so all pivots positive iff positive definite.
fn positive_definite_exact(m: &[Vec<BigRational>]) -> ConditionCheck {
    let n = m.len();
    let mut a = m.to_vec();
    let mut failure = None;
    for k in 0..n {
        if !a[k][k].is_positive() {
            failure = Some(k);
            break;
        }
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    ConditionCheck {
        id: "ntm_positive_definite",
        passed: failure.is_none(),
        advisory: false,
        witness: failure.map(|k| (k, k)),
        detail: match failure {
            Some(k) => format!("leading principal minor of order {} is not positive", k + 1),
            None => "all leading principal minors positive (exact)".into(),
        },
    }
}

fn positive_definite_float(m: &DMatrix<f64>) -> ConditionCheck {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let scale = sym.amax().max(f64::MIN_POSITIVE);
    let mut a = sym;
    let mut failure = None;
    for k in 0..n {
        if a[(k, k)] <= FLOAT_TOL * scale {
            failure = Some(k);
            break;
        }
        for i in k + 1..n {
            let factor = a[(i, k)] / a[(k, k)];
            for j in k..n {
                a[(i, j)] -= factor * a[(k, j)];
            }
        }
    }
    ConditionCheck {
        id: "ntm_positive_definite",
        passed: failure.is_none(),
        advisory: false,
        witness: failure.map(|k| (k, k)),
        detail: match failure {
            Some(k) => format!("pivot {} not above {FLOAT_TOL:e} relative", k + 1),
            None => "positive definite".into(),
        },
    }
}
