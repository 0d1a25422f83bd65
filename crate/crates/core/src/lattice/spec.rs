use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Symplectic input data for a torus `V / (Lambda_0 + Lambda')` of real
/// dimension `2n`.
///
/// * `M` is the symplectic block, `omega(l'_i, l_j) = M_ij`.
/// * `B` is the B-field block.
/// * `N` is the integer matrix of `f: Lambda_0 -> Lambda'`,
///   `f(l_i) = sum_j N_ji l'_j`; the monodromy acts by
///   `rho(x, y) = (x + shift, y + N x)`.
/// * `involution` switches on the Kummer quotient by `-1`.
///
/// When the blocks were given as rationals (for instance by the config
/// parser) an exact copy is kept so that validation is free of rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSpec {
    name: Option<String>,
    symplectic: DMatrix<f64>,
    b_field: DMatrix<f64>,
    exact: Option<ExactBlocks>,
    monodromy: DMatrix<i64>,
    shift: Vec<f64>,
    involution: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct ExactBlocks {
    pub m: Vec<Vec<BigRational>>,
    pub b: Vec<Vec<BigRational>>,
}

fn check_square(label: &str, rows: usize, cols: usize, n: usize) -> Result<()> {
    if rows != n || cols != n {
        return Err(Error::Input(format!("{label} must be {n}x{n}, got {rows}x{cols}")));
    }
    Ok(())
}

impl TorusSpec {
    pub fn new(m: DMatrix<f64>, b: DMatrix<f64>, n: DMatrix<i64>) -> Result<Self> {
        let dim = n.nrows();
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        check_square("N", n.nrows(), n.ncols(), dim)?;
        check_square("M", m.nrows(), m.ncols(), dim)?;
        check_square("B", b.nrows(), b.ncols(), dim)?;
        if m.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Input("M and B must have finite entries".into()));
        }
        Ok(TorusSpec {
            name: None,
            symplectic: m,
            b_field: b,
            exact: None,
            monodromy: n,
            shift: vec![0.0; dim],
            involution: false,
        })
    }

    /// Builds a spec from exact rational blocks; validation will then use
    /// exact arithmetic.
    pub fn from_rationals(m: Vec<Vec<BigRational>>, b: Vec<Vec<BigRational>>, n: Vec<Vec<i64>>) -> Result<Self> {
        let dim = n.len();
        let to_f64 = |rows: &Vec<Vec<BigRational>>, label: &str| -> Result<DMatrix<f64>> {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::Input(format!("{label} must be {dim}x{dim}")));
            }
            Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j].to_f64().unwrap_or(f64::NAN)))
        };
        if n.iter().any(|r| r.len() != dim) {
            return Err(Error::Input(format!("N must be {dim}x{dim}")));
        }
        let mf = to_f64(&m, "M")?;
        let bf = to_f64(&b, "B")?;
        let nm = DMatrix::from_fn(dim, dim, |i, j| n[i][j]);
        let mut spec = TorusSpec::new(mf, bf, nm)?;
        spec.exact = Some(ExactBlocks { m, b });
        Ok(spec)
    }

    /// Spec whose complexified form has period matrix `tau = B + iM`.
    pub fn from_period_matrix(tau: &DMatrix<Complex64>, n: DMatrix<i64>) -> Result<Self> {
        let m = tau.map(|z| z.im);
        let b = tau.map(|z| z.re);
        TorusSpec::new(m, b, n)
    }

    /// Two-torus `R^2/Z^2` with form `tau dx ^ dy` and `rho(x, y) = (x, y + n x)`.
    pub fn one_dimensional(tau: Complex64, n: i64) -> Result<Self> {
        TorusSpec::new(DMatrix::from_element(1, 1, tau.im), DMatrix::from_element(1, 1, tau.re), DMatrix::from_element(1, 1, n))
    }

    pub fn with_shift(mut self, shift: Vec<f64>) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::Input(format!("shift must have {} entries, got {}", self.dim(), shift.len())));
        }
        if shift.iter().any(|s| !s.is_finite()) {
            return Err(Error::Input("shift must be finite".into()));
        }
        self.shift = shift;
        Ok(self)
    }

    pub fn with_involution(mut self, on: bool) -> Self {
        self.involution = on;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The spec with `N` replaced by `k N`.
    pub fn scaled(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.monodromy = self.monodromy.map(|x| x * k);
        out
    }

    pub fn dim(&self) -> usize {
        self.monodromy.nrows()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn symplectic(&self) -> &DMatrix<f64> {
        &self.symplectic
    }

    pub fn b_field(&self) -> &DMatrix<f64> {
        &self.b_field
    }

    pub fn monodromy(&self) -> &DMatrix<i64> {
        &self.monodromy
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn involution(&self) -> bool {
        self.involution
    }

    pub(crate) fn exact(&self) -> Option<&ExactBlocks> {
        self.exact.as_ref()
    }

    /// True when the affine part of `rho` is a lattice vector.
    pub fn shift_is_integral(&self) -> bool {
        self.shift.iter().all(|s| (s - s.round()).abs() < 1e-12)
    }

    /// Period matrix `N^T (B + i M)` of the mirror side.
    pub fn period_matrix(&self) -> DMatrix<Complex64> {
        let nt = self.monodromy.map(|x| x as f64).transpose();
        let re = &nt * &self.b_field;
        let im = &nt * &self.symplectic;
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    /// Canonical config text; parsing it back gives an equivalent spec.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "name = {name}");
        }
        let _ = writeln!(out, "n = {}", self.dim());
        match &self.exact {
            Some(ex) => {
                let _ = writeln!(out, "M = {}", fmt_rows(&ex.m, fmt_rational));
                let _ = writeln!(out, "B = {}", fmt_rows(&ex.b, fmt_rational));
            }
            None => {
                let _ = writeln!(out, "M = {}", fmt_matrix(&self.symplectic, |x| format!("{x:?}")));
                let _ = writeln!(out, "B = {}", fmt_matrix(&self.b_field, |x| format!("{x:?}")));
            }
        }
        let _ = writeln!(out, "N = {}", fmt_matrix(&self.monodromy, |x| x.to_string()));
        let shift: Vec<String> = self.shift.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "shift = {}", shift.join(" "));
        let _ = writeln!(out, "involution = {}", self.involution);
        out
    }

    /// SHA-256 of the canonical config text, hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_config_string().as_bytes()))
    }

    pub(crate) fn fingerprint_u64(&self) -> u64 {
        let digest = Sha256::digest(self.to_config_string().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_rows<T>(rows: &[Vec<T>], f: impl Fn(&T) -> String) -> String {
    rows.iter()
        .map(|r| r.iter().map(&f).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn fmt_matrix<T: nalgebra::Scalar>(m: &DMatrix<T>, f: impl Fn(&T) -> String) -> String {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}
