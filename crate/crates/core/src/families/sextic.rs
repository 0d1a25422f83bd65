use std::f64::consts::PI;

use num_complex::Complex64;

use super::quasi_poly::{QuasiPoly, Y, Z};
use super::sklyanin::check_upper_half_plane;
use crate::error::{Error, Result};
use crate::json::{complex, complex_vec, Real};
use crate::lattice::TorusSpec;
use crate::report::{Check, Report};
use crate::ring::{find_relations, FukayaRing, Generator};
use crate::theta::{PairingForm, SeriesParams};

/// Guard on `|mu - nu|`, the denominator of the expressions for `Z_0, Z_2`.
pub const MU_NU_GUARD: f64 = 1e-8;

/// Coefficients of `F = Y^3 - (p0 Z^2 + p1 XYZ + p2 X^2Y^2 + p3 X^3Z + p4 X^4Y + p6 X^6)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SexticCurve {
    pub tau: Complex64,
    pub p0: Complex64,
    pub p1: Complex64,
    pub p2: Complex64,
    pub p3: Complex64,
    pub p4: Complex64,
    pub p6: Complex64,
    pub mu: Complex64,
    pub nu: Complex64,
    /// `|mu - nu| < MU_NU_GUARD`.
    pub near_singular: bool,
}

/// Invariants of the Weierstrass form `y^2 = 4x^3 - g2 x - g3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weierstrass {
    pub t2: Complex64,
    pub t4: Complex64,
    pub t6: Complex64,
    pub g2_cubed: Complex64,
    pub g3_squared: Complex64,
    pub j: Complex64,
}

/// Monomials `X^6, X^4Y, X^3Z, X^2Y^2, XYZ, Y^3, Z^2` (the order of the
/// degree-6 words in `X, Y, Z`) as exponent triples.
pub const SEXTIC_MONOMIALS: [[u32; 3]; 7] = [[6, 0, 0], [4, 1, 0], [3, 0, 1], [2, 2, 0], [1, 1, 1], [0, 3, 0], [0, 0, 2]];

impl SexticCurve {
    pub fn polynomial(&self) -> QuasiPoly {
        let mut f = QuasiPoly::zero();
        for (e, c) in SEXTIC_MONOMIALS.iter().zip(self.relation_vector()) {
            f.add_term(c, *e);
        }
        f
    }

    /// Coefficients of `F` on [`SEXTIC_MONOMIALS`].
    pub fn relation_vector(&self) -> [Complex64; 7] {
        [-self.p6, -self.p4, -self.p3, -self.p2, -self.p1, Complex64::new(1.0, 0.0), -self.p0]
    }

    /// `F` after completing the square in `Z`, the cube in `Y`, and scaling
    /// `Z` so that the `Z^2` coefficient is `-1/4`.
    pub fn normalized(&self) -> Result<QuasiPoly> {
        if self.p0.norm() == 0.0 {
            return Err(Error::Singular("p0 vanishes".into()));
        }
        let f = self.polynomial();
        // Z -> Z - (p1 XY + p3 X^3) / (2 p0)
        let shift_z = QuasiPoly::var(Z)
            .add(&QuasiPoly::monomial(-self.p1 / (self.p0 * 2.0), [1, 1, 0]))
            .add(&QuasiPoly::monomial(-self.p3 / (self.p0 * 2.0), [3, 0, 0]));
        let f = f.substitute(Z, &shift_z);
        let t2 = self.p2 - self.p1 * self.p1 / (self.p0 * 4.0);
        // Y -> Y + t2 X^2 / 3
        let f = f.substitute(Y, &QuasiPoly::var(Y).add(&QuasiPoly::monomial(t2 / 3.0, [2, 0, 0])));
        // Z -> Z / (2 sqrt(p0))
        let f = f.substitute(Z, &QuasiPoly::var(Z).scale(Complex64::new(1.0, 0.0) / (self.p0.sqrt() * 2.0)));
        Ok(f)
    }
}

/// `t2, t4, t6`, `g2^3`, `g3^2` and `j = 1728 g2^3 / (g2^3 - 27 g3^2)`.
pub fn weierstrass_reduce(curve: &SexticCurve) -> Result<Weierstrass> {
    let SexticCurve { p0, p1, p2, p3, p4, p6, .. } = curve.clone();
    if p0.norm() == 0.0 {
        return Err(Error::Singular("p0 vanishes".into()));
    }
    let t2 = p2 - p1 * p1 / (p0 * 4.0);
    let t4 = p4 - p1 * p3 / (p0 * 2.0);
    let t6 = p6 - p3 * p3 / (p0 * 4.0);
    let g2_cubed = (2.0 / p0).powi(2) * (t4 + t2 * t2 / 3.0).powi(3);
    let g3_squared = (1.0 / p0).powi(2) * (t6 + t4 * t2 / 3.0 + t2.powi(3) * 2.0 / 27.0).powi(2);
    let disc = g2_cubed - g3_squared * 27.0;
    if disc.norm() <= 1e-14 * g2_cubed.norm().max(g3_squared.norm() * 27.0) {
        return Err(Error::Singular("g2^3 = 27 g3^2: the curve is cuspidal".into()));
    }
    Ok(Weierstrass { t2, t4, t6, g2_cubed, g3_squared, j: g2_cubed * 1728.0 / disc })
}

/// The spec with `N = 1`, period `tau`.
pub fn quasihomogeneous_spec(tau: Complex64) -> Result<TorusSpec> {
    check_upper_half_plane(tau)?;
    Ok(TorusSpec::one_dimensional(tau, 1)?.with_name("quasihomogeneous"))
}

/// `a^(k)_j = theta[j/k, 0](k tau, 0)` for `j = 0..k`.
fn a_coeffs(form: &PairingForm, k: u32, params: &SeriesParams) -> Result<Vec<Complex64>> {
    (0..k).map(|j| form.gaussian_sum(f64::from(k), &[f64::from(j) / f64::from(k)], params)).collect()
}

/// Generators `X = Y^1_0`, `Y = Y^2_0`, `Z = Y^3_1` of weights 1, 2, 3.
pub fn quasihomogeneous_generators(ring: &FukayaRing) -> Result<Vec<Generator>> {
    Ok(vec![
        Generator::new("X", ring.basis_element(1, 0)?),
        Generator::new("Y", ring.basis_element(2, 0)?),
        Generator::new("Z", ring.basis_element(3, 1)?),
    ])
}

fn outer(u: &[Complex64; 3], v: &[Complex64; 3]) -> [[Complex64; 3]; 3] {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = u[i] * v[j];
        }
    }
    m
}

/// The degree-six relation of the ring with generators of weights 1, 2, 3,
/// assembled from closed-form structure constants.
///
/// In the basis `U = (X^3, XY, Z)` of level 3, `Z_0` and `Z_2` are solved
/// from `XY = a6_0 Z_0 + a6_2 (Z_1 + Z_2)` and `X^3 = D (mu Z_0 + Z_1 + Z_2)`;
/// then `Y^3 = alpha W_0 + beta (W_2 + W_4)` is a quadratic form in `U`.
pub fn derive_sextic(tau: Complex64, params: &SeriesParams) -> Result<SexticCurve> {
    let spec = quasihomogeneous_spec(tau)?;
    let form = PairingForm::new(&spec);
    let a2 = a_coeffs(&form, 2, params)?;
    let a4 = a_coeffs(&form, 4, params)?;
    let a6 = a_coeffs(&form, 6, params)?;
    let a12 = a_coeffs(&form, 12, params)?;
    let d = a2[0] * a6[2] + a2[1] * a6[1];
    let mu = (a2[0] * a6[0] + a2[1] * a6[3]) / d;
    let nu = a6[0] / a6[2];
    let gap = mu - nu;
    if gap.norm() == 0.0 || !gap.norm().is_finite() {
        return Err(Error::Singular(format!("mu = nu at tau = {tau}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let z0 = [one / (d * gap), -one / (a6[2] * gap), zero];
    let z1 = [zero, zero, one];
    let z2 = [-nu / (d * gap), mu / (a6[2] * gap), -one];
    let den = a6[0] * a6[1] - a6[2] * a6[3];
    let c1 = a6[1] / den;
    let c3 = a6[3] / den;
    let alpha = a4[0] * a12[0] + a4[2] * a12[6];
    let beta = a4[0] * a12[4] + a4[2] * a12[2];
    let w0 = [outer(&z0, &z0), outer(&z1, &z2)];
    let w24 = [outer(&z1, &z1), outer(&z2, &z2), outer(&z0, &z1), outer(&z0, &z2)];
    let mut q = [[zero; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let w0ij = c1 * w0[0][i][j] - c3 * w0[1][i][j];
            let w24ij = c1 * (w24[0][i][j] + w24[1][i][j]) - c3 * (w24[2][i][j] + w24[3][i][j]);
            q[i][j] = alpha * w0ij + beta * w24ij;
        }
    }
    let sym = |i: usize, j: usize| (q[i][j] + q[j][i]) * 0.5;
    Ok(SexticCurve {
        tau,
        p6: sym(0, 0),
        p4: sym(0, 1) * 2.0,
        p3: sym(0, 2) * 2.0,
        p2: sym(1, 1),
        p1: sym(1, 2) * 2.0,
        p0: sym(2, 2),
        mu,
        nu,
        near_singular: gap.norm() < MU_NU_GUARD,
    })
}

/// `j(tau)` through the sextic and its Weierstrass reduction.
pub fn j_invariant(tau: Complex64, params: &SeriesParams) -> Result<Complex64> {
    Ok(weierstrass_reduce(&derive_sextic(tau, params)?)?.j)
}

/// Largest relative distance of a fitted coefficient from its nearest integer.
pub const INTEGRALITY_TOL: f64 = 1e-3;

/// Fitted Laurent coefficients of `j` in `q = e^{2 pi i tau}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JSeries {
    /// Coefficients of `q^-1, q^0, q^1, ...`.
    pub coefficients: Vec<Complex64>,
    pub rounded: Vec<i64>,
    /// `|c - round(c)| / max(1, |round(c)|)`.
    pub deviations: Vec<f64>,
    /// Imaginary height of the sampling circle.
    pub height: f64,
    pub samples: usize,
}

/// Sample count used by [`j_qseries`]: aliasing from the next omitted
/// coefficient dominates beyond eight terms at 17 points.
pub fn default_samples(n_terms: usize) -> usize {
    if n_terms <= 8 {
        17
    } else {
        32
    }
}

/// Laurent coefficients `c_{-1}, ..., c_{n_terms - 2}` of `j`, from a DFT of
/// `q j(q)` on the circle `|q| = r`, `r^n_terms = 1e-14`.
pub fn j_qseries(n_terms: usize, params: &SeriesParams) -> Result<JSeries> {
    j_qseries_with(n_terms, default_samples(n_terms), None, params)
}

pub fn j_qseries_with(n_terms: usize, samples: usize, height: Option<f64>, params: &SeriesParams) -> Result<JSeries> {
    if n_terms == 0 || n_terms > 12 {
        return Err(Error::Input(format!("n_terms must be in 1..=12, got {n_terms}")));
    }
    if samples < n_terms {
        return Err(Error::Input(format!("need at least {n_terms} samples, got {samples}")));
    }
    let height = height.unwrap_or_else(|| -(1e-14f64.ln()) / (n_terms as f64) / (2.0 * PI));
    let r = (-2.0 * PI * height).exp();
    let m = samples as f64;
    let values: Vec<Complex64> = (0..samples)
        .map(|s| {
            let tau = Complex64::new(s as f64 / m, height);
            let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
            Ok(j_invariant(tau, params)? * q)
        })
        .collect::<Result<_>>()?;
    let mut coefficients = Vec::with_capacity(n_terms);
    for k in 0..n_terms {
        let sum: Complex64 = values
            .iter()
            .enumerate()
            .map(|(s, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * s) as f64 / m))
            .sum();
        coefficients.push(sum / (m * r.powi(k as i32)));
    }
    let rounded: Vec<i64> = coefficients.iter().map(|c| c.re.round() as i64).collect();
    let deviations: Vec<f64> = coefficients
        .iter()
        .zip(&rounded)
        .map(|(c, n)| (c - Complex64::new(*n as f64, 0.0)).norm() / (n.unsigned_abs() as f64).max(1.0))
        .collect();
    if let Some(k) = (0..n_terms).find(|&k| !(deviations[k] < INTEGRALITY_TOL)) {
        return Err(Error::Precision(format!(
            "coefficient of q^{} = {} is not close to an integer (relative deviation {:e}, height {height}, {samples} samples)",
            k as i64 - 1,
            coefficients[k],
            deviations[k]
        )));
    }
    Ok(JSeries { coefficients, rounded, deviations, height, samples })
}

/// Relation counts in degrees 2 to 6, agreement of the closed-form sextic
/// with the numerically found one, and the normal form.
pub fn verify_quasihomogeneous(tau: Complex64, svd_tol: f64, params: &SeriesParams) -> Result<Report> {
    let spec = quasihomogeneous_spec(tau)?;
    let ring = FukayaRing::new(spec.clone(), *params)?;
    let gens = quasihomogeneous_generators(&ring)?;
    let curve = derive_sextic(tau, params)?;
    let mut report = Report::new("quasihomogeneous", params, svd_tol).for_spec(&spec);
    report.input("tau", complex(tau));
    report.observe("mu", complex(curve.mu));
    report.observe("nu", complex(curve.nu));
    report.observe("near_singular", curve.near_singular);

    // X^2 = a2_0 Y_0 + a2_1 Y_1
    let form = PairingForm::new(&spec);
    let a2 = a_coeffs(&form, 2, params)?;
    let x2 = ring.compose(&gens[0].element, &gens[0].element)?;
    let x2_err = (0..2).map(|i| (x2.coeffs()[i] - a2[i]).norm()).fold(0.0, f64::max);
    report.push(Check::small("x_squared_closed_form", x2_err, 1e-12));

    for d in 2..=5u32 {
        let set = find_relations(&ring, d, &gens, true, svd_tol)?;
        report.push(Check::count(&format!("degree{d}_relation_count"), set.len(), 0));
    }
    let sextic = find_relations(&ring, 6, &gens, true, svd_tol)?;
    report.push(Check::count("degree6_relation_count", sextic.len(), 1));
    report.observe("degree6_relations", sextic.to_json());
    if let Some(row) = sextic.coefficients.first() {
        let expected = curve.relation_vector();
        let ycube = row[5];
        let scale = expected.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = row.iter().zip(&expected).map(|(a, e)| (a / ycube - e).norm()).fold(0.0, f64::max) / scale;
        report.push(Check::small("closed_form_matches_nullspace", diff, 1e-9));
        report.push(Check::small("degree6_relation_residual", sextic.residuals[0], 1e-9));
    }
    report.observe("p", complex_vec(&[curve.p0, curve.p1, curve.p2, curve.p3, curve.p4, curve.p6]));

    let normal = curve.normalized()?;
    let scale = [curve.p0, curve.p1, curve.p2, curve.p3, curve.p4, curve.p6].iter().map(|z| z.norm()).fold(1.0, f64::max);
    for (id, e) in [("normal_form_p1", [1, 1, 1]), ("normal_form_p2", [2, 2, 0]), ("normal_form_p3", [3, 0, 1])] {
        report.push(Check::small(id, normal.coefficient(e).norm() / scale, 1e-12));
    }
    report.push(Check::close("normal_form_p0", -normal.coefficient([0, 0, 2]), Complex64::new(0.25, 0.0), 1e-12));
    let w = weierstrass_reduce(&curve)?;
    // with p0 = 1/4 and p1 = p2 = p3 = 0: g2^3 = 64 p4^3, g3^2 = 16 p6^2
    let p4n = -normal.coefficient([4, 1, 0]);
    let p6n = -normal.coefficient([6, 0, 0]);
    let (g2n, g3n) = (p4n.powi(3) * 64.0, p6n.powi(2) * 16.0);
    let j_normal = g2n * 1728.0 / (g2n - g3n * 27.0);
    report.push(Check::close("normal_form_j", j_normal, w.j, 1e-9));
    report.observe("g2_cubed", complex(w.g2_cubed));
    report.observe("g3_squared", complex(w.g3_squared));
    report.observe("j", complex(w.j));
    Ok(report)
}

/// The `q`-expansion of `j` through the full pipeline.
pub fn verify_jseries(n_terms: usize, params: &SeriesParams) -> Result<Report> {
    let series = j_qseries(n_terms, params)?;
    let mut report = Report::new("jseries", params, 0.0);
    report.input("n_terms", n_terms);
    report.observe("coefficients", complex_vec(&series.coefficients));
    report.observe("rounded", &series.rounded);
    report.observe("height", Real(series.height));
    report.observe("samples", series.samples);
    for (k, dev) in series.deviations.iter().enumerate() {
        report.push(Check::small(&format!("q^{}_integral", k as i64 - 1), *dev, INTEGRALITY_TOL));
    }
    let j_i = j_invariant(Complex64::i(), params)?;
    report.push(Check::close("j_at_i", j_i, Complex64::new(1728.0, 0.0), 1e-6));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_of_reduced_curve() {
        let c = Complex64::new;
        let curve = SexticCurve {
            tau: Complex64::i(),
            p0: c(0.25, 0.0),
            p1: c(0.0, 0.0),
            p2: c(0.0, 0.0),
            p3: c(0.0, 0.0),
            p4: c(2.0, 0.0),
            p6: c(-1.0, 0.5),
            mu: c(0.0, 0.0),
            nu: c(1.0, 0.0),
            near_singular: false,
        };
        let w = weierstrass_reduce(&curve).unwrap();
        assert!((w.g2_cubed - c(64.0 * 8.0, 0.0)).norm() < 1e-12);
        assert!((w.g3_squared - curve.p6.powi(2) * 16.0).norm() < 1e-12);
        assert_eq!(w.t4, curve.p4);
    }

    #[test]
    fn cusp_is_singular() {
        let c = Complex64::new;
        // g2 = g3 = 0
        let curve = SexticCurve {
            tau: Complex64::i(),
            p0: c(0.25, 0.0),
            p1: c(0.0, 0.0),
            p2: c(0.0, 0.0),
            p3: c(0.0, 0.0),
            p4: c(0.0, 0.0),
            p6: c(0.0, 0.0),
            mu: c(0.0, 0.0),
            nu: c(1.0, 0.0),
            near_singular: false,
        };
        assert!(matches!(weierstrass_reduce(&curve), Err(Error::Singular(_))));
    }

    #[test]
    fn j_at_i_is_1728() {
        let j = j_invariant(Complex64::i(), &SeriesParams::default()).unwrap();
        assert!((j - 1728.0).norm() < 1e-6 * 1728.0, "{j}");
    }

    #[test]
    fn normalization_clears_lower_terms() {
        let curve = derive_sextic(Complex64::new(0.3, 1.0), &SeriesParams::default()).unwrap();
        let f = curve.normalized().unwrap();
        let scale = curve.p0.norm().max(curve.p6.norm());
        for e in [[1, 1, 1], [2, 2, 0], [3, 0, 1]] {
            assert!(f.coefficient(e).norm() < 1e-12 * scale.max(1.0), "{e:?}");
        }
        assert!((f.coefficient([0, 0, 2]) + 0.25).norm() < 1e-12);
        assert_eq!(f.degrees(), vec![6]);
    }
}
