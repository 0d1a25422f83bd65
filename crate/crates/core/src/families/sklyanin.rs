use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::json::{complex, complex_vec, Real};
use crate::lattice::TorusSpec;
use crate::report::{Check, Report};
use crate::ring::linalg::{rank, row_space_distance};
use crate::ring::{find_relations, standard_generators, FukayaRing};
use crate::theta::{theta_char, SeriesParams};

/// Auxiliary shifts at which the Hesse coefficient is evaluated; at `b = 0`
/// the ratio `(p^3+q^3+r^3)/(pqr)` is `0/0`.
const HESSE_AUX_SHIFTS: [f64; 2] = [0.5, 0.3];

/// `A_0(b), ..., A_5(b)` and the Sklyanin parameters built from them.
#[derive(Clone, Debug, PartialEq)]
pub struct SklyaninParams {
    pub tau: Complex64,
    pub b: f64,
    /// `A_k(b) = theta[k/6 + b/2, 0](6 tau, 0)`.
    pub a: [Complex64; 6],
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
}

impl SklyaninParams {
    /// `(p^3 + q^3 + r^3) / (p q r)`.
    pub fn hesse_ratio(&self) -> Complex64 {
        (self.p.powi(3) + self.q.powi(3) + self.r.powi(3)) / (self.p * self.q * self.r)
    }

    /// The three quadratic relations `p X_{i+2}^2 + q X_i X_{i+1} + r X_{i+1} X_i`,
    /// `i = 0, 1, 2`, as rows over the ordered words `X_a X_b` (index `3a + b`).
    pub fn relations(&self) -> Vec<Vec<Complex64>> {
        (0..3)
            .map(|i| {
                let mut row = vec![Complex64::new(0.0, 0.0); 9];
                let (a, b, c) = (i, (i + 1) % 3, (i + 2) % 3);
                row[3 * c + c] += self.p;
                row[3 * a + b] += self.q;
                row[3 * b + a] += self.r;
                row
            })
            .collect()
    }
}

pub(crate) fn check_upper_half_plane(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::Input(format!("tau must lie in the upper half plane, got {tau}")));
    }
    Ok(())
}

/// The one-dimensional spec with `N = 3` and affine shift `b`.
pub fn hesse_spec(tau: Complex64, b: f64) -> Result<TorusSpec> {
    check_upper_half_plane(tau)?;
    Ok(TorusSpec::one_dimensional(tau, 3)?.with_shift(vec![b])?.with_name(if b == 0.0 { "hesse" } else { "sklyanin" }))
}

pub fn sklyanin_coefficients(tau: Complex64, b: f64, params: &SeriesParams) -> Result<SklyaninParams> {
    check_upper_half_plane(tau)?;
    let six_tau = DMatrix::from_element(1, 1, tau * 6.0);
    let mut a = [Complex64::new(0.0, 0.0); 6];
    for (k, slot) in a.iter_mut().enumerate() {
        *slot = theta_char(&[k as f64 / 6.0 + b / 2.0], &[0.0], &six_tau, &[Complex64::new(0.0, 0.0)], params)?;
    }
    let p = a[1] * a[2] - a[4] * a[5];
    let q = a[3] * a[4] - a[0] * a[1];
    let r = a[0] * a[5] - a[3] * a[2];
    Ok(SklyaninParams { tau, b, a, p, q, r })
}

/// The coefficient `mu` of the Hesse cubic `X0^3 + X1^3 + X2^3 - mu X0 X1 X2`.
///
/// The ratio `(p^3+q^3+r^3)/(pqr)` does not depend on `b`, so it is read off
/// at an auxiliary shift where it is not `0/0`.
pub fn hesse_coefficient(tau: Complex64, params: &SeriesParams) -> Result<Complex64> {
    for b in HESSE_AUX_SHIFTS {
        let s = sklyanin_coefficients(tau, b, params)?;
        let pqr = s.p * s.q * s.r;
        let scale = s.p.norm().max(s.q.norm()).max(s.r.norm()).powi(3);
        if pqr.norm() > 1e-10 * scale {
            return Ok(s.hesse_ratio());
        }
    }
    Err(Error::Singular(format!("p q r vanishes at every auxiliary shift for tau = {tau}")))
}

fn is_integral(b: f64) -> bool {
    (b - b.round()).abs() < 1e-12
}

/// Ordered-word rows of the commutators `X_a X_b - X_b X_a`, `a < b`.
fn commutator_rows() -> Vec<Vec<Complex64>> {
    let mut out = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            let mut row = vec![Complex64::new(0.0, 0.0); 9];
            row[3 * a + b] = Complex64::new(1.0, 0.0);
            row[3 * b + a] = Complex64::new(-1.0, 0.0);
            out.push(row);
        }
    }
    out
}

/// Quadratic relations of the `N = 3` ring with shift `b`: the Sklyanin
/// relations for `b` not an integer, the commutators otherwise.
pub fn verify_sklyanin(tau: Complex64, b: f64, svd_tol: f64, params: &SeriesParams) -> Result<Report> {
    let spec = hesse_spec(tau, b)?;
    let ring = FukayaRing::new(spec.clone(), *params)?;
    let gens = standard_generators(&ring)?;
    let coeffs = sklyanin_coefficients(tau, b, params)?;
    let set = find_relations(&ring, 2, &gens, false, svd_tol)?;
    let mut report = Report::new("sklyanin", params, svd_tol).for_spec(&spec);
    report.input("tau", complex(tau));
    report.input("b", Real(b));
    report.observe("A", complex_vec(&coeffs.a));
    report.observe("p", complex(coeffs.p));
    report.observe("q", complex(coeffs.q));
    report.observe("r", complex(coeffs.r));
    report.observe("relations", set.to_json());
    report.push(Check::count("relation_space_dimension", set.len(), 3));
    report.push(Check::small("relation_residual", set.max_residual(), 1e-9));
    if is_integral(b) {
        report.observe("branch", "commutative");
        report.push(Check::small("commutators_span_relations", row_space_distance(&set.coefficients, &commutator_rows()), 1e-9));
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let xy = ring.compose(&gens[i].element, &gens[j].element)?;
                let yx = ring.compose(&gens[j].element, &gens[i].element)?;
                worst = worst.max(xy.sub(&yx)?.max_abs() / xy.max_abs().max(f64::MIN_POSITIVE));
            }
        }
        report.push(Check::small("products_commute", worst, 1e-10));
        let cubic = find_relations(&ring, 3, &gens, true, svd_tol)?;
        report.push(Check::count("cubic_relation_count", cubic.len(), 1));
    } else {
        report.observe("branch", "noncommutative");
        let expected = coeffs.relations();
        report.push(Check::count("sklyanin_relations_independent", rank(&expected, 1e-10), 3));
        report.push(Check::small("sklyanin_relations_in_span", row_space_distance(&set.coefficients, &expected), 1e-9));
        // direct evaluation of p X2^2 + q X0 X1 + r X1 X0 and its rotations
        let mut worst: f64 = 0.0;
        for row in &expected {
            let mut acc = ring.zero(2, crate::ring::Coordinates::Classes)?;
            let mut scale: f64 = 0.0;
            for (w, c) in row.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let prod = ring.compose(&gens[w / 3].element, &gens[w % 3].element)?;
                scale = scale.max(prod.max_abs() * c.norm());
                acc = acc.add_scaled(*c, &prod)?;
            }
            worst = worst.max(acc.max_abs() / scale);
        }
        report.push(Check::small("sklyanin_relations_vanish", worst, 1e-9));
    }
    Ok(report)
}

/// Degree-2 and degree-3 relations of the `N = 3` ring at zero shift: none in
/// degree 2 and exactly the Hesse cubic in degree 3.
pub fn verify_hesse(tau: Complex64, svd_tol: f64, params: &SeriesParams) -> Result<Report> {
    let spec = hesse_spec(tau, 0.0)?;
    let ring = FukayaRing::new(spec.clone(), *params)?;
    let gens = standard_generators(&ring)?;
    let mu = hesse_coefficient(tau, params)?;
    let mut report = Report::new("hesse", params, svd_tol).for_spec(&spec);
    report.input("tau", complex(tau));
    report.observe("cubic_coefficient", complex(mu));

    let quad = find_relations(&ring, 2, &gens, true, svd_tol)?;
    report.push(Check::count("degree2_relation_count", quad.len(), 0));
    let cubic = find_relations(&ring, 3, &gens, true, svd_tol)?;
    report.observe("degree3_relations", cubic.to_json());
    report.push(Check::count("degree3_relation_count", cubic.len(), 1));

    let mut expected = vec![Complex64::new(0.0, 0.0); cubic.words.len()];
    for (word, c) in [(vec![0, 0, 0], 1.0), (vec![1, 1, 1], 1.0), (vec![2, 2, 2], 1.0)] {
        expected[cubic.index_of(&word).expect("cube word")] = Complex64::new(c, 0.0);
    }
    expected[cubic.index_of(&[0, 1, 2]).expect("mixed word")] = -mu;
    if let Some(row) = cubic.coefficients.first() {
        let lead = row[cubic.index_of(&[0, 0, 0]).expect("cube word")];
        let diff = if lead.norm() > 0.0 {
            row.iter().zip(&expected).map(|(a, e)| (a / lead - e).norm()).fold(0.0, f64::max) / mu.norm().max(1.0)
        } else {
            f64::INFINITY
        };
        report.push(Check::small("cubic_matches_hesse_form", diff, 1e-8));
        report.push(Check::small("cubic_relation_residual", cubic.residuals[0], 1e-8));
    }

    // b-independence of the ratio that defines mu
    let alt = sklyanin_coefficients(tau, HESSE_AUX_SHIFTS[1], params)?.hesse_ratio();
    report.push(Check::close("cubic_coefficient_shift_independent", alt, mu, 1e-8));

    // Q_pqr evaluated in the ring
    let words = &cubic.words;
    let values = crate::ring::evaluate_words(&ring, &gens, words)?;
    let mut acc = ring.zero(3, crate::ring::Coordinates::Classes)?;
    let mut scale: f64 = 0.0;
    for (v, c) in values.iter().zip(&expected) {
        if c.norm() > 0.0 {
            scale = scale.max(v.max_abs() * c.norm());
            acc = acc.add_scaled(*c, v)?;
        }
    }
    report.push(Check::small("hesse_cubic_vanishes", acc.max_abs() / scale, 1e-8));
    Ok(report)
}
