use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::json::{complex, complex_vec};
use crate::lattice::{MorphismClass, TorusSpec};
use crate::report::{Check, Report};
use crate::ring::linalg::row_space_distance;
use crate::ring::{find_relations, Coordinates, FukayaRing, Generator, RingElement};
use crate::theta::{theta_char, SeriesParams};

/// Spec on `R^4/Z^4` with period matrix `((t1, t3), (t3, t2))`, `N = 2 I`
/// and the involution on.
pub fn kummer_spec(t1: Complex64, t2: Complex64, t3: Complex64) -> Result<TorusSpec> {
    let tau = DMatrix::from_row_slice(2, 2, &[t1, t3, t3, t2]);
    let im = tau.map(|z| z.im);
    if im.clone().cholesky().is_none() {
        return Err(Error::Input("imaginary part of ((t1, t3), (t3, t2)) is not positive definite".into()));
    }
    let degenerate = t1 == t2 && t3 == Complex64::new(0.0, 0.0);
    Ok(TorusSpec::from_period_matrix(&tau, DMatrix::identity(2, 2) * 2)?
        .with_involution(true)
        .with_name(if degenerate { "kummer-degenerate" } else { "kummer-generic" }))
}

fn class(level: u32, a: i64, b: i64) -> MorphismClass {
    let k = 2 * i64::from(level);
    MorphismClass::from_raw(level, vec![Rational64::new(a, k), Rational64::new(b, k)])
}

/// `X_0 = Y_{0,0}, X_1 = Y_{1,0}, X_2 = Y_{0,1}, X_3 = Y_{1,1}` with
/// `Y^k_{a,b} = (a/2k, b/2k)`, as invariant elements.
pub fn kummer_generators(ring: &FukayaRing) -> Result<Vec<Generator>> {
    let orbits = ring.orbits(1)?;
    [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let c = class(1, a, b);
            let idx = orbits
                .iter()
                .position(|o| o.members.contains(&c))
                .ok_or_else(|| Error::Validation(format!("{c} is not a level-1 class")))?;
            Ok(Generator::new(format!("X{i}"), ring.invariant_element(1, idx)?))
        })
        .collect()
}

fn max_rel(a: &RingElement, b: &RingElement) -> Result<f64> {
    Ok(a.sub(b)?.max_abs() / a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE))
}

/// Invariant dimensions, and either the quadric of the degenerate case or
/// the relation counts of the generic case.
pub fn verify_kummer(t1: Complex64, t2: Complex64, t3: Complex64, svd_tol: f64, params: &SeriesParams) -> Result<Report> {
    let spec = kummer_spec(t1, t2, t3)?;
    let ring = FukayaRing::new(spec.clone(), *params)?;
    let mut report = Report::new("kummer", params, svd_tol).for_spec(&spec);
    report.input("tau", complex_vec(&[t1, t2, t3]));
    for (k, expected) in [(1u32, 4usize), (2, 10), (3, 20), (4, 34)] {
        report.push(Check::count(&format!("invariant_dimension_level{k}"), ring.dimension(k)?, expected));
    }
    let gens = kummer_generators(&ring)?;
    let degenerate = t1 == t2 && t3 == Complex64::new(0.0, 0.0);
    if degenerate {
        report.observe("branch", "degenerate");
        verify_degenerate(&ring, &gens, t1, svd_tol, params, &mut report)?;
    } else {
        report.observe("branch", "generic");
        for d in [2u32, 3] {
            let set = find_relations(&ring, d, &gens, true, svd_tol)?;
            report.push(Check::count(&format!("degree{d}_relation_count"), set.len(), 0));
        }
        let quartic = find_relations(&ring, 4, &gens, true, svd_tol)?;
        report.push(Check::at_least("degree4_relation_count", quartic.len(), 1));
        report.push(Check::small("degree4_relation_residual", quartic.max_residual(), 1e-9));
        report.observe("degree4_relations", quartic.to_json());
        if let Some(row) = quartic.coefficients.first() {
            // mass outside A sum X_i^4 + B (..) + C (..) + D (..) + 2E X0X1X2X3
            let shape = |w: &Vec<usize>| {
                let mut e = [0u32; 4];
                for g in w {
                    e[*g] += 1;
                }
                e.iter().all(|x| x % 2 == 0) || e == [1, 1, 1, 1]
            };
            let total: f64 = row.iter().map(|z| z.norm_sqr()).sum();
            let off: f64 = quartic.words.iter().zip(row).filter(|(w, _)| !shape(w)).map(|(_, z)| z.norm_sqr()).sum();
            report.observe("degree4_off_shape_fraction", crate::json::Real((off / total).sqrt()));
        }
    }
    Ok(report)
}

fn verify_degenerate(ring: &FukayaRing, gens: &[Generator], tau: Complex64, svd_tol: f64, params: &SeriesParams, report: &mut Report) -> Result<()> {
    // a^(4)_1 = theta[1/4, 0](4 tau, 0)
    let four_tau = DMatrix::from_element(1, 1, tau * 4.0);
    let a41 = theta_char(&[0.25], &[0.0], &four_tau, &[Complex64::new(0.0, 0.0)], params)?;
    report.observe("a4_1", complex(a41));
    let mut expected = ring.zero(2, Coordinates::Classes)?;
    for (a, b) in [(1, 1), (1, 3), (3, 1), (3, 3)] {
        let y = ring.class_element(&class(2, a, b))?;
        expected = expected.add_scaled(a41 * a41, &y)?;
    }
    let x = |i: usize| ring.to_classes(&gens[i].element);
    let x0x3 = ring.compose(&x(0)?, &x(3)?)?;
    let x1x2 = ring.compose(&x(1)?, &x(2)?)?;
    report.push(Check::small("X0X3_closed_form", max_rel(&x0x3, &expected)?, 1e-9));
    report.push(Check::small("X1X2_closed_form", max_rel(&x1x2, &expected)?, 1e-9));

    let quad = find_relations(ring, 2, gens, true, svd_tol)?;
    report.push(Check::at_least("degree2_relation_count", quad.len(), 1));
    report.observe("degree2_relations", quad.to_json());
    let mut target = vec![Complex64::new(0.0, 0.0); quad.words.len()];
    target[quad.index_of(&[0, 3]).expect("word X0X3")] = Complex64::new(1.0, 0.0);
    target[quad.index_of(&[1, 2]).expect("word X1X2")] = Complex64::new(-1.0, 0.0);
    report.push(Check::small("quadric_recovered", row_space_distance(&quad.coefficients, &[target]), 1e-9));

    // every degree-(1,1) product is the tensor product of two N = 2 curves
    let curve = FukayaRing::new(TorusSpec::one_dimensional(tau, 2)?, *params)?;
    let curve_level2 = curve.classes(2)?;
    let surface_level2 = ring.classes(2)?;
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let ci = ring.classes(1)?[i].clone();
            let cj = ring.classes(1)?[j].clone();
            let prod = ring.compose(&ring.class_element(&ci)?, &ring.class_element(&cj)?)?;
            let factor = |axis: usize| -> Result<RingElement> {
                let a = MorphismClass::from_raw(1, vec![ci.coords()[axis]]);
                let b = MorphismClass::from_raw(1, vec![cj.coords()[axis]]);
                curve.compose(&curve.class_element(&a)?, &curve.class_element(&b)?)
            };
            let (f0, f1) = (factor(0)?, factor(1)?);
            let pos = |c: &MorphismClass| curve_level2.iter().position(|d| d == c).expect("curve class");
            for (k, c) in surface_level2.iter().enumerate() {
                let u = MorphismClass::from_raw(2, vec![c.coords()[0]]);
                let v = MorphismClass::from_raw(2, vec![c.coords()[1]]);
                let tensor = f0.coeffs()[pos(&u)] * f1.coeffs()[pos(&v)];
                worst = worst.max((prod.coeffs()[k] - tensor).norm() / prod.max_abs());
            }
        }
    }
    report.push(Check::small("products_factor_over_curves", worst, 1e-10));
    Ok(())
}
