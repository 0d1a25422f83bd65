use std::collections::BTreeMap;

use num_complex::Complex64;

use super::sextic::{derive_sextic, quasihomogeneous_generators, quasihomogeneous_spec, SEXTIC_MONOMIALS};
use crate::error::Result;
use crate::json::complex;
use crate::report::{Check, Report};
use crate::ring::linalg::rank;
use crate::ring::{evaluate_words, FukayaRing, RingElement};
use crate::theta::SeriesParams;

/// Pairs `(a, b), (c, d)` with `V_a V_b = V_c V_d` as monomials in `X, Y, Z`:
/// one relation per extra pair in each class of equal products.
pub fn veronese_quadrics() -> Vec<((usize, usize), (usize, usize))> {
    let mut classes: BTreeMap<[u32; 3], Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..7 {
        for b in a..7 {
            let e = [0, 1, 2].map(|i| SEXTIC_MONOMIALS[a][i] + SEXTIC_MONOMIALS[b][i]);
            classes.entry(e).or_default().push((a, b));
        }
    }
    let mut out = Vec::new();
    for pairs in classes.values() {
        for other in &pairs[1..] {
            out.push((pairs[0], *other));
        }
    }
    out
}

fn word_of(e: [u32; 3]) -> Vec<usize> {
    let mut w = Vec::new();
    for (g, k) in e.iter().enumerate() {
        w.extend(std::iter::repeat_n(g, *k as usize));
    }
    w
}

/// The seven degree-6 monomials as level-6 elements, checked against the
/// quadratic relations of the weighted Veronese embedding; also checks that
/// the sextic is a linear form in them.
pub fn verify_p123_veronese(tau: Complex64, params: &SeriesParams) -> Result<Report> {
    let spec = quasihomogeneous_spec(tau)?;
    let ring = FukayaRing::new(spec.clone(), *params)?;
    let gens = quasihomogeneous_generators(&ring)?;
    let words: Vec<Vec<usize>> = SEXTIC_MONOMIALS.iter().map(|e| word_of(*e)).collect();
    let v: Vec<RingElement> = evaluate_words(&ring, &gens, &words)?;
    let mut report = Report::new("veronese", params, 0.0).for_spec(&spec);
    report.input("tau", complex(tau));

    let quadrics = veronese_quadrics();
    report.push(Check::count("quadric_count", quadrics.len(), 9));
    let mut products: BTreeMap<(usize, usize), RingElement> = BTreeMap::new();
    let mut product = |a: usize, b: usize| -> Result<RingElement> {
        if let Some(p) = products.get(&(a, b)) {
            return Ok(p.clone());
        }
        let p = ring.compose(&v[a], &v[b])?;
        products.insert((a, b), p.clone());
        Ok(p)
    };
    let mut rows = Vec::new();
    for ((a, b), (c, d)) in &quadrics {
        let lhs = product(*a, *b)?;
        let rhs = product(*c, *d)?;
        let residual = lhs.sub(&rhs)?.max_abs() / lhs.max_abs().max(rhs.max_abs());
        report.push(Check::small(&format!("V{a}V{b}=V{c}V{d}"), residual, 1e-9));
        // the relation as a vector over the 28 products V_i V_j, i <= j
        let index = |i: usize, j: usize| (0..i).map(|t| 7 - t).sum::<usize>() + (j - i);
        let mut row = vec![Complex64::new(0.0, 0.0); 28];
        row[index(*a, *b)] = Complex64::new(1.0, 0.0);
        row[index(*c, *d)] = Complex64::new(-1.0, 0.0);
        rows.push(row);
    }
    report.push(Check::count("quadrics_independent", rank(&rows, 1e-12), 9));

    let curve = derive_sextic(tau, params)?;
    let f = curve.relation_vector();
    let mut acc = ring.zero(6, crate::ring::Coordinates::Classes)?;
    let mut scale: f64 = 0.0;
    for (vk, c) in v.iter().zip(f) {
        scale = scale.max(vk.max_abs() * c.norm());
        acc = acc.add_scaled(c, vk)?;
    }
    report.push(Check::small("sextic_linear_in_V", acc.max_abs() / scale, 1e-9));
    report.push(Check::close("sextic_V5_coefficient", f[5], Complex64::new(1.0, 0.0), 0.0));
    Ok(report)
}
