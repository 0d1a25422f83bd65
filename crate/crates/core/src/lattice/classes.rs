use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::snf::smith_normal_form;
use super::spec::TorusSpec;
use crate::error::{Error, Result};

/// An element of `K(L_k)_0 = f^{-1}(Lambda'/k) / Lambda_0`: a rational
/// vector `c` with `k N c` integral, stored by its representative in `[0,1)^n`.
///
/// Ordering is by level, then lexicographic on coordinates, which fixes the
/// basis order of every `Hom(L_0, L_k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphismClass {
    level: u32,
    coords: Vec<Rational64>,
}

fn frac(r: Rational64) -> Rational64 {
    r - r.floor()
}

impl MorphismClass {
    /// Checks membership and reduces to the canonical representative.
    pub fn new(spec: &TorusSpec, level: u32, coords: Vec<Rational64>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Input("level must be positive".into()));
        }
        if coords.len() != spec.dim() {
            return Err(Error::Input(format!("class needs {} coordinates, got {}", spec.dim(), coords.len())));
        }
        let n = spec.monodromy();
        for i in 0..spec.dim() {
            let mut acc = Rational64::zero();
            for (j, c) in coords.iter().enumerate() {
                acc += *c * Rational64::from_integer(n[(i, j)] * i64::from(level));
            }
            if !acc.is_integer() {
                return Err(Error::Input(format!("{coords:?} is not a level-{level} class: k N c is not integral")));
            }
        }
        Ok(MorphismClass::from_raw(level, coords))
    }

    pub(crate) fn from_raw(level: u32, coords: Vec<Rational64>) -> Self {
        MorphismClass { level, coords: coords.into_iter().map(frac).collect() }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64().expect("small rational")).collect()
    }

    /// The class of `-c`.
    pub fn negated(&self) -> Self {
        MorphismClass::from_raw(self.level, self.coords.iter().map(|c| -*c).collect())
    }

    /// `c == -c` modulo the lattice.
    pub fn is_two_torsion(&self) -> bool {
        self.coords.iter().all(|c| (*c * 2).is_integer())
    }
}

impl fmt::Display for MorphismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]@{}", parts.join(","), self.level)
    }
}

/// `|K(L_k)_0| = k^n |det N|`.
pub fn class_count(spec: &TorusSpec, k: u32) -> Result<usize> {
    let snf = level_snf(spec, k)?;
    Ok(snf.iter().map(|&d| d as usize).product())
}

fn level_snf(spec: &TorusSpec, k: u32) -> Result<Vec<i64>> {
    Ok(level_smith(spec, k)?.invariants)
}

fn level_smith(spec: &TorusSpec, k: u32) -> Result<super::SmithForm> {
    if k == 0 {
        return Err(Error::Input("level k must be positive".into()));
    }
    let n = spec.monodromy();
    let rows: Vec<Vec<i64>> = (0..spec.dim()).map(|i| (0..spec.dim()).map(|j| n[(i, j)] * i64::from(k)).collect()).collect();
    let snf = smith_normal_form(&rows);
    if snf.invariants.contains(&0) {
        return Err(Error::Validation("N is singular; K(L_k)_0 is infinite".into()));
    }
    Ok(snf)
}

/// All classes of `((1/k) N^{-1} Z^n) / Z^n`, in lexicographic order.
///
/// With `U (kN) V = D` in Smith form, `(kN)^{-1} Z^n = V D^{-1} Z^n`, so the
/// classes are `sum_j t_j V e_j / d_j` for `0 <= t_j < d_j`.
pub fn basis_classes(spec: &TorusSpec, k: u32) -> Result<Vec<MorphismClass>> {
    let snf = level_smith(spec, k)?;
    let n = spec.dim();
    let d = &snf.invariants;
    let mut out = BTreeSet::new();
    let mut t = vec![0i64; n];
    loop {
        let coords: Vec<Rational64> = (0..n)
            .map(|i| (0..n).fold(Rational64::zero(), |acc, j| acc + Rational64::new(snf.right[i][j] * t[j], d[j])))
            .collect();
        out.insert(MorphismClass::from_raw(k, coords));
        // odometer over the box prod [0, d_j)
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out.into_iter().collect());
            }
            t[pos] += 1;
            if t[pos] < d[pos] {
                break;
            }
            t[pos] = 0;
            pos += 1;
        }
    }
}

/// Classes fixed by `c -> -c`.
pub fn fixed_classes(spec: &TorusSpec, k: u32) -> Result<Vec<MorphismClass>> {
    Ok(basis_classes(spec, k)?.into_iter().filter(MorphismClass::is_two_torsion).collect())
}

/// One basis vector of the involution-invariant part: the orbit sum of `c`
/// and `-c` (a single class when it is fixed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitVector {
    pub representative: MorphismClass,
    pub members: Vec<MorphismClass>,
}

/// Orbit sums of `c -> -c` on `K(L_k)_0`, ordered by their smallest member.
pub fn invariant_basis(spec: &TorusSpec, k: u32) -> Result<Vec<OrbitVector>> {
    if !spec.involution() {
        return Err(Error::Misuse("invariant_basis requires a spec with the involution enabled".into()));
    }
    let classes = basis_classes(spec, k)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in classes {
        if seen.contains(&c) {
            continue;
        }
        let neg = c.negated();
        let mut members = vec![c.clone()];
        if neg != c {
            members.push(neg.clone());
        }
        members.sort();
        seen.insert(c);
        seen.insert(neg);
        out.push(OrbitVector { representative: members[0].clone(), members });
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    fn hesse() -> TorusSpec {
        TorusSpec::one_dimensional(Complex64::i(), 3).unwrap()
    }

    fn kummer() -> TorusSpec {
        TorusSpec::new(DMatrix::identity(2, 2), DMatrix::identity(2, 2) * 0.25, DMatrix::identity(2, 2) * 2)
            .unwrap()
            .with_involution(true)
    }

    #[test]
    fn hesse_levels() {
        let b1 = basis_classes(&hesse(), 1).unwrap();
        let coords: Vec<Rational64> = b1.iter().map(|c| c.coords()[0]).collect();
        assert_eq!(coords, vec![r(0, 1), r(1, 3), r(2, 3)]);
        let b2 = basis_classes(&hesse(), 2).unwrap();
        let coords: Vec<Rational64> = b2.iter().map(|c| c.coords()[0]).collect();
        assert_eq!(coords, (0..6).map(|j| r(j, 6)).collect::<Vec<_>>());
    }

    #[test]
    fn kummer_level_two_has_sixteen_quarter_classes() {
        let b = basis_classes(&kummer(), 2).unwrap();
        assert_eq!(b.len(), 16);
        assert!(b.iter().all(|c| c.coords().iter().all(|x| (*x * 4).is_integer())));
    }

    #[test]
    fn zero_level_rejected() {
        assert!(matches!(basis_classes(&hesse(), 0), Err(Error::Input(_))));
    }

    #[test]
    fn fixed_classes_small_cases() {
        let f1 = fixed_classes(&hesse(), 1).unwrap();
        assert_eq!(f1.len(), 1);
        let f2: Vec<Rational64> = fixed_classes(&hesse(), 2).unwrap().iter().map(|c| c.coords()[0]).collect();
        assert_eq!(f2, vec![r(0, 1), r(1, 2)]);
        for k in 1..=4 {
            assert_eq!(fixed_classes(&kummer(), k).unwrap().len(), 4);
        }
    }

    #[test]
    fn invariant_counts_match_binomials() {
        let counts: Vec<usize> = (1..=4).map(|k| invariant_basis(&kummer(), k).unwrap().len()).collect();
        assert_eq!(counts, vec![4, 10, 20, 34]);
    }

    #[test]
    fn invariant_basis_needs_involution() {
        assert!(matches!(invariant_basis(&hesse(), 1), Err(Error::Misuse(_))));
    }

    #[test]
    fn membership_is_checked() {
        let spec = hesse();
        assert!(MorphismClass::new(&spec, 1, vec![r(1, 3)]).is_ok());
        assert!(MorphismClass::new(&spec, 1, vec![r(1, 6)]).is_err());
        let c = MorphismClass::new(&spec, 2, vec![r(7, 6)]).unwrap();
        assert_eq!(c.coords()[0], r(1, 6));
        assert_eq!(c.negated().coords()[0], r(5, 6));
    }
}
