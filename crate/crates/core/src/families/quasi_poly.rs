use std::collections::BTreeMap;

use num_complex::Complex64;

/// A polynomial in `X, Y, Z` (weights 1, 2, 3), stored by exponent triples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuasiPoly {
    terms: BTreeMap<[u32; 3], Complex64>,
}

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;

impl QuasiPoly {
    pub fn zero() -> Self {
        QuasiPoly::default()
    }

    pub fn constant(c: Complex64) -> Self {
        QuasiPoly::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: Complex64, exps: [u32; 3]) -> Self {
        let mut p = QuasiPoly::zero();
        p.add_term(c, exps);
        p
    }

    /// The variable `X`, `Y` or `Z`.
    pub fn var(v: usize) -> Self {
        let mut e = [0; 3];
        e[v] = 1;
        QuasiPoly::monomial(Complex64::new(1.0, 0.0), e)
    }

    pub fn add_term(&mut self, c: Complex64, exps: [u32; 3]) {
        *self.terms.entry(exps).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn coefficient(&self, exps: [u32; 3]) -> Complex64 {
        self.terms.get(&exps).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Complex64)> {
        self.terms.iter()
    }

    /// Weighted degrees of the monomials present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e[0] + 2 * e[1] + 3 * e[2]).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn add(&self, other: &QuasiPoly) -> QuasiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*c, *e);
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> QuasiPoly {
        QuasiPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * z)).collect() }
    }

    pub fn mul(&self, other: &QuasiPoly) -> QuasiPoly {
        let mut out = QuasiPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(c1 * c2, [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]]);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> QuasiPoly {
        (0..k).fold(QuasiPoly::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Replaces the variable `v` by `replacement`.
    pub fn substitute(&self, v: usize, replacement: &QuasiPoly) -> QuasiPoly {
        let mut powers: Vec<QuasiPoly> = vec![QuasiPoly::constant(Complex64::new(1.0, 0.0))];
        let mut out = QuasiPoly::zero();
        for (e, c) in &self.terms {
            while powers.len() <= e[v] as usize {
                let next = powers.last().expect("nonempty").mul(replacement);
                powers.push(next);
            }
            let mut rest = *e;
            rest[v] = 0;
            out = out.add(&powers[e[v] as usize].mul(&QuasiPoly::monomial(*c, rest)));
        }
        out
    }
}
