use std::collections::HashMap;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::element::RingElement;
use super::fukaya::FukayaRing;
use super::linalg::{left_nullspace, normalize_by_largest, rank, rref, singular_values};
use crate::error::{Error, Result};
use crate::json::{complex_vec, Real};

/// A named homogeneous generator; its weight is its level.
#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub element: RingElement,
}

impl Generator {
    pub fn new(label: impl Into<String>, element: RingElement) -> Self {
        Generator { label: label.into(), element }
    }

    pub fn weight(&self) -> u32 {
        self.element.level()
    }
}

/// Labels `X0, X1, ...` for the degree-one generators of a ring.
pub fn standard_generators(ring: &FukayaRing) -> Result<Vec<Generator>> {
    Ok(ring
        .degree_one_generators()?
        .into_iter()
        .enumerate()
        .map(|(i, e)| Generator::new(format!("X{i}"), e))
        .collect())
}

/// Homogeneous relations of one degree found numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub degree: u32,
    pub commutative: bool,
    pub generators: Vec<String>,
    /// Words as generator indices: nondecreasing multisets when commutative.
    pub words: Vec<Vec<usize>>,
    /// One row per relation, indexed like `words`; the largest-modulus entry is 1.
    pub coefficients: Vec<Vec<Complex64>>,
    /// `|r^T W| / (|r| sigma_max(W))` for the evaluation matrix `W`.
    pub residuals: Vec<f64>,
    /// Singular values of the (equilibrated) evaluation matrix, decreasing.
    pub singular_values: Vec<f64>,
    pub svd_tol: f64,
    pub warnings: Vec<String>,
}

/// Words of total weight `degree`. Commutative words are nondecreasing index
/// sequences in lexicographic order; noncommutative ones are ordered by
/// length, then lexicographically.
pub fn enumerate_words(weights: &[u32], degree: u32, commutative: bool) -> Vec<Vec<usize>> {
    fn go(weights: &[u32], remaining: u32, start: usize, commutative: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let first = if commutative { start } else { 0 };
        for g in first..weights.len() {
            if weights[g] > 0 && weights[g] <= remaining {
                cur.push(g);
                go(weights, remaining - weights[g], g, commutative, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, degree, 0, commutative, &mut Vec::new(), &mut out);
    if !commutative {
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    }
    out
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `X0^2*X1` (commutative) or `X0*X0*X1` (ordered).
    pub fn word_label(&self, i: usize) -> String {
        let word = &self.words[i];
        if !self.commutative {
            return word.iter().map(|&g| self.generators[g].as_str()).collect::<Vec<_>>().join("*");
        }
        let mut parts = Vec::new();
        let mut j = 0;
        while j < word.len() {
            let g = word[j];
            let run = word[j..].iter().take_while(|&&h| h == g).count();
            parts.push(if run == 1 { self.generators[g].clone() } else { format!("{}^{run}", self.generators[g]) });
            j += run;
        }
        parts.join("*")
    }

    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }

    /// Largest residual over the relations (0 when there are none).
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            coefficients: Vec<[Real; 2]>,
            residual: Real,
        }
        #[derive(Serialize)]
        struct View<'a> {
            degree: u32,
            commutative: bool,
            generators: &'a [String],
            words: Vec<String>,
            relations: Vec<Row>,
            singular_values: Vec<Real>,
            svd_tol: Real,
            warnings: &'a [String],
        }
        crate::json::value(View {
            degree: self.degree,
            commutative: self.commutative,
            generators: &self.generators,
            words: (0..self.words.len()).map(|i| self.word_label(i)).collect(),
            relations: self
                .coefficients
                .iter()
                .zip(&self.residuals)
                .map(|(c, r)| Row { coefficients: complex_vec(c), residual: Real(*r) })
                .collect(),
            singular_values: self.singular_values.iter().map(|s| Real(*s)).collect(),
            svd_tol: Real(self.svd_tol),
            warnings: &self.warnings,
        })
    }

    /// One CSV row per nonzero coefficient: `relation,word,re,im,residual`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Input(format!("writing CSV: {e}"));
        w.write_record(["relation", "word", "re", "im", "residual"]).map_err(io)?;
        for (r, row) in self.coefficients.iter().enumerate() {
            for (i, z) in row.iter().enumerate() {
                if z.norm() == 0.0 {
                    continue;
                }
                w.write_record([
                    r.to_string(),
                    self.word_label(i),
                    format!("{:.16e}", z.re),
                    format!("{:.16e}", z.im),
                    format!("{:.16e}", self.residuals[r]),
                ])
                .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Input(format!("writing CSV: {e}")))?;
        Ok(())
    }
}

/// Evaluates every word, reusing products of shared prefixes.
pub(crate) fn evaluate_words(ring: &FukayaRing, generators: &[Generator], words: &[Vec<usize>]) -> Result<Vec<RingElement>> {
    let mut cache: HashMap<Vec<usize>, RingElement> = HashMap::new();
    let mut out = Vec::with_capacity(words.len());
    for word in words {
        let mut acc = generators[word[0]].element.clone();
        for end in 2..=word.len() {
            let prefix = &word[..end];
            acc = match cache.get(prefix) {
                Some(v) => v.clone(),
                None => {
                    let v = ring.compose(&acc, &generators[word[end - 1]].element)?;
                    cache.insert(prefix.to_vec(), v.clone());
                    v
                }
            };
        }
        out.push(acc);
    }
    Ok(out)
}

/// Homogeneous relations of weighted degree `degree` among `generators`.
///
/// Builds the matrix `W` whose rows are the words evaluated in the level
/// `degree` basis, equilibrates rows and columns, and returns the left null
/// vectors with singular value below `svd_tol * sigma_max`, put in reduced
/// row echelon form and scaled so the largest entry of each row is 1.
pub fn find_relations(ring: &FukayaRing, degree: u32, generators: &[Generator], commutative: bool, svd_tol: f64) -> Result<RelationSet> {
    if degree < 2 {
        return Err(Error::Input(format!("relations need degree >= 2, got {degree}")));
    }
    if generators.is_empty() {
        return Err(Error::Input("no generators".into()));
    }
    if !(svd_tol > 0.0) {
        return Err(Error::Input(format!("svd_tol must be positive, got {svd_tol}")));
    }
    let coords = generators[0].element.coordinates();
    if generators.iter().any(|g| g.element.coordinates() != coords || g.weight() == 0) {
        return Err(Error::Misuse("generators must be positive-degree elements in the same coordinates".into()));
    }
    let mut warnings = Vec::new();
    let linear: Vec<Vec<Complex64>> = generators.iter().filter(|g| g.weight() == 1).map(|g| g.element.coeffs().to_vec()).collect();
    if !linear.is_empty() && rank(&linear, 1e-10) < linear.len() {
        warnings.push("degree-one generators are linearly dependent".to_string());
    }
    let weights: Vec<u32> = generators.iter().map(Generator::weight).collect();
    let words = enumerate_words(&weights, degree, commutative);
    let values = evaluate_words(ring, generators, &words)?;
    let ncols = values.first().map_or(0, |v| v.coeffs().len());
    let w = DMatrix::from_fn(words.len(), ncols, |i, j| values[i].coeffs()[j]);

    // equilibrate: unit columns, then unit rows
    let mut eq = w.clone();
    for j in 0..ncols {
        let norm = eq.column(j).norm();
        if norm > 0.0 {
            eq.column_mut(j).unscale_mut(norm);
        }
    }
    let mut row_scale = vec![1.0; words.len()];
    for (i, s) in row_scale.iter_mut().enumerate() {
        let norm = eq.row(i).norm();
        if norm > 0.0 {
            *s = norm;
            eq.row_mut(i).unscale_mut(norm);
        }
    }
    let (sigma, null) = left_nullspace(&eq, svd_tol);
    let unscaled: Vec<Vec<Complex64>> = null
        .into_iter()
        .map(|r| r.iter().zip(&row_scale).map(|(z, s)| z / *s).collect())
        .collect();
    let mut coefficients = rref(unscaled, 1e-12);
    for row in coefficients.iter_mut() {
        normalize_by_largest(row);
    }
    let smax = singular_values(&w).first().cloned().unwrap_or(0.0);
    let residuals = coefficients
        .iter()
        .map(|r| {
            let rn = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let img: f64 = (0..ncols)
                .map(|j| (0..words.len()).map(|i| r[i] * w[(i, j)]).sum::<Complex64>().norm_sqr())
                .sum::<f64>()
                .sqrt();
            if smax > 0.0 && rn > 0.0 {
                img / (rn * smax)
            } else {
                0.0
            }
        })
        .collect();
    Ok(RelationSet {
        degree,
        commutative,
        generators: generators.iter().map(|g| g.label.clone()).collect(),
        words,
        coefficients,
        residuals,
        singular_values: sigma,
        svd_tol,
        warnings,
    })
}
