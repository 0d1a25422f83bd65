use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;

use super::element::{Coordinates, RingElement};
use crate::error::{Error, Result};
use crate::lattice::{basis_classes, invariant_basis, validate, MorphismClass, OrbitVector, TorusSpec};
use crate::theta::{PairingForm, SeriesParams};

/// Basis data of one graded piece.
struct Level {
    classes: Vec<MorphismClass>,
    index: HashMap<MorphismClass, usize>,
    orbits: Option<Vec<OrbitVector>>,
    /// orbit index of every class, when the involution is on
    orbit_of: Vec<usize>,
}

/// Products of basis classes for one pair of levels: entry `i * n2 + j` lists
/// the output classes of `Y_i * Y_j` with their coefficients.
struct ProductTable {
    n2: usize,
    entries: Vec<Vec<(usize, Complex64)>>,
}

/// The graded ring `sum_k Hom(L_0, L_k)` of a validated spec, with the
/// product given by counting triangles.
///
/// Basis data and product tables are computed on first use and cached; the
/// ring can be shared between threads.
pub struct FukayaRing {
    spec: TorusSpec,
    params: SeriesParams,
    form: PairingForm,
    id: u64,
    jobs: usize,
    levels: RwLock<BTreeMap<u32, Arc<Level>>>,
    tables: RwLock<BTreeMap<(u32, u32), Arc<ProductTable>>>,
}

impl std::fmt::Debug for FukayaRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FukayaRing").field("spec", &self.spec).field("params", &self.params).finish()
    }
}

impl FukayaRing {
    pub fn new(spec: TorusSpec, params: SeriesParams) -> Result<Self> {
        let report = validate(&spec);
        if let Some(fail) = report.first_failure() {
            return Err(Error::Validation(format!("{}: {}", fail.id, fail.detail)));
        }
        if spec.involution() && spec.shift().iter().any(|s| *s != 0.0) {
            return Err(Error::Input("the involution c -> -c is only a symmetry for zero shift".into()));
        }
        let id = spec.fingerprint_u64() ^ params.tol.to_bits() ^ u64::from(params.max_radius).rotate_left(17);
        Ok(FukayaRing {
            form: PairingForm::new(&spec),
            spec,
            params,
            id,
            jobs: 1,
            levels: RwLock::new(BTreeMap::new()),
            tables: RwLock::new(BTreeMap::new()),
        })
    }

    /// Number of threads used when filling a product table.
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn params(&self) -> &SeriesParams {
        &self.params
    }

    pub fn form(&self) -> &PairingForm {
        &self.form
    }

    fn level(&self, k: u32) -> Result<Arc<Level>> {
        if let Some(l) = self.levels.read().expect("level cache poisoned").get(&k) {
            return Ok(l.clone());
        }
        let classes = basis_classes(&self.spec, k)?;
        let index: HashMap<MorphismClass, usize> = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let (orbits, orbit_of) = if self.spec.involution() {
            let orbits = invariant_basis(&self.spec, k)?;
            let mut orbit_of = vec![0; classes.len()];
            for (o, orbit) in orbits.iter().enumerate() {
                for m in &orbit.members {
                    orbit_of[index[m]] = o;
                }
            }
            (Some(orbits), orbit_of)
        } else {
            (None, Vec::new())
        };
        let level = Arc::new(Level { classes, index, orbits, orbit_of });
        self.levels.write().expect("level cache poisoned").insert(k, level.clone());
        Ok(level)
    }

    /// `basis_classes(spec, k)`, cached.
    pub fn classes(&self, k: u32) -> Result<Vec<MorphismClass>> {
        Ok(self.level(k)?.classes.clone())
    }

    /// `invariant_basis(spec, k)`, cached.
    pub fn orbits(&self, k: u32) -> Result<Vec<OrbitVector>> {
        self.level(k)?
            .orbits
            .clone()
            .ok_or_else(|| Error::Misuse("invariant coordinates require a spec with the involution enabled".into()))
    }

    /// Dimension of level `k` in the natural coordinates of the ring:
    /// invariant ones when the involution is on.
    pub fn dimension(&self, k: u32) -> Result<usize> {
        if k == 0 {
            return Ok(1);
        }
        let level = self.level(k)?;
        Ok(level.orbits.as_ref().map_or(level.classes.len(), Vec::len))
    }

    /// The unit `1 in Hom(L_0, L_0)` times `z`.
    pub fn scalar(&self, z: Complex64) -> RingElement {
        RingElement::from_parts(0, vec![z], Coordinates::Classes, self.id)
    }

    pub fn zero(&self, k: u32, coordinates: Coordinates) -> Result<RingElement> {
        let len = match coordinates {
            Coordinates::Classes => self.level(k)?.classes.len(),
            Coordinates::Invariant => self.orbits(k)?.len(),
        };
        Ok(RingElement::from_parts(k, vec![Complex64::new(0.0, 0.0); len], coordinates, self.id))
    }

    /// Builds an element from explicit coefficients.
    pub fn element(&self, k: u32, coeffs: Vec<Complex64>, coordinates: Coordinates) -> Result<RingElement> {
        let expected = self.zero(k, coordinates)?.coeffs().len();
        if coeffs.len() != expected {
            return Err(Error::Input(format!("level {k} has dimension {expected}, got {} coefficients", coeffs.len())));
        }
        Ok(RingElement::from_parts(k, coeffs, coordinates, self.id))
    }

    /// The basis vector `Y_c` of the `i`-th class at level `k`.
    pub fn basis_element(&self, k: u32, i: usize) -> Result<RingElement> {
        let mut out = self.zero(k, Coordinates::Classes)?;
        let len = out.coeffs().len();
        if i >= len {
            return Err(Error::Input(format!("level {k} has {len} classes, index {i} is out of range")));
        }
        let mut coeffs = out.coeffs().to_vec();
        coeffs[i] = Complex64::new(1.0, 0.0);
        out = RingElement::from_parts(k, coeffs, Coordinates::Classes, self.id);
        Ok(out)
    }

    /// `Y_c` for an explicit class.
    pub fn class_element(&self, class: &MorphismClass) -> Result<RingElement> {
        let level = self.level(class.level())?;
        let i = *level
            .index
            .get(class)
            .ok_or_else(|| Error::Input(format!("{class} is not a class of this spec")))?;
        self.basis_element(class.level(), i)
    }

    /// The `i`-th orbit sum at level `k`, in invariant coordinates.
    pub fn invariant_element(&self, k: u32, i: usize) -> Result<RingElement> {
        let mut coeffs = self.zero(k, Coordinates::Invariant)?.coeffs().to_vec();
        if i >= coeffs.len() {
            return Err(Error::Input(format!("level {k} has {} orbits, index {i} is out of range", coeffs.len())));
        }
        coeffs[i] = Complex64::new(1.0, 0.0);
        Ok(RingElement::from_parts(k, coeffs, Coordinates::Invariant, self.id))
    }

    /// The natural basis of `Hom(L_0, L_1)`: orbit sums when the involution is
    /// on, classes otherwise.
    pub fn degree_one_generators(&self) -> Result<Vec<RingElement>> {
        let n = self.dimension(1)?;
        (0..n)
            .map(|i| if self.spec.involution() { self.invariant_element(1, i) } else { self.basis_element(1, i) })
            .collect()
    }

    /// Re-expresses an element in class coordinates.
    pub fn to_classes(&self, x: &RingElement) -> Result<RingElement> {
        self.check_owner(x)?;
        if !x.is_invariant() || x.level() == 0 {
            return Ok(x.clone());
        }
        let level = self.level(x.level())?;
        let coeffs = level.orbit_of.iter().map(|&o| x.coeffs()[o]).collect();
        Ok(RingElement::from_parts(x.level(), coeffs, Coordinates::Classes, self.id))
    }

    /// Re-expresses an involution-invariant element in orbit-sum coordinates.
    /// The coefficient of an orbit is read off its representative.
    pub fn to_invariant(&self, x: &RingElement) -> Result<RingElement> {
        self.check_owner(x)?;
        if x.is_invariant() || x.level() == 0 {
            return Ok(x.clone());
        }
        let level = self.level(x.level())?;
        let orbits = self.orbits(x.level())?;
        let coeffs = orbits.iter().map(|o| x.coeffs()[level.index[&o.representative]]).collect();
        Ok(RingElement::from_parts(x.level(), coeffs, Coordinates::Invariant, self.id))
    }

    fn check_owner(&self, x: &RingElement) -> Result<()> {
        if x.ring_id() != self.id {
            return Err(Error::Misuse("element belongs to a different ring".into()));
        }
        Ok(())
    }

    /// Triangle sum for `Y_a * Y_c` with `a` at level `k1` and `c` at level `k2`.
    ///
    /// Lifts `l` of `a - c` are grouped by `l mod q`, `q = K / gcd(k1, k2)`;
    /// the group of `l0` lands in the class `c + k1 l0 / K` and contributes
    /// `sum_u exp(-pi kappa (l0 + q u + K s/2)^T G (...))`, `kappa = k1 k2 / K`.
    pub fn product_terms(&self, a: &MorphismClass, c: &MorphismClass) -> Result<Vec<(MorphismClass, Complex64)>> {
        let (k1, k2) = (a.level(), c.level());
        let big_k = k1 + k2;
        let g = k1.gcd(&k2);
        let q = big_k / g;
        let n = self.spec.dim();
        let weight = f64::from(k1) * f64::from(k2) * f64::from(q) * f64::from(q) / f64::from(big_k);
        let shift = self.spec.shift();
        let mut out: BTreeMap<MorphismClass, Complex64> = BTreeMap::new();
        let mut m = vec![0i64; n];
        loop {
            let l0: Vec<Rational64> = (0..n).map(|i| a.coords()[i] - c.coords()[i] + Rational64::from_integer(m[i])).collect();
            let c3: Vec<Rational64> = (0..n)
                .map(|i| c.coords()[i] + l0[i] * Rational64::new(i64::from(k1), i64::from(big_k)))
                .collect();
            let center: Vec<f64> = (0..n)
                .map(|i| {
                    let l = *l0[i].numer() as f64 / *l0[i].denom() as f64;
                    (l + f64::from(big_k) * shift[i] / 2.0) / f64::from(q)
                })
                .collect();
            let value = self.form.gaussian_sum(weight, &center, &self.params)?;
            *out.entry(MorphismClass::from_raw(big_k, c3)).or_insert(Complex64::new(0.0, 0.0)) += value;
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(out.into_iter().collect());
                }
                m[pos] += 1;
                if m[pos] < i64::from(q) {
                    break;
                }
                m[pos] = 0;
                pos += 1;
            }
        }
    }

    fn table(&self, k1: u32, k2: u32) -> Result<Arc<ProductTable>> {
        if let Some(t) = self.tables.read().expect("table cache poisoned").get(&(k1, k2)) {
            return Ok(t.clone());
        }
        let l1 = self.level(k1)?;
        let l2 = self.level(k2)?;
        let l3 = self.level(k1 + k2)?;
        let n1 = l1.classes.len();
        let n2 = l2.classes.len();
        let row = |i: usize| -> Result<Vec<Vec<(usize, Complex64)>>> {
            (0..n2)
                .map(|j| {
                    self.product_terms(&l1.classes[i], &l2.classes[j])?
                        .into_iter()
                        .map(|(c3, v)| {
                            l3.index.get(&c3).map(|&idx| (idx, v)).ok_or_else(|| {
                                Error::Validation(format!("product landed outside level {}: {c3}", k1 + k2))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let rows: Vec<Result<Vec<Vec<(usize, Complex64)>>>> = if self.jobs > 1 && n1 > 1 {
            let chunk = n1.div_ceil(self.jobs);
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..n1)
                    .step_by(chunk)
                    .map(|start| {
                        let row = &row;
                        s.spawn(move || (start..(start + chunk).min(n1)).map(row).collect::<Vec<_>>())
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("table worker panicked")).collect()
            })
        } else {
            (0..n1).map(row).collect()
        };
        let mut entries = Vec::with_capacity(n1 * n2);
        for r in rows {
            entries.extend(r?);
        }
        let table = Arc::new(ProductTable { n2, entries });
        self.tables.write().expect("table cache poisoned").insert((k1, k2), table.clone());
        Ok(table)
    }

    /// The product `x * y`; `y` sits at the origin vertex of every triangle,
    /// so for a nonintegral shift the order matters.
    ///
    /// The result is in invariant coordinates when both factors are.
    pub fn compose(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check_owner(x)?;
        self.check_owner(y)?;
        if x.level() == 0 {
            return Ok(y.scale(x.coeffs()[0]));
        }
        if y.level() == 0 {
            return Ok(x.scale(y.coeffs()[0]));
        }
        let both_invariant = x.is_invariant() && y.is_invariant();
        let xu = self.to_classes(x)?;
        let yu = self.to_classes(y)?;
        let table = self.table(x.level(), y.level())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.level(x.level() + y.level())?.classes.len()];
        for (i, xi) in xu.coeffs().iter().enumerate() {
            if *xi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, yj) in yu.coeffs().iter().enumerate() {
                if *yj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let w = xi * yj;
                for &(idx, v) in &table.entries[i * table.n2 + j] {
                    out[idx] += w * v;
                }
            }
        }
        let z = RingElement::from_parts(x.level() + y.level(), out, Coordinates::Classes, self.id);
        if both_invariant {
            self.to_invariant(&z)
        } else {
            Ok(z)
        }
    }

    /// Left-to-right product of a nonempty word.
    pub fn evaluate_monomial(&self, word: &[RingElement]) -> Result<RingElement> {
        let (first, rest) = word.split_first().ok_or_else(|| Error::Input("empty word".into()))?;
        self.check_owner(first)?;
        rest.iter().try_fold(first.clone(), |acc, y| self.compose(&acc, y))
    }
}
