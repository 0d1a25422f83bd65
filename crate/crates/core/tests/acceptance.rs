//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use proptest::test_runner::{RngAlgorithm, TestRng};
use proptest::prelude::Rng;
use torus_mirror::families::{
    derive_sextic, hesse_coefficient, hesse_spec, j_invariant, j_qseries, kummer_generators, kummer_spec, quasihomogeneous_generators,
    quasihomogeneous_spec, sklyanin_coefficients, verify_kummer, verify_p123_veronese, verify_quasihomogeneous, verify_sklyanin,
    SEXTIC_MONOMIALS,
};
use torus_mirror::ring::{find_relations, mirror_compose, standard_generators, RelationSet};
use torus_mirror::theta::{canonical_theta, lattice_theta, structure_coefficient, tail_bound};
use torus_mirror::{builtin, invariant_basis, Complex64, FukayaRing, SeriesParams};

const SVD_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn i() -> Complex64 {
    c(0.0, 1.0)
}

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

type Criterion = fn(&mut Outcome) -> torus_mirror::Result<()>;

fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn scaled_to(row: &[Complex64], pivot: usize) -> Vec<Complex64> {
    row.iter().map(|z| z / row[pivot]).collect()
}

/// Smallest singular value beyond `rank`, relative to the largest, of the
/// unit-normalized rows of `a` and `b` stacked.
fn row_space_gap(a: &[Vec<Complex64>], b: &[Vec<Complex64>], rank: usize) -> f64 {
    let rows: Vec<Vec<Complex64>> = a
        .iter()
        .chain(b)
        .map(|r| {
            let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            r.iter().map(|z| z / n).collect()
        })
        .collect();
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let mut s: Vec<f64> = m.svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s.get(rank).copied().unwrap_or(0.0) / s[0]
}

fn ac1(o: &mut Outcome) -> torus_mirror::Result<()> {
    let p = SeriesParams::default();
    let start = Instant::now();
    let ring = FukayaRing::new(hesse_spec(i(), 0.0)?, p)?;
    let gens = standard_generators(&ring)?;
    let set = find_relations(&ring, 3, &gens, true, SVD_TOL)?;
    let elapsed = start.elapsed();
    o.require(set.len() == 1, format!("expected one cubic relation, found {}", set.len()));
    if set.len() == 1 {
        let mu = hesse_coefficient(i(), &p)?;
        let mut expected = vec![c(0.0, 0.0); set.words.len()];
        for w in [[0, 0, 0], [1, 1, 1], [2, 2, 2]] {
            expected[set.index_of(&w).unwrap()] = c(1.0, 0.0);
        }
        expected[set.index_of(&[0, 1, 2]).unwrap()] = -mu;
        let cube = set.index_of(&[0, 0, 0]).unwrap();
        let diff = max_diff(&scaled_to(&set.coefficients[0], cube), &expected);
        o.require(diff < 1e-8, format!("cubic differs from the Hesse form by {diff:e}"));
        o.require(set.residuals[0] < 1e-8, format!("residual {:e}", set.residuals[0]));
        o.note(format!("mu = {:.12}, coefficient diff {diff:.1e}, residual {:.1e}", mu.re, set.residuals[0]));
    }
    o.require(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"));
    Ok(())
}

fn ac2(o: &mut Outcome) -> torus_mirror::Result<()> {
    let p = SeriesParams::default();
    let ring = FukayaRing::new(hesse_spec(i(), 0.3)?, p)?;
    let gens = standard_generators(&ring)?;
    let set = find_relations(&ring, 2, &gens, false, SVD_TOL)?;
    o.require(set.len() == 3, format!("b = 0.3: expected 3 relations, found {}", set.len()));
    let skl = sklyanin_coefficients(i(), 0.3, &p)?;
    // reorder the displayed relations from index 3a+b onto the discovered word order
    let displayed: Vec<Vec<Complex64>> = skl
        .relations()
        .iter()
        .map(|r| set.words.iter().map(|w| r[3 * w[0] + w[1]]).collect())
        .collect();
    if set.len() == 3 {
        let gap = row_space_gap(&set.coefficients, &displayed, 3);
        o.require(gap < 1e-9, format!("row spaces differ: gap {gap:e}"));
        o.require(set.max_residual() < 1e-9, format!("residual {:e}", set.max_residual()));
        o.note(format!("row-space gap {gap:.1e}, residual {:.1e}", set.max_residual()));
    }

    let ring1 = FukayaRing::new(hesse_spec(i(), 1.0)?, p)?;
    let set1 = find_relations(&ring1, 2, &standard_generators(&ring1)?, false, SVD_TOL)?;
    let antisymmetric = set1.coefficients.iter().all(|r| {
        set1.words.iter().enumerate().all(|(k, w)| {
            let swapped = set1.index_of(&[w[1], w[0]]).unwrap();
            (r[k] + r[swapped]).norm() < 1e-9
        })
    });
    o.require(set1.len() == 3 && antisymmetric, format!("b = 1: {} relations, antisymmetric = {antisymmetric}", set1.len()));
    let report = verify_sklyanin(i(), 1.0, SVD_TOL, &p)?;
    o.require(report.passed(), "b = 1: commutative branch report failed");
    Ok(())
}

fn sigma3(n: i128) -> i128 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

/// `q^-1, q^0, q^1, ...` coefficients of `E4^3 / Delta`.
fn j_oracle(count: usize) -> Vec<i128> {
    let len = count + 1;
    let mut e4 = vec![0i128; len];
    e4[0] = 1;
    for (n, s) in e4.iter_mut().enumerate().skip(1) {
        *s = 240 * sigma3(n as i128);
    }
    let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; len];
        for x in 0..len {
            for y in 0..len - x {
                out[x + y] += a[x] * b[y];
            }
        }
        out
    };
    let e43 = mul(&mul(&e4, &e4), &e4);
    let mut eta = vec![0i128; len];
    eta[0] = 1;
    for n in 1..len {
        for _ in 0..24 {
            for k in (n..len).rev() {
                eta[k] -= eta[k - n];
            }
        }
    }
    let mut out = vec![0i128; len];
    for k in 0..len {
        out[k] = e43[k] - (1..=k).map(|j| eta[j] * out[k - j]).sum::<i128>();
    }
    out.truncate(count);
    out
}

fn ac3(o: &mut Outcome) -> torus_mirror::Result<()> {
    let p = SeriesParams::default();
    let start = Instant::now();
    let series = j_qseries(6, &p)?;
    let elapsed = start.elapsed();
    let oracle = j_oracle(6);
    for (k, label) in ["q^-1", "q^0", "q^1"].iter().enumerate() {
        let want = oracle[k] as f64;
        let rel = (series.coefficients[k] - want).norm() / want.abs();
        o.require(rel < 1e-3, format!("{label}: {} vs {want} (relative {rel:e})", series.coefficients[k]));
    }
    let ji = j_invariant(i(), &p)?;
    let rel = (ji - 1728.0).norm() / 1728.0;
    o.require(rel < 1e-6, format!("j(i) = {ji}"));
    o.require(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"));
    o.note(format!("coefficients {:?}, j(i) relative error {rel:.1e}", series.rounded));
    Ok(())
}

fn ac4(o: &mut Outcome) -> torus_mirror::Result<()> {
    let p = SeriesParams::default();
    let ring = FukayaRing::new(quasihomogeneous_spec(i())?, p)?;
    let gens = quasihomogeneous_generators(&ring)?;
    let mut sextic: Option<RelationSet> = None;
    for d in 2..=6 {
        let set = find_relations(&ring, d, &gens, true, SVD_TOL)?;
        let expected = usize::from(d == 6);
        o.require(set.len() == expected, format!("degree {d}: {} relations", set.len()));
        if d == 6 {
            sextic = Some(set);
        }
    }
    let set = sextic.expect("degree six ran");
    if set.len() == 1 {
        let curve = derive_sextic(i(), &p)?;
        let footnote = curve.relation_vector();
        let mut nullspace = vec![c(0.0, 0.0); 7];
        for (m, exps) in SEXTIC_MONOMIALS.iter().enumerate() {
            let word: Vec<usize> = (0..3).flat_map(|g| std::iter::repeat_n(g, exps[g] as usize)).collect();
            nullspace[m] = set.coefficients[0][set.index_of(&word).expect("sextic word")];
        }
        let y3 = SEXTIC_MONOMIALS.iter().position(|e| *e == [0, 3, 0]).unwrap();
        let diff = max_diff(&scaled_to(&footnote, y3), &scaled_to(&nullspace, y3));
        o.require(diff < 1e-9, format!("footnote and nullspace differ by {diff:e}"));
        o.note(format!("footnote vs nullspace {diff:.1e}"));
    }
    let report = verify_quasihomogeneous(i(), SVD_TOL, &p)?;
    o.require(report.passed(), "quasihomogeneous report failed");
    Ok(())
}

fn ac5(o: &mut Outcome) -> torus_mirror::Result<()> {
    let report = verify_p123_veronese(i(), &SeriesParams::default())?;
    let quadrics: Vec<_> = report.checks.iter().filter(|c| c.id.starts_with('V') && c.id.contains('=')).collect();
    o.require(quadrics.len() == 9, format!("{} quadratic relations checked", quadrics.len()));
    let worst = quadrics.iter().map(|c| c.residual.0).fold(0.0, f64::max);
    o.require(worst < 1e-9, format!("worst residual {worst:e}"));
    o.require(report.passed(), "veronese report failed");
    o.note(format!("worst residual {worst:.1e}"));
    Ok(())
}

fn ac6(o: &mut Outcome) -> torus_mirror::Result<()> {
    let p = SeriesParams::default();
    let generic = kummer_spec(i(), c(0.0, 1.3), c(0.0, 0.1))?;
    let sizes: Vec<usize> = (1..=4).map(|k| invariant_basis(&generic, k).map(|b| b.len())).collect::<torus_mirror::Result<_>>()?;
    o.require(sizes == [4, 10, 20, 34], format!("invariant sizes {sizes:?}"));

    let degenerate = verify_kummer(i(), i(), c(0.0, 0.0), SVD_TOL, &p)?;
    for id in ["X0X3_closed_form", "X1X2_closed_form", "quadric_recovered"] {
        match degenerate.check(id) {
            Some(chk) => o.require(chk.pass && chk.residual.0 < 1e-9, format!("{id}: residual {:e}", chk.residual.0)),
            None => o.require(false, format!("{id} missing")),
        }
    }

    let ring = FukayaRing::new(generic, p)?;
    let gens = kummer_generators(&ring)?;
    let counts: Vec<usize> = (2..=4).map(|d| find_relations(&ring, d, &gens, true, SVD_TOL).map(|s| s.len())).collect::<torus_mirror::Result<_>>()?;
    o.require(counts[0] == 0 && counts[1] == 0 && counts[2] >= 1, format!("relation counts in degrees 2..4: {counts:?}"));
    o.note(format!("sizes {sizes:?}, generic relation counts {counts:?}"));
    Ok(())
}

fn unit(rng: &mut TestRng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn box_sum(omega: &DMatrix<Complex64>, a: &[f64], w: &[Complex64], l: i64) -> Complex64 {
    let n = a.len();
    let mut total = c(0.0, 0.0);
    let mut lambda = vec![-l; n];
    'outer: loop {
        let x: Vec<f64> = (0..n).map(|k| lambda[k] as f64 + a[k]).collect();
        let mut phase = c(0.0, 0.0);
        for r in 0..n {
            for s in 0..n {
                phase += omega[(r, s)] * x[r] * x[s] * 0.5;
            }
            phase += w[r] * x[r];
        }
        total += (c(0.0, 2.0 * PI) * phase).exp();
        for k in 0..n {
            lambda[k] += 1;
            if lambda[k] <= l {
                continue 'outer;
            }
            lambda[k] = -l;
        }
        return total;
    }
}

fn ac7(o: &mut Outcome) -> torus_mirror::Result<()> {
    let p = SeriesParams::default();
    let names = ["hesse", "sklyanin", "quasihomogeneous", "kummer-degenerate", "kummer-generic"];

    // associativity over all degree-one triples
    let mut worst_assoc: f64 = 0.0;
    for name in names {
        let ring = FukayaRing::new(builtin::builtin(name)?, p)?;
        let gens: Vec<_> = ring.classes(1)?.iter().map(|cl| ring.class_element(cl)).collect::<torus_mirror::Result<_>>()?;
        for x in &gens {
            for y in &gens {
                let xy = ring.compose(x, y)?;
                for z in &gens {
                    let yz = ring.compose(y, z)?;
                    worst_assoc = worst_assoc.max(max_diff(ring.compose(&xy, z)?.coeffs(), ring.compose(x, &yz)?.coeffs()));
                }
            }
        }
    }
    o.require(worst_assoc < 1e-9, format!("associativity defect {worst_assoc:e}"));

    // commutativity iff integral shift, on products and on the scalars
    let mut commutator = Vec::new();
    for b in [0.0, 1.0, 0.3] {
        let ring = FukayaRing::new(hesse_spec(i(), b)?, p)?;
        let gens = ring.degree_one_generators()?;
        let mut worst: f64 = 0.0;
        for x in &gens {
            for y in &gens {
                worst = worst.max(max_diff(ring.compose(x, y)?.coeffs(), ring.compose(y, x)?.coeffs()));
            }
        }
        commutator.push(worst);
    }
    o.require(commutator[0] < 1e-10 && commutator[1] < 1e-10 && commutator[2] > 1e-3, format!("commutators {commutator:?}"));
    let mut worst_sym: f64 = 0.0;
    for b in [0.3, 0.55, -0.8] {
        for k in 0..6 {
            let lhs = structure_coefficient(&hesse_spec(i(), b)?, 2.0, &[k as f64 / 6.0], &p)?;
            let rhs = structure_coefficient(&hesse_spec(i(), -b)?, 2.0, &[(6 - k) as f64 / 6.0], &p)?;
            worst_sym = worst_sym.max((lhs - rhs).norm());
        }
    }
    o.require(worst_sym < 1e-12, format!("A_k(b) - A_(6-k)(-b) = {worst_sym:e}"));

    // compose against the mirror theta product
    let mut worst_mirror: f64 = 0.0;
    for name in ["hesse", "quasihomogeneous", "kummer-degenerate", "kummer-generic"] {
        let ring = FukayaRing::new(builtin::builtin(name)?.with_involution(false), p)?;
        let classes = ring.classes(1)?;
        for a in &classes {
            for b in &classes {
                let direct = ring.compose(&ring.class_element(a)?, &ring.class_element(b)?)?;
                worst_mirror = worst_mirror.max(max_diff(direct.coeffs(), mirror_compose(&ring, a, b)?.element.coeffs()));
            }
        }
    }
    o.require(worst_mirror < 1e-10, format!("compose vs mirror_compose {worst_mirror:e}"));

    // canonical theta at the origin against structure constants
    let mut worst_canon: f64 = 0.0;
    for name in names {
        let spec = builtin::builtin(name)?.with_shift(vec![0.0; builtin::builtin(name)?.dim()])?;
        let n = spec.dim();
        for k in 1..=3u32 {
            for cl in torus_mirror::basis_classes(&spec, k)? {
                let x = cl.to_f64();
                let theta = canonical_theta(&spec, 2 * k, &x, &vec![0.0; 2 * n], &p)?;
                worst_canon = worst_canon.max((theta - structure_coefficient(&spec, f64::from(k), &x, &p)?).norm());
            }
        }
    }
    o.require(worst_canon < 1e-12, format!("canonical theta identity {worst_canon:e}"));

    // theta series against box sums, and tail bound soundness
    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut worst_box: f64 = 0.0;
    for trial in 0..20 {
        let n = 1 + trial % 2;
        let omega = if n == 1 {
            DMatrix::from_element(1, 1, c(unit(&mut rng) - 0.5, 0.5 + unit(&mut rng)))
        } else {
            let off = c(0.4 * unit(&mut rng) - 0.2, 0.4 * unit(&mut rng) - 0.2);
            DMatrix::from_row_slice(2, 2, &[c(unit(&mut rng) - 0.5, 0.8 + unit(&mut rng)), off, off, c(unit(&mut rng) - 0.5, 0.8 + unit(&mut rng))])
        };
        let a: Vec<f64> = (0..n).map(|_| unit(&mut rng)).collect();
        let w: Vec<Complex64> = (0..n).map(|_| c(unit(&mut rng) - 0.5, 0.2 * unit(&mut rng) - 0.1)).collect();
        let got = lattice_theta(&omega, &a, &w, &p)?;
        worst_box = worst_box.max((got - box_sum(&omega, &a, &w, if n == 1 { 40 } else { 14 })).norm());
    }
    o.require(worst_box < 1e-12, format!("theta vs box sum {worst_box:e}"));

    let mut unsound = 0;
    for _ in 0..20 {
        let g = 0.2 + 2.8 * unit(&mut rng);
        let kappa = 0.3 + 3.7 * unit(&mut rng);
        let radius = (4.0 * unit(&mut rng)).floor();
        let bound = tail_bound(&DMatrix::from_element(1, 1, g), kappa, radius);
        let actual: f64 = (radius as i64 + 1..400).map(|l| 2.0 * (-PI * kappa * g * (l * l) as f64).exp()).sum();
        if actual > bound {
            unsound += 1;
        }
    }
    o.require(unsound == 0, format!("{unsound} of 20 tail bounds below the true tail"));

    o.note(format!(
        "assoc {worst_assoc:.1e}, commutators {:.1e}/{:.1e}/{:.1e}, mirror {worst_mirror:.1e}, canonical {worst_canon:.1e}, box {worst_box:.1e}",
        commutator[0], commutator[1], commutator[2]
    ));
    Ok(())
}

fn main() -> ExitCode {
    // answer `cargo test -- --list` without running anything
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, &str, Criterion); 7] = [
        ("AC1", "Hesse cubic at tau = i", ac1),
        ("AC2", "Sklyanin relations at b = 0.3, commutative at b = 1", ac2),
        ("AC3", "j q-expansion and j(i)", ac3),
        ("AC4", "unique degree-6 relation of the weighted ring", ac4),
        ("AC5", "nine Veronese quadrics", ac5),
        ("AC6", "Kummer invariant counts and relations", ac6),
        ("AC7", "property suites", ac7),
    ];
    let suite = Instant::now();
    let mut all = true;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let mut outcome = Outcome::new();
        if let Err(e) = run(&mut outcome) {
            outcome.failures.push(format!("error: {e}"));
        }
        let ok = outcome.failures.is_empty();
        all &= ok;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let detail = if ok { outcome.notes.join("; ") } else { outcome.failures.join("; ") };
        println!("{id} {} {title} ({ms:.0} ms): {detail}", if ok { "PASS" } else { "FAIL" });
    }
    let total = suite.elapsed();
    let in_time = total < Duration::from_secs(180);
    all &= in_time;
    println!("acceptance total {:.1} s, {}", total.as_secs_f64(), if all { "all criteria pass" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
