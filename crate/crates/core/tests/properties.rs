use nalgebra::DMatrix;
use proptest::prelude::*;
use torus_mirror::families::hesse_spec;
use torus_mirror::lattice::class_count;
use torus_mirror::ring::mirror_compose;
use torus_mirror::theta::structure_coefficient;
use torus_mirror::{basis_classes, fixed_classes, invariant_basis, validate, Complex64, FukayaRing, SeriesParams, TorusSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_dim(n: [i64; 3], m: f64) -> TorusSpec {
    TorusSpec::new(
        DMatrix::identity(2, 2) * m,
        DMatrix::zeros(2, 2),
        DMatrix::from_row_slice(2, 2, &[n[0], n[1], n[1], n[2]]),
    )
    .unwrap()
}

fn symmetric_pd() -> impl Strategy<Value = [i64; 3]> {
    (1i64..5, -2i64..3, 1i64..5).prop_filter("positive definite", |(a, b, d)| a * d - b * b > 0).prop_map(|(a, b, d)| [a, b, d])
}

fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn class_count_is_determinant(n in symmetric_pd(), k in 1u32..4) {
        let spec = two_dim(n, 1.0);
        let det = (n[0] * n[2] - n[1] * n[1]) as usize;
        let expected = det * (k * k) as usize;
        prop_assert_eq!(class_count(&spec, k).unwrap(), expected);
        let classes = basis_classes(&spec, k).unwrap();
        prop_assert_eq!(classes.len(), expected);
        let mut sorted = classes.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), expected);
    }

    #[test]
    fn classes_closed_under_negation(n in symmetric_pd(), k in 1u32..4) {
        let spec = two_dim(n, 1.0);
        let classes = basis_classes(&spec, k).unwrap();
        for cl in &classes {
            prop_assert!(classes.contains(&cl.negated()));
        }
    }

    #[test]
    fn invariant_count_diagonal(n1 in 1i64..5, n2 in 1i64..5, k in 1u32..5) {
        let spec = TorusSpec::new(DMatrix::identity(2, 2), DMatrix::zeros(2, 2), DMatrix::from_row_slice(2, 2, &[n1, 0, 0, n2]))
            .unwrap()
            .with_involution(true);
        let k64 = i64::from(k);
        let total = (k64 * k64 * n1 * n2) as usize;
        let fixed = [n1, n2].iter().map(|&ni| if (k64 * ni) % 2 == 0 { 2 } else { 1 }).product::<usize>();
        prop_assert_eq!(fixed_classes(&spec, k).unwrap().len(), fixed);
        prop_assert_eq!(invariant_basis(&spec, k).unwrap().len(), (total + fixed) / 2);
    }

    #[test]
    fn validation_stable_under_scaling(n in symmetric_pd(), m in 0.1f64..3.0, s in 1i64..5) {
        let spec = two_dim(n, m);
        prop_assert!(validate(&spec).passed());
        prop_assert!(validate(&spec.scaled(s)).passed());
        prop_assert!(!validate(&spec.scaled(-s)).passed());
    }

    #[test]
    fn shift_symmetry_of_structure_constants(tx in -0.5f64..0.5, ty in 0.5f64..2.0, b in -1.0f64..1.0, k in 0usize..6) {
        let p = SeriesParams::default();
        let tau = c(tx, ty);
        let lhs = structure_coefficient(&hesse_spec(tau, b).unwrap(), 2.0, &[k as f64 / 6.0], &p).unwrap();
        let rhs = structure_coefficient(&hesse_spec(tau, -b).unwrap(), 2.0, &[(6 - k) as f64 / 6.0], &p).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn associativity_one_dim(tx in -0.5f64..0.5, ty in 0.6f64..1.5, n in 1i64..4, b in prop_oneof![Just(0.0), -0.9f64..0.9]) {
        let spec = TorusSpec::one_dimensional(c(tx, ty), n).unwrap().with_shift(vec![b]).unwrap();
        let ring = FukayaRing::new(spec, SeriesParams::default()).unwrap();
        let gens = ring.degree_one_generators().unwrap();
        for x in &gens {
            for y in &gens {
                for z in &gens {
                    let left = ring.compose(&ring.compose(x, y).unwrap(), z).unwrap();
                    let right = ring.compose(x, &ring.compose(y, z).unwrap()).unwrap();
                    prop_assert!(max_diff(left.coeffs(), right.coeffs()) < 1e-9);
                    prop_assert_eq!(left.level(), 3);
                }
            }
        }
    }

    #[test]
    fn commutativity_iff_integral_shift(ty in 0.8f64..1.5, base in -2i64..3, frac in 0.2f64..0.8) {
        let p = SeriesParams::default();
        for (shift, integral) in [(base as f64, true), (base as f64 + frac, false)] {
            let ring = FukayaRing::new(hesse_spec(c(0.0, ty), shift).unwrap(), p).unwrap();
            let gens = ring.degree_one_generators().unwrap();
            let mut worst: f64 = 0.0;
            for x in &gens {
                for y in &gens {
                    let xy = ring.compose(x, y).unwrap();
                    let yx = ring.compose(y, x).unwrap();
                    worst = worst.max(max_diff(xy.coeffs(), yx.coeffs()));
                }
            }
            if integral {
                prop_assert!(worst < 1e-10, "shift {} differs by {}", shift, worst);
            } else {
                prop_assert!(worst > 1e-3, "shift {} only differs by {}", shift, worst);
            }
        }
    }

    #[test]
    fn mirror_product_agrees(tx in -0.5f64..0.5, ty in 0.6f64..1.5, n in 1i64..4) {
        let ring = FukayaRing::new(TorusSpec::one_dimensional(c(tx, ty), n).unwrap(), SeriesParams::default()).unwrap();
        let classes = ring.classes(1).unwrap();
        for a in &classes {
            for b in &classes {
                let direct = ring.compose(&ring.class_element(a).unwrap(), &ring.class_element(b).unwrap()).unwrap();
                let mirror = mirror_compose(&ring, a, b).unwrap();
                prop_assert!(max_diff(direct.coeffs(), mirror.element.coeffs()) < 1e-10);
            }
        }
    }
}

fn builtin_rings() -> Vec<FukayaRing> {
    ["hesse", "sklyanin", "quasihomogeneous", "kummer-degenerate", "kummer-generic"]
        .iter()
        .map(|n| FukayaRing::new(torus_mirror::builtin::builtin(n).unwrap(), SeriesParams::default()).unwrap())
        .collect()
}

#[test]
fn associativity_on_builtin_specs() {
    for ring in builtin_rings() {
        let gens: Vec<_> = ring.classes(1).unwrap().iter().map(|cl| ring.class_element(cl).unwrap()).collect();
        for x in &gens {
            for y in &gens {
                let xy = ring.compose(x, y).unwrap();
                for z in &gens {
                    let left = ring.compose(&xy, z).unwrap();
                    let right = ring.compose(x, &ring.compose(y, z).unwrap()).unwrap();
                    assert!(max_diff(left.coeffs(), right.coeffs()) < 1e-9, "{:?}", ring.spec().name());
                }
            }
        }
    }
}

#[test]
fn grading_is_additive() {
    for ring in builtin_rings() {
        let x = ring.basis_element(1, 0).unwrap();
        let y = ring.basis_element(2, 0).unwrap();
        let xy = ring.compose(&x, &y).unwrap();
        assert_eq!(xy.level(), 3);
        assert_eq!(xy.coeffs().len(), ring.classes(3).unwrap().len());
    }
}

#[test]
fn mirror_product_agrees_on_two_dim_specs() {
    let ring = FukayaRing::new(torus_mirror::builtin::builtin("kummer-generic").unwrap().with_involution(false), SeriesParams::default()).unwrap();
    let classes = ring.classes(1).unwrap();
    for a in &classes {
        for b in &classes {
            let direct = ring.compose(&ring.class_element(a).unwrap(), &ring.class_element(b).unwrap()).unwrap();
            let mirror = mirror_compose(&ring, a, b).unwrap();
            assert!(max_diff(direct.coeffs(), mirror.element.coeffs()) < 1e-10);
        }
    }
}
