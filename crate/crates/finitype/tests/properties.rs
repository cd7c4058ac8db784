mod common;

use std::collections::HashSet;

use finitype::dimension::bracket::closed_walks;
use finitype::dimension::{cycle_dimension, precision_bits, spectral_radius, Bounds};
use finitype::net::analyze;
use finitype::numberfield::{FieldElement, NumberField};
use finitype::transitions::path_matrix;
use finitype::{catalog, AffineMap, TransitionMatrix, VectorGraph};
use proptest::prelude::*;

fn golden_element() -> impl Strategy<Value = FieldElement> {
    (-20i64..=20, 1i64..=7, -20i64..=20, 1i64..=7).prop_map(|(a, b, c, d)| {
        let k = NumberField::golden();
        k.ratio(a, b) + k.ratio(c, d) * k.generator()
    })
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

proptest! {
    #[test]
    fn field_axioms(a in golden_element(), b in golden_element(), c in golden_element()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
        let diff = (&a - &b).to_f64();
        if diff.abs() > 1e-9 {
            prop_assert_eq!(a.cmp_value(&b) as i8, sign(diff));
        }
        let e = a.to_enclosure(precision_bits());
        prop_assert!(e.lo_f64() <= a.to_f64() + 1e-12 && a.to_f64() - 1e-12 <= e.hi_f64());
    }

    #[test]
    fn composition_is_associative(
        r in proptest::collection::vec(golden_element(), 3),
        t in proptest::collection::vec(golden_element(), 3),
        x in golden_element(),
    ) {
        let m: Vec<AffineMap> = r.into_iter().zip(t).map(|(r, t)| AffineMap { r, t }).collect();
        let left = m[0].compose(&m[1]).compose(&m[2]);
        let right = m[0].compose(&m[1].compose(&m[2]));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.apply(&x), m[0].apply(&m[1].apply(&m[2].apply(&x))));
    }
}

fn essential_walks(graph: &VectorGraph, max_len: usize) -> Vec<Vec<usize>> {
    let class = graph.essential_class().unwrap().to_vec();
    let inside: HashSet<usize> = class.iter().copied().collect();
    let mut out = Vec::new();
    for &v in &class {
        out.extend(closed_walks(graph, &inside, v, max_len, 10_000));
    }
    out
}

fn graphs() -> Vec<VectorGraph> {
    vec![
        analyze(&catalog::golden_ss_ratio(2, 5), 1000).unwrap(),
        analyze(&catalog::golden_sr_ratio(2, 5), 1000).unwrap(),
        analyze(&catalog::exreg_ratio(3, 10), 1000).unwrap(),
    ]
}

fn rotate(cycle: &[usize], k: usize) -> Vec<usize> {
    let body = &cycle[..cycle.len() - 1];
    let mut out: Vec<usize> = body[k..].iter().chain(&body[..k]).copied().collect();
    out.push(out[0]);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_dimension_ignores_rotation_and_repetition(which in 0usize..3, pick in 0usize..10_000, shift in 0usize..8) {
        let g = &graphs()[which];
        let walks = essential_walks(g, 6);
        let cycle = &walks[pick % walks.len()];
        let bits = precision_bits();
        let base = cycle_dimension(g, cycle, bits).unwrap().dimension;
        let rotated = rotate(cycle, shift % (cycle.len() - 1));
        let rot = cycle_dimension(g, &rotated, bits).unwrap().dimension;
        prop_assert!((base.mid() - rot.mid()).abs() < 1e-10);
        let mut twice = cycle.clone();
        twice.extend_from_slice(&cycle[1..]);
        let rep = cycle_dimension(g, &twice, bits).unwrap().dimension;
        prop_assert!((base.mid() - rep.mid()).abs() < 1e-10);
    }

    #[test]
    fn spectral_radius_between_column_and_row_sums(which in 0usize..3, pick in 0usize..10_000) {
        let g = &graphs()[which];
        let walks = essential_walks(g, 6);
        let m = path_matrix(g, &walks[pick % walks.len()]).unwrap();
        check_sandwich(&m)?;
    }
}

fn check_sandwich(m: &TransitionMatrix) -> Result<(), TestCaseError> {
    let sp = spectral_radius(m).unwrap().bounds;
    let bits = precision_bits();
    for sums in [m.col_sums(), m.row_sums()] {
        let lo = sums.iter().map(|s| Bounds::of(s, bits).lo).fold(f64::INFINITY, f64::min);
        let hi = sums.iter().map(|s| Bounds::of(s, bits).hi).fold(0.0, f64::max);
        prop_assert!(lo <= sp.hi && sp.lo <= hi, "sums [{lo}, {hi}] vs sp [{}, {}]", sp.lo, sp.hi);
    }
    Ok(())
}
