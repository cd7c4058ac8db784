//! Independent reference computations shared by the integration tests.
//!
//! Net intervals and neighbour masses are recomputed here straight from the
//! definitions: enumerate the words of generation `n`, collect the endpoints
//! of their basic intervals, and sum probabilities of the basic intervals
//! covering each gap. Nothing here goes through the vector graph.

#![allow(dead_code)]

use std::cmp::Ordering;

use finitype::numberfield::{FieldElement, NumberField};
use finitype::{catalog, AffineMap, Ifs};

/// The four worked systems with their default probabilities.
pub fn worked_systems() -> Vec<(&'static str, Ifs)> {
    vec![
        ("golden SS", catalog::golden_ss_ratio(2, 5)),
        ("golden SR", catalog::golden_sr_ratio(2, 5)),
        ("three-map", catalog::exreg_ratio(3, 10)),
        ("N=3", catalog::n_map_example(3, 1, Vec::new())),
    ]
}

/// A word of generation `n` with its composed map and probability.
pub struct BasicInterval {
    pub map: AffineMap,
    pub prob: FieldElement,
}

/// Words `σ` with `|r_σ| ≤ r_min^n < |r_{σ⁻}|`, found by depth-first extension.
pub fn generation(ifs: &Ifs, n: u32) -> Vec<BasicInterval> {
    let k = ifs.field();
    let bound = ifs.r_min().pow(n);
    let mut out = Vec::new();
    let mut stack = vec![(AffineMap::identity(k), k.one())];
    while let Some((map, prob)) = stack.pop() {
        if map.r.abs().cmp_value(&bound) != Ordering::Greater {
            out.push(BasicInterval { map, prob });
            continue;
        }
        for (j, s) in ifs.maps().iter().enumerate() {
            stack.push((map.compose(s), &prob * &ifs.probs()[j]));
        }
    }
    out
}

/// A gap between consecutive basic-interval endpoints, with the masses of
/// the basic intervals covering it keyed by their normalized position.
pub struct OracleInterval {
    pub left: FieldElement,
    pub right: FieldElement,
    /// `((a, L), mass)`: the covering interval is `y ↦ L·y − a` in coordinates
    /// where the gap starts at 0 and `r_min^n` has length 1.
    pub neighbours: Vec<((FieldElement, FieldElement), FieldElement)>,
}

/// Exact comparison with a floating point shortcut when the values are far apart.
fn cmp_fast(a: &FieldElement, fa: f64, b: &FieldElement, fb: f64) -> Ordering {
    if (fa - fb).abs() > 1e-9 {
        fa.partial_cmp(&fb).expect("finite")
    } else {
        a.cmp_value(b)
    }
}

/// Net intervals of generation `n` for a system whose attractor is `[0,1]`.
pub fn net_intervals(ifs: &Ifs, n: u32) -> Vec<OracleInterval> {
    let basics = generation(ifs, n);
    let scale = ifs.r_min().pow(n);
    let spans: Vec<(FieldElement, FieldElement, f64, f64)> = basics
        .iter()
        .map(|b| {
            let (lo, hi) = image(&b.map);
            let (flo, fhi) = (lo.to_f64(), hi.to_f64());
            (lo, hi, flo, fhi)
        })
        .collect();
    let mut points: Vec<(FieldElement, f64)> = Vec::new();
    for (lo, hi, flo, fhi) in &spans {
        points.push((lo.clone(), *flo));
        points.push((hi.clone(), *fhi));
    }
    points.sort_by(|(a, fa), (b, fb)| cmp_fast(a, *fa, b, *fb));
    points.dedup_by(|x, y| x.0 == y.0);
    let mut out = Vec::new();
    for w in points.windows(2) {
        let ((left, fl), (right, fr)) = (w[0].clone(), w[1].clone());
        let mut neighbours: Vec<((FieldElement, FieldElement), FieldElement)> = Vec::new();
        for (b, (lo, hi, flo, fhi)) in basics.iter().zip(&spans) {
            if cmp_fast(lo, *flo, &left, fl).is_gt() || cmp_fast(hi, *fhi, &right, fr).is_lt() {
                continue;
            }
            let key = ((&left - &b.map.t) / &scale, &b.map.r / &scale);
            match neighbours.iter_mut().find(|(k, _)| *k == key) {
                Some((_, m)) => *m = &*m + &b.prob,
                None => neighbours.push((key, b.prob.clone())),
            }
        }
        assert!(!neighbours.is_empty(), "gap [{left}, {right}] is not covered");
        out.push(OracleInterval {
            left,
            right,
            neighbours,
        });
    }
    out
}

fn image(m: &AffineMap) -> (FieldElement, FieldElement) {
    let k = m.r.field();
    let (a, b) = (m.apply(&k.zero()), m.apply(&k.one()));
    if a.cmp_value(&b).is_le() {
        (a, b)
    } else {
        (b, a)
    }
}

/// `log x / log y`.
pub fn log_quotient(x: f64, y: f64) -> f64 {
    x.ln() / y.ln()
}

pub fn golden_r() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

pub fn golden() -> NumberField {
    NumberField::golden()
}

/// Compares the library's generation-`n` measure table with the oracle:
/// same breakpoints, same neighbour positions, same masses.
pub fn check_generation(graph: &finitype::VectorGraph, n: usize) -> Result<usize, String> {
    let oracle = net_intervals(graph.ifs(), n as u32);
    let table = finitype::dimension::measure_table(graph, n);
    if oracle.len() != table.len() {
        return Err(format!(
            "generation {n}: oracle has {} net intervals, library {}",
            oracle.len(),
            table.len()
        ));
    }
    for (k, (o, row)) in oracle.iter().zip(&table).enumerate() {
        if o.left != row.interval.left || o.right != row.interval.right {
            return Err(format!(
                "generation {n}, interval {k}: oracle [{}, {}], library [{}, {}]",
                o.left, o.right, row.interval.left, row.interval.right
            ));
        }
        let nbs = row.interval.vector.neighbours.entries();
        if nbs.len() != o.neighbours.len() {
            return Err(format!("generation {n}, interval {k}: neighbour counts differ"));
        }
        for (nb, q) in nbs.iter().zip(&row.q) {
            let key = (nb.a.clone(), nb.l.clone());
            match o.neighbours.iter().find(|(kk, _)| *kk == key) {
                Some((_, mass)) if mass == q => {}
                Some((_, mass)) => {
                    return Err(format!(
                        "generation {n}, interval {k}, neighbour ({}, {}): oracle mass {mass}, library {q}",
                        nb.a, nb.l
                    ))
                }
                None => {
                    return Err(format!(
                        "generation {n}, interval {k}: neighbour ({}, {}) unknown to the oracle",
                        nb.a, nb.l
                    ))
                }
            }
        }
    }
    Ok(table.len())
}
