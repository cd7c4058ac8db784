//! Bounds for the interval of local dimensions on the essential class.
//!
//! Every cycle in the essential class factors into generator loops, so
//! submultiplicativity of the maximal row/column sum and supermultiplicativity
//! of the minimal row/column sum give outer bounds `a_lo`, `b_hi`. Sampling
//! concrete cycles gives inner bounds `a_hi`, `b_lo`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{cycle_dimension, log_r_min, log_ratio, precision_bits, spectral, Bounds};
use crate::error::{Error, Result};
use crate::numberfield::FieldElement;
use crate::transitions::{path_matrix, PositiveType, TransitionMatrix, VectorGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketOptions {
    /// Longest closed walk sampled for the inner bounds.
    pub max_cycle_len: usize,
    /// Cap on the number of sampled closed walks.
    pub max_walks: usize,
    /// Longest path tried when looking for a positive product.
    pub positive_search_len: usize,
    pub precision_bits: u32,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            max_cycle_len: 8,
            max_walks: 200_000,
            positive_search_len: 64,
            precision_bits: precision_bits(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumVariant {
    Row,
    Column,
}

/// The generator and pseudo-norm variant that produced an outer bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormWitness {
    pub generator: Vec<usize>,
    pub variant: SumVariant,
}

/// `a_lo ≤ a ≤ a_hi` and `b_lo ≤ b ≤ b_hi` for the essential interval `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionBracket {
    pub a_lo: Bounds,
    pub a_hi: Bounds,
    pub b_lo: Bounds,
    pub b_hi: Bounds,
    pub a_lo_witness: NormWitness,
    pub b_hi_witness: NormWitness,
    /// Cycle attaining `a_hi`.
    pub a_hi_witness: Vec<usize>,
    /// Cycle attaining `b_lo`.
    pub b_lo_witness: Vec<usize>,
    /// Loops (or single edges) every cycle of the class factors into.
    pub generators: Vec<Vec<usize>>,
    /// Vertex whose removal leaves the class acyclic, if one was found.
    pub feedback_vertex: Option<usize>,
    pub positive_witness: Vec<usize>,
    pub cycle_length_used: usize,
    pub cycles_sampled: usize,
    /// True when the sampled bounds do not nest as `a_lo ≤ a_hi ≤ b_lo ≤ b_hi`.
    pub degenerate: bool,
}

/// Brackets `[a, b]` for the essential class of a decomposed graph.
pub fn essential_bracket(graph: &VectorGraph, opts: &BracketOptions) -> Result<DimensionBracket> {
    if opts.max_cycle_len == 0 {
        return Err(Error::Unsupported("max_cycle_len must be at least 1".into()));
    }
    let class = graph.essential_class()?.to_vec();
    let positive_witness = match graph.is_positive_type(&class, opts.positive_search_len) {
        PositiveType::Positive(p) => p,
        PositiveType::Unknown => {
            return Err(Error::NotPositiveType {
                max_len: opts.positive_search_len,
            })
        }
    };
    let bits = opts.precision_bits;
    let lr = log_r_min(graph, bits);
    let inside: HashSet<usize> = class.iter().copied().collect();

    let feedback_vertex = class
        .iter()
        .copied()
        .find(|&v| is_acyclic_without(graph, &class, v));
    let generators = match feedback_vertex.and_then(|v| first_return_loops(graph, &inside, v, 10_000)) {
        Some(loops) => loops,
        None => class
            .iter()
            .flat_map(|&u| {
                graph
                    .node(u)
                    .edges
                    .iter()
                    .filter(|e| inside.contains(&e.to))
                    .map(move |e| vec![u, e.to])
            })
            .collect(),
    };
    let gen_mats: Vec<TransitionMatrix> = generators
        .iter()
        .map(|g| path_matrix(graph, g))
        .collect::<Result<_>>()?;

    let mut a_lo: Option<(Bounds, NormWitness)> = None;
    let mut b_hi: Option<(Bounds, NormWitness)> = None;
    for variant in [SumVariant::Row, SumVariant::Column] {
        // a_lo for this variant: smallest generator quotient of the max sum
        let mut lo_best: Option<(Bounds, usize)> = None;
        // b_hi for this variant: largest generator quotient of the min sum
        let mut hi_best: Option<(Bounds, usize)> = None;
        for (gi, (g, m)) in generators.iter().zip(&gen_mats).enumerate() {
            let sums = match variant {
                SumVariant::Row => m.row_sums(),
                SumVariant::Column => m.col_sums(),
            };
            let max = sums.iter().cloned().reduce(FieldElement::max_value).expect("nonempty");
            let min = sums.iter().cloned().reduce(FieldElement::min_value).expect("nonempty");
            let len = g.len() - 1;
            let q_max = log_ratio(&Bounds::of(&max, bits), len, &lr);
            if lo_best.as_ref().is_none_or(|(b, _)| q_max.mid() < b.mid()) {
                lo_best = Some((q_max, gi));
            }
            if min.is_zero() {
                // a zero sum gives no finite upper bound for this variant
                hi_best = Some((Bounds::point(f64::INFINITY), gi));
                continue;
            }
            let q_min = log_ratio(&Bounds::of(&min, bits), len, &lr);
            if hi_best.as_ref().is_none_or(|(b, _)| b.mid().is_finite() && q_min.mid() > b.mid()) {
                hi_best = Some((q_min, gi));
            }
        }
        let (lb, lg) = lo_best.expect("at least one generator");
        if a_lo.as_ref().is_none_or(|(b, _)| lb.mid() > b.mid()) {
            a_lo = Some((
                lb,
                NormWitness {
                    generator: generators[lg].clone(),
                    variant,
                },
            ));
        }
        let (hb, hg) = hi_best.expect("at least one generator");
        if b_hi.as_ref().is_none_or(|(b, _)| hb.mid() < b.mid()) {
            b_hi = Some((
                hb,
                NormWitness {
                    generator: generators[hg].clone(),
                    variant,
                },
            ));
        }
    }
    let (a_lo, a_lo_witness) = a_lo.expect("two variants");
    let (b_hi, b_hi_witness) = b_hi.expect("two variants");

    // inner bounds from sampled cycles, ranked in floating point
    let mut candidates: Vec<Vec<usize>> = simple_cycles(graph, &class, &inside, opts.max_walks);
    let base = feedback_vertex.unwrap_or(class[0]);
    candidates.extend(closed_walks(graph, &inside, base, opts.max_cycle_len, opts.max_walks));
    let log_rm = graph.ifs().r_min().to_f64().ln();
    let f64_edges = |u: usize, v: usize| graph.edge(u, v).expect("edge in class").matrix.to_f64();
    let mut best_min: Option<(f64, usize)> = None;
    let mut best_max: Option<(f64, usize)> = None;
    for (ci, c) in candidates.iter().enumerate() {
        let mut prod = f64_edges(c[0], c[1]);
        for w in c[1..].windows(2) {
            prod = mat_mul(&prod, &f64_edges(w[0], w[1]));
        }
        let sp = spectral::spectral_radius_estimate(&prod);
        if sp <= 0.0 {
            continue;
        }
        let d = sp.ln() / ((c.len() - 1) as f64 * log_rm);
        if best_min.is_none_or(|(x, _)| d < x) {
            best_min = Some((d, ci));
        }
        if best_max.is_none_or(|(x, _)| d > x) {
            best_max = Some((d, ci));
        }
    }
    let (_, imin) = best_min.ok_or_else(|| Error::ModelViolation("essential class without cycles".into()))?;
    let (_, imax) = best_max.expect("set together with the minimum");
    let a_hi = cycle_dimension(graph, &candidates[imin], bits)?.dimension;
    let b_lo = cycle_dimension(graph, &candidates[imax], bits)?.dimension;
    let slack = 1e-9;
    let degenerate = a_lo.lo > a_hi.hi + slack || a_hi.lo > b_lo.hi + slack || b_lo.lo > b_hi.hi + slack;
    Ok(DimensionBracket {
        a_lo,
        a_hi,
        b_lo,
        b_hi,
        a_lo_witness,
        b_hi_witness,
        a_hi_witness: candidates[imin].clone(),
        b_lo_witness: candidates[imax].clone(),
        generators,
        feedback_vertex,
        positive_witness,
        cycle_length_used: opts.max_cycle_len,
        cycles_sampled: candidates.len(),
        degenerate,
    })
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Whether the class minus `v` has no cycle (self-loops count as cycles).
fn is_acyclic_without(graph: &VectorGraph, class: &[usize], v: usize) -> bool {
    let rest: HashSet<usize> = class.iter().copied().filter(|&u| u != v).collect();
    let mut indeg: std::collections::HashMap<usize, usize> = rest.iter().map(|&u| (u, 0)).collect();
    for &u in &rest {
        for e in &graph.node(u).edges {
            if rest.contains(&e.to) {
                *indeg.get_mut(&e.to).expect("in rest") += 1;
            }
        }
    }
    let mut ready: Vec<usize> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&u, _)| u).collect();
    let mut removed = 0;
    while let Some(u) = ready.pop() {
        removed += 1;
        for e in &graph.node(u).edges {
            if let Some(d) = indeg.get_mut(&e.to) {
                *d -= 1;
                if *d == 0 {
                    ready.push(e.to);
                }
            }
        }
    }
    removed == rest.len()
}

/// Closed paths leaving `v` and returning to it for the first time, in
/// depth-first order of children; `None` if there are more than `cap`.
fn first_return_loops(
    graph: &VectorGraph,
    inside: &HashSet<usize>,
    v: usize,
    cap: usize,
) -> Option<Vec<Vec<usize>>> {
    fn go(
        graph: &VectorGraph,
        inside: &HashSet<usize>,
        v: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        let u = *path.last().expect("nonempty");
        for e in &graph.node(u).edges {
            if !inside.contains(&e.to) {
                continue;
            }
            path.push(e.to);
            if e.to == v {
                out.push(path.clone());
                if out.len() > cap {
                    return false;
                }
            } else if !go(graph, inside, v, path, out, cap) {
                return false;
            }
            path.pop();
        }
        true
    }
    let mut out = Vec::new();
    let mut path = vec![v];
    go(graph, inside, v, &mut path, &mut out, cap).then_some(out)
}

/// Simple cycles of the class, each listed once starting at its smallest
/// vertex; at most `cap` of them.
pub fn simple_cycles(
    graph: &VectorGraph,
    class: &[usize],
    inside: &HashSet<usize>,
    cap: usize,
) -> Vec<Vec<usize>> {
    fn go(
        graph: &VectorGraph,
        inside: &HashSet<usize>,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut HashSet<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        let u = *path.last().expect("nonempty");
        for e in &graph.node(u).edges {
            if out.len() >= cap {
                return;
            }
            let w = e.to;
            if !inside.contains(&w) || w < start {
                continue;
            }
            if w == start {
                let mut c = path.clone();
                c.push(start);
                out.push(c);
            } else if on_path.insert(w) {
                path.push(w);
                go(graph, inside, start, path, on_path, out, cap);
                path.pop();
                on_path.remove(&w);
            }
        }
    }
    let mut out = Vec::new();
    for &s in class {
        let mut path = vec![s];
        let mut on_path: HashSet<usize> = [s].into_iter().collect();
        go(graph, inside, s, &mut path, &mut on_path, &mut out, cap);
        if out.len() >= cap {
            break;
        }
    }
    out
}

/// Closed walks at `base` of length at most `max_len` inside the class.
pub fn closed_walks(
    graph: &VectorGraph,
    inside: &HashSet<usize>,
    base: usize,
    max_len: usize,
    cap: usize,
) -> Vec<Vec<usize>> {
    fn go(
        graph: &VectorGraph,
        inside: &HashSet<usize>,
        base: usize,
        max_len: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        if path.len() > max_len {
            return;
        }
        let u = *path.last().expect("nonempty");
        for e in &graph.node(u).edges {
            if out.len() >= cap {
                return;
            }
            if !inside.contains(&e.to) {
                continue;
            }
            path.push(e.to);
            if e.to == base {
                out.push(path.clone());
            }
            go(graph, inside, base, max_len, path, out, cap);
            path.pop();
        }
    }
    let mut out = Vec::new();
    let mut path = vec![base];
    go(graph, inside, base, max_len, &mut path, &mut out, cap);
    out
}
