//! Generalized regularity: the sign-case sufficient condition and the
//! edge-path / transition-ratio diagnostics behind `B(n)`.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{precision_bits, Bounds};
use crate::error::{Error, Result};
use crate::ifs::{Ifs, Word};
use crate::net::{Neighbour, ReducedVector};
use crate::numberfield::FieldElement;
use crate::transitions::VectorGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    SufficientConditionHolds,
    SufficientConditionFails,
    Inapplicable,
}

/// `log p_a / log |r_a|` compared against `log p_b / log |r_b|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioComparison {
    pub left: usize,
    pub right: usize,
    /// `"="` or `">="`.
    pub relation: String,
    /// `Some(true/false)` when decided, `None` when the enclosures overlap.
    pub satisfied: Option<bool>,
    /// True when decided by exact comparison of `p_a^b` and `p_j^c`.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub verdict: Verdict,
    /// 1: both extreme slopes positive, 2: opposite signs, 3: both negative.
    pub case: Option<u8>,
    /// Map containing 0 and map containing 1 in its image of `[0,1]`.
    pub extreme_maps: Option<(usize, usize)>,
    /// `log p_j / log |r_j|` for every map.
    pub ratios: Vec<Bounds>,
    pub comparisons: Vec<RatioComparison>,
    pub note: String,
}

const FAILURE_NOTE: &str = "the condition is only sufficient: its failure does not show that the measure is not generalized regular";

/// Checks the sufficient condition for generalized regularity based on the
/// maps whose images contain the endpoints 0 and 1.
pub fn generalized_regular_sufficient(ifs: &Ifs) -> RegularityReport {
    let bits = precision_bits();
    let ratios: Vec<Bounds> = (0..ifs.len())
        .map(|j| {
            let lp = Bounds::of(&ifs.probs()[j], bits).ln();
            let lr = Bounds::of(ifs.abs_ratio(j), bits).ln();
            lp.div(&lr)
        })
        .collect();
    let images: Vec<(FieldElement, FieldElement)> = ifs.maps().iter().map(|m| m.image_of_unit()).collect();
    let at_zero: Vec<usize> = (0..ifs.len()).filter(|&j| images[j].0.is_zero()).collect();
    let at_one: Vec<usize> = (0..ifs.len()).filter(|&j| images[j].1.is_one()).collect();
    let inapplicable = |note: String| RegularityReport {
        verdict: Verdict::Inapplicable,
        case: None,
        extreme_maps: None,
        ratios: ratios.clone(),
        comparisons: Vec::new(),
        note,
    };
    if at_zero.len() != 1 || at_one.len() != 1 || at_zero[0] == at_one[0] {
        return inapplicable(
            "needs exactly one map whose image contains 0, a different single map whose image contains 1, and no other map touching 0 or 1".into(),
        );
    }
    let (j0, jk) = (at_zero[0], at_one[0]);
    let pos0 = ifs.maps()[j0].r.is_positive();
    let posk = ifs.maps()[jk].r.is_positive();
    let others: Vec<usize> = (0..ifs.len()).filter(|&j| j != j0 && j != jk).collect();
    let mut comparisons = Vec::new();
    let case = match (pos0, posk) {
        (true, true) | (false, false) => {
            comparisons.push(compare(ifs, &ratios, j0, jk, true));
            for &j in &others {
                comparisons.push(compare(ifs, &ratios, j0, j, false));
            }
            if pos0 {
                1
            } else {
                3
            }
        }
        _ => {
            // the extreme map with positive slope must dominate every map
            let lead = if posk { jk } else { j0 };
            for j in 0..ifs.len() {
                if j != lead {
                    comparisons.push(compare(ifs, &ratios, lead, j, false));
                }
            }
            2
        }
    };
    let verdict = if comparisons.iter().any(|c| c.satisfied == Some(false)) {
        Verdict::SufficientConditionFails
    } else if comparisons.iter().all(|c| c.satisfied == Some(true)) {
        Verdict::SufficientConditionHolds
    } else {
        Verdict::Inapplicable
    };
    let note = match verdict {
        Verdict::SufficientConditionHolds => "the measure is generalized regular".to_string(),
        Verdict::SufficientConditionFails => FAILURE_NOTE.to_string(),
        Verdict::Inapplicable => {
            "some comparison could not be decided: the enclosures of the ratios overlap".to_string()
        }
    };
    RegularityReport {
        verdict,
        case: Some(case),
        extreme_maps: Some((j0, jk)),
        ratios,
        comparisons,
        note,
    }
}

/// `ratio_a = ratio_b` (when `equal`) or `ratio_a ≥ ratio_b`.
fn compare(ifs: &Ifs, ratios: &[Bounds], a: usize, b: usize, equal: bool) -> RatioComparison {
    let relation = if equal { "=" } else { ">=" }.to_string();
    // |r_a|^x = |r_b|^y turns the comparison into one between p_a^x and p_b^y:
    // ratio_a ≥ ratio_b  ⟺  p_a^x ≤ p_b^y
    if let Some((x, y)) = power_relation(ifs.abs_ratio(a), ifs.abs_ratio(b), 64) {
        let pa = ifs.probs()[a].pow(x);
        let pb = ifs.probs()[b].pow(y);
        let ord = pa.cmp_value(&pb);
        let satisfied = if equal { ord == Ordering::Equal } else { ord != Ordering::Greater };
        return RatioComparison {
            left: a,
            right: b,
            relation,
            satisfied: Some(satisfied),
            exact: true,
        };
    }
    let (ra, rb) = (ratios[a], ratios[b]);
    let satisfied = if equal {
        if ra.hi < rb.lo || rb.hi < ra.lo {
            Some(false)
        } else {
            None
        }
    } else if ra.lo >= rb.hi {
        Some(true)
    } else if ra.hi < rb.lo {
        Some(false)
    } else {
        None
    };
    RatioComparison {
        left: a,
        right: b,
        relation,
        satisfied,
        exact: false,
    }
}

/// Smallest `(x, y)` with `x, y ≤ bound` and `u^x = v^y`.
fn power_relation(u: &FieldElement, v: &FieldElement, bound: u32) -> Option<(u32, u32)> {
    if u == v {
        return Some((1, 1));
    }
    let (lu, lv) = (u.to_f64().ln(), v.to_f64().ln());
    for total in 2..=2 * bound {
        for x in 1..total.min(bound + 1) {
            let y = total - x;
            if y > bound {
                continue;
            }
            if (x as f64 * lu - y as f64 * lv).abs() > 1e-9 * (1.0 + (x as f64 * lu).abs()) {
                continue;
            }
            if u.pow(x) == v.pow(y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// One row of the `B(n)` diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub n: usize,
    /// `max_Δ Γ_{Δ,n}`, exact.
    pub gamma_max: String,
    pub gamma_max_f64: f64,
    /// Smallest observed `P_{m+n}(Δ′)/P_m(Δ)`; an upper bound on `R_n`.
    pub r_hat: String,
    pub r_hat_f64: f64,
    /// `Γ_max(n) / R̂_n`; a lower bound on `B(n)`.
    pub b_hat: f64,
    /// `min_i p_i^n`, which `R_n` always dominates.
    pub min_p_pow: String,
    /// Whether `R̂_n ≥ min_i p_i^n` held exactly.
    pub r_hat_dominates: bool,
    /// Whether the ratio search hit its cap before covering every pair.
    pub truncated: bool,
}

/// Cap on `(Δ, Δ′)` pairs examined per `n`.
const RATIO_PAIR_CAP: usize = 200_000;

/// Exact `Γ_max(n)` and the one-sided estimates `R̂_n`, `B̂(n)` for
/// `n = 1..=n_max`, using ancestors of generation `m = 1..=m_max`.
pub fn regularity_diagnostics(graph: &VectorGraph, n_max: usize, m_max: usize) -> Result<Vec<DiagnosticRow>> {
    if n_max == 0 || m_max == 0 {
        return Err(Error::Unsupported("n_max and m_max must be at least 1".into()));
    }
    let ifs = graph.ifs();
    let reduced: Vec<ReducedVector> = {
        let mut seen = HashSet::new();
        graph
            .nodes()
            .iter()
            .map(|n| n.vector.reduced())
            .filter(|r| seen.insert(r.clone()))
            .collect()
    };
    let p_min = ifs
        .probs()
        .iter()
        .cloned()
        .reduce(FieldElement::min_value)
        .expect("nonempty");
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut gamma_max = ifs.field().zero();
        for rv in &reduced {
            let g = gamma(ifs, rv, n as u32);
            if g.cmp_value(&gamma_max) == Ordering::Greater {
                gamma_max = g;
            }
        }
        let (r_hat, truncated) = min_transition_ratio(graph, n, m_max);
        let min_p_pow = p_min.pow(n as u32);
        let b_hat = (&gamma_max / &r_hat).to_f64();
        rows.push(DiagnosticRow {
            n,
            gamma_max_f64: gamma_max.to_f64(),
            gamma_max: gamma_max.to_string(),
            r_hat_f64: r_hat.to_f64(),
            r_hat_dominates: r_hat.cmp_value(&min_p_pow) != Ordering::Less,
            r_hat: r_hat.to_string(),
            b_hat,
            min_p_pow: min_p_pow.to_string(),
            truncated,
        });
    }
    Ok(rows)
}

/// `Γ_{Δ,n}`: total probability of the distinct edge paths of generation `n`
/// of a net interval with reduced vector `rv`.
pub fn gamma(ifs: &Ifs, rv: &ReducedVector, n: u32) -> FieldElement {
    let mut words: HashSet<Word> = HashSet::new();
    for nb in rv.neighbours.iter() {
        let (lo, hi) = nb.map().image_of_unit();
        if lo.is_zero() {
            edge_words(ifs, nb, n, Side::Left, &mut words);
        }
        if hi == rv.length {
            edge_words(ifs, nb, n, Side::Right, &mut words);
        }
    }
    words
        .iter()
        .fold(ifs.field().zero(), |acc, w| acc + ifs.word_probability(w))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Words `ω` of generation `n` relative to the neighbour, with
/// `|L||r_ω| ≤ r_min^n < |L||r_{ω⁻}|`, keeping the neighbour's endpoint on `side`.
fn edge_words(ifs: &Ifs, nb: &Neighbour, n: u32, side: Side, out: &mut HashSet<Word>) {
    let bound = ifs.r_min().pow(n) / nb.l.abs();
    // In the neighbour's own coordinates the kept endpoint is 0 or 1
    // depending on the orientation of x ↦ Lx − a.
    let keep_zero = (side == Side::Left) == nb.l.is_positive();
    let mut stack: Vec<(Vec<usize>, crate::ifs::AffineMap, FieldElement)> =
        vec![(Vec::new(), crate::ifs::AffineMap::identity(ifs.field()), ifs.field().one())];
    let one = ifs.field().one();
    while let Some((letters, map, ratio)) = stack.pop() {
        for j in 0..ifs.len() {
            let next = map.compose(&ifs.maps()[j]);
            let (lo, hi) = next.image_of_unit();
            let ok = if keep_zero { lo.is_zero() } else { hi == one };
            if !ok {
                continue;
            }
            let next_ratio = &ratio * ifs.abs_ratio(j);
            let mut w = letters.clone();
            w.push(j);
            if next_ratio.cmp_value(&bound) == Ordering::Greater {
                stack.push((w, next, next_ratio));
            } else {
                out.insert(Word(w));
            }
        }
    }
}

/// Smallest `P_{m+n}(Δ′)/P_m(Δ)` over `Δ` of generation `m ≤ m_max` and
/// descendants `Δ′` `n` generations down. Pairs whose normalized mass vector
/// and vertex repeat are examined once.
fn min_transition_ratio(graph: &VectorGraph, n: usize, m_max: usize) -> (FieldElement, bool) {
    let field = graph.ifs().field();
    let mut best: Option<FieldElement> = None;
    let mut budget = RATIO_PAIR_CAP;
    let mut truncated = false;
    let mut frontier: Vec<(usize, Vec<FieldElement>)> = vec![(0, vec![field.one()])];
    let mut seen: HashMap<(usize, Vec<FieldElement>), ()> = HashMap::new();
    for _m in 1..=m_max {
        let mut next = Vec::new();
        for (v, q) in &frontier {
            for e in &graph.node(*v).edges {
                let q2 = e.matrix.apply_row(q).expect("chained dimensions");
                let norm = q2.iter().fold(field.zero(), |acc, x| acc + x);
                let normalized: Vec<FieldElement> = q2.iter().map(|x| x / &norm).collect();
                if seen.insert((e.to, normalized.clone()), ()).is_none() {
                    next.push((e.to, normalized));
                }
            }
        }
        for (v, q) in &next {
            // q has norm 1, so the ratio is the norm of the descendant vector
            descend(graph, *v, q.clone(), n, &mut best, &mut budget, &mut truncated);
        }
        frontier = next;
    }
    (best.unwrap_or_else(|| field.one()), truncated)
}

fn descend(
    graph: &VectorGraph,
    v: usize,
    q: Vec<FieldElement>,
    depth: usize,
    best: &mut Option<FieldElement>,
    budget: &mut usize,
    truncated: &mut bool,
) {
    if *budget == 0 {
        *truncated = true;
        return;
    }
    if depth == 0 {
        *budget -= 1;
        let field = graph.ifs().field();
        let norm = q.iter().fold(field.zero(), |acc, x| acc + x);
        if best.as_ref().is_none_or(|b| norm.cmp_value(b) == Ordering::Less) {
            *best = Some(norm);
        }
        return;
    }
    for e in &graph.node(v).edges {
        let q2 = e.matrix.apply_row(&q).expect("chained dimensions");
        descend(graph, e.to, q2, depth - 1, best, budget, truncated);
    }
}
