//! Local dimensions from transition matrices.
//!
//! `P_n(Δ)` is the 1-norm of the product of transition matrices along the
//! symbolic path of `Δ`. Local dimensions at periodic points come from the
//! spectral radius of the cycle product; the essential class is bracketed
//! with pseudo-norm bounds in [`bracket`].

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::net::{instantiate_path, NetIntervalInstance};
use crate::numberfield::FieldElement;
use crate::transitions::{path_matrix, VectorGraph};

pub mod bracket;
pub mod regularity;
pub mod spectral;

pub use bracket::{essential_bracket, BracketOptions, DimensionBracket};
pub use regularity::{
    generalized_regular_sufficient, regularity_diagnostics, DiagnosticRow, RegularityReport,
    Verdict,
};
pub use spectral::{spectral_radius, spectral_radius_with, SpectralRadius};

/// Default precision for enclosures, overridable with `FINITYPE_PRECISION_BITS`.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

pub fn precision_bits() -> u32 {
    std::env::var("FINITYPE_PRECISION_BITS")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map(|b| b.max(16))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// A closed interval `[lo, hi]` of reals with outward-rounded ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn point(x: f64) -> Bounds {
        Bounds { lo: x, hi: x }
    }

    /// Enclosure of a field element.
    pub fn of(x: &FieldElement, bits: u32) -> Bounds {
        let e = x.to_enclosure(bits);
        Bounds {
            lo: e.lo_f64(),
            hi: e.hi_f64(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Natural log of a positive interval, padded by two ulps each side.
    pub fn ln(&self) -> Bounds {
        Bounds {
            lo: self.lo.ln().next_down().next_down(),
            hi: self.hi.ln().next_up().next_up(),
        }
    }

    pub fn div(&self, other: &Bounds) -> Bounds {
        assert!(other.lo > 0.0 || other.hi < 0.0, "division by an interval containing 0");
        let q = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        Bounds {
            lo: q.iter().cloned().fold(f64::INFINITY, f64::min).next_down(),
            hi: q.iter().cloned().fold(f64::NEG_INFINITY, f64::max).next_up(),
        }
    }

    pub fn scale(&self, k: f64) -> Bounds {
        let (a, b) = (self.lo * k, self.hi * k);
        Bounds {
            lo: a.min(b).next_down(),
            hi: a.max(b).next_up(),
        }
    }

    pub fn min(&self, other: &Bounds) -> Bounds {
        Bounds {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn max(&self, other: &Bounds) -> Bounds {
        Bounds {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// `log x / (k log r_min)` as an enclosure, for `0 < x < 1`-type quantities.
pub(crate) fn log_ratio(x: &Bounds, k: usize, log_r_min: &Bounds) -> Bounds {
    x.ln().div(&log_r_min.scale(k as f64))
}

pub(crate) fn log_r_min(graph: &VectorGraph, bits: u32) -> Bounds {
    Bounds::of(graph.ifs().r_min(), bits).ln()
}

/// `Q_n(Δ)`: the neighbour masses of the net interval with symbolic path `path`.
pub fn q_vector(graph: &VectorGraph, path: &[usize]) -> Result<Vec<FieldElement>> {
    graph.edge_orders(path)?;
    Ok(path_matrix(graph, path)?.row(0).to_vec())
}

/// `P_n(Δ) = ‖Q_n(Δ)‖`.
pub fn pn_of_path(graph: &VectorGraph, path: &[usize]) -> Result<FieldElement> {
    graph.edge_orders(path)?;
    Ok(path_matrix(graph, path)?.norm())
}

/// Both estimates of the local dimension at generation `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDimEstimate {
    pub generation: usize,
    /// `log P_n(Δ) / (n log r_min)`.
    pub single: f64,
    /// Same with `P_n` summed over `Δ` and its adjacent generation-`n` net
    /// intervals (those that exist).
    pub three: f64,
    pub p_n: f64,
    pub p_left: Option<f64>,
    pub p_right: Option<f64>,
}

/// Estimates for the net interval with symbolic path `path` (root first).
pub fn approx_local_dim(graph: &VectorGraph, path: &[usize]) -> Result<LocalDimEstimate> {
    let orders = graph.edge_orders(path)?;
    let n = orders.len();
    if n == 0 {
        return Err(Error::InvalidPath("need a path of generation at least 1".into()));
    }
    let p = pn_of_path(graph, path)?;
    let flank = |dir: Direction| -> Result<Option<f64>> {
        match adjacent(graph, path, &orders, dir) {
            Some(vs) => Ok(Some(pn_of_path(graph, &vs)?.to_f64())),
            None => Ok(None),
        }
    };
    let p_left = flank(Direction::Left)?;
    let p_right = flank(Direction::Right)?;
    let pf = p.to_f64();
    let denom = n as f64 * graph.ifs().r_min().to_f64().ln();
    let total = pf + p_left.unwrap_or(0.0) + p_right.unwrap_or(0.0);
    Ok(LocalDimEstimate {
        generation: n,
        single: pf.ln() / denom,
        three: total.ln() / denom,
        p_n: pf,
        p_left,
        p_right,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Left,
    Right,
}

/// Vertex path of the adjacent net interval of the same generation, found by
/// climbing to the deepest ancestor with a sibling on that side and
/// descending along the nearest children.
fn adjacent(graph: &VectorGraph, path: &[usize], orders: &[usize], dir: Direction) -> Option<Vec<usize>> {
    let n = orders.len();
    let level = (0..n).rev().find(|&k| match dir {
        Direction::Left => orders[k] > 0,
        Direction::Right => orders[k] + 1 < graph.node(path[k]).edges.len(),
    })?;
    let mut out = path[..=level].to_vec();
    let o = match dir {
        Direction::Left => orders[level] - 1,
        Direction::Right => orders[level] + 1,
    };
    out.push(graph.node(path[level]).edges[o].to);
    while out.len() < n + 1 {
        let edges = &graph.node(*out.last().expect("nonempty")).edges;
        let e = match dir {
            Direction::Left => edges.last()?,
            Direction::Right => edges.first()?,
        };
        out.push(e.to);
    }
    Some(out)
}

/// A point whose symbolic representation is `prefix` followed by the cycle
/// repeated forever, with an optional second representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    /// Vertex path from the root ending where the cycle starts.
    pub prefix: Vec<usize>,
    /// Closed path, first vertex equal to the last.
    pub cycle: Vec<usize>,
    pub alternate: Option<(Vec<usize>, Vec<usize>)>,
}

impl PeriodicPoint {
    /// Validates a representation. The prefix may stop either at the cycle's
    /// first vertex or at a parent of it; an empty prefix means the root.
    pub fn new(graph: &VectorGraph, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<PeriodicPoint> {
        let (prefix, cycle) = normalize_representation(graph, prefix, cycle)?;
        Ok(PeriodicPoint {
            prefix,
            cycle,
            alternate: None,
        })
    }

    /// Adds a second representation, checking that both describe the same point.
    pub fn with_alternate(
        mut self,
        graph: &VectorGraph,
        prefix: Vec<usize>,
        cycle: Vec<usize>,
    ) -> Result<PeriodicPoint> {
        let (prefix, cycle) = normalize_representation(graph, prefix, cycle)?;
        let x = periodic_point_value(graph, &self.prefix, &self.cycle)?;
        let y = periodic_point_value(graph, &prefix, &cycle)?;
        if x != y {
            return Err(Error::InvalidPath(format!(
                "the two representations describe different points ({x} and {y})"
            )));
        }
        self.alternate = Some((prefix, cycle));
        Ok(self)
    }

    pub fn cycle_length(&self) -> usize {
        self.cycle.len() - 1
    }

    /// Exact location of the point.
    pub fn value(&self, graph: &VectorGraph) -> Result<FieldElement> {
        periodic_point_value(graph, &self.prefix, &self.cycle)
    }
}

fn normalize_representation(
    graph: &VectorGraph,
    mut prefix: Vec<usize>,
    cycle: Vec<usize>,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if cycle.len() < 2 || cycle.first() != cycle.last() {
        return Err(Error::InvalidPath(
            "cycle must start and end at the same vector".into(),
        ));
    }
    if prefix.is_empty() {
        prefix.push(0);
    }
    let last = *prefix.last().expect("nonempty");
    if last != cycle[0] {
        if graph.edge(last, cycle[0]).is_some() {
            prefix.push(cycle[0]);
        } else {
            return Err(Error::InvalidPath(format!(
                "prefix ends at vector {} which does not lead to the cycle start {}",
                last + 1,
                cycle[0] + 1
            )));
        }
    }
    graph.edge_orders(&prefix)?;
    path_matrix(graph, &cycle)?;
    Ok((prefix, cycle))
}

/// Fixed point of the similarity traced by one turn of the cycle, placed
/// inside the net interval of the prefix.
fn periodic_point_value(graph: &VectorGraph, prefix: &[usize], cycle: &[usize]) -> Result<FieldElement> {
    let inst = instantiate_path(graph, prefix)?;
    let r_min = graph.ifs().r_min();
    let field = graph.ifs().field();
    let mut offset = field.zero();
    let mut scale = field.one();
    for w in cycle.windows(2) {
        let e = graph.edge(w[0], w[1]).expect("validated cycle");
        offset = offset + &scale * &e.offset;
        scale = scale * r_min;
    }
    let fixed = offset / (field.one() - scale);
    Ok(inst.left + r_min.pow(inst.generation as u32) * fixed)
}

/// Local dimension at a periodic point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicDimension {
    pub dimension: Bounds,
    pub spectral_radius: Bounds,
    /// Exact spectral radius when it is available.
    pub exact_spectral_radius: Option<String>,
    pub cycle_length: usize,
    /// Which representation attained the minimum (0 = primary).
    pub representation: usize,
}

/// `log sp(T(θ)) / (β log r_min)`; with two representations the smaller
/// quotient (larger spectral radius) is taken.
pub fn periodic_dim(graph: &VectorGraph, pt: &PeriodicPoint) -> Result<PeriodicDimension> {
    let bits = precision_bits();
    let first = cycle_dimension(graph, &pt.cycle, bits)?;
    match &pt.alternate {
        None => Ok(first),
        Some((_, cycle)) => {
            let mut second = cycle_dimension(graph, cycle, bits)?;
            second.representation = 1;
            if second.dimension.mid() < first.dimension.mid() {
                Ok(PeriodicDimension {
                    dimension: second.dimension.min(&first.dimension),
                    ..second
                })
            } else {
                Ok(PeriodicDimension {
                    dimension: first.dimension.min(&second.dimension),
                    ..first
                })
            }
        }
    }
}

/// Dimension attached to a closed path on its own.
pub fn cycle_dimension(graph: &VectorGraph, cycle: &[usize], bits: u32) -> Result<PeriodicDimension> {
    if cycle.len() < 2 || cycle.first() != cycle.last() {
        return Err(Error::InvalidPath(
            "cycle must start and end at the same vector".into(),
        ));
    }
    let m = path_matrix(graph, cycle)?;
    let sp = spectral_radius_with(&m, spectral::DEFAULT_TOLERANCE, bits)?;
    if sp.bounds.hi <= 0.0 {
        return Err(Error::Unsupported("cycle matrix has spectral radius 0".into()));
    }
    let beta = cycle.len() - 1;
    let lr = log_r_min(graph, bits);
    Ok(PeriodicDimension {
        dimension: log_ratio(&sp.bounds, beta, &lr),
        spectral_radius: sp.bounds,
        exact_spectral_radius: sp.exact.as_ref().map(|e| e.to_string()),
        cycle_length: beta,
        representation: 0,
    })
}

/// Periodic representation and dimension of the endpoint 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointInfo {
    pub point: u8,
    pub representation: PeriodicPoint,
    pub essential: bool,
    pub dimension: PeriodicDimension,
}

/// Follows the leftmost (point 0) or rightmost (point 1) child from the root
/// until a vector repeats.
pub fn endpoint(graph: &VectorGraph, point: u8) -> Result<EndpointInfo> {
    let mut path = vec![0usize];
    loop {
        let cur = *path.last().expect("nonempty");
        let edges = &graph.node(cur).edges;
        let next = if point == 0 { edges.first() } else { edges.last() }
            .ok_or_else(|| Error::ModelViolation(format!("vector {} has no children", cur + 1)))?
            .to;
        if let Some(pos) = path.iter().position(|&v| v == next) {
            let prefix = path[..=pos].to_vec();
            let mut cycle = path[pos..].to_vec();
            cycle.push(next);
            let rep = PeriodicPoint::new(graph, prefix, cycle)?;
            let essential = rep.cycle.iter().all(|&v| graph.is_essential(v));
            let dimension = periodic_dim(graph, &rep)?;
            return Ok(EndpointInfo {
                point,
                representation: rep,
                essential,
                dimension,
            });
        }
        path.push(next);
    }
}

/// One row of the generation-`n` measure table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureRow {
    /// Vertex path from the root.
    pub path: Vec<usize>,
    pub interval: NetIntervalInstance,
    pub q: Vec<FieldElement>,
    pub p_n: FieldElement,
}

/// All net intervals of generation `n`, left to right, with `Q_n` and `P_n`.
pub fn measure_table(graph: &VectorGraph, n: usize) -> Vec<MeasureRow> {
    let field = graph.ifs().field();
    let r_min = graph.ifs().r_min();
    let mut out = Vec::new();
    let mut stack = vec![0usize];
    walk(
        graph,
        n,
        r_min,
        &mut stack,
        field.zero(),
        field.one(),
        vec![field.one()],
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    graph: &VectorGraph,
    n: usize,
    r_min: &FieldElement,
    stack: &mut Vec<usize>,
    left: FieldElement,
    scale: FieldElement,
    q: Vec<FieldElement>,
    out: &mut Vec<MeasureRow>,
) {
    let v = *stack.last().expect("nonempty");
    if stack.len() == n + 1 {
        let vector = graph.vector(v).clone();
        let right = &left + &scale * &vector.length;
        let p_n = q.iter().fold(graph.ifs().field().zero(), |acc, x| acc + x);
        out.push(MeasureRow {
            path: stack.clone(),
            interval: NetIntervalInstance {
                generation: n,
                left,
                right,
                vector,
            },
            q,
            p_n,
        });
        return;
    }
    for e in &graph.node(v).edges {
        let next_q = e.matrix.apply_row(&q).expect("chained dimensions");
        stack.push(e.to);
        walk(
            graph,
            n,
            r_min,
            stack,
            &left + &scale * &e.offset,
            &scale * r_min,
            next_q,
            out,
        );
        stack.pop();
    }
}

/// Comparison of `P_n` with the mass of the explicit density of the
/// reflected golden system with `p₀ = r²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub generation: usize,
    pub intervals: usize,
    /// `max_Δ |P_n(Δ) − ∫_Δ f| / ∫_Δ f`.
    pub max_relative_deviation: f64,
    /// `Σ_Δ |P_n(Δ) − ∫_Δ f|`.
    pub total_deviation: f64,
    /// `Σ_Δ P_n(Δ)`.
    pub total_pn: f64,
}

/// Cumulative distribution of `f(x) = 2x/r` on `[0, r]`, `2(1 − x)/r²` on `[r, 1]`.
pub fn sr_density_cdf(x: &FieldElement) -> FieldElement {
    let field = x.field();
    let r = field.generator();
    let r2 = &r * &r;
    if x.cmp_value(&r) != Ordering::Greater {
        x * x / &r
    } else {
        let two = field.integer(2);
        &r + (two * (x - &r) - (x * x - &r2)) / r2
    }
}

pub fn density_check_sr(graph: &VectorGraph, n: usize) -> Result<DensityReport> {
    let ifs = graph.ifs();
    let golden = catalog::golden_sr_absolutely_continuous();
    let same = ifs.field().minpoly() == golden.field().minpoly()
        && ifs.field().isolation() == golden.field().isolation()
        && ifs.maps() == golden.maps()
        && ifs.probs() == golden.probs();
    if !same {
        return Err(Error::Unsupported(
            "the density check applies only to S₀(x) = rx, R₁(x) = 1 − rx over r² + r − 1 = 0 with p₀ = r²".into(),
        ));
    }
    let rows = measure_table(graph, n);
    let mut max_rel: f64 = 0.0;
    let mut total = ifs.field().zero();
    let mut total_pn = ifs.field().zero();
    for row in &rows {
        let mass = sr_density_cdf(&row.interval.right) - sr_density_cdf(&row.interval.left);
        let dev = (&row.p_n - &mass).abs();
        max_rel = max_rel.max((&dev / &mass).to_f64());
        total = total + &dev;
        total_pn = total_pn + &row.p_n;
    }
    Ok(DensityReport {
        generation: n,
        intervals: rows.len(),
        max_relative_deviation: max_rel,
        total_deviation: total.to_f64(),
        total_pn: total_pn.to_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::analyze;

    #[test]
    fn bounds_arithmetic() {
        let a = Bounds { lo: -2.0, hi: -1.0 };
        let b = Bounds { lo: -4.0, hi: -2.0 };
        let q = a.div(&b);
        assert!(q.lo < 0.25 && q.hi > 1.0);
        assert!(Bounds::point(1.0).ln().contains(0.0));
    }

    #[test]
    fn golden_ss_periodic_points() {
        let g = analyze(&catalog::golden_ss_ratio(2, 5), 100).unwrap();
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let zero = PeriodicPoint::new(&g, vec![0], vec![1, 1]).unwrap();
        assert!(zero.value(&g).unwrap().is_zero());
        let d = periodic_dim(&g, &zero).unwrap();
        assert!(d.dimension.contains(0.4f64.ln() / r.ln()));
        assert!(d.dimension.width() < 1e-12);
        let one = endpoint(&g, 1).unwrap();
        assert!(one.representation.value(&g).unwrap().is_one());
        assert!(!one.essential);
        assert!(one.dimension.dimension.contains(0.6f64.ln() / r.ln()));
        let bad = PeriodicPoint::new(&g, vec![0], vec![4, 6]);
        assert!(matches!(bad, Err(Error::InvalidPath(_))));
    }

    #[test]
    fn density_cdf_endpoints() {
        let k = crate::numberfield::NumberField::golden();
        let r = k.generator();
        assert!(sr_density_cdf(&k.one()).is_one());
        assert_eq!(sr_density_cdf(&r), r);
        assert!(sr_density_cdf(&k.zero()).is_zero());
    }
}
