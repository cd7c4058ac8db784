//! Net intervals, neighbour sets and characteristic vectors.
//!
//! All positions are normalized: a net interval `Δ = [a, b]` of generation `n`
//! is mapped to `[0, ℓ]` by `x ↦ (x − a)/r_min^n`, and a basic interval
//! `S_σ[0,1]` of the same generation becomes the image of `[0,1]` under
//! `x ↦ L x − a_i`. The pair `(a_i, L_i)` is a neighbour.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ifs::{AffineMap, Ifs, Word};
use crate::numberfield::{FieldElement, NumberField};
use crate::transitions::{primitive_matrix, Edge, Node, VectorGraph};

/// Normalized position and signed length of a covering basic interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Neighbour {
    pub a: FieldElement,
    pub l: FieldElement,
}

impl Neighbour {
    fn cmp_key(&self, other: &Neighbour) -> Ordering {
        self.a
            .cmp_value(&other.a)
            .then_with(|| self.l.cmp_value(&other.l))
    }

    /// The normalized map `x ↦ L x − a` whose image of `[0,1]` is this neighbour.
    pub fn map(&self) -> AffineMap {
        AffineMap {
            r: self.l.clone(),
            t: -&self.a,
        }
    }
}

impl fmt::Display for Neighbour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.l)
    }
}

/// Neighbours sorted by `a`, then by the value of `L` (negative first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighbourSet(Vec<Neighbour>);

impl NeighbourSet {
    /// Sorts and deduplicates; panics on an empty set or a zero length.
    pub fn new(mut entries: Vec<Neighbour>) -> NeighbourSet {
        assert!(!entries.is_empty(), "neighbour set must be nonempty");
        assert!(entries.iter().all(|n| !n.l.is_zero()), "neighbour length must be nonzero");
        entries.sort_by(Neighbour::cmp_key);
        entries.dedup();
        NeighbourSet(entries)
    }

    pub fn entries(&self) -> &[Neighbour] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Neighbour> {
        self.0.iter()
    }

    fn position(&self, nb: &Neighbour) -> Option<usize> {
        self.0.iter().position(|x| x == nb)
    }
}

impl fmt::Display for NeighbourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// `(ℓ, V)`: everything the children of a net interval depend on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedVector {
    pub length: FieldElement,
    pub neighbours: NeighbourSet,
}

impl fmt::Display for ReducedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.length, self.neighbours)
    }
}

/// `(ℓ, V, t)` with `t ≥ 1` counting equal reduced siblings from the left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacteristicVector {
    pub length: FieldElement,
    pub neighbours: NeighbourSet,
    pub sibling_index: usize,
}

impl CharacteristicVector {
    pub fn reduced(&self) -> ReducedVector {
        ReducedVector {
            length: self.length.clone(),
            neighbours: self.neighbours.clone(),
        }
    }
}

impl fmt::Display for CharacteristicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.length, self.neighbours, self.sibling_index)
    }
}

/// `(1, ((0, 1)), 1)`, the vector of `[0,1]`.
pub fn root_vector(field: &NumberField) -> CharacteristicVector {
    CharacteristicVector {
        length: field.one(),
        neighbours: NeighbourSet::new(vec![Neighbour {
            a: field.zero(),
            l: field.one(),
        }]),
        sibling_index: 1,
    }
}

/// Extension words linking parent neighbours to child neighbours.
///
/// `words[i][j]` lists every `ω` such that the basic interval of parent
/// neighbour `i` followed by `ω` is child neighbour `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTransition {
    pub words: Vec<Vec<Vec<Word>>>,
}

impl RawTransition {
    pub fn rows(&self) -> usize {
        self.words.len()
    }

    pub fn cols(&self) -> usize {
        self.words.first().map_or(0, Vec::len)
    }
}

/// A child net interval, in left-to-right order.
#[derive(Debug, Clone)]
pub struct Child {
    pub vector: CharacteristicVector,
    /// Left endpoint inside the parent's normalized `[0, ℓ]`.
    pub offset: FieldElement,
    pub transition: Arc<RawTransition>,
}

struct Piece {
    parent: usize,
    word: Word,
    lo: FieldElement,
    hi: FieldElement,
    slope: FieldElement,
    intercept: FieldElement,
}

/// Children of a net interval with characteristic vector `cv`.
pub fn children(ifs: &Ifs, cv: &CharacteristicVector) -> Vec<Child> {
    children_of_reduced(ifs, &cv.reduced())
}

/// Children computed from `(ℓ, V)` alone.
///
/// Every candidate subinterval between consecutive endpoints of the
/// next-generation basic intervals is returned if some basic interval covers
/// it; whether it actually meets the attractor is decided later by
/// [`prune_to_attractor`].
pub fn children_of_reduced(ifs: &Ifs, parent: &ReducedVector) -> Vec<Child> {
    let k = ifs.field();
    let r_min = ifs.r_min();
    let ell = &parent.length;

    let mut by_length: HashMap<FieldElement, Vec<(Word, AffineMap)>> = HashMap::new();
    let mut pieces = Vec::new();
    for (i, nb) in parent.neighbours.iter().enumerate() {
        let abs_l = nb.l.abs();
        let words = by_length.entry(abs_l.clone()).or_insert_with(|| {
            ifs.words_below(&(r_min / &abs_l))
                .into_iter()
                .map(|w| {
                    let m = ifs.compose(&w).expect("letters in range");
                    (w, m)
                })
                .collect()
        });
        for (w, m) in words.iter() {
            let slope = &nb.l * &m.r;
            let intercept = &nb.l * &m.t - &nb.a;
            let end = &intercept + &slope;
            let (lo, hi) = if slope.is_negative() {
                (end, intercept.clone())
            } else {
                (intercept.clone(), end)
            };
            pieces.push(Piece {
                parent: i,
                word: w.clone(),
                lo,
                hi,
                slope,
                intercept,
            });
        }
    }

    let zero = k.zero();
    let mut cuts = vec![zero.clone(), ell.clone()];
    for p in &pieces {
        for e in [&p.lo, &p.hi] {
            if e.is_positive() && e.cmp_value(ell) == Ordering::Less {
                cuts.push(e.clone());
            }
        }
    }
    cuts.sort_by(|x, y| x.cmp_value(y));
    cuts.dedup();

    let rows = parent.neighbours.len();
    let mut out: Vec<Child> = Vec::new();
    let mut seen: HashMap<ReducedVector, usize> = HashMap::new();
    for pair in cuts.windows(2) {
        let (c_lo, c_hi) = (&pair[0], &pair[1]);
        let covering: Vec<&Piece> = pieces
            .iter()
            .filter(|p| p.lo.cmp_value(c_lo) != Ordering::Greater && p.hi.cmp_value(c_hi) != Ordering::Less)
            .collect();
        if covering.is_empty() {
            continue;
        }
        let links: Vec<(Neighbour, usize, &Word)> = covering
            .iter()
            .map(|p| {
                let nb = Neighbour {
                    a: (c_lo - &p.intercept) / r_min,
                    l: &p.slope / r_min,
                };
                (nb, p.parent, &p.word)
            })
            .collect();
        let neighbours = NeighbourSet::new(links.iter().map(|(nb, _, _)| nb.clone()).collect());
        let mut words = vec![vec![Vec::new(); neighbours.len()]; rows];
        for (nb, i, w) in links {
            let j = neighbours.position(&nb).expect("neighbour was inserted");
            words[i][j].push(w.clone());
        }
        let reduced = ReducedVector {
            length: (c_hi - c_lo) / r_min,
            neighbours,
        };
        let count = seen.entry(reduced.clone()).or_insert(0);
        *count += 1;
        out.push(Child {
            vector: CharacteristicVector {
                length: reduced.length,
                neighbours: reduced.neighbours,
                sibling_index: *count,
            },
            offset: c_lo.clone(),
            transition: Arc::new(RawTransition { words }),
        });
    }
    out
}

/// Breadth-first closure of the characteristic vectors reachable from the root.
///
/// Ids follow discovery order, so the root is id 0. Candidates that miss the
/// attractor are still present; see [`prune_to_attractor`].
pub fn build_vector_graph(ifs: &Ifs, max_vectors: usize) -> Result<VectorGraph> {
    let root = root_vector(ifs.field());
    let mut ids: HashMap<CharacteristicVector, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut cache: HashMap<ReducedVector, Arc<Vec<Child>>> = HashMap::new();
    let mut queue = VecDeque::new();
    ids.insert(root.clone(), 0);
    nodes.push(Node { vector: root, edges: Vec::new() });
    queue.push_back(0usize);

    while let Some(id) = queue.pop_front() {
        let reduced = nodes[id].vector.reduced();
        let kids = match cache.get(&reduced) {
            Some(k) => Arc::clone(k),
            None => {
                let k = Arc::new(children_of_reduced(ifs, &reduced));
                cache.insert(reduced, Arc::clone(&k));
                k
            }
        };
        let mut edges = Vec::with_capacity(kids.len());
        for (order, child) in kids.iter().enumerate() {
            let target = match ids.get(&child.vector) {
                Some(&t) => t,
                None => {
                    let t = nodes.len();
                    if t >= max_vectors {
                        nodes[id].edges = edges;
                        let partial = VectorGraph::from_parts(ifs.clone(), nodes)?;
                        return Err(Error::NotFiniteType {
                            limit: max_vectors,
                            partial: Box::new(partial),
                        });
                    }
                    ids.insert(child.vector.clone(), t);
                    nodes.push(Node {
                        vector: child.vector.clone(),
                        edges: Vec::new(),
                    });
                    queue.push_back(t);
                    t
                }
            };
            edges.push(Edge {
                to: target,
                order,
                offset: child.offset.clone(),
                matrix: primitive_matrix(ifs, &child.transition)?,
                raw: Arc::clone(&child.transition),
            });
        }
        nodes[id].edges = edges;
    }
    VectorGraph::from_parts(ifs.clone(), nodes)
}

/// Drops every vector from which no cycle is reachable; ids are renumbered
/// preserving their relative order.
///
/// Such vectors belong to candidate intervals that miss the attractor: their
/// covering basic intervals disappear after finitely many generations.
pub fn prune_to_attractor(graph: &VectorGraph) -> Result<VectorGraph> {
    let n = graph.len();
    let keep = graph.reaches_cycle();
    if keep.iter().all(|&k| k) {
        return Ok(graph.clone());
    }
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for (i, &k) in keep.iter().enumerate() {
        if k {
            remap[i] = next;
            next += 1;
        }
    }
    let mut nodes = Vec::with_capacity(next);
    for (i, node) in graph.nodes().iter().enumerate() {
        if !keep[i] {
            continue;
        }
        let edges = node
            .edges
            .iter()
            .filter(|e| keep[e.to])
            .map(|e| Edge {
                to: remap[e.to],
                ..e.clone()
            })
            .collect();
        nodes.push(Node {
            vector: node.vector.clone(),
            edges,
        });
    }
    if nodes.is_empty() {
        return Err(Error::ModelViolation("the root does not reach any cycle".into()));
    }
    VectorGraph::from_parts(graph.ifs().clone(), nodes)
}

/// Build, prune and decompose in one step.
pub fn analyze(ifs: &Ifs, max_vectors: usize) -> Result<VectorGraph> {
    let raw = build_vector_graph(ifs, max_vectors)?;
    let mut graph = prune_to_attractor(&raw)?;
    graph.decompose()?;
    Ok(graph)
}

/// A net interval of generation `n` with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetIntervalInstance {
    pub generation: usize,
    pub left: FieldElement,
    pub right: FieldElement,
    pub vector: CharacteristicVector,
}

/// The net interval whose symbolic representation is `path` (0-based ids,
/// starting at the root).
///
/// When two children of a vertex share a vector id the leftmost is taken;
/// use [`instantiate_edges`] to pick a specific child.
pub fn instantiate_path(graph: &VectorGraph, path: &[usize]) -> Result<NetIntervalInstance> {
    let orders = graph.edge_orders(path)?;
    instantiate_edges(graph, &orders)
}

/// The net interval reached by taking child number `orders[k]` at step `k`.
pub fn instantiate_edges(graph: &VectorGraph, orders: &[usize]) -> Result<NetIntervalInstance> {
    let r_min = graph.ifs().r_min();
    let mut left = graph.ifs().field().zero();
    let mut scale = graph.ifs().field().one();
    let mut id = 0;
    for (step, &o) in orders.iter().enumerate() {
        let edge = graph.node(id).edges.get(o).ok_or_else(|| {
            Error::InvalidPath(format!("vector {} has no child number {o} (step {step})", id + 1))
        })?;
        left = left + &scale * &edge.offset;
        scale = scale * r_min;
        id = edge.to;
    }
    let vector = graph.node(id).vector.clone();
    let right = &left + &scale * &vector.length;
    Ok(NetIntervalInstance {
        generation: orders.len(),
        left,
        right,
        vector,
    })
}
