//! Transition matrices and the graph of characteristic vectors.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::ifs::Ifs;
use crate::net::{CharacteristicVector, RawTransition, ReducedVector};
use crate::numberfield::{FieldElement, NumberField};

/// A nonnegative matrix over the field, stored row-major.
///
/// Rows index neighbours of the parent, columns neighbours of the child, so
/// mass vectors propagate as row vectors: `Q_n = Q_{n−1} T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl TransitionMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElement>) -> TransitionMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows × cols");
        TransitionMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> TransitionMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        TransitionMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(field: &NumberField, n: usize) -> TransitionMatrix {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        TransitionMatrix::new(n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn try_mul(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left_cols: self.cols,
                right_rows: other.rows,
            });
        }
        let field = self.entries[0].field();
        let mut out = vec![field.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cell = &mut out[i * other.cols + j];
                        *cell = &*cell + &(a * b);
                    }
                }
            }
        }
        Ok(TransitionMatrix::new(self.rows, other.cols, out))
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                left_cols: v.len(),
                right_rows: self.rows,
            });
        }
        let field = self.entries[0].field();
        let mut out = vec![field.zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, cell) in out.iter_mut().enumerate() {
                let m = self.get(i, j);
                if !m.is_zero() {
                    *cell = &*cell + &(x * m);
                }
            }
        }
        Ok(out)
    }

    /// `‖M‖ = Σ |M_ij|`; entries are nonnegative so this is the plain sum.
    pub fn norm(&self) -> FieldElement {
        let field = self.entries[0].field();
        self.entries.iter().fold(field.zero(), |acc, x| acc + x)
    }

    pub fn row_sums(&self) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|i| {
                let field = self.entries[0].field();
                self.row(i).iter().fold(field.zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn col_sums(&self) -> Vec<FieldElement> {
        let field = self.entries[0].field();
        (0..self.cols)
            .map(|j| (0..self.rows).fold(field.zero(), |acc, i| acc + self.get(i, j)))
            .collect()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(FieldElement::is_positive)
    }

    pub fn has_nonzero_columns(&self) -> bool {
        (0..self.cols).all(|j| (0..self.rows).any(|i| !self.get(i, j).is_zero()))
    }

    /// Zero pattern, `true` where the entry is nonzero.
    pub fn pattern(&self) -> Pattern {
        Pattern {
            rows: self.rows,
            cols: self.cols,
            bits: self.entries.iter().map(|x| !x.is_zero()).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(FieldElement::to_f64).collect())
            .collect()
    }

    /// Upper triangular or lower triangular (including 1×1).
    pub fn is_triangular(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let upper = (0..n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()));
        let lower = (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j).is_zero()));
        upper || lower
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Boolean zero pattern of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Pattern {
    pub fn mul(&self, other: &Pattern) -> Pattern {
        debug_assert_eq!(self.cols, other.rows);
        let mut bits = vec![false; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.bits[i * self.cols + k] {
                    for j in 0..other.cols {
                        if other.bits[k * other.cols + j] {
                            bits[i * other.cols + j] = true;
                        }
                    }
                }
            }
        }
        Pattern {
            rows: self.rows,
            cols: other.cols,
            bits,
        }
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }
}

/// `T_ij = Σ p_ω` over the extension words linking parent neighbour `i` to
/// child neighbour `j`.
pub fn primitive_matrix(ifs: &Ifs, raw: &RawTransition) -> Result<TransitionMatrix> {
    let field = ifs.field();
    let mut entries = Vec::with_capacity(raw.rows() * raw.cols());
    for row in &raw.words {
        for words in row {
            let sum = words
                .iter()
                .fold(field.zero(), |acc, w| acc + ifs.word_probability(w));
            entries.push(sum);
        }
    }
    let m = TransitionMatrix::new(raw.rows(), raw.cols(), entries);
    if !m.has_nonzero_columns() {
        return Err(Error::ModelViolation(format!(
            "primitive matrix with a zero column: {m}"
        )));
    }
    Ok(m)
}

/// Edge from a vector to one of its children.
#[derive(Debug, Clone)]
pub struct Edge {
    pub to: usize,
    /// Position among the parent's children, left to right.
    pub order: usize,
    /// Child's left endpoint in the parent's normalized coordinates.
    pub offset: FieldElement,
    pub matrix: TransitionMatrix,
    pub raw: Arc<RawTransition>,
}

#[derive(Debug, Clone)]
pub struct Node {
    pub vector: CharacteristicVector,
    pub edges: Vec<Edge>,
}

/// A strongly connected component of the vector graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopClass {
    /// Ids in increasing order.
    pub members: Vec<usize>,
    /// Contains at least one cycle (more than one vertex, or a self-loop).
    pub cyclic: bool,
    /// No edge leaves the class.
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Sorted by smallest member id.
    pub classes: Vec<LoopClass>,
    /// Index into `classes` of the unique terminal class.
    pub essential: usize,
}

/// Outcome of the bounded search for a positive path product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositiveType {
    Positive(Vec<usize>),
    Unknown,
}

/// Characteristic vectors as nodes, children as edges; ids are 0-based and
/// displayed 1-based.
#[derive(Debug, Clone)]
pub struct VectorGraph {
    ifs: Ifs,
    nodes: Vec<Node>,
    decomposition: Option<Decomposition>,
}

impl VectorGraph {
    pub(crate) fn from_parts(ifs: Ifs, nodes: Vec<Node>) -> Result<VectorGraph> {
        Ok(VectorGraph {
            ifs,
            nodes,
            decomposition: None,
        })
    }

    pub fn ifs(&self) -> &Ifs {
        &self.ifs
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn vector(&self, id: usize) -> &CharacteristicVector {
        &self.nodes[id].vector
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Child ids in left-to-right order.
    pub fn children(&self, id: usize) -> Vec<usize> {
        self.nodes[id].edges.iter().map(|e| e.to).collect()
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&Edge> {
        self.nodes.get(from)?.edges.iter().find(|e| e.to == to)
    }

    /// Positions of the edges followed by a vertex path starting at the root.
    pub fn edge_orders(&self, path: &[usize]) -> Result<Vec<usize>> {
        match path.first() {
            None => return Err(Error::InvalidPath("empty path".into())),
            Some(&0) => {}
            Some(&v) => {
                return Err(Error::InvalidPath(format!(
                    "path starts at vector {} instead of the root",
                    v + 1
                )))
            }
        }
        self.check_path(path)?;
        Ok(path
            .windows(2)
            .map(|w| self.edge(w[0], w[1]).expect("checked").order)
            .collect())
    }

    fn check_path(&self, path: &[usize]) -> Result<()> {
        if path.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        if let Some(&bad) = path.iter().find(|&&v| v >= self.len()) {
            return Err(Error::InvalidPath(format!("no vector {}", bad + 1)));
        }
        for w in path.windows(2) {
            if self.edge(w[0], w[1]).is_none() {
                return Err(Error::InvalidPath(format!(
                    "vector {} is not a child of vector {}",
                    w[1] + 1,
                    w[0] + 1
                )));
            }
        }
        Ok(())
    }

    /// Same maps and graph, new probabilities; matrices are recomputed.
    pub fn with_probabilities(&self, probs: Vec<FieldElement>) -> Result<VectorGraph> {
        let ifs = self.ifs.with_probabilities(probs)?;
        let mut nodes = self.nodes.clone();
        for node in &mut nodes {
            for e in &mut node.edges {
                e.matrix = primitive_matrix(&ifs, &e.raw)?;
            }
        }
        Ok(VectorGraph {
            ifs,
            nodes,
            decomposition: self.decomposition.clone(),
        })
    }

    /// Index of the reduced vector of each node, numbered by first appearance.
    pub fn reduced_labels(&self) -> Vec<usize> {
        let mut seen: HashMap<ReducedVector, usize> = HashMap::new();
        self.nodes
            .iter()
            .map(|n| {
                let next = seen.len();
                *seen.entry(n.vector.reduced()).or_insert(next)
            })
            .collect()
    }

    pub fn reduced_count(&self) -> usize {
        self.reduced_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    fn petgraph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.len(), 0);
        for _ in 0..self.len() {
            g.add_node(());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for e in &n.edges {
                g.add_edge(NodeIndex::new(i), NodeIndex::new(e.to), ());
            }
        }
        g
    }

    /// Strongly connected components, each with sorted members, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&self.petgraph())
            .into_iter()
            .map(|c| {
                let mut m: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
                m.sort_unstable();
                m
            })
            .collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// `keep[v]` is true iff some cycle is reachable from `v`.
    pub(crate) fn reaches_cycle(&self) -> Vec<bool> {
        let mut keep = vec![false; self.len()];
        let mut queue = VecDeque::new();
        for comp in self.components() {
            let cyclic = comp.len() > 1 || self.edge(comp[0], comp[0]).is_some();
            if cyclic {
                for v in comp {
                    keep[v] = true;
                    queue.push_back(v);
                }
            }
        }
        let mut parents = vec![Vec::new(); self.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for e in &n.edges {
                parents[e.to].push(i);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &p in &parents[v] {
                if !keep[p] {
                    keep[p] = true;
                    queue.push_back(p);
                }
            }
        }
        keep
    }

    /// Splits the graph into loop classes and locates the unique terminal
    /// (essential) class.
    pub fn decompose(&mut self) -> Result<&Decomposition> {
        let comps = self.components();
        let mut class_of = vec![0; self.len()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                class_of[v] = c;
            }
        }
        let classes: Vec<LoopClass> = comps
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                let cyclic = members.len() > 1 || self.edge(members[0], members[0]).is_some();
                let terminal = members
                    .iter()
                    .all(|&v| self.nodes[v].edges.iter().all(|e| class_of[e.to] == c));
                LoopClass {
                    members,
                    cyclic,
                    terminal,
                }
            })
            .collect();
        let terminal: Vec<usize> = (0..classes.len()).filter(|&c| classes[c].terminal).collect();
        if terminal.len() != 1 {
            let listing: Vec<String> = terminal
                .iter()
                .map(|&c| format!("{:?}", labels(&classes[c].members)))
                .collect();
            return Err(Error::ModelViolation(format!(
                "expected exactly one terminal loop class, found {}: {}",
                terminal.len(),
                listing.join(", ")
            )));
        }
        self.decomposition = Some(Decomposition {
            classes,
            essential: terminal[0],
        });
        Ok(self.decomposition.as_ref().expect("just set"))
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.decomposition.as_ref()
    }

    fn require_decomposition(&self) -> Result<&Decomposition> {
        self.decomposition
            .as_ref()
            .ok_or_else(|| Error::Unsupported("graph has not been decomposed".into()))
    }

    /// Members of the essential class.
    pub fn essential_class(&self) -> Result<&[usize]> {
        let d = self.require_decomposition()?;
        Ok(&d.classes[d.essential].members)
    }

    pub fn is_essential(&self, id: usize) -> bool {
        self.essential_class().is_ok_and(|c| c.binary_search(&id).is_ok())
    }

    /// Breadth-first search over zero patterns of path products inside a
    /// class, for a path whose product is entrywise positive.
    pub fn is_positive_type(&self, class: &[usize], max_path_len: usize) -> PositiveType {
        let inside: HashSet<usize> = class.iter().copied().collect();
        if max_path_len == 0 || class.is_empty() {
            return PositiveType::Unknown;
        }
        // state: (end vertex, pattern); parent pointers rebuild the witness
        let mut states: Vec<(usize, Pattern, Option<usize>, usize)> = Vec::new();
        let mut seen: HashSet<(usize, Pattern)> = HashSet::new();
        let mut queue = VecDeque::new();
        for &u in class {
            for e in &self.nodes[u].edges {
                if !inside.contains(&e.to) {
                    continue;
                }
                let pat = e.matrix.pattern();
                if seen.insert((e.to, pat.clone())) {
                    let start = states.len();
                    states.push((u, TransitionMatrix::identity(self.ifs.field(), 1).pattern(), None, 0));
                    states.push((e.to, pat, Some(start), 1));
                    queue.push_back(states.len() - 1);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            let (end, pat, _, len) = states[s].clone();
            if pat.is_full() {
                let mut path = Vec::new();
                let mut cur = Some(s);
                while let Some(c) = cur {
                    path.push(states[c].0);
                    cur = states[c].2;
                }
                path.reverse();
                return PositiveType::Positive(path);
            }
            if len >= max_path_len {
                continue;
            }
            for e in &self.nodes[end].edges {
                if !inside.contains(&e.to) {
                    continue;
                }
                let next = pat.mul(&e.matrix.pattern());
                if seen.insert((e.to, next.clone())) {
                    states.push((e.to, next, Some(s), len + 1));
                    queue.push_back(states.len() - 1);
                }
            }
        }
        PositiveType::Unknown
    }

    /// Graphviz rendering: node label `id:(ℓ,|V|,t)`, edge label the matrix
    /// dimensions, essential vectors drawn doubled and filled.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph vectors {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let v = &n.vector;
            let style = if self.is_essential(i) {
                ", shape=doublecircle, style=filled, fillcolor=lightgrey"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  v{} [label=\"{}:({},{},{})\"{}];",
                i + 1,
                i + 1,
                v.length,
                v.neighbours.len(),
                v.sibling_index,
                style
            );
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for e in &n.edges {
                let _ = writeln!(
                    out,
                    "  v{} -> v{} [label=\"{}x{}\"];",
                    i + 1,
                    e.to + 1,
                    e.matrix.rows(),
                    e.matrix.cols()
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// 1-based labels for display.
pub fn labels(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i + 1).collect()
}

/// `T(γ₀,γ₁)···T(γ_{n−1},γ_n)`; a single vertex gives the identity.
pub fn path_matrix(graph: &VectorGraph, path: &[usize]) -> Result<TransitionMatrix> {
    graph.check_path(path)?;
    let field = graph.ifs().field();
    let mut acc: Option<TransitionMatrix> = None;
    for w in path.windows(2) {
        let m = &graph.edge(w[0], w[1]).expect("checked").matrix;
        acc = Some(match acc {
            None => m.clone(),
            Some(a) => a.try_mul(m)?,
        });
    }
    Ok(acc.unwrap_or_else(|| {
        TransitionMatrix::identity(field, graph.vector(path[0]).neighbours.len())
    }))
}
