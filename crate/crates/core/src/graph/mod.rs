//! Finite metric trees, root branches, and rooted-subtree enumeration.

mod parse;
mod subset;
mod subtrees;
mod timespec;

use std::collections::HashMap;

pub use parse::parse_edge_list;
pub use subset::EdgeSubset;
pub use subtrees::{rooted_subtrees, rooted_subtrees_within};
pub use timespec::{rational_independence, Independence, TimeSpec};

use crate::error::{Error, Result};

/// Vertex index, assigned in order of first appearance in the edge list.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: Vertex,
    pub b: Vertex,
    pub time: TimeSpec,
}

impl Edge {
    /// The endpoint of this edge that is not `v`.
    pub fn other(&self, v: Vertex) -> Vertex {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// A finite tree whose edges carry propagation times.
///
/// Edge indices follow input order and are never renumbered; they fix bit
/// positions in [`EdgeSubset`] and the order of the time basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTree {
    labels: Vec<String>,
    index: HashMap<String, Vertex>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl MetricTree {
    /// A tree with one vertex and no edges.
    pub fn single_vertex(label: impl Into<String>) -> Self {
        let label = label.into();
        MetricTree {
            index: HashMap::from([(label.clone(), 0)]),
            labels: vec![label],
            edges: Vec::new(),
            adjacency: vec![Vec::new()],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Incident edge indices of `v`, ascending.
    pub fn incident(&self, v: Vertex) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.time.value()).collect()
    }

    pub fn time_specs(&self) -> Vec<TimeSpec> {
        self.edges.iter().map(|e| e.time.clone()).collect()
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.edge_count())
    }

    /// Serializes back to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|e| format!("{} {} {}\n", self.labels[e.a], self.labels[e.b], e.time)).collect()
    }
}

/// Builds a metric tree from `(label, label, time)` triples.
///
/// A pair repeated in the same orientation is a `DuplicateEdge`; the reversed
/// pair or a self-loop closes a cycle.
pub fn build_tree<S: AsRef<str>>(edge_list: impl IntoIterator<Item = (S, S, TimeSpec)>) -> Result<MetricTree> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, Vertex> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> Vertex {
        *index.entry(s.to_string()).or_insert_with(|| {
            labels.push(s.to_string());
            labels.len() - 1
        })
    };
    for (a, b, time) in edge_list {
        let a = intern(a.as_ref(), &mut labels);
        let b = intern(b.as_ref(), &mut labels);
        if time.value() <= 0.0 {
            return Err(Error::NonPositiveTime(time.to_string()));
        }
        edges.push(Edge { a, b, time });
    }
    if edges.is_empty() {
        return Err(Error::PreconditionViolated("edge list is empty".into()));
    }
    if edges.len() > EdgeSubset::MAX_EDGES {
        return Err(Error::PreconditionViolated(format!(
            "{} edges exceed the supported maximum of {}",
            edges.len(),
            EdgeSubset::MAX_EDGES
        )));
    }

    for (i, e) in edges.iter().enumerate() {
        if edges[..i].iter().any(|f| f.a == e.a && f.b == e.b) {
            return Err(Error::DuplicateEdge { a: labels[e.a].clone(), b: labels[e.b].clone() });
        }
    }

    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, e) in edges.iter().enumerate() {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra == rb {
            return Err(Error::CycleDetected { edge: i, a: labels[e.a].clone(), b: labels[e.b].clone() });
        }
        parent[ra] = rb;
    }
    let components = (0..labels.len()).filter(|&v| find(&mut parent, v) == v).count();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }

    let mut adjacency = vec![Vec::new(); labels.len()];
    for (i, e) in edges.iter().enumerate() {
        adjacency[e.a].push(i);
        adjacency[e.b].push(i);
    }
    let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    Ok(MetricTree { labels, index, edges, adjacency })
}

/// The maximal subtree reachable from `root` through one incident edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub root: Vertex,
    pub gateway: usize,
    pub edges: EdgeSubset,
}

/// Splits the tree at `root` into one branch per incident edge, in
/// ascending gateway-edge order.
pub fn branch_decomposition(tree: &MetricTree, root: Vertex) -> Result<Vec<Branch>> {
    tree.check_vertex(root)?;
    Ok(tree
        .incident(root)
        .iter()
        .map(|&gateway| {
            let mut edges = EdgeSubset::EMPTY.with(gateway);
            let mut stack = vec![(tree.edge(gateway).other(root), gateway)];
            while let Some((v, via)) = stack.pop() {
                for &e in tree.incident(v) {
                    if e != via {
                        edges = edges.with(e);
                        stack.push((tree.edge(e).other(v), e));
                    }
                }
            }
            Branch { root, gateway, edges }
        })
        .collect())
}

/// Vertex labels used by [`make_h_junction`].
pub mod h_labels {
    pub const A: &str = "A";
    pub const B: &str = "B";
}

/// The H-junction: inner vertices `A` (edges e1, e2, e3) and `B` (edges e3,
/// e4, e5) joined by the jumper e3, with leaves `L1`, `L2`, `L4`, `L5`.
pub fn make_h_junction(times: [TimeSpec; 5]) -> Result<MetricTree> {
    let [t1, t2, t3, t4, t5] = times;
    build_tree([("A", "L1", t1), ("A", "L2", t2), ("A", "B", t3), ("B", "L4", t4), ("B", "L5", t5)])
}

/// Returns a tree with the same topology where edge `i` carries the time
/// formerly on edge `perm[i]`.
pub fn permute_edge_times(tree: &MetricTree, perm: &[usize]) -> Result<MetricTree> {
    let n = tree.edge_count();
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!("length {} for {} edges", perm.len(), n)));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection on 0..{n}")));
        }
    }
    let mut out = tree.clone();
    for (i, e) in out.edges.iter_mut().enumerate() {
        e.time = tree.edges[perm[i]].time.clone();
    }
    Ok(out)
}

/// The transposition of edges `i` and `j` as a permutation of `0..n`.
pub fn transposition(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    if i < n && j < n {
        p.swap(i, j);
    } else {
        // out-of-range indices surface as an invalid permutation
        p.push(i.max(j));
    }
    p
}
