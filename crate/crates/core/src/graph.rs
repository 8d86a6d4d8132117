//! Directed graph storage and the structural queries shared by every
//! algorithm in the crate.
//!
//! Vertices are dense ids `0..n`. Both adjacency directions are stored in
//! compressed-row form; neighbor lists are sorted by id, and the edge list is
//! sorted lexicographically, so every traversal is deterministic.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts of input edges discarded while building a [`DiGraph`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DropStats {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl DropStats {
    pub fn total(&self) -> usize {
        self.duplicates + self.self_loops
    }
}

/// Immutable simple directed graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

impl DiGraph {
    /// Builds a graph from an arbitrary edge list, collapsing multi-edges
    /// and dropping self-loops.
    pub fn build(n: usize, edge_list: &[(usize, usize)]) -> Result<(Self, DropStats)> {
        let mut stats = DropStats::default();
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                return Err(Error::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        stats.duplicates = before - edges.len();
        Ok((Self::from_sorted_unique(n, edges), stats))
    }

    pub fn from_edges(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edge_list).map(|(g, _)| g)
    }

    fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            out_offsets[u + 1] += 1;
            in_offsets[v + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut out_targets = vec![0usize; edges.len()];
        let mut in_sources = vec![0usize; edges.len()];
        let mut out_fill = out_offsets.clone();
        let mut in_fill = in_offsets.clone();
        // Edges are sorted by (u, v), so both lists come out sorted by id.
        for &(u, v) in &edges {
            out_targets[out_fill[u]] = v;
            out_fill[u] += 1;
            in_sources[in_fill[v]] = u;
            in_fill[v] += 1;
        }
        Self {
            n,
            edges,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted lexicographically by `(source, target)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Undirected degree, counting each incident directed edge once.
    pub fn degree(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.out_degree(v)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.in_degree(v)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// `d_v = out_deg(v) - in_deg(v)`. For every `x`,
    /// `sum over edges (x_u - x_v) == d . x`.
    pub fn degree_difference_vector(&self) -> Vec<f64> {
        (0..self.n)
            .map(|v| self.out_degree(v) as f64 - self.in_degree(v) as f64)
            .collect()
    }

    /// Components under undirected reachability. Each component is sorted,
    /// and components are ordered by their smallest vertex.
    pub fn weakly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if label[root] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![root];
            label[root] = id;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &w in self.out_neighbors(v).iter().chain(self.in_neighbors(v)) {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weakly_connected_components().len() <= 1
    }

    /// A topological order by Kahn's algorithm with smallest-id-first
    /// tie-breaking, or `None` when the graph has a cycle.
    pub fn kahn_order(&self) -> Option<Vec<usize>> {
        let mut indeg = self.in_degrees();
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..self.n)
            .filter(|&v| indeg[v] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(std::cmp::Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in self.out_neighbors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.kahn_order().is_some()
    }

    /// True iff `ord` covers this graph and every edge points forward.
    pub fn validate_toporder(&self, ord: &TopologicalOrder) -> bool {
        ord.len() == self.n
            && self
                .edges
                .iter()
                .all(|&(u, v)| ord.position(u) < ord.position(v))
    }

    /// Subgraph induced by `vertices`; local id `i` corresponds to
    /// `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (DiGraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &v in vertices {
            for &w in self.out_neighbors(v) {
                if local[w] != usize::MAX {
                    edges.push((local[v], local[w]));
                }
            }
        }
        edges.sort_unstable();
        (
            DiGraph::from_sorted_unique(vertices.len(), edges),
            vertices.to_vec(),
        )
    }
}

/// Part label of a vertex in a [`BiPartition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    S,
    T,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::S => Side::T,
            Side::T => Side::S,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::S => "S",
            Side::T => "T",
        }
    }
}

/// Edge counts of a bi-partition, split by the parts of both endpoints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CutCounts {
    /// Edges `S -> T`.
    pub forward: usize,
    /// Edges `T -> S`.
    pub backward: usize,
    pub internal_s: usize,
    pub internal_t: usize,
}

impl CutCounts {
    pub fn cut(&self) -> usize {
        self.forward + self.backward
    }
}

/// Two-way vertex assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPartition {
    labels: Vec<Side>,
    size_s: usize,
}

impl BiPartition {
    pub fn from_labels(labels: Vec<Side>) -> Self {
        let size_s = labels.iter().filter(|&&s| s == Side::S).count();
        Self { labels, size_s }
    }

    /// Partition of `0..n` with the given vertices in `S`.
    pub fn from_s_set(n: usize, s: &[usize]) -> Result<Self> {
        let mut labels = vec![Side::T; n];
        for &v in s {
            if v >= n {
                return Err(Error::DimensionMismatch { expected: n, got: v + 1 });
            }
            labels[v] = Side::S;
        }
        Ok(Self::from_labels(labels))
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Side] {
        &self.labels
    }

    pub fn side(&self, v: usize) -> Side {
        self.labels[v]
    }

    pub fn size_s(&self) -> usize {
        self.size_s
    }

    pub fn size_t(&self) -> usize {
        self.labels.len() - self.size_s
    }

    pub fn s_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.labels[v] == Side::S).collect()
    }

    pub fn t_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.labels[v] == Side::T).collect()
    }

    /// The same split with the two labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            labels: self.labels.iter().map(|s| s.other()).collect(),
            size_s: self.size_t(),
        }
    }

    pub fn cut_counts(&self, g: &DiGraph) -> CutCounts {
        let mut counts = CutCounts::default();
        for &(u, v) in g.edges() {
            match (self.labels[u], self.labels[v]) {
                (Side::S, Side::T) => counts.forward += 1,
                (Side::T, Side::S) => counts.backward += 1,
                (Side::S, Side::S) => counts.internal_s += 1,
                (Side::T, Side::T) => counts.internal_t += 1,
            }
        }
        counts
    }

    /// Swaps the labels if fewer edges go `S -> T` than `T -> S`.
    pub fn oriented_forward(self, g: &DiGraph) -> Self {
        let counts = self.cut_counts(g);
        if counts.forward < counts.backward {
            self.swapped()
        } else {
            self
        }
    }
}

/// Bijection between vertices and positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologicalOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl TopologicalOrder {
    /// `sequence[i]` is the vertex placed at position `i`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in sequence.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::NotAPermutation { n });
            }
            position[v] = i;
        }
        Ok(Self { sequence, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// `sigma(v)`.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }
}
