//! Locality measures of a topological order: edge lengths, bisection cuts,
//! and reuse distances of the access pattern of a sparse triangular solve.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DiGraph, TopologicalOrder};

/// A sorted multiset of non-negative integers with cached summaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    values: Vec<u64>,
    sum: u64,
}

impl Distribution {
    pub fn new(mut values: Vec<u64>) -> Self {
        values.sort_unstable();
        let sum = values.iter().sum();
        Self { values, sum }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.sum
    }

    /// 0 when empty.
    pub fn max(&self) -> u64 {
        self.values.last().copied().unwrap_or(0)
    }

    /// Lower middle element; 0 when empty.
    pub fn median(&self) -> u64 {
        if self.values.is_empty() {
            0
        } else {
            self.values[(self.values.len() - 1) / 2]
        }
    }

    /// `metric,value` rows, one per element.
    pub fn write_csv<W: std::io::Write>(&self, metric: &str, mut w: W) -> std::io::Result<()> {
        writeln!(w, "metric,value")?;
        for v in &self.values {
            writeln!(w, "{metric},{v}")?;
        }
        Ok(())
    }
}

fn check_order(g: &DiGraph, ord: &TopologicalOrder) -> Result<()> {
    if ord.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: ord.len(),
        });
    }
    if !g.validate_toporder(ord) {
        return Err(Error::InvalidOrder);
    }
    Ok(())
}

/// Edge lengths `sigma(v) - sigma(u)`; bandwidth is the max, MLA the sum.
pub fn edge_length_distribution(g: &DiGraph, ord: &TopologicalOrder) -> Result<Distribution> {
    check_order(g, ord)?;
    Ok(Distribution::new(
        g.edges()
            .iter()
            .map(|&(u, v)| (ord.position(v) - ord.position(u)) as u64)
            .collect(),
    ))
}

/// Memory accesses of a row-oriented triangular solve: for each vertex in
/// order, its in-neighbours by position, then the vertex itself.
pub fn access_pattern(g: &DiGraph, ord: &TopologicalOrder) -> Result<Vec<usize>> {
    check_order(g, ord)?;
    let mut out = Vec::with_capacity(g.n() + g.num_edges());
    let mut parents = Vec::new();
    for &v in ord.sequence() {
        parents.clear();
        parents.extend_from_slice(g.in_neighbors(v));
        parents.sort_unstable_by_key(|&u| ord.position(u));
        out.extend_from_slice(&parents);
        out.push(v);
    }
    Ok(out)
}

/// Fenwick tree over access positions.
struct Fenwick(Vec<i64>);

impl Fenwick {
    fn add(&mut self, mut i: usize, delta: i64) {
        i += 1;
        while i < self.0.len() {
            self.0[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over positions `< i`.
    fn prefix(&self, mut i: usize) -> i64 {
        let mut acc = 0;
        while i > 0 {
            acc += self.0[i];
            i &= i - 1;
        }
        acc
    }
}

/// For every repeated access, the number of distinct values accessed
/// strictly between it and the previous access to the same value.
///
/// Each value is marked only at its latest access, so the distinct count in
/// an interval is a range sum.
pub fn reuse_distance_distribution(a: &[usize]) -> Distribution {
    let mut tree = Fenwick(vec![0; a.len() + 1]);
    let mut last: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::new();
    for (i, &x) in a.iter().enumerate() {
        if let Some(p) = last.insert(x, i) {
            out.push((tree.prefix(i) - tree.prefix(p + 1)) as u64);
            tree.add(p, -1);
        }
        tree.add(i, 1);
    }
    Distribution::new(out)
}

/// `beta(i)`: edges with `sigma(u) <= i < sigma(v)`, for `i = 0..n-2`.
pub fn edge_cut_distribution(g: &DiGraph, ord: &TopologicalOrder) -> Result<Distribution> {
    check_order(g, ord)?;
    let n = g.n();
    let mut delta = vec![0i64; n + 1];
    for &(u, v) in g.edges() {
        delta[ord.position(u)] += 1;
        delta[ord.position(v)] -= 1;
    }
    let mut acc = 0i64;
    let cuts = delta
        .iter()
        .take(n.saturating_sub(1))
        .map(|d| {
            acc += d;
            acc as u64
        })
        .collect();
    Ok(Distribution::new(cuts))
}

/// Per-order scalar summary of the three distributions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalitySummary {
    pub bandwidth: u64,
    pub mla: u64,
    pub cutwidth: u64,
    pub median_edge_length: u64,
    pub median_edge_cut: u64,
    pub total_reuse: u64,
    pub max_reuse: u64,
    pub median_reuse: u64,
}

pub fn locality_summary(g: &DiGraph, ord: &TopologicalOrder) -> Result<LocalitySummary> {
    let lengths = edge_length_distribution(g, ord)?;
    let cuts = edge_cut_distribution(g, ord)?;
    let reuse = reuse_distance_distribution(&access_pattern(g, ord)?);
    Ok(LocalitySummary {
        bandwidth: lengths.max(),
        mla: lengths.sum(),
        cutwidth: cuts.max(),
        median_edge_length: lengths.median(),
        median_edge_cut: cuts.median(),
        total_reuse: reuse.sum(),
        max_reuse: reuse.max(),
        median_reuse: reuse.median(),
    })
}
