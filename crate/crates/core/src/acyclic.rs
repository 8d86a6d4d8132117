//! Turning an arbitrary (mostly forward) bi-partition of a DAG into an
//! acyclic one by bisecting a part-aware topological order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{BiPartition, DiGraph, Side};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcyclicFixConfig {
    /// Minimum part-size fraction, `0 < beta < 1`.
    pub beta: f64,
}

impl Default for AcyclicFixConfig {
    /// `beta = 0.1`: the smaller part keeps at least a tenth of the vertices,
    /// which matches a weight-imbalance budget of 0.8.
    fn default() -> Self {
        Self { beta: 0.1 }
    }
}

/// Everything [`acyclic_fix`] computes on the way to its answer.
#[derive(Clone, Debug)]
pub struct AcyclicFixOutcome {
    pub partition: BiPartition,
    /// The priority topological order that was bisected.
    pub order: Vec<usize>,
    /// Lower bound on `|S'|`.
    pub s_bound: usize,
    /// Lower bound on `|T'|`.
    pub t_bound: usize,
    /// `|S'|`: the first `split` vertices of `order` form `S'`.
    pub split: usize,
    /// Number of edges crossing the split.
    pub cut: usize,
}

/// Repairs `p` into a bi-partition with no edge from `T'` to `S'`.
pub fn acyclic_fix(g: &DiGraph, p: &BiPartition, cfg: &AcyclicFixConfig) -> Result<BiPartition> {
    acyclic_fix_detailed(g, p, cfg).map(|o| o.partition)
}

pub fn acyclic_fix_detailed(
    g: &DiGraph,
    p: &BiPartition,
    cfg: &AcyclicFixConfig,
) -> Result<AcyclicFixOutcome> {
    check_inputs(g, p, cfg)?;
    let prio = cut_incidence_priorities(g, p);
    Ok(bisect(g, p, cfg, &prio))
}

/// Variant that orders each part by a continuous score instead of cut-edge
/// incidence (larger scores are placed earlier). `scores` must be oriented so
/// that `S` leans positive, as returned by
/// [`crate::bipartition::spectral_bipartition_with_vector`].
pub fn acyclic_fix_with_scores(
    g: &DiGraph,
    p: &BiPartition,
    cfg: &AcyclicFixConfig,
    scores: &[f64],
) -> Result<AcyclicFixOutcome> {
    check_inputs(g, p, cfg)?;
    if scores.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: scores.len(),
        });
    }
    let mut by_score: Vec<usize> = (0..g.n()).collect();
    by_score.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut prio = vec![0i64; g.n()];
    for (rank, &v) in by_score.iter().enumerate() {
        prio[v] = rank as i64;
    }
    Ok(bisect(g, p, cfg, &prio))
}

fn check_inputs(g: &DiGraph, p: &BiPartition, cfg: &AcyclicFixConfig) -> Result<()> {
    if !(cfg.beta > 0.0 && cfg.beta < 1.0) {
        return Err(Error::InvalidConfig(format!("beta = {} outside (0, 1)", cfg.beta)));
    }
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: p.n(),
        });
    }
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let counts = p.cut_counts(g);
    if counts.forward < counts.backward {
        return Err(Error::CutDirection {
            forward: counts.forward,
            backward: counts.backward,
        });
    }
    Ok(())
}

/// `+1/-1` on the tail/head of every forward cut edge, the reverse for
/// backward cut edges.
pub(crate) fn cut_incidence_priorities(g: &DiGraph, p: &BiPartition) -> Vec<i64> {
    let mut prio = vec![0i64; g.n()];
    for &(u, v) in g.edges() {
        match (p.side(u), p.side(v)) {
            (Side::S, Side::T) => {
                prio[u] += 1;
                prio[v] -= 1;
            }
            (Side::T, Side::S) => {
                prio[u] -= 1;
                prio[v] += 1;
            }
            _ => {}
        }
    }
    prio
}

/// Topological order popping the minimum of `(is_T, prio, id)` among ready
/// vertices.
fn priority_order(g: &DiGraph, p: &BiPartition, prio: &[i64]) -> Vec<usize> {
    let key = |v: usize| Reverse((p.side(v) == Side::T, prio[v], v));
    let mut indeg = g.in_degrees();
    let mut queue: BinaryHeap<_> = (0..g.n()).filter(|&v| indeg[v] == 0).map(key).collect();
    let mut order = Vec::with_capacity(g.n());
    while let Some(Reverse((_, _, v))) = queue.pop() {
        order.push(v);
        for &w in g.out_neighbors(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(key(w));
            }
        }
    }
    order
}

/// `cut[k]` = edges from the first `k` vertices of `order` to the rest.
pub(crate) fn prefix_cuts(g: &DiGraph, order: &[usize]) -> Vec<usize> {
    let n = order.len();
    let mut pos = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut delta = vec![0i64; n + 2];
    for &(u, v) in g.edges() {
        delta[pos[u] + 1] += 1;
        delta[pos[v] + 1] -= 1;
    }
    let mut cuts = Vec::with_capacity(n + 1);
    let mut acc = 0i64;
    for d in delta.iter().take(n + 1) {
        acc += d;
        cuts.push(acc as usize);
    }
    cuts
}

/// Smallest integer `>= x`, tolerant to rounding in `beta * n`.
fn ceil_bound(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

fn bisect(g: &DiGraph, p: &BiPartition, cfg: &AcyclicFixConfig, prio: &[i64]) -> AcyclicFixOutcome {
    let n = g.n();
    let order = priority_order(g, p, prio);
    let s_min = order.iter().take_while(|&&v| p.side(v) == Side::S).count();
    let t_min = order.iter().rev().take_while(|&&v| p.side(v) == Side::T).count();
    let floor = cfg.beta * n as f64;
    let s_bound = ceil_bound((s_min as f64).max((p.size_s() as f64).min(floor)));
    let t_bound = ceil_bound((t_min as f64).max((p.size_t() as f64).min(floor)));

    let cuts = prefix_cuts(g, &order);
    let imbalance = |k: usize| k.abs_diff(n - k);
    let split = (s_bound..=n - t_bound)
        .min_by_key(|&k| (cuts[k], imbalance(k), k))
        .expect("admissible split range is never empty");

    let mut labels = vec![Side::T; n];
    for &v in &order[..split] {
        labels[v] = Side::S;
    }
    AcyclicFixOutcome {
        partition: BiPartition::from_labels(labels),
        cut: cuts[split],
        order,
        s_bound,
        t_bound,
        split,
    }
}

/// Normalised number of preserved labels, `(|S ∩ U| + |T ∩ W|) / |V|`.
pub fn npl(original: &BiPartition, fixed: &BiPartition) -> Result<f64> {
    if original.n() != fixed.n() {
        return Err(Error::DimensionMismatch {
            expected: original.n(),
            got: fixed.n(),
        });
    }
    if original.n() == 0 {
        return Ok(1.0);
    }
    let kept = original
        .labels()
        .iter()
        .zip(fixed.labels())
        .filter(|(a, b)| a == b)
        .count();
    Ok(kept as f64 / original.n() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> DiGraph {
        DiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn path_example() {
        let g = path4();
        let p = BiPartition::from_s_set(4, &[0, 2]).unwrap();
        assert_eq!(cut_incidence_priorities(&g, &p), vec![1, -2, 2, -1]);
        let out = acyclic_fix_detailed(&g, &p, &AcyclicFixConfig { beta: 0.1 }).unwrap();
        assert_eq!(out.order, vec![0, 1, 2, 3]);
        assert_eq!((out.s_bound, out.t_bound), (1, 1));
        assert_eq!(out.cut, 1);
        assert_eq!(out.partition.s_vertices(), vec![0, 1]);
        assert!((npl(&p, &out.partition).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn npl_extremes() {
        let p = BiPartition::from_s_set(4, &[0, 1]).unwrap();
        assert_eq!(npl(&p, &p).unwrap(), 1.0);
        assert_eq!(npl(&p, &p.swapped()).unwrap(), 0.0);
        assert!(npl(&p, &BiPartition::from_s_set(3, &[0]).unwrap()).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = path4();
        let backward = BiPartition::from_s_set(4, &[2, 3]).unwrap();
        assert!(matches!(
            acyclic_fix(&g, &backward, &AcyclicFixConfig::default()),
            Err(Error::CutDirection { .. })
        ));
        let cyc = DiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = BiPartition::from_s_set(3, &[0]).unwrap();
        assert!(matches!(
            acyclic_fix(&cyc, &p, &AcyclicFixConfig::default()),
            Err(Error::Cyclic)
        ));
        let ok = BiPartition::from_s_set(4, &[0, 1]).unwrap();
        assert!(acyclic_fix(&g, &ok, &AcyclicFixConfig { beta: 1.0 }).is_err());
    }

    #[test]
    fn ideal_partition_is_kept_when_minimal() {
        // Two triangles joined by one edge: {0,1,2} -> {3,4,5}.
        let g = DiGraph::from_edges(
            6,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let p = BiPartition::from_s_set(6, &[0, 1, 2]).unwrap();
        let fixed = acyclic_fix(&g, &p, &AcyclicFixConfig::default()).unwrap();
        assert_eq!(fixed, p);
        assert_eq!(npl(&p, &fixed).unwrap(), 1.0);
    }

    #[test]
    fn score_priorities_still_acyclic() {
        let g = path4();
        let p = BiPartition::from_s_set(4, &[0, 2]).unwrap();
        let out = acyclic_fix_with_scores(&g, &p, &AcyclicFixConfig::default(), &[0.9, -0.1, 0.3, -0.8])
            .unwrap();
        assert_eq!(out.partition.cut_counts(&g).backward, 0);
    }
}
