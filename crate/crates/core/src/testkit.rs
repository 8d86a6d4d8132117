//! Random instance generators and slow reference implementations for tests.
//! Nothing here shares code with the production paths it checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{BiPartition, DiGraph, Side, TopologicalOrder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered pair `u != v` independently with probability `p`; may
/// contain 2-cycles and longer cycles.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DiGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    DiGraph::from_edges(n, &edges).unwrap()
}

/// A random spanning tree with random edge directions plus extra random
/// edges, so the result is weakly connected.
pub fn random_connected_digraph(rng: &mut ChaCha8Rng, n: usize, extra_p: f64) -> DiGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push(if rng.random::<bool>() { (u, v) } else { (v, u) });
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < extra_p {
                edges.push((u, v));
            }
        }
    }
    DiGraph::from_edges(n, &edges).unwrap()
}

/// Edges go forward in a hidden random permutation, so vertex ids carry no
/// information about the order.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DiGraph {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((label[i], label[j]));
            }
        }
    }
    DiGraph::from_edges(n, &edges).unwrap()
}

/// A DAG with about `avg_out` out-edges per vertex, mostly short in the
/// hidden order.
pub fn random_sparse_dag(rng: &mut ChaCha8Rng, n: usize, avg_out: f64) -> DiGraph {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    if n >= 2 {
        let draws = (avg_out * n as f64).round() as usize;
        for _ in 0..draws {
            let i = rng.random_range(0..n - 1);
            let span = if rng.random::<f64>() < 0.8 { 10 } else { n };
            let j = (i + 1 + rng.random_range(0..span)).min(n - 1);
            edges.push((label[i], label[j]));
        }
    }
    DiGraph::from_edges(n, &edges).unwrap()
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> BiPartition {
    BiPartition::from_labels(
        (0..n)
            .map(|_| if rng.random::<bool>() { Side::S } else { Side::T })
            .collect(),
    )
}

pub fn random_centered_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    x
}

/// `sum over edges (x_u - x_v)^2`, straight from the edge list.
pub fn naive_laplacian_form(g: &DiGraph, x: &[f64]) -> f64 {
    g.edges().iter().map(|&(u, v)| (x[u] - x[v]).powi(2)).sum()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Minimum of `x^T L x - c (d^T x)^2` over unit vectors orthogonal to the
/// constants: the smallest eigenvalue of `L - c d d^T` restricted to that
/// subspace, read off a dense eigendecomposition after shifting the constant
/// direction far up.
pub fn dense_restricted_minimum(g: &DiGraph, c: f64) -> f64 {
    let n = g.n();
    let mut a = vec![vec![0.0; n]; n];
    for &(u, v) in g.edges() {
        a[u][u] += 1.0;
        a[v][v] += 1.0;
        a[u][v] -= 1.0;
        a[v][u] -= 1.0;
    }
    let mut d = vec![0.0; n];
    for &(u, v) in g.edges() {
        d[u] += 1.0;
        d[v] -= 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            a[i][j] -= c * d[i] * d[j];
        }
    }
    // d sums to zero and L has constant null vector, so 1 is an eigenvector;
    // push it above everything else.
    let shift = 4.0 * n as f64 + 4.0 * n as f64 * n as f64 * c.abs() + 1.0;
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v += shift / n as f64;
        }
    }
    jacobi_eigenvalues(a)[0]
}

/// Reuse distances by rescanning the pattern: for each repeated access,
/// the distinct values strictly between it and its previous occurrence.
pub fn naive_reuse_distances(a: &[usize]) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        if let Some(p) = (0..i).rev().find(|&j| a[j] == a[i]) {
            let mut seen: Vec<usize> = a[p + 1..i].to_vec();
            seen.sort_unstable();
            seen.dedup();
            out.push(seen.len() as u64);
        }
    }
    out.sort_unstable();
    out
}

/// Edge lengths under `ord`, sorted.
pub fn naive_edge_lengths(g: &DiGraph, ord: &TopologicalOrder) -> Vec<u64> {
    let mut out: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(u, v)| ord.position(v) as u64 - ord.position(u) as u64)
        .collect();
    out.sort_unstable();
    out
}

/// `beta(i)` for every split position by direct counting, in position order.
pub fn naive_edge_cuts(g: &DiGraph, ord: &TopologicalOrder) -> Vec<u64> {
    (0..g.n().saturating_sub(1))
        .map(|i| {
            g.edges()
                .iter()
                .filter(|&&(u, v)| ord.position(u) <= i && i < ord.position(v))
                .count() as u64
        })
        .collect()
}

/// Naive access pattern: scan the order for each vertex's parents.
pub fn naive_access_pattern(g: &DiGraph, ord: &TopologicalOrder) -> Vec<usize> {
    let seq = ord.sequence();
    let mut out = Vec::new();
    for &v in seq {
        for &u in seq {
            if g.has_edge(u, v) {
                out.push(u);
            }
        }
        out.push(v);
    }
    out
}

/// The acyclic-fix bisection recomputed from scratch: the priority
/// topological order by linear scans over ready vertices, the two size
/// bounds, and the cut of every admissible split counted edge by edge.
/// Returns `(minimum cut, all admissible cuts)`.
pub fn brute_force_fix_cut(g: &DiGraph, p: &BiPartition, beta: f64) -> (usize, Vec<usize>) {
    let n = g.n();
    let is_t = |v: usize| p.side(v) == Side::T;
    let mut prio = vec![0i64; n];
    for &(u, v) in g.edges() {
        if is_t(u) != is_t(v) {
            let sign = if is_t(v) { 1 } else { -1 };
            prio[u] += sign;
            prio[v] -= sign;
        }
    }
    let mut placed = vec![false; n];
    let mut order = Vec::new();
    while order.len() < n {
        let v = (0..n)
            .filter(|&v| !placed[v] && g.in_neighbors(v).iter().all(|&u| placed[u]))
            .min_by_key(|&v| (is_t(v), prio[v], v))
            .unwrap();
        placed[v] = true;
        order.push(v);
    }
    let s_min = order.iter().take_while(|&&v| !is_t(v)).count() as f64;
    let t_min = order.iter().rev().take_while(|&&v| is_t(v)).count() as f64;
    let floor = beta * n as f64;
    let s_bound = s_min.max((p.size_s() as f64).min(floor)) - 1e-9;
    let t_bound = t_min.max((p.size_t() as f64).min(floor)) - 1e-9;
    let cuts: Vec<usize> = (0..=n)
        .filter(|&k| k as f64 >= s_bound && (n - k) as f64 >= t_bound)
        .map(|k| {
            let first: Vec<usize> = order[..k].to_vec();
            g.edges()
                .iter()
                .filter(|&&(u, v)| first.contains(&u) && !first.contains(&v))
                .count()
        })
        .collect();
    (*cuts.iter().min().unwrap(), cuts)
}

/// Every split of the vertices into `S ⊔ T` with no edge `T -> S`, by
/// enumerating subsets; usable for `n <= 16`.
pub fn acyclic_splits(g: &DiGraph) -> Vec<BiPartition> {
    let n = g.n();
    assert!(n <= 16);
    (0u32..1 << n)
        .map(|mask| {
            BiPartition::from_labels(
                (0..n)
                    .map(|v| if mask >> v & 1 == 1 { Side::S } else { Side::T })
                    .collect(),
            )
        })
        .filter(|p| p.cut_counts(g).backward == 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_matrix() {
        let eig = jacobi_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((eig[0] - 1.0).abs() < 1e-12 && (eig[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dense_minimum_of_path() {
        // P3 Laplacian eigenvalues 0, 1, 3.
        let g = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!((dense_restricted_minimum(&g, 0.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn naive_reuse_examples() {
        assert_eq!(naive_reuse_distances(&[0, 1, 0]), vec![1]);
        assert_eq!(naive_reuse_distances(&[0, 0, 1, 1, 2]), vec![0, 0]);
    }

    #[test]
    fn generators_have_expected_shape() {
        let mut r = rng(1);
        assert!(random_dag(&mut r, 30, 0.2).is_acyclic());
        assert!(random_sparse_dag(&mut r, 30, 2.0).is_acyclic());
        assert!(random_connected_digraph(&mut r, 30, 0.01).is_weakly_connected());
        let x = random_centered_vector(&mut r, 10);
        assert!(x.iter().sum::<f64>().abs() < 1e-12);
    }
}
