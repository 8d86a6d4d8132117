//! Seeded random digraphs with a planted, nearly acyclic, balanced
//! bi-partition `A | B` (`A` = the first `n/2` ids).
//!
//! The undirected skeleton is drawn first, then every edge is oriented in
//! ascending pair order: edges inside a half get a uniformly random
//! direction, edges between the halves point `B -> A` with probability
//! `alpha` and `A -> B` otherwise.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BiPartition, DiGraph, Side};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Every pair independently with probability `p`.
    Er { p: f64 },
    /// Ring lattice with `k` nearest neighbours, clockwise edges rewired with
    /// probability `p`.
    Ws { k: usize, p: f64 },
    /// Pairs inside a half with probability `p_int`, across with `p_ext`.
    Sbm { p_int: f64, p_ext: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl SynthConfig {
    /// `n = 1000`, `p = 0.2`.
    pub fn er(alpha: f64, seed: u64) -> Self {
        Self {
            family: Family::Er { p: 0.2 },
            n: 1000,
            alpha,
            seed,
        }
    }

    /// `n = 1000`, `k = 50`, `p = 0.3`.
    pub fn ws(alpha: f64, seed: u64) -> Self {
        Self {
            family: Family::Ws { k: 50, p: 0.3 },
            n: 1000,
            alpha,
            seed,
        }
    }

    /// `n = 1000`, `p_int = 0.25`, `p_ext = 0.2`.
    pub fn sbm(alpha: f64, seed: u64) -> Self {
        Self {
            family: Family::Sbm {
                p_int: 0.25,
                p_ext: 0.2,
            },
            n: 1000,
            alpha,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} = {p} outside [0, 1]")))
            }
        };
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("n = {} must be even and >= 2", self.n)));
        }
        prob("alpha", self.alpha)?;
        match self.family {
            Family::Er { p } => prob("p", p),
            Family::Ws { k, p } => {
                if k % 2 != 0 || k >= self.n {
                    return Err(Error::InvalidConfig(format!("k = {k} must be even and < n")));
                }
                prob("p", p)
            }
            Family::Sbm { p_int, p_ext } => {
                prob("p_int", p_int)?;
                prob("p_ext", p_ext)
            }
        }
    }
}

/// Configuration and planted labels written next to a generated graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedSidecar {
    pub config: SynthConfig,
    /// Vertices of `A`; the rest form `B`.
    pub planted_a: Vec<usize>,
}

impl PlantedSidecar {
    pub fn new(config: SynthConfig, planted: &BiPartition) -> Self {
        Self {
            config,
            planted_a: planted.s_vertices(),
        }
    }
}

/// Returns the graph and the planted partition with `S = A`, `T = B`.
pub fn generate(cfg: &SynthConfig) -> Result<(DiGraph, BiPartition)> {
    cfg.validate()?;
    let n = cfg.n;
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut pairs: Vec<(usize, usize)> = match cfg.family {
        Family::Er { p } => pairs_with(n, &mut rng, |_, _| p),
        Family::Sbm { p_int, p_ext } => {
            pairs_with(n, &mut rng, |u, v| if (u < half) == (v < half) { p_int } else { p_ext })
        }
        Family::Ws { k, p } => watts_strogatz(n, k, p, &mut rng),
    };
    pairs.sort_unstable();

    let edges: Vec<(usize, usize)> = pairs
        .into_iter()
        .map(|(u, v)| {
            if (u < half) == (v < half) {
                if rng.random::<bool>() {
                    (u, v)
                } else {
                    (v, u)
                }
            } else {
                // u < v, so u is in A and v in B.
                if rng.random::<f64>() < cfg.alpha {
                    (v, u)
                } else {
                    (u, v)
                }
            }
        })
        .collect();
    let g = DiGraph::from_edges(n, &edges)?;
    let labels = (0..n).map(|v| if v < half { Side::S } else { Side::T }).collect();
    Ok((g, BiPartition::from_labels(labels)))
}

fn pairs_with<F: Fn(usize, usize) -> f64>(n: usize, rng: &mut ChaCha8Rng, p: F) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Ring lattice plus rewiring in the classic loop order (neighbour offset
/// outer, vertex inner). A rewired endpoint that would create a self-loop
/// or a duplicate is redrawn; vertices already adjacent to everyone keep
/// their edge.
fn watts_strogatz(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let mut degree = vec![0usize; n];
    for j in 1..=k / 2 {
        for u in 0..n {
            if edges.insert(key(u, (u + j) % n)) {
                degree[u] += 1;
                degree[(u + j) % n] += 1;
            }
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.random::<f64>() >= p || !edges.contains(&key(u, v)) {
                continue;
            }
            if degree[u] >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !edges.contains(&key(u, w)) {
                    break w;
                }
            };
            edges.remove(&key(u, v));
            edges.insert(key(u, w));
            degree[v] -= 1;
            degree[w] += 1;
        }
    }
    edges.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartition::partition_metrics;

    fn small(family: Family, alpha: f64, seed: u64) -> SynthConfig {
        SynthConfig {
            family,
            n: 60,
            alpha,
            seed,
        }
    }

    #[test]
    fn er_zero_is_edgeless() {
        let (g, p) = generate(&small(Family::Er { p: 0.0 }, 0.05, 1)).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(p.size_s(), 30);
    }

    #[test]
    fn alpha_zero_has_no_backward_cross_edges() {
        for family in [
            Family::Er { p: 0.3 },
            Family::Ws { k: 6, p: 0.3 },
            Family::Sbm { p_int: 0.3, p_ext: 0.2 },
        ] {
            let (g, p) = generate(&small(family, 0.0, 3)).unwrap();
            assert_eq!(p.cut_counts(&g).backward, 0);
            let m = partition_metrics(&g, &p).unwrap();
            assert_eq!((m.rmce, m.wi), (0.0, 0.0));
        }
    }

    #[test]
    fn ws_keeps_edge_count() {
        let (g, _) = generate(&small(Family::Ws { k: 6, p: 0.5 }, 0.05, 9)).unwrap();
        assert_eq!(g.num_edges(), 60 * 3);
    }

    #[test]
    fn same_seed_same_graph() {
        let cfg = small(Family::Sbm { p_int: 0.3, p_ext: 0.1 }, 0.1, 42);
        let (a, _) = generate(&cfg).unwrap();
        let (b, _) = generate(&cfg).unwrap();
        assert_eq!(a.edges(), b.edges());
        let (c, _) = generate(&SynthConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn invalid_configs() {
        assert!(generate(&SynthConfig { n: 7, ..small(Family::Er { p: 0.1 }, 0.0, 0) }).is_err());
        assert!(generate(&small(Family::Er { p: 1.5 }, 0.0, 0)).is_err());
        assert!(generate(&small(Family::Ws { k: 5, p: 0.1 }, 0.0, 0)).is_err());
        assert!(generate(&small(Family::Ws { k: 60, p: 0.1 }, 0.0, 0)).is_err());
        assert!(generate(&small(Family::Er { p: 0.1 }, -0.1, 0)).is_err());
    }
}
