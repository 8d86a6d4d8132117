//! Topological orders of DAGs: the recursive spectral order built on
//! anchored spectral splits plus direction fixes, and four baseline orderers.
//!
//! The spectral order keeps a [`VertexPrecedenceList`], a sequence of vertex
//! sets with no edge pointing from a later set to an earlier one, and
//! repeatedly splits a set `L` into `S ≺ T`. Vertices before `L` (`K`) are
//! anchored at `+1/sqrt(n)` and vertices after it (`M`) at `-1/sqrt(n)`, so
//! the split also accounts for edges already cut by earlier rounds.
//!
//! A subproblem depends only on the sets `K`, `L` and `M`, never on how `K` or
//! `M` have been refined, so all sets of one round are refined in parallel and
//! the result does not depend on scheduling.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, TopologicalOrder};
use crate::spectral::{minimize_on_sphere, FreeBlock, Slot, SpectralConfig};

/// Ordered disjoint vertex sets `L_1 ≺ ... ≺ L_l` covering all vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPrecedenceList {
    arrangement: Vec<usize>,
    /// Start offsets of the sets in `arrangement`, followed by `n`.
    bounds: Vec<usize>,
}

impl VertexPrecedenceList {
    /// The single set `V`.
    pub fn new(n: usize) -> Self {
        Self {
            arrangement: (0..n).collect(),
            bounds: if n == 0 { vec![0] } else { vec![0, n] },
        }
    }

    pub fn from_sets(sets: Vec<Vec<usize>>) -> Self {
        let mut arrangement = Vec::new();
        let mut bounds = vec![0];
        for set in sets {
            arrangement.extend(set);
            bounds.push(arrangement.len());
        }
        Self { arrangement, bounds }
    }

    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sets(&self) -> impl Iterator<Item = &[usize]> {
        self.bounds.windows(2).map(|w| &self.arrangement[w[0]..w[1]])
    }

    /// Checks that the sets are non-empty, partition `0..n`, and that no edge
    /// points from a later set to an earlier one.
    pub fn validate(&self, g: &DiGraph) -> Result<()> {
        let n = g.n();
        let mut set_of = vec![usize::MAX; n];
        for (i, set) in self.sets().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidSets(format!("set {i} is empty")));
            }
            for &v in set {
                if v >= n || set_of[v] != usize::MAX {
                    return Err(Error::InvalidSets(format!("vertex {v} repeated or out of range")));
                }
                set_of[v] = i;
            }
        }
        if set_of.contains(&usize::MAX) {
            return Err(Error::InvalidSets("sets do not cover every vertex".into()));
        }
        for &(u, v) in g.edges() {
            if set_of[u] > set_of[v] {
                return Err(Error::PrecedenceViolation { u, v });
            }
        }
        Ok(())
    }

    /// Concatenation of the sets; a topological order once all are
    /// singletons.
    pub fn flatten(&self) -> Vec<usize> {
        self.arrangement.clone()
    }
}

/// Alg. 3 in set form: re-bisects `L = S ⊔ T` into `S' ≺ T'` with
/// `|S'| = |S|`, `|T'| = |T|` and no edge from `T'` to `S'`.
pub fn direction_fix(
    g: &DiGraph,
    k: &[usize],
    l: &[usize],
    m: &[usize],
    s: &[usize],
    t: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let mut slot = vec![None; n];
    for (set, value) in [(k, Slot::Early), (m, Slot::Late)] {
        for &v in set {
            if v >= n || slot[v].is_some() {
                return Err(Error::InvalidSets(format!("vertex {v} repeated or out of range")));
            }
            slot[v] = Some(value);
        }
    }
    for (i, &v) in l.iter().enumerate() {
        if v >= n || slot[v].is_some() {
            return Err(Error::InvalidSets(format!("vertex {v} repeated or out of range")));
        }
        slot[v] = Some(Slot::Free(i));
    }
    if slot.iter().any(Option::is_none) {
        return Err(Error::InvalidSets("K, L, M do not cover every vertex".into()));
    }
    let slot: Vec<Slot> = slot.into_iter().map(Option::unwrap).collect();
    let rank = |s: Slot| match s {
        Slot::Early => 0,
        Slot::Free(_) => 1,
        Slot::Late => 2,
    };
    for &(u, v) in g.edges() {
        if rank(slot[u]) > rank(slot[v]) {
            return Err(Error::PrecedenceViolation { u, v });
        }
    }
    let mut in_t = vec![false; l.len()];
    let mut seen = vec![false; l.len()];
    for (set, is_t) in [(s, false), (t, true)] {
        for &v in set {
            match slot.get(v) {
                Some(Slot::Free(i)) if !seen[*i] => {
                    seen[*i] = true;
                    in_t[*i] = is_t;
                }
                _ => return Err(Error::InvalidSets(format!("S and T must partition L ({v})"))),
            }
        }
    }
    if seen.iter().any(|&b| !b) {
        return Err(Error::InvalidSets("S and T must partition L".into()));
    }
    let order = fixed_order(g, l, |v| slot[v], &in_t);
    let (first, second) = order.split_at(s.len());
    Ok((first.to_vec(), second.to_vec()))
}

/// The priority topological order of `G|_L` used by the direction fix.
/// `in_t` is indexed by local position in `l`.
fn fixed_order<F: Fn(usize) -> Slot>(g: &DiGraph, l: &[usize], slot: F, in_t: &[bool]) -> Vec<usize> {
    let size = l.len();
    let mut prio = vec![0i64; size];
    let mut indeg = vec![0usize; size];
    for (i, &v) in l.iter().enumerate() {
        for &w in g.out_neighbors(v) {
            match slot(w) {
                Slot::Late => prio[i] += 1,
                Slot::Free(j) => {
                    indeg[j] += 1;
                    match (in_t[i], in_t[j]) {
                        (false, true) => {
                            prio[i] += 1;
                            prio[j] -= 1;
                        }
                        (true, false) => {
                            prio[i] -= 1;
                            prio[j] += 1;
                        }
                        _ => {}
                    }
                }
                Slot::Early => {}
            }
        }
        for &w in g.in_neighbors(v) {
            if slot(w) == Slot::Early {
                prio[i] -= 1;
            }
        }
    }
    let key = |i: usize| Reverse((in_t[i], prio[i], l[i], i));
    let mut queue: BinaryHeap<_> = (0..size).filter(|&i| indeg[i] == 0).map(key).collect();
    let mut order = Vec::with_capacity(size);
    while let Some(Reverse((_, _, v, _))) = queue.pop() {
        order.push(v);
        for &w in g.out_neighbors(v) {
            if let Slot::Free(j) = slot(w) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(key(j));
                }
            }
        }
    }
    order
}

/// Counters describing how a spectral order was produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SpectralOrderStats {
    pub rounds: usize,
    /// Sets split with the spectral solver.
    pub spectral_splits: usize,
    /// Sets of size 2 or 3 ordered by enumeration.
    pub enumerated: usize,
    /// Solves that hit the iteration cap (their iterate was still used).
    pub unconverged: usize,
    /// Degenerate solver output replaced by a rank split.
    pub fallbacks: usize,
}

impl std::ops::AddAssign for SpectralOrderStats {
    fn add_assign(&mut self, o: Self) {
        self.rounds += o.rounds;
        self.spectral_splits += o.spectral_splits;
        self.enumerated += o.enumerated;
        self.unconverged += o.unconverged;
        self.fallbacks += o.fallbacks;
    }
}

pub fn spectral_toporder(g: &DiGraph, cfg: &SpectralConfig) -> Result<TopologicalOrder> {
    spectral_toporder_with_stats(g, cfg).map(|(o, _)| o)
}

pub fn spectral_toporder_with_stats(
    g: &DiGraph,
    cfg: &SpectralConfig,
) -> Result<(TopologicalOrder, SpectralOrderStats)> {
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
    cfg.validate(g)?;
    let n = g.n();
    let d = g.degree_difference_vector();
    let mut list = VertexPrecedenceList::new(n);
    let mut position: Vec<usize> = (0..n).collect();
    let mut stats = SpectralOrderStats::default();

    loop {
        let open: Vec<(usize, usize)> = list
            .bounds
            .windows(2)
            .map(|w| (w[0], w[1]))
            .filter(|(a, b)| b - a > 1)
            .collect();
        if open.is_empty() {
            break;
        }
        stats.rounds += 1;
        let mut prefix_d = Vec::with_capacity(n + 1);
        prefix_d.push(0.0);
        for &v in &list.arrangement {
            prefix_d.push(prefix_d.last().unwrap() + d[v]);
        }
        let ctx = RefineContext {
            g,
            cfg,
            arrangement: &list.arrangement,
            position: &position,
            prefix_d: &prefix_d,
        };
        let refined: Vec<Refined> = open.par_iter().map(|&(a, b)| ctx.refine(a, b)).collect();

        let mut bounds = Vec::with_capacity(list.bounds.len() + refined.len());
        let mut next = refined.into_iter().peekable();
        for w in list.bounds.windows(2) {
            bounds.push(w[0]);
            if let Some(r) = next.next_if(|r| r.start == w[0]) {
                list.arrangement[r.start..r.start + r.sequence.len()].copy_from_slice(&r.sequence);
                for (i, &v) in r.sequence.iter().enumerate() {
                    position[v] = r.start + i;
                }
                bounds.extend(r.cuts.iter().map(|c| r.start + c));
                stats += r.stats;
            }
        }
        bounds.push(n);
        list.bounds = bounds;
        debug_assert!(list.validate(g).is_ok());
    }

    let order = TopologicalOrder::from_sequence(list.flatten())?;
    debug_assert!(g.validate_toporder(&order));
    Ok((order, stats))
}

struct RefineContext<'a> {
    g: &'a DiGraph,
    cfg: &'a SpectralConfig,
    arrangement: &'a [usize],
    position: &'a [usize],
    prefix_d: &'a [f64],
}

struct Refined {
    start: usize,
    sequence: Vec<usize>,
    /// Interior set boundaries, relative to `start`.
    cuts: Vec<usize>,
    stats: SpectralOrderStats,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RefineContext<'_> {
    fn slot(&self, start: usize, end: usize, v: usize) -> Slot {
        let p = self.position[v];
        if p < start {
            Slot::Early
        } else if p >= end {
            Slot::Late
        } else {
            Slot::Free(p - start)
        }
    }

    fn refine(&self, start: usize, end: usize) -> Refined {
        let l = &self.arrangement[start..end];
        if l.len() <= 3 {
            return self.enumerate(start, end);
        }
        let g = self.g;
        let n = g.n();
        let mut stats = SpectralOrderStats {
            spectral_splits: 1,
            ..Default::default()
        };
        let slot = |v| self.slot(start, end, v);

        let anchor = 1.0 / (n as f64).sqrt();
        let early_d = self.prefix_d[start];
        let late_d = self.prefix_d[n] - self.prefix_d[end];
        let block = FreeBlock::build(g, l, slot, anchor, anchor * (early_d - late_d), self.cfg.c);
        let radius = (l.len() as f64 / n as f64).sqrt();
        let seed = splitmix64(self.cfg.seed ^ splitmix64(start as u64));
        let out = minimize_on_sphere(&block, radius, self.cfg, seed);
        if !out.converged {
            stats.unconverged += 1;
        }

        let mut in_t: Vec<bool> = out.z.iter().map(|&x| !(x > 0.0)).collect();
        let s_count = in_t.iter().filter(|&&t| !t).count();
        if s_count == 0 || s_count == l.len() || out.z.iter().any(|x| !x.is_finite()) {
            stats.fallbacks += 1;
            in_t = rank_split(&out.z);
        }
        if l.len() == n {
            let (mut forward, mut backward) = (0usize, 0usize);
            for &(u, v) in g.edges() {
                match (in_t[self.position[u]], in_t[self.position[v]]) {
                    (false, true) => forward += 1,
                    (true, false) => backward += 1,
                    _ => {}
                }
            }
            if forward < backward {
                in_t.iter_mut().for_each(|t| *t = !*t);
            }
        }
        let s_size = in_t.iter().filter(|&&t| !t).count();
        let sequence = fixed_order(g, l, slot, &in_t);
        Refined {
            start,
            sequence,
            cuts: vec![s_size],
            stats,
        }
    }

    /// Orders a set of at most three vertices exactly: among the topological
    /// orders of `G|_L`, minimise the total length of edges touching `L`
    /// (edges to `K` and `M` contribute through the position inside `L`).
    fn enumerate(&self, start: usize, end: usize) -> Refined {
        let g = self.g;
        let l = &self.arrangement[start..end];
        let size = l.len();
        let mut pull = vec![0i64; size];
        let mut internal = Vec::new();
        for (i, &v) in l.iter().enumerate() {
            for &w in g.out_neighbors(v) {
                match self.slot(start, end, w) {
                    Slot::Late => pull[i] -= 1,
                    Slot::Free(j) => internal.push((i, j)),
                    Slot::Early => {}
                }
            }
            for &w in g.in_neighbors(v) {
                if self.slot(start, end, w) == Slot::Early {
                    pull[i] += 1;
                }
            }
        }
        let mut best: Option<(i64, Vec<usize>)> = None;
        for perm in permutations(size) {
            let mut at = vec![0usize; size];
            for (p, &i) in perm.iter().enumerate() {
                at[i] = p;
            }
            if internal.iter().any(|&(i, j)| at[i] > at[j]) {
                continue;
            }
            let cost: i64 = (0..size).map(|i| at[i] as i64 * pull[i]).sum::<i64>()
                + internal.iter().map(|&(i, j)| (at[j] - at[i]) as i64).sum::<i64>();
            let seq: Vec<usize> = perm.iter().map(|&i| l[i]).collect();
            let better = match &best {
                None => true,
                Some((c, s)) => cost < *c || (cost == *c && seq < *s),
            };
            if better {
                best = Some((cost, seq));
            }
        }
        let (_, sequence) = best.expect("a DAG restricted to L has a topological order");
        Refined {
            start,
            sequence,
            cuts: (1..size).collect(),
            stats: SpectralOrderStats {
                enumerated: 1,
                ..Default::default()
            },
        }
    }
}

/// `true` marks `T`: the upper half by value (ties by index) goes to `S`.
fn rank_split(z: &[f64]) -> Vec<bool> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    let key = |v: f64| if v.is_finite() { v } else { 0.0 };
    idx.sort_by(|&a, &b| key(z[b]).total_cmp(&key(z[a])).then(a.cmp(&b)));
    let mut in_t = vec![true; z.len()];
    for &i in &idx[..z.len().div_ceil(2)] {
        in_t[i] = false;
    }
    in_t
}

fn permutations(size: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; size], &mut out);
    out
}

fn require_dag(g: &DiGraph) -> Result<()> {
    if g.is_acyclic() {
        Ok(())
    } else {
        Err(Error::Cyclic)
    }
}

/// Depth-first topological order: a vertex is emitted once all its parents
/// are placed, and the most recently readied vertex is visited next
/// (children in ascending id).
pub fn dfs_order(g: &DiGraph) -> Result<TopologicalOrder> {
    require_dag(g)?;
    let mut indeg = g.in_degrees();
    let mut stack: Vec<usize> = (0..g.n()).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(g.n());
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.out_neighbors(v).iter().rev() {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    TopologicalOrder::from_sequence(order)
}

/// Breadth-first readiness order; each batch of newly ready vertices is
/// appended sorted by `key`, then id.
fn level_order<K: Ord + Copy, F: Fn(usize) -> K>(g: &DiGraph, key: F) -> Result<TopologicalOrder> {
    require_dag(g)?;
    let mut indeg = g.in_degrees();
    let mut roots: Vec<usize> = (0..g.n()).filter(|&v| indeg[v] == 0).collect();
    roots.sort_by_key(|&v| (key(v), v));
    let mut queue: VecDeque<usize> = roots.into();
    let mut order = Vec::with_capacity(g.n());
    let mut batch = Vec::new();
    while let Some(v) = queue.pop_front() {
        order.push(v);
        batch.clear();
        for &w in g.out_neighbors(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                batch.push(w);
            }
        }
        batch.sort_by_key(|&w| (key(w), w));
        queue.extend(batch.iter().copied());
    }
    TopologicalOrder::from_sequence(order)
}

/// Breadth-first search visiting ready vertices by ascending out-degree.
pub fn bfs_min_outdeg_order(g: &DiGraph) -> Result<TopologicalOrder> {
    level_order(g, |v| g.out_degree(v))
}

/// Cuthill–McKee restricted to ready vertices: breadth-first, ascending
/// total degree within each batch.
pub fn cuthill_mckee_acyclic(g: &DiGraph) -> Result<TopologicalOrder> {
    level_order(g, |v| g.degree(v))
}

/// Gorder's greedy window heuristic restricted to ready vertices: repeatedly
/// place the ready vertex with the highest affinity to the last `window`
/// placed vertices. Affinity counts shared in-neighbours plus direct edges;
/// ties go to the smaller id.
pub fn gorder_acyclic(g: &DiGraph, window: usize) -> Result<TopologicalOrder> {
    require_dag(g)?;
    let n = g.n();
    let mut score = vec![0i64; n];
    let mut ready_flag = vec![false; n];
    let mut ready: BTreeSet<(Reverse<i64>, usize)> = BTreeSet::new();
    let mut indeg = g.in_degrees();
    for v in 0..n {
        if indeg[v] == 0 {
            ready_flag[v] = true;
            ready.insert((Reverse(0), v));
        }
    }

    let bump = |x: usize, delta: i64, score: &mut [i64], ready: &mut BTreeSet<(Reverse<i64>, usize)>, flags: &[bool]| {
        if flags[x] {
            ready.remove(&(Reverse(score[x]), x));
            score[x] += delta;
            ready.insert((Reverse(score[x]), x));
        } else {
            score[x] += delta;
        }
    };
    let touch = |u: usize, delta: i64, score: &mut [i64], ready: &mut BTreeSet<(Reverse<i64>, usize)>, flags: &[bool]| {
        for &x in g.out_neighbors(u).iter().chain(g.in_neighbors(u)) {
            bump(x, delta, score, ready, flags);
        }
        for &w in g.in_neighbors(u) {
            for &x in g.out_neighbors(w) {
                if x != u {
                    bump(x, delta, score, ready, flags);
                }
            }
        }
    };

    let mut recent: VecDeque<usize> = VecDeque::with_capacity(window + 1);
    let mut order = Vec::with_capacity(n);
    while let Some(&first) = ready.iter().next() {
        ready.remove(&first);
        let v = first.1;
        ready_flag[v] = false;
        order.push(v);
        if window > 0 {
            recent.push_back(v);
            touch(v, 1, &mut score, &mut ready, &ready_flag);
            if recent.len() > window {
                let old = recent.pop_front().unwrap();
                touch(old, -1, &mut score, &mut ready, &ready_flag);
            }
        }
        for &w in g.out_neighbors(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready_flag[w] = true;
                ready.insert((Reverse(score[w]), w));
            }
        }
    }
    TopologicalOrder::from_sequence(order)
}
