//! The direction-incentivised quadratic form
//!
//! ```text
//! Q_c(x) = sum_{(u,v) in E} (x_u - x_v)^2  -  c * (sum_{(u,v) in E} (x_u - x_v))^2
//!        = x^T L x - c (d^T x)^2
//! ```
//!
//! where `L` is the Laplacian of the underlying undirected multigraph and `d`
//! the out-minus-in degree vector. For `0 <= c <= 1/|E|` the form is positive
//! semi-definite and squeezed between `(1 - c|E|) x^T L x` and `x^T L x`.
//!
//! Both minimisation problems here (the global one and the one with anchored
//! vertices used by the topological-order recursion) reduce to minimising
//! `z^T A z + 2 b^T z` over a sphere inside the subspace orthogonal to the
//! constants. Small instances are solved densely; larger ones with a
//! matrix-free locally optimal subspace iteration (block size one LOBPCG,
//! generalised to the linear term by solving the projected sphere problem
//! exactly in each search subspace).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::DiGraph;

/// Solver parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralConfig {
    /// Direction-incentive weight, `0 <= c <= 1/|E|`.
    pub c: f64,
    /// Relative residual tolerance.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed of the random start vector.
    pub seed: u64,
    /// Problems with fewer free vertices than this are solved densely.
    pub small_threshold: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            c: 0.0,
            tol: 1e-8,
            max_iter: 5000,
            seed: 0,
            small_threshold: 64,
        }
    }
}

impl SpectralConfig {
    /// Classic Fiedler partitioning, `c = 0`.
    pub fn classic() -> Self {
        Self::default()
    }

    /// The default direction incentive `c = 1 / (2|E|)`.
    pub fn direction_incentivised(g: &DiGraph) -> Self {
        Self {
            c: default_incentive(g),
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn validate(&self, g: &DiGraph) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        let limit = if g.num_edges() == 0 {
            f64::INFINITY
        } else {
            1.0 / g.num_edges() as f64
        };
        if !(self.c >= 0.0) || self.c > limit * (1.0 + 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "c = {} outside [0, 1/|E|] = [0, {limit}]",
                self.c
            )));
        }
        if self.c * g.num_edges() as f64 >= 1.0 - 1e-12 {
            log::warn!("c * |E| = 1: the minimiser may not be unique");
        }
        Ok(())
    }
}

/// `1 / (2|E|)`, or zero for an edgeless graph.
pub fn default_incentive(g: &DiGraph) -> f64 {
    if g.num_edges() == 0 {
        0.0
    } else {
        1.0 / (2.0 * g.num_edges() as f64)
    }
}

/// Anchored vertex sets: `x = +1/sqrt(n)` on `k`, `x = -1/sqrt(n)` on `m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Restriction {
    pub k: Vec<usize>,
    pub m: Vec<usize>,
}

/// Result of a spectral solve.
#[derive(Clone, Debug)]
pub struct SpectralSolution {
    pub x: Vec<f64>,
    /// `Q_c(x)`.
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn check_len(g: &DiGraph, x: &[f64]) -> Result<()> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    Ok(())
}

/// `x^T L x = sum over edges (x_u - x_v)^2`.
pub fn laplacian_form(g: &DiGraph, x: &[f64]) -> Result<f64> {
    check_len(g, x)?;
    Ok(g.edges().iter().map(|&(u, v)| (x[u] - x[v]).powi(2)).sum())
}

/// `Q_c(x)`, evaluated as the Laplacian part minus the rank-one term
/// `c (d^T x)^2`.
pub fn quadratic_form(g: &DiGraph, x: &[f64], c: f64) -> Result<f64> {
    let lap = laplacian_form(g, x)?;
    let dx = dot(&g.degree_difference_vector(), x);
    Ok(lap - c * dx * dx)
}

/// Matrix-free product with `2 (L - c d d^T)`, so that
/// `x . apply_operator(x) = 2 Q_c(x)`.
pub fn apply_operator(g: &DiGraph, x: &[f64], c: f64) -> Result<Vec<f64>> {
    check_len(g, x)?;
    let mut y = vec![0.0; g.n()];
    for &(u, v) in g.edges() {
        let diff = x[u] - x[v];
        y[u] += 2.0 * diff;
        y[v] -= 2.0 * diff;
    }
    let d = g.degree_difference_vector();
    let dx = dot(&d, x);
    for (yi, di) in y.iter_mut().zip(&d) {
        *yi -= 2.0 * c * di * dx;
    }
    Ok(y)
}

/// Minimises `Q_c` over unit vectors orthogonal to the constants.
pub fn solve_fiedler(g: &DiGraph, cfg: &SpectralConfig) -> Result<SpectralSolution> {
    if g.n() < 2 {
        return Err(Error::TooSmall { needed: 2, got: g.n() });
    }
    cfg.validate(g)?;
    let components = g.weakly_connected_components().len();
    if components > 1 {
        return Err(Error::NotConnected { components });
    }
    let free: Vec<usize> = (0..g.n()).collect();
    let block = FreeBlock::build(g, &free, Slot::Free, 0.0, 0.0, cfg.c);
    let out = minimize_on_sphere(&block, 1.0, cfg, cfg.seed);
    let value = quadratic_form(g, &out.z, cfg.c)?;
    Ok(SpectralSolution {
        x: out.z,
        value,
        converged: out.converged,
        iterations: out.iterations,
    })
}

/// Minimises `Q_c` with `x` fixed to `+1/sqrt(n)` on `K` and `-1/sqrt(n)` on
/// `M`. The free block is centred (sums to zero) and has norm
/// `sqrt(|free| / n)`, the share of a unit vector it would carry if all
/// entries had equal magnitude.
pub fn solve_restricted(
    g: &DiGraph,
    cfg: &SpectralConfig,
    r: &Restriction,
) -> Result<SpectralSolution> {
    let n = g.n();
    cfg.validate(g)?;
    let mut slot = vec![Slot::Free(usize::MAX); n];
    for (set, s) in [(&r.k, Slot::Early), (&r.m, Slot::Late)] {
        for &v in set.iter() {
            if v >= n {
                return Err(Error::InvalidSets(format!("vertex {v} out of range")));
            }
            if !matches!(slot[v], Slot::Free(_)) {
                return Err(Error::InvalidSets(format!("vertex {v} listed twice")));
            }
            slot[v] = s;
        }
    }
    let mut free = Vec::new();
    for (v, sl) in slot.iter_mut().enumerate() {
        if let Slot::Free(_) = sl {
            *sl = Slot::Free(free.len());
            free.push(v);
        }
    }
    if free.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: free.len() });
    }
    let anchor = 1.0 / (n as f64).sqrt();
    let d = g.degree_difference_vector();
    let boundary_dot =
        anchor * (r.k.iter().map(|&v| d[v]).sum::<f64>() - r.m.iter().map(|&v| d[v]).sum::<f64>());
    let block = FreeBlock::build(g, &free, |v| slot[v], anchor, boundary_dot, cfg.c);
    let radius = (free.len() as f64 / n as f64).sqrt();
    let out = minimize_on_sphere(&block, radius, cfg, cfg.seed);

    let mut x = vec![0.0; n];
    for &v in &r.k {
        x[v] = anchor;
    }
    for &v in &r.m {
        x[v] = -anchor;
    }
    for (i, &v) in free.iter().enumerate() {
        x[v] = out.z[i];
    }
    let value = quadratic_form(g, &x, cfg.c)?;
    Ok(SpectralSolution {
        x,
        value,
        converged: out.converged,
        iterations: out.iterations,
    })
}

/// Where a vertex sits relative to the free block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    /// Free, with its local index.
    Free(usize),
    /// Anchored at `+anchor`.
    Early,
    /// Anchored at `-anchor`.
    Late,
}

/// The free-block problem `min z^T A z + 2 b^T z`, with
/// `A = L_FF - c d_F d_F^T` and `b` collecting the anchored neighbours.
pub(crate) struct FreeBlock {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    diag: Vec<f64>,
    d: Vec<f64>,
    c: f64,
    b: Vec<f64>,
}

impl FreeBlock {
    /// `boundary_dot` is `d_B . x_B` over the anchored vertices.
    pub(crate) fn build<F: Fn(usize) -> Slot>(
        g: &DiGraph,
        free: &[usize],
        slot: F,
        anchor: f64,
        boundary_dot: f64,
        c: f64,
    ) -> Self {
        let m = free.len();
        let mut offsets = Vec::with_capacity(m + 1);
        let mut neighbors = Vec::new();
        let mut diag = Vec::with_capacity(m);
        let mut d = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        offsets.push(0);
        for &v in free {
            let dv = g.out_degree(v) as f64 - g.in_degree(v) as f64;
            let mut bv = 0.0;
            for &w in g.out_neighbors(v).iter().chain(g.in_neighbors(v)) {
                match slot(w) {
                    Slot::Free(j) => neighbors.push(j),
                    Slot::Early => bv -= anchor,
                    Slot::Late => bv += anchor,
                }
            }
            bv -= c * boundary_dot * dv;
            offsets.push(neighbors.len());
            diag.push(g.degree(v) as f64);
            d.push(dv);
            b.push(bv);
        }
        Self {
            offsets,
            neighbors,
            diag,
            d,
            c,
            b,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.diag.len()
    }

    /// `y = P A x` for `x` orthogonal to the constants.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let dx = dot(&self.d, x);
        for i in 0..self.len() {
            let mut acc = self.diag[i] * x[i];
            for &j in &self.neighbors[self.offsets[i]..self.offsets[i + 1]] {
                acc -= x[j];
            }
            y[i] = acc - self.c * self.d[i] * dx;
        }
        center(y);
    }

    /// Upper bound on the spectral radius of `A`.
    fn scale(&self) -> f64 {
        self.diag.iter().fold(1.0f64, |acc, &v| acc.max(2.0 * v))
    }

    fn dense(&self) -> DMatrix<f64> {
        let m = self.len();
        let mut h = DMatrix::zeros(m, m);
        for i in 0..m {
            h[(i, i)] += self.diag[i];
            for &j in &self.neighbors[self.offsets[i]..self.offsets[i + 1]] {
                h[(i, j)] -= 1.0;
            }
            for j in 0..m {
                h[(i, j)] -= self.c * self.d[i] * self.d[j];
            }
        }
        h
    }
}

pub(crate) struct SphereOutcome {
    pub(crate) z: Vec<f64>,
    pub(crate) converged: bool,
    pub(crate) iterations: usize,
}

/// Minimises `z^T A z + 2 b^T z` subject to `sum z = 0`, `|z| = radius`.
pub(crate) fn minimize_on_sphere(
    block: &FreeBlock,
    radius: f64,
    cfg: &SpectralConfig,
    seed: u64,
) -> SphereOutcome {
    let m = block.len();
    debug_assert!(m >= 2);
    if m < cfg.small_threshold.max(2) {
        dense_solve(block, radius)
    } else {
        iterative_solve(block, radius, cfg, seed)
    }
}

fn dense_solve(block: &FreeBlock, radius: f64) -> SphereOutcome {
    let m = block.len();
    let mut h = block.dense();
    // P H P, then lift the constant direction above the rest of the spectrum.
    let row_means: Vec<f64> = (0..m).map(|i| h.row(i).sum() / m as f64).collect();
    let col_means: Vec<f64> = (0..m).map(|j| h.column(j).sum() / m as f64).collect();
    let grand = row_means.iter().sum::<f64>() / m as f64;
    let shift = block.scale() + 1.0;
    for i in 0..m {
        for j in 0..m {
            h[(i, j)] += grand - row_means[i] - col_means[j] + shift / m as f64;
        }
    }
    let mut b = block.b.clone();
    center(&mut b);
    let z = sphere_trs(&h, &DVector::from_vec(b), radius);
    let mut z: Vec<f64> = z.iter().copied().collect();
    center(&mut z);
    rescale(&mut z, radius);
    SphereOutcome {
        z,
        converged: true,
        iterations: 0,
    }
}

fn iterative_solve(block: &FreeBlock, radius: f64, cfg: &SpectralConfig, seed: u64) -> SphereOutcome {
    let m = block.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    center(&mut x);
    if norm(&x) == 0.0 {
        x[0] = 1.0;
        x[1] = -1.0;
    }
    rescale(&mut x, radius);

    let mut pb = block.b.clone();
    center(&mut pb);
    let bnorm = norm(&pb);
    let precond: Vec<f64> = (0..m)
        .map(|i| {
            let a = block.diag[i] - block.c * block.d[i] * block.d[i];
            if a > 1e-12 {
                1.0 / a
            } else {
                1.0
            }
        })
        .collect();
    let threshold = cfg.tol * (block.scale() * radius + bnorm);

    let mut ax = vec![0.0; m];
    let mut p: Option<Vec<f64>> = None;
    for it in 0..cfg.max_iter {
        block.apply(&x, &mut ax);
        let g: Vec<f64> = ax.iter().zip(&pb).map(|(a, b)| a + b).collect();
        let lambda = dot(&x, &g) / (radius * radius);
        let res: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi - lambda * xi).collect();
        if norm(&res) <= threshold {
            return SphereOutcome {
                z: x,
                converged: true,
                iterations: it,
            };
        }

        let mut w: Vec<f64> = res.iter().zip(&precond).map(|(r, p)| r * p).collect();
        center(&mut w);

        let xhat: Vec<f64> = x.iter().map(|v| v / radius).collect();
        let mut basis = vec![xhat];
        if let Some(q) = orthonormalize(&w, &basis) {
            basis.push(q);
        }
        if let Some(q) = p.as_ref().and_then(|p| orthonormalize(p, &basis)) {
            basis.push(q);
        }
        let k = basis.len();
        let mut images = Vec::with_capacity(k);
        images.push(ax.iter().map(|v| v / radius).collect::<Vec<f64>>());
        for q in &basis[1..] {
            let mut aq = vec![0.0; m];
            block.apply(q, &mut aq);
            images.push(aq);
        }
        let mut h = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let v = 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]));
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let beta = DVector::from_iterator(k, basis.iter().map(|q| dot(q, &pb)));
        let y = sphere_trs(&h, &beta, radius);

        let mut next = vec![0.0; m];
        let mut dir = vec![0.0; m];
        for (idx, q) in basis.iter().enumerate() {
            let target = if idx == 0 { &mut next } else { &mut dir };
            for (t, qi) in target.iter_mut().zip(q) {
                *t += y[idx] * qi;
            }
        }
        for (n, d) in next.iter_mut().zip(&dir) {
            *n += d;
        }
        center(&mut next);
        rescale(&mut next, radius);
        x = next;
        p = (k > 1).then_some(dir);
    }
    log::warn!(
        "sphere solve on {m} free vertices did not reach tol {} in {} iterations",
        cfg.tol,
        cfg.max_iter
    );
    SphereOutcome {
        z: x,
        converged: false,
        iterations: cfg.max_iter,
    }
}

/// Exact minimiser of `y^T H y + 2 beta^T y` over `|y| = r` via the
/// eigendecomposition of `H` and the secular equation.
fn sphere_trs(h: &DMatrix<f64>, beta: &DVector<f64>, r: f64) -> DVector<f64> {
    let k = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lam: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let coef: Vec<f64> = vecs.iter().map(|v| v.dot(beta)).collect();

    let spread = lam.iter().fold(1.0f64, |acc, l| acc.max(l.abs()));
    let lam0 = lam[0];
    let in_bottom = |i: usize| lam[i] - lam0 <= 1e-10 * spread;
    let bnorm = coef.iter().map(|c| c * c).sum::<f64>().sqrt();
    let bottom = (0..k)
        .filter(|&i| in_bottom(i))
        .map(|i| coef[i] * coef[i])
        .sum::<f64>()
        .sqrt();

    if bottom <= 1e-12 * (bnorm + spread * r) {
        let mut partial = DVector::zeros(k);
        let mut phi0 = 0.0;
        for i in (0..k).filter(|&i| !in_bottom(i)) {
            let t = coef[i] / (lam[i] - lam0);
            phi0 += t * t;
            partial -= &vecs[i] * t;
        }
        if phi0 <= r * r {
            let v = &vecs[0];
            let lead = v.iter().find(|c| c.abs() > 1e-12).copied().unwrap_or(1.0);
            let tau = (r * r - phi0).sqrt() * lead.signum();
            return partial + v * tau;
        }
    }

    let phi = |l: f64| -> f64 {
        (0..k)
            .map(|i| {
                let t = coef[i] / (lam[i] - l);
                t * t
            })
            .sum()
    };
    let mut lo = lam0 - bnorm / r - 1e-300;
    let mut hi = lam0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) > r * r {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut y = DVector::zeros(k);
    for i in 0..k {
        y -= &vecs[i] * (coef[i] / (lam[i] - lo));
    }
    let ny = y.norm();
    if ny > 0.0 {
        y *= r / ny;
    }
    y
}

fn orthonormalize(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n0 = norm(v);
    if !(n0 > 0.0) || !n0.is_finite() {
        return None;
    }
    let mut q = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let proj = dot(&q, b);
            for (qi, bi) in q.iter_mut().zip(b) {
                *qi -= proj * bi;
            }
        }
    }
    let nq = norm(&q);
    if nq <= 1e-10 * n0 {
        return None;
    }
    for qi in q.iter_mut() {
        *qi /= nq;
    }
    Some(q)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn center(x: &mut [f64]) {
    if x.is_empty() {
        return;
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

fn rescale(x: &mut [f64], radius: f64) {
    let nx = norm(x);
    if nx > 0.0 {
        for v in x.iter_mut() {
            *v *= radius / nx;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> DiGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        DiGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn quadratic_form_single_edge() {
        let g = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let x = [s, -s];
        assert!((quadratic_form(&g, &x, 0.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(quadratic_form(&g, &x, 1.0).unwrap().abs() < 1e-12);
        assert_eq!(quadratic_form(&g, &[3.0, 3.0], 0.7).unwrap(), 0.0);
        assert!(quadratic_form(&g, &[1.0], 0.0).is_err());
    }

    #[test]
    fn operator_single_edge() {
        let g = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let y = apply_operator(&g, &[1.0, -1.0], 0.0).unwrap();
        assert_eq!(y, vec![4.0, -4.0]);
        assert_eq!(quadratic_form(&g, &[1.0, -1.0], 0.0).unwrap(), 4.0);
        let y = apply_operator(&path(4), &[2.0; 4], 0.1).unwrap();
        assert!(y.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn fiedler_path3_dense_and_iterative() {
        let g = path(3);
        for small in [64, 0] {
            let cfg = SpectralConfig {
                small_threshold: small,
                ..SpectralConfig::default()
            };
            let sol = solve_fiedler(&g, &cfg).unwrap();
            assert!(sol.converged);
            assert!((sol.value - 1.0).abs() < 1e-9, "value {}", sol.value);
            let s = sol.x[0].signum();
            let e = 1.0 / 2f64.sqrt();
            assert!((sol.x[0] - s * e).abs() < 1e-6);
            assert!(sol.x[1].abs() < 1e-6);
            assert!((sol.x[2] + s * e).abs() < 1e-6);
        }
    }

    #[test]
    fn fiedler_rejects_disconnected_and_tiny() {
        let g = DiGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            solve_fiedler(&g, &SpectralConfig::default()),
            Err(Error::NotConnected { components: 2 })
        ));
        let one = DiGraph::from_edges(1, &[]).unwrap();
        assert!(matches!(
            solve_fiedler(&one, &SpectralConfig::default()),
            Err(Error::TooSmall { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let g = path(3);
        assert!(SpectralConfig::default().with_c(0.6).validate(&g).is_err());
        assert!(SpectralConfig::default().with_c(-0.1).validate(&g).is_err());
        assert!(SpectralConfig::default().with_c(0.5).validate(&g).is_ok());
        let bad_tol = SpectralConfig {
            tol: 0.0,
            ..SpectralConfig::default()
        };
        assert!(bad_tol.validate(&g).is_err());
    }

    #[test]
    fn restricted_path_interpolates() {
        let g = path(4);
        let r = Restriction { k: vec![0], m: vec![3] };
        for small in [64, 0] {
            let cfg = SpectralConfig {
                small_threshold: small,
                ..SpectralConfig::default()
            };
            let sol = solve_restricted(&g, &cfg, &r).unwrap();
            assert_eq!(sol.x[0], 0.5);
            assert_eq!(sol.x[3], -0.5);
            assert!(sol.x[1] > sol.x[2]);
            // Free block: centred, norm sqrt(2/4).
            assert!((sol.x[1] + sol.x[2]).abs() < 1e-9);
            assert!((sol.x[1].hypot(sol.x[2]) - 0.5f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn restricted_empty_matches_fiedler() {
        let g = DiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (1, 4)]).unwrap();
        let cfg = SpectralConfig::direction_incentivised(&g);
        let a = solve_fiedler(&g, &cfg).unwrap();
        let b = solve_restricted(&g, &cfg, &Restriction::default()).unwrap();
        let same = a.x.iter().zip(&b.x).all(|(p, q)| (p - q).abs() < 1e-9);
        let flipped = a.x.iter().zip(&b.x).all(|(p, q)| (p + q).abs() < 1e-9);
        assert!(same || flipped);
    }

    #[test]
    fn restricted_rejects_bad_sets() {
        let g = path(4);
        let cfg = SpectralConfig::default();
        let overlap = Restriction { k: vec![0, 1], m: vec![1] };
        assert!(solve_restricted(&g, &cfg, &overlap).is_err());
        let tiny = Restriction { k: vec![0, 1], m: vec![3] };
        assert!(matches!(
            solve_restricted(&g, &cfg, &tiny),
            Err(Error::TooSmall { .. })
        ));
    }

    #[test]
    fn sphere_trs_hard_case_returns_eigenvector() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        let y = sphere_trs(&h, &DVector::zeros(2), 2.0);
        assert!((y[0] - 2.0).abs() < 1e-12 && y[1].abs() < 1e-12);
    }

    #[test]
    fn sphere_trs_easy_case_is_stationary() {
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let beta = DVector::from_vec(vec![0.3, -0.7]);
        let y = sphere_trs(&h, &beta, 1.5);
        assert!((y.norm() - 1.5).abs() < 1e-12);
        // (H - lambda I) y = -beta for a single lambda.
        let g = &h * &y + &beta;
        let lambda = g.dot(&y) / y.dot(&y);
        assert!((g - &y * lambda).norm() < 1e-8);
        assert!(lambda <= 2.0f64.min(1.0));
    }
}
