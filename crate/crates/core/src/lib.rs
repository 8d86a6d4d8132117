//! Direction-incentivised spectral bi-partitioning of directed graphs,
//! acyclic bi-partition repair, and spectral topological orders of DAGs,
//! together with the locality metrics used to compare orders.
//!
//! Module map:
//!
//! - [`graph`]: [`DiGraph`], [`BiPartition`], [`TopologicalOrder`]
//! - [`ingest`]: Matrix Market and edge-list I/O, DAG conversion rules
//! - [`spectral`]: the penalised quadratic form and its minimisers
//! - [`bipartition`]: spectral bi-partitioning and partition metrics
//! - [`acyclic`]: acyclic fix and preserved-label metric
//! - [`toporder`]: spectral topological order and baseline orderers
//! - [`locality`]: edge-length, reuse-distance and edge-cut distributions
//! - [`synthgen`]: seeded synthetic graphs with planted partitions
//! - [`report`]: run records, performance profiles, spy plots

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acyclic;
pub mod bipartition;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod locality;
pub mod report;
pub mod spectral;
pub mod synthgen;
pub mod toporder;

#[cfg(any(test, feature = "oracles"))]
pub mod testkit;

pub use error::{Error, Result};
pub use graph::{BiPartition, CutCounts, DiGraph, DropStats, Side, TopologicalOrder};
pub use spectral::{Restriction, SpectralConfig, SpectralSolution};
