use std::collections::BTreeMap;

use dagorder_core::report::{performance_profile, RunRecord};
use dagorder_core::synthgen::{generate, SynthConfig};
use dagorder_core::testkit;
use dagorder_core::toporder::spectral_toporder;
use dagorder_core::{DiGraph, SpectralConfig};
use rand::seq::SliceRandom;

#[test]
fn clique_chain_blocks_stay_contiguous() {
    let mut label: Vec<usize> = (0..24).collect();
    label.shuffle(&mut testkit::rng(4));
    let mut edges = Vec::new();
    for block in [0..12, 12..24] {
        for i in block.clone() {
            for j in i + 1..block.end {
                edges.push((label[i], label[j]));
            }
        }
    }
    for (i, j) in [(3, 14), (7, 20), (11, 12), (0, 23), (5, 17)] {
        edges.push((label[i], label[j]));
    }
    let g = DiGraph::from_edges(24, &edges).unwrap();
    let ord = spectral_toporder(&g, &SpectralConfig::direction_incentivised(&g)).unwrap();
    for (i, &v) in label.iter().enumerate() {
        assert_eq!(ord.position(v) < 12, i < 12, "vertex {v} in the wrong block");
    }
}

fn rec(graph: &str, algo: &str, v: f64) -> RunRecord {
    RunRecord {
        graph: graph.into(),
        algo: algo.into(),
        seed: 0,
        wall_ms: None,
        metrics: BTreeMap::from([("mla".to_string(), v)]),
    }
}

#[test]
fn profile_matches_hand_computation() {
    // Ratios to the best per graph:
    //   g1: a 1, b 2, c 4     g2: a 1, b 1, c 2
    //   g3: a 2.5, b 1, c 1   g4: a 2, b 8, c 1
    let table = [
        ("g1", [1.0, 2.0, 4.0]),
        ("g2", [3.0, 3.0, 6.0]),
        ("g3", [5.0, 2.0, 2.0]),
        ("g4", [2.0, 8.0, 1.0]),
    ];
    let records: Vec<RunRecord> = table
        .iter()
        .flat_map(|(g, vals)| ["a", "b", "c"].iter().zip(vals).map(move |(a, &v)| rec(g, a, v)))
        .collect();
    let p = performance_profile(&records, "mla", 4).unwrap();
    assert_eq!(p.algos, vec!["a", "b", "c"]);
    let expected_taus = [1.0, 2.0, 4.0, 8.0];
    for (t, e) in p.taus.iter().zip(expected_taus) {
        assert!((t - e).abs() < 1e-12);
    }
    assert_eq!(p.fractions[0], vec![0.5, 0.75, 1.0, 1.0]);
    assert_eq!(p.fractions[1], vec![0.5, 0.75, 0.75, 1.0]);
    assert_eq!(p.fractions[2], vec![0.5, 0.75, 1.0, 1.0]);
    for f in &p.fractions {
        assert!(f.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn sbm_counts_are_binomially_concentrated() {
    for seed in 0..3 {
        let alpha = 0.05;
        let (g, planted) = generate(&SynthConfig::sbm(alpha, seed)).unwrap();
        let counts = planted.cut_counts(&g);
        let cross = counts.cut() as f64;
        let (mean, sd) = (50_000.0, (250_000.0f64 * 0.2 * 0.8).sqrt());
        assert!((cross - mean).abs() <= 3.0 * sd, "cross edges {cross}");
        let back = counts.backward as f64;
        let sd_back = (cross * alpha * (1.0 - alpha)).sqrt();
        assert!((back - alpha * cross).abs() <= 3.0 * sd_back, "misaligned {back} of {cross}");
        assert_eq!(planted.size_s(), planted.size_t());
    }
}
