use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dagorder_core::acyclic::{acyclic_fix, AcyclicFixConfig};
use dagorder_core::bipartition::spectral_bipartition;
use dagorder_core::ingest::{
    acyclic_convert_partition_rule, acyclic_convert_toporder_rule, parse_matrix_market, to_digraph,
};
use dagorder_core::locality::{edge_cut_distribution, edge_length_distribution};
use dagorder_core::toporder::{
    bfs_min_outdeg_order, cuthill_mckee_acyclic, dfs_order, gorder_acyclic, spectral_toporder,
};
use dagorder_core::SpectralConfig;

fn fixture_paths() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mtx"))
        .collect();
    paths.sort();
    paths
}

#[test]
fn fixture_shapes() {
    let load = |name: &str| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
        parse_matrix_market(BufReader::new(File::open(path).unwrap())).unwrap()
    };
    let tiny = load("tiny_general.mtx");
    assert_eq!((tiny.rows, tiny.entries.len()), (6, 12));
    let (g, _) = to_digraph(&tiny).unwrap();
    assert_eq!(g.num_edges(), 10);

    let skew = load("skew5.mtx");
    assert_eq!(skew.entries.len(), 8);

    let mesh = load("mesh12_sym.mtx");
    assert_eq!(mesh.rows, 144);
    let lower = mesh.lower_graph().unwrap();
    assert!(lower.is_acyclic());
    assert_eq!(lower.num_edges(), (529 - 144));
}

#[test]
fn every_fixture_yields_valid_orders_and_partitions() {
    for path in fixture_paths() {
        let pattern = parse_matrix_market(BufReader::new(File::open(&path).unwrap())).unwrap();
        let dag = acyclic_convert_toporder_rule(&pattern).unwrap();
        assert!(dag.is_acyclic(), "{path:?}");
        for ord in [
            dfs_order(&dag).unwrap(),
            bfs_min_outdeg_order(&dag).unwrap(),
            cuthill_mckee_acyclic(&dag).unwrap(),
            gorder_acyclic(&dag, 5).unwrap(),
            spectral_toporder(&dag, &SpectralConfig::direction_incentivised(&dag)).unwrap(),
        ] {
            assert!(dag.validate_toporder(&ord), "{path:?}");
            assert_eq!(
                edge_cut_distribution(&dag, &ord).unwrap().sum(),
                edge_length_distribution(&dag, &ord).unwrap().sum()
            );
        }

        let part_dag = acyclic_convert_partition_rule(&pattern).unwrap();
        if part_dag.n() >= 2 && part_dag.num_edges() > 0 {
            let p = spectral_bipartition(&part_dag, &SpectralConfig::direction_incentivised(&part_dag))
                .unwrap();
            let fixed = acyclic_fix(&part_dag, &p, &AcyclicFixConfig::default()).unwrap();
            assert_eq!(fixed.cut_counts(&part_dag).backward, 0, "{path:?}");
        }
    }
}
