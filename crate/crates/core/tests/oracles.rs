use dagorder_core::acyclic::{acyclic_fix_detailed, AcyclicFixConfig};
use dagorder_core::locality::{
    access_pattern, edge_cut_distribution, edge_length_distribution, reuse_distance_distribution,
};
use dagorder_core::spectral::{quadratic_form, solve_fiedler, solve_restricted};
use dagorder_core::testkit;
use dagorder_core::toporder::{dfs_order, gorder_acyclic, spectral_toporder};
use dagorder_core::{Restriction, SpectralConfig};
use rand::Rng;

#[test]
fn fiedler_value_matches_dense_oracle_on_both_paths() {
    let mut rng = testkit::rng(7);
    for case in 0..25 {
        let n = rng.random_range(3..40);
        let g = testkit::random_connected_digraph(&mut rng, n, 0.08);
        for c in [0.0, 0.5 / g.num_edges() as f64] {
            let expected = testkit::dense_restricted_minimum(&g, c);
            for small_threshold in [0, 64] {
                let cfg = SpectralConfig {
                    c,
                    small_threshold,
                    seed: case,
                    ..SpectralConfig::default()
                };
                let sol = solve_fiedler(&g, &cfg).unwrap();
                let norm: f64 = sol.x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let sum: f64 = sol.x.iter().sum();
                assert!((norm - 1.0).abs() < 1e-9 && sum.abs() < 1e-9);
                assert!(
                    (sol.value - expected).abs() < 1e-6,
                    "case {case} n={n} c={c} threshold={small_threshold}: {} vs {expected}",
                    sol.value
                );
            }
        }
    }
}

#[test]
fn restricted_solution_beats_random_feasible_points() {
    let mut rng = testkit::rng(11);
    for _ in 0..20 {
        let n = rng.random_range(8..50);
        let g = testkit::random_dag(&mut rng, n, 0.2);
        let ord = dfs_order(&g).unwrap();
        let seq = ord.sequence();
        let a = rng.random_range(0..n / 3);
        let b = n - rng.random_range(0..n / 3);
        let r = Restriction {
            k: seq[..a].to_vec(),
            m: seq[b..].to_vec(),
        };
        let c = 0.5 / g.num_edges().max(1) as f64;
        for small_threshold in [0, 64] {
            let cfg = SpectralConfig {
                c,
                small_threshold,
                ..SpectralConfig::default()
            };
            let sol = solve_restricted(&g, &cfg, &r).unwrap();
            let free = &seq[a..b];
            let radius = (free.len() as f64 / n as f64).sqrt();
            let z: Vec<f64> = free.iter().map(|&v| sol.x[v]).collect();
            assert!((z.iter().map(|v| v * v).sum::<f64>().sqrt() - radius).abs() < 1e-9);
            assert!(z.iter().sum::<f64>().abs() < 1e-9);
            for _ in 0..200 {
                let mut w = testkit::random_centered_vector(&mut rng, free.len());
                let s = radius / w.iter().map(|v| v * v).sum::<f64>().sqrt();
                w.iter_mut().for_each(|v| *v *= s);
                let mut x = sol.x.clone();
                for (i, &v) in free.iter().enumerate() {
                    x[v] = w[i];
                }
                assert!(quadratic_form(&g, &x, c).unwrap() >= sol.value - 1e-9);
            }
        }
    }
}

#[test]
fn acyclic_fix_cut_is_minimal_over_admissible_splits() {
    let mut rng = testkit::rng(3);
    for _ in 0..300 {
        let n = rng.random_range(2..=12);
        let density = rng.random_range(0.1..0.6);
        let g = testkit::random_dag(&mut rng, n, density);
        let p = testkit::random_partition(&mut rng, n).oriented_forward(&g);
        let beta = [0.1, 0.25, 0.4][rng.random_range(0..3)];
        let out = acyclic_fix_detailed(&g, &p, &AcyclicFixConfig { beta }).unwrap();
        let (best, cuts) = testkit::brute_force_fix_cut(&g, &p, beta);
        assert_eq!(out.cut, best);
        assert_eq!(cuts.len(), n + 1 - out.s_bound - out.t_bound);
        assert_eq!(out.partition.cut_counts(&g).cut(), best);
    }
}

#[test]
fn locality_matches_naive_counts() {
    let mut rng = testkit::rng(5);
    for _ in 0..30 {
        let n = rng.random_range(1..120);
        let g = testkit::random_sparse_dag(&mut rng, n, 2.5);
        for ord in [
            dfs_order(&g).unwrap(),
            gorder_acyclic(&g, 5).unwrap(),
            spectral_toporder(&g, &SpectralConfig::direction_incentivised(&g)).unwrap(),
        ] {
            assert_eq!(
                edge_length_distribution(&g, &ord).unwrap().values(),
                testkit::naive_edge_lengths(&g, &ord).as_slice()
            );
            let mut cuts = testkit::naive_edge_cuts(&g, &ord);
            cuts.sort_unstable();
            assert_eq!(edge_cut_distribution(&g, &ord).unwrap().values(), cuts.as_slice());
            let a = access_pattern(&g, &ord).unwrap();
            assert_eq!(a, testkit::naive_access_pattern(&g, &ord));
            assert_eq!(
                reuse_distance_distribution(&a).values(),
                testkit::naive_reuse_distances(&a).as_slice()
            );
        }
    }
}
