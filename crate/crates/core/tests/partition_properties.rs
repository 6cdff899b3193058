mod common;

use approx::assert_abs_diff_eq;
use common::*;
use ellembed::metrics::modularity_of_partition;
use ellembed::partition::{
    best_of_restarts, centroids_from_labels, init_centroids, move_gain, restart_rng, restart_runs, vector_partition_objective,
    vp_run, vp_step, PartitionConfig, PartitionState,
};
use ellembed::pipeline::embed;
use ellembed::solver::SolverConfig;
use ellembed::synthetic::generate_planted_partition;
use ellembed::Descriptor;
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_objective(u: &Array2<f64>, labels: &[usize]) -> f64 {
    let h = membership(labels);
    h.t().dot(&u.dot(&u.t())).dot(&h).diag().sum()
}

fn random_rows(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_fn((n, r), |_| rng.random_range(-1.0..1.0))
}

#[test]
fn move_gain_matches_recomputed_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..30 {
        let n = rng.random_range(2..=30);
        let u = random_rows(n, 3, &mut rng);
        let k = rng.random_range(2..=4);
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let r = centroids_from_labels(u.view(), &labels, k);
        let before = vector_partition_objective(r.view());
        for i in 0..n {
            for to in (0..k).filter(|&l| l != labels[i]) {
                let mut moved = labels.clone();
                moved[i] = to;
                let after = vector_partition_objective(centroids_from_labels(u.view(), &moved, k).view());
                let gain = move_gain(u.row(i), r.row(labels[i]), r.row(to));
                assert_abs_diff_eq!(after - before, gain, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn objective_equals_dense_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let g = random_graph(rng.random_range(5..=120), 0.1, &mut rng);
        let u = random_rows(g.node_count(), 4, &mut rng);
        let p = vp_run(u.view(), &g, 5.min(g.node_count()), &mut rng, 200).unwrap();
        assert_abs_diff_eq!(p.objective(), dense_objective(&u, p.labels()), epsilon = 1e-8);
        let recomputed = centroids_from_labels(u.view(), p.labels(), p.cluster_count());
        assert_abs_diff_eq!(recomputed, p.centroids().to_owned(), epsilon = 1e-10);
        assert_eq!(p.modularity(), modularity_of_partition(&g, p.labels()).unwrap());
    }
}

#[test]
fn cluster_count_never_grows() {
    let (g, _) = generate_planted_partition(&planted(150, 3, 0.2, 0.02, 2)).unwrap();
    let e = embed(&g, Descriptor::Modularity, &SolverConfig { dimension: 8, ..Default::default() }, 0.01).unwrap();
    for seed in 0..5 {
        let p = vp_run(e.embedding.ellipsoidal(), &g, 40, &mut restart_rng(seed, 0), 200).unwrap();
        assert!(p.log().windows(2).all(|w| w[1].clusters <= w[0].clusters));
        assert!(p.cluster_count() <= 40);
        let used: std::collections::BTreeSet<_> = p.labels().iter().copied().collect();
        assert_eq!(used.len(), p.cluster_count());
        assert_eq!(used.into_iter().max().unwrap() + 1, p.cluster_count());
    }
}

#[test]
fn surplus_centroid_is_dropped_on_two_cluster_embedding() {
    let (g, _) = generate_planted_partition(&planted(120, 2, 0.25, 0.01, 5)).unwrap();
    let e = embed(&g, Descriptor::Modularity, &SolverConfig { dimension: 6, ..Default::default() }, 0.01).unwrap();
    let u = e.embedding.resolved(1e-3);
    let p = vp_run(u.ellipsoidal(), &g, 3, &mut restart_rng(0, 0), 200).unwrap();
    assert_eq!(p.cluster_count(), 2);
}

#[test]
fn exhaustive_seeding_when_k_equals_n() {
    let g = barbell();
    let u = random_rows(6, 2, &mut ChaCha8Rng::seed_from_u64(1));
    let state = init_centroids(u.view(), &g.degrees(), 6, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    assert!(state.cluster_count() <= 6);
    assert!(init_centroids(u.view(), &g.degrees(), 7, &mut ChaCha8Rng::seed_from_u64(2)).is_err());
}

#[test]
fn seeding_is_deterministic() {
    let (g, _) = generate_planted_partition(&planted(80, 2, 0.3, 0.05, 1)).unwrap();
    let u = random_rows(g.node_count(), 3, &mut ChaCha8Rng::seed_from_u64(3));
    let a = init_centroids(u.view(), &g.degrees(), 10, &mut restart_rng(4, 2)).unwrap();
    let b = init_centroids(u.view(), &g.degrees(), 10, &mut restart_rng(4, 2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn optimal_toy_is_a_fixed_point() {
    let u = ndarray::array![[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]];
    let labels = vec![0, 0, 1, 1];
    let state = PartitionState { centroids: centroids_from_labels(u.view(), &labels, 2), labels };
    assert_eq!(vp_step(u.view(), &state), state);
}

#[test]
fn identical_rows_collapse_to_one_cluster() {
    let g = barbell();
    let u = Array2::from_elem((6, 2), 0.5);
    let p = vp_run(u.view(), &g, 4, &mut restart_rng(0, 0), 200).unwrap();
    assert_eq!(p.cluster_count(), 1);
    assert_abs_diff_eq!(p.modularity(), 0.0, epsilon = 1e-15);
}

#[test]
fn best_of_restarts_keeps_the_largest_objective() {
    let g = barbell();
    let u = random_rows(6, 3, &mut ChaCha8Rng::seed_from_u64(5));
    let cfg = PartitionConfig { k: 4, restarts: 5, seed: 3, ..Default::default() };
    let runs = restart_runs(u.view(), &g, &cfg).unwrap();
    let best = best_of_restarts(u.view(), &g, &cfg).unwrap();
    let max = runs.iter().map(|p| p.objective()).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(best.objective(), max);

    let single = best_of_restarts(u.view(), &g, &PartitionConfig { restarts: 1, ..cfg.clone() }).unwrap();
    let direct = vp_run(u.view(), &g, 4, &mut restart_rng(3, 0), cfg.max_rounds).unwrap();
    assert_eq!(single, direct);
}

#[test]
fn parallel_restarts_match_sequential() {
    let (g, _) = generate_planted_partition(&planted(100, 3, 0.25, 0.02, 6)).unwrap();
    let u = random_rows(g.node_count(), 3, &mut ChaCha8Rng::seed_from_u64(6));
    let cfg = PartitionConfig { k: 20, restarts: 6, ..Default::default() };
    let a = best_of_restarts(u.view(), &g, &cfg).unwrap();
    let b = best_of_restarts(u.view(), &g, &PartitionConfig { jobs: 4, ..cfg }).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step_is_permutation_equivariant(seed in any::<u64>(), n in 2usize..20, k in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_rows(n, 3, &mut rng);
        let k = k.min(n);
        let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
        labels.sort();
        let state = PartitionState { centroids: centroids_from_labels(u.view(), &labels, k), labels };
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        // row i of the permuted problem is row perm[i] of the original
        let pu = Array2::from_shape_fn((n, 3), |(i, j)| u[[perm[i], j]]);
        let plabels: Vec<usize> = perm.iter().map(|&p| state.labels[p]).collect();
        let pstate = PartitionState { centroids: state.centroids.clone(), labels: plabels };
        let next = vp_step(u.view(), &state);
        let pnext = vp_step(pu.view(), &pstate);
        let before = state.cluster_count();
        if next.cluster_count() == before {
            for i in 0..n {
                prop_assert_eq!(pnext.labels[i], next.labels[perm[i]]);
            }
        }
        prop_assert_eq!(pnext.cluster_count(), next.cluster_count());
    }
}
