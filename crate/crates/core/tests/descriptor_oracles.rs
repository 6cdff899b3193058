mod common;

use approx::assert_abs_diff_eq;
use common::*;
use ellembed::descriptor::{Descriptor, DescriptorOperator};
use ellembed::metrics::modularity_of_partition;
use ellembed::solver::{first_order_criterion, objective};
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_of(kind: Descriptor, g: &ellembed::Graph) -> Array2<f64> {
    match kind {
        Descriptor::Modularity => dense_modularity(g),
        Descriptor::NormalizedLaplacian => dense_laplacian(g),
    }
}

#[test]
fn apply_matches_dense_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let n = rng.random_range(2..=40);
        let g = random_graph(n, rng.random_range(0.05..0.6), &mut rng);
        for kind in [Descriptor::Modularity, Descriptor::NormalizedLaplacian] {
            let dense = dense_of(kind, &g);
            let op = DescriptorOperator::new(kind, &g).unwrap();
            let x = Array2::from_shape_fn((g.node_count(), 3), |_| rng.random_range(-1.0..1.0));
            assert_abs_diff_eq!(op.apply(x.view()).unwrap(), dense.dot(&x), epsilon = 1e-12);
            for i in 0..g.node_count() {
                for j in 0..g.node_count() {
                    assert_abs_diff_eq!(op.entry(i, j), dense[[i, j]], epsilon = 1e-14);
                }
            }
        }
    }
}

#[test]
fn descriptors_are_symmetric_and_annihilate_their_null_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let g = random_graph(25, 0.2, &mut rng);
        let q = dense_modularity(&g);
        assert_abs_diff_eq!(q.clone(), q.t().to_owned(), epsilon = 1e-15);
        let op = DescriptorOperator::modularity(&g).unwrap();
        let ones = Array2::ones((g.node_count(), 1));
        assert_abs_diff_eq!(op.apply(ones.view()).unwrap(), Array2::zeros((g.node_count(), 1)), epsilon = 1e-14);

        let l = DescriptorOperator::normalized_laplacian(&g).unwrap();
        let vol = g.volume();
        let sqrt_pi = Array2::from_shape_fn((g.node_count(), 1), |(i, _)| (g.degree(i) as f64 / vol).sqrt());
        assert_abs_diff_eq!(l.apply(sqrt_pi.view()).unwrap(), Array2::zeros((g.node_count(), 1)), epsilon = 1e-13);
    }
}

#[test]
fn shift_vector_matches_dense_row_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let g = random_graph(rng.random_range(2..=50), 0.3, &mut rng);
        for kind in [Descriptor::Modularity, Descriptor::NormalizedLaplacian] {
            let dense = dense_of(kind, &g);
            let op = DescriptorOperator::new(kind, &g).unwrap();
            for eps in [0.0, 0.5] {
                let got = op.diagonal_shift_vector(eps);
                let want = dense_shift_vector(&dense, eps);
                for (a, b) in got.iter().zip(&want) {
                    assert_abs_diff_eq!(a, b, epsilon = 1e-12);
                }
            }
        }
    }
}

#[test]
fn shifted_operator_matches_dense_and_is_diagonally_dominant() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let g = random_graph(rng.random_range(2..=30), 0.3, &mut rng);
        for kind in [Descriptor::Modularity, Descriptor::NormalizedLaplacian] {
            let dense = dense_shifted(&dense_of(kind, &g), 0.1);
            let k = DescriptorOperator::new(kind, &g).unwrap().shifted(0.1).unwrap();
            let n = g.node_count();
            let x = random_feasible(n, 4, &mut rng);
            assert_abs_diff_eq!(k.apply(x.view()).unwrap(), dense.dot(&x), epsilon = 1e-12);
            for i in 0..n {
                let off: f64 = (0..n).filter(|&j| j != i).map(|j| dense[[i, j]].abs()).sum();
                assert!(dense[[i, i]] - off >= 1.1 - 1e-12);
                assert_abs_diff_eq!(k.column(i), dense.column(i).to_owned(), epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn objective_and_criterion_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..30 {
        let g = random_graph(rng.random_range(2..=30), 0.3, &mut rng);
        let dense = dense_shifted(&dense_modularity(&g), 0.0);
        let k = DescriptorOperator::modularity(&g).unwrap().shifted(0.0).unwrap();
        let x = random_feasible(g.node_count(), 5, &mut rng);
        let kx = dense.dot(&x);
        let f = (&x * &kx).sum();
        let row_norms: f64 = kx.rows().into_iter().map(|r| r.dot(&r).sqrt()).sum();
        assert_abs_diff_eq!(objective(&k, x.view()).unwrap(), f, epsilon = 1e-10);
        assert_abs_diff_eq!(first_order_criterion(&k, x.view()).unwrap(), row_norms - f, epsilon = 1e-10);
    }
}

#[test]
fn random_unit_rows_are_pushed_out_of_the_unit_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let g = random_graph(20, 0.3, &mut rng);
        let k = DescriptorOperator::modularity(&g).unwrap().shifted(0.0).unwrap();
        let x = random_feasible(g.node_count(), 3, &mut rng);
        let kx = k.apply(x.view()).unwrap();
        for row in kx.rows() {
            assert!(row.dot(&row).sqrt() > 1.0);
        }
    }
}

#[test]
fn modularity_matches_dense_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let g = random_graph(rng.random_range(2..=40), 0.2, &mut rng);
        let q = dense_modularity(&g);
        let clusters = rng.random_range(1..=g.node_count());
        let labels: Vec<usize> = (0..g.node_count()).map(|_| rng.random_range(0..clusters)).collect();
        assert_abs_diff_eq!(
            modularity_of_partition(&g, &labels).unwrap(),
            dense_partition_modularity(&q, &labels),
            epsilon = 1e-12
        );
    }
}

#[test]
fn barbell_optimum_by_exhaustive_search() {
    let g = barbell();
    assert_eq!(set_partitions(6).len(), 203);
    let (labels, value) = brute_force_best(&g);
    assert_eq!(labels, vec![0, 0, 0, 1, 1, 1]);
    assert_abs_diff_eq!(value, 2.0 * (3.0 / 7.0 - 0.25), epsilon = 1e-14);
    assert_abs_diff_eq!(value, 5.0 / 14.0, epsilon = 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modularity_is_bounded(seed in any::<u64>(), n in 2usize..25, clusters in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.3, &mut rng);
        let labels: Vec<usize> = (0..g.node_count()).map(|_| rng.random_range(0..clusters.min(g.node_count()))).collect();
        let q = modularity_of_partition(&g, &labels).unwrap();
        prop_assert!((-0.5 - 1e-12..=1.0).contains(&q));
    }

    #[test]
    fn shifted_rows_of_unit_points_have_norm_at_least_one(seed in any::<u64>(), n in 2usize..20, d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, 0.4, &mut rng);
        let k = DescriptorOperator::normalized_laplacian(&g).unwrap().shifted(0.0).unwrap();
        let x = random_feasible(g.node_count(), d, &mut rng);
        let kx = k.apply(x.view()).unwrap();
        for row in kx.rows() {
            prop_assert!(row.dot(&row).sqrt() >= 1.0 - 1e-12);
        }
    }
}
