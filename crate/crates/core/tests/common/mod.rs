#![allow(dead_code)]

use ellembed::{Graph, PlantedPartitionSpec};
use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn barbell() -> Graph {
    Graph::from_index_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)]).unwrap()
}

pub fn triangle() -> Graph {
    Graph::from_index_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
}

pub fn planted(n: usize, k: usize, p_in: f64, p_out: f64, seed: u64) -> PlantedPartitionSpec {
    PlantedPartitionSpec { n, k, p_in, p_out, seed }
}

/// Erdos-Renyi sample restricted to its largest component; at least one
/// edge is guaranteed.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::from_index_edges(n, &edges)
        .unwrap()
        .largest_connected_component()
        .unwrap()
}

pub fn dense_adjacency(g: &Graph) -> Array2<f64> {
    let n = g.node_count();
    let mut a = Array2::zeros((n, n));
    for (i, j) in g.edges() {
        a[[i, j]] = 1.0;
        a[[j, i]] = 1.0;
    }
    a
}

fn dense_degrees(a: &Array2<f64>) -> Array1<f64> {
    a.sum_axis(ndarray::Axis(1))
}

/// `(A - d d^T / 2m) / 2m`.
pub fn dense_modularity(g: &Graph) -> Array2<f64> {
    let a = dense_adjacency(g);
    let d = dense_degrees(&a);
    let vol = d.sum();
    let n = a.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| (a[[i, j]] - d[i] * d[j] / vol) / vol)
}

/// `D^{-1/2} A D^{-1/2} - sqrt(pi) sqrt(pi)^T`.
pub fn dense_laplacian(g: &Graph) -> Array2<f64> {
    let a = dense_adjacency(g);
    let d = dense_degrees(&a);
    let vol = d.sum();
    let n = a.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| {
        a[[i, j]] / (d[i] * d[j]).sqrt() - (d[i] / vol).sqrt() * (d[j] / vol).sqrt()
    })
}

/// `1 + epsilon + sum_{k != i} |M_ik|`.
pub fn dense_shift_vector(m: &Array2<f64>, epsilon: f64) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| {
            1.0 + epsilon
                + (0..m.ncols())
                    .filter(|&k| k != i)
                    .map(|k| m[[i, k]].abs())
                    .sum::<f64>()
        })
        .collect()
}

/// `M` with its diagonal replaced by the shift vector.
pub fn dense_shifted(m: &Array2<f64>, epsilon: f64) -> Array2<f64> {
    let v = dense_shift_vector(m, epsilon);
    let mut k = m.clone();
    for (i, vi) in v.into_iter().enumerate() {
        k[[i, i]] = vi;
    }
    k
}

pub fn random_feasible<R: Rng>(n: usize, d: usize, rng: &mut R) -> Array2<f64> {
    let mut x = Array2::from_shape_fn((n, d), |_| rng.sample::<f64, _>(StandardNormal));
    for mut row in x.rows_mut() {
        let norm = row.dot(&row).sqrt();
        row /= norm;
    }
    x
}

/// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(d: usize, rng: &mut R) -> Array2<f64> {
    let mut q = Array2::<f64>::zeros((d, d));
    let mut c = 0;
    while c < d {
        let mut v = Array1::from_shape_fn(d, |_| rng.sample::<f64, _>(StandardNormal));
        for p in 0..c {
            let proj = v.dot(&q.column(p));
            v.scaled_add(-proj, &q.column(p));
        }
        let norm = v.dot(&v).sqrt();
        if norm > 1e-8 {
            q.column_mut(c).assign(&(v / norm));
            c += 1;
        }
    }
    q
}

/// Binary membership matrix of a labelling.
pub fn membership(labels: &[usize]) -> Array2<f64> {
    let k = labels.iter().max().map_or(0, |&c| c + 1);
    let mut h = Array2::zeros((labels.len(), k));
    for (i, &c) in labels.iter().enumerate() {
        h[[i, c]] = 1.0;
    }
    h
}

/// `Tr(H^T Q H)` with dense matrices.
pub fn dense_partition_modularity(q: &Array2<f64>, labels: &[usize]) -> f64 {
    let h = membership(labels);
    h.t().dot(q).dot(&h).diag().sum()
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            extend(prefix, n, max.max(c), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut prefix = vec![0];
    extend(&mut prefix, n, 0, &mut out);
    out
}

/// Best partition by exhaustive search with the dense modularity matrix.
pub fn brute_force_best(g: &Graph) -> (Vec<usize>, f64) {
    let q = dense_modularity(g);
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    for labels in set_partitions(g.node_count()) {
        let value = dense_partition_modularity(&q, &labels);
        if value > best.1 + 1e-12 {
            best = (labels, value);
        }
    }
    best
}

pub fn frobenius_distance_sq(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    (a - b).mapv(|v| v * v).sum()
}

/// `||Pi(K x) - x||_F^2` and `Delta(x)` of a unit-row point, from dense `K`.
pub fn fixed_point_residuals(k: &Array2<f64>, x: &Array2<f64>) -> (f64, f64) {
    let kx = k.dot(x);
    let mut projected = kx.clone();
    for mut row in projected.rows_mut() {
        let norm = row.dot(&row).sqrt();
        row /= norm;
    }
    let f = (x * &kx).sum();
    let norms: f64 = kx.rows().into_iter().map(|r| r.dot(&r).sqrt()).sum();
    (frobenius_distance_sq(&projected, x), norms - f)
}

/// An exact fixed point of `x <- Pi(K x)` of rank one: a sign vector `s`
/// with `sign(K s) = s`, found by discrete power iteration from a random
/// start, placed along a random unit direction.
pub fn sign_fixed_point<R: Rng>(k: &Array2<f64>, d: usize, rng: &mut R) -> Array2<f64> {
    let n = k.nrows();
    let mut s = Array1::from_shape_fn(n, |_| if rng.random::<bool>() { 1.0 } else { -1.0 });
    loop {
        let next = k.dot(&s).mapv(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        if next == s {
            break;
        }
        s = next;
    }
    let mut c = Array1::from_shape_fn(d, |_| rng.sample::<f64, _>(StandardNormal));
    c /= c.dot(&c).sqrt();
    Array2::from_shape_fn((n, d), |(i, j)| s[i] * c[j])
}
