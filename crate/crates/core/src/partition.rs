//! Vector partitioning of embedding rows.
//!
//! Clusters are represented by centroid sums `R_l = sum_{c_i = l} U_i` and
//! the objective is `z = sum_l ||R_l||^2 = Tr(H^T U U^T H)`. Each round
//! reassigns every node to `argmax_l U_i R_l^T` against the frozen
//! centroids, then recomputes all centroids at once and drops clusters
//! that lost every member. A run stops as soon as the modularity of the
//! labelling stops increasing and returns the best labelling seen.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::modularity_of_partition;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    /// Number of initial centroids.
    pub k: usize,
    pub restarts: usize,
    pub max_rounds: usize,
    pub seed: u64,
    /// Worker threads for restarts; results do not depend on it.
    pub jobs: usize,
    /// Embedding directions whose `rho` eigenvalue is at most this fraction
    /// of the largest are left out of the partitioning.
    pub tail_tolerance: f64,
}

/// Default [`PartitionConfig::tail_tolerance`].
pub const TAIL_TOLERANCE: f64 = 1e-3;

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            k: 100,
            restarts: 5,
            max_rounds: 200,
            seed: 0,
            jobs: 1,
            tail_tolerance: TAIL_TOLERANCE,
        }
    }
}

/// Labels with their centroid sums; labels are always `0..centroids.nrows()`
/// and every cluster is non-empty.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionState {
    pub labels: Vec<usize>,
    pub centroids: Array2<f64>,
}

impl PartitionState {
    pub fn cluster_count(&self) -> usize {
        self.centroids.nrows()
    }

    pub fn objective(&self) -> f64 {
        vector_partition_objective(self.centroids.view())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub objective: f64,
    pub modularity: f64,
    pub clusters: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    state: PartitionState,
    k_init: usize,
    objective: f64,
    modularity: f64,
    rounds: usize,
    log: Vec<RoundRecord>,
}

impl Partition {
    pub fn labels(&self) -> &[usize] {
        &self.state.labels
    }

    pub fn centroids(&self) -> ArrayView2<'_, f64> {
        self.state.centroids.view()
    }

    pub fn cluster_count(&self) -> usize {
        self.state.cluster_count()
    }

    pub fn k_init(&self) -> usize {
        self.k_init
    }

    /// `z` of the returned labelling.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn modularity(&self) -> f64 {
        self.modularity
    }

    /// Rounds executed, including the one that triggered the stop.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// One record per labelling visited, starting with the initial one.
    pub fn log(&self) -> &[RoundRecord] {
        &self.log
    }

    pub fn log_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.log)?;
        s.push('\n');
        Ok(s)
    }
}

/// `sum_l ||R_l||^2`.
pub fn vector_partition_objective(centroids: ArrayView2<f64>) -> f64 {
    centroids.iter().map(|v| v * v).sum()
}

/// Centroid sums for `clusters` clusters.
pub fn centroids_from_labels(u: ArrayView2<f64>, labels: &[usize], clusters: usize) -> Array2<f64> {
    let mut r = Array2::zeros((clusters, u.ncols()));
    for (row, &c) in u.axis_iter(Axis(0)).zip(labels) {
        let mut target = r.row_mut(c);
        target += &row;
    }
    r
}

/// Change of `z` when moving a node with row `u_i` from the cluster with
/// centroid `from` (which contains it) to the cluster with centroid `to`:
/// `2 u_i (R_to - R_from)^T + 2 ||u_i||^2`.
pub fn move_gain(u_i: ArrayView1<f64>, from: ArrayView1<f64>, to: ArrayView1<f64>) -> f64 {
    2.0 * (u_i.dot(&to) - u_i.dot(&from)) + 2.0 * u_i.dot(&u_i)
}

fn argmax_assign(u: ArrayView2<f64>, centroids: ArrayView2<f64>) -> Vec<usize> {
    let scores = u.dot(&centroids.t());
    scores
        .axis_iter(Axis(0))
        .map(|row| {
            let mut best = 0;
            for (l, &s) in row.iter().enumerate() {
                if s > row[best] {
                    best = l;
                }
            }
            best
        })
        .collect()
}

/// Renumbers labels to drop unused clusters, preserving their order.
fn compact(labels: &mut [usize], clusters: usize) -> usize {
    let mut used = vec![false; clusters];
    for &c in labels.iter() {
        used[c] = true;
    }
    let mut remap = vec![usize::MAX; clusters];
    let mut next = 0;
    for (c, &u) in used.iter().enumerate() {
        if u {
            remap[c] = next;
            next += 1;
        }
    }
    for c in labels.iter_mut() {
        *c = remap[*c];
    }
    next
}

fn state_from_assignment(u: ArrayView2<f64>, mut labels: Vec<usize>, clusters: usize) -> PartitionState {
    let surviving = compact(&mut labels, clusters);
    let centroids = centroids_from_labels(u, &labels, surviving);
    PartitionState { labels, centroids }
}

/// Seeds `k` centroids at rows drawn without replacement with probability
/// proportional to degree, assigns every node to its best seed and
/// recomputes the centroid sums.
pub fn init_centroids<R: rand::Rng + ?Sized>(
    u: ArrayView2<f64>,
    degrees: &[usize],
    k: usize,
    rng: &mut R,
) -> Result<PartitionState> {
    let n = u.nrows();
    if degrees.len() != n {
        return Err(Error::LengthMismatch {
            left: degrees.len(),
            right: n,
        });
    }
    if k == 0 || k > n {
        return Err(Error::TooManySamples {
            requested: k,
            available: n,
        });
    }
    let seeds = rand::seq::index::sample_weighted(rng, n, |i| degrees[i] as f64, k)
        .map_err(|e| Error::InvalidConfig(format!("centroid sampling: {e}")))?;
    let mut centroids = Array2::zeros((k, u.ncols()));
    for (l, i) in seeds.iter().enumerate() {
        centroids.row_mut(l).assign(&u.row(i));
    }
    let labels = argmax_assign(u, centroids.view());
    Ok(state_from_assignment(u, labels, k))
}

/// One synchronous round: reassign against the current centroids, then
/// rebuild them and drop empty clusters.
pub fn vp_step(u: ArrayView2<f64>, state: &PartitionState) -> PartitionState {
    let labels = argmax_assign(u, state.centroids.view());
    state_from_assignment(u, labels, state.cluster_count())
}

/// Runs vector partitioning from one random initialization.
pub fn vp_run<R: rand::Rng + ?Sized>(
    u: ArrayView2<f64>,
    graph: &Graph,
    k: usize,
    rng: &mut R,
    max_rounds: usize,
) -> Result<Partition> {
    if u.nrows() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            found: u.nrows(),
        });
    }
    let mut state = init_centroids(u, &graph.degrees(), k, rng)?;
    let mut best_q = modularity_of_partition(graph, &state.labels)?;
    let mut log = vec![RoundRecord {
        round: 0,
        objective: state.objective(),
        modularity: best_q,
        clusters: state.cluster_count(),
    }];
    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        let next = vp_step(u, &state);
        let q = modularity_of_partition(graph, &next.labels)?;
        log.push(RoundRecord {
            round: rounds,
            objective: next.objective(),
            modularity: q,
            clusters: next.cluster_count(),
        });
        if q > best_q {
            best_q = q;
            state = next;
        } else {
            break;
        }
    }
    Ok(Partition {
        objective: state.objective(),
        modularity: best_q,
        state,
        k_init: k,
        rounds,
        log,
    })
}

/// Generator for restart `index` of a run seeded with `seed`: one ChaCha
/// stream per restart.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `cfg.restarts` independent partitions and keeps the one with the
/// largest objective `z` (first on ties).
pub fn best_of_restarts(u: ArrayView2<f64>, graph: &Graph, cfg: &PartitionConfig) -> Result<Partition> {
    let runs = restart_runs(u, graph, cfg)?;
    let mut best = 0;
    for (i, p) in runs.iter().enumerate() {
        if p.objective > runs[best].objective {
            best = i;
        }
    }
    Ok(runs.into_iter().nth(best).expect("at least one restart"))
}

/// Every restart of [`best_of_restarts`], in restart order.
pub fn restart_runs(u: ArrayView2<f64>, graph: &Graph, cfg: &PartitionConfig) -> Result<Vec<Partition>> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let run = |i: usize| vp_run(u, graph, cfg.k, &mut restart_rng(cfg.seed, i), cfg.max_rounds);
    if cfg.jobs <= 1 {
        return (0..cfg.restarts).map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| (0..cfg.restarts).into_par_iter().map(run).collect())
}
