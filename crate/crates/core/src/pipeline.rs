//! Embed-and-partition: descriptor, shifted solve, SVD embedding and
//! vector partitioning in one call.

use crate::descriptor::{Descriptor, DescriptorOperator};
use crate::embedding::{svd_embedding, EmbeddingResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{best_of_restarts, Partition, PartitionConfig};
use crate::solver::{solve, IterateState, SolverConfig};

#[derive(Clone, Debug)]
pub struct Embedded {
    pub solve: IterateState,
    pub embedding: EmbeddingResult,
}

/// Solves the shifted problem for `descriptor` and factors the result.
pub fn embed(graph: &Graph, descriptor: Descriptor, cfg: &SolverConfig, epsilon: f64) -> Result<Embedded> {
    let k = DescriptorOperator::new(descriptor, graph)?.shifted(cfg.shift_epsilon)?;
    let state = solve(&k, cfg)?;
    let embedding = svd_embedding(state.x.view(), epsilon)?;
    Ok(Embedded { solve: state, embedding })
}

/// Partitions the ellipsoidal coordinates of an embedding, without the
/// directions below `cfg.tail_tolerance`. `k` is capped at the node count.
pub fn partition(graph: &Graph, embedding: &EmbeddingResult, cfg: &PartitionConfig) -> Result<Partition> {
    if !(0.0..1.0).contains(&cfg.tail_tolerance) {
        return Err(Error::InvalidConfig(format!(
            "tail tolerance must lie in [0, 1), got {}",
            cfg.tail_tolerance
        )));
    }
    let cfg = PartitionConfig {
        k: cfg.k.min(graph.node_count()),
        ..cfg.clone()
    };
    let resolved = embedding.resolved(cfg.tail_tolerance);
    best_of_restarts(resolved.ellipsoidal(), graph, &cfg)
}

/// [`embed`] followed by [`partition`].
pub fn embed_and_partition(
    graph: &Graph,
    descriptor: Descriptor,
    solver: &SolverConfig,
    epsilon: f64,
    partition_cfg: &PartitionConfig,
) -> Result<(Embedded, Partition)> {
    let embedded = embed(graph, descriptor, solver, epsilon)?;
    let p = partition(graph, &embedded.embedding, partition_cfg)?;
    Ok((embedded, p))
}
