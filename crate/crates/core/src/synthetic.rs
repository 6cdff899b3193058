//! Seeded planted-partition graphs and loading of externally generated
//! LFR benchmark pairs.

use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{load_edge_list, load_ground_truth, Graph};

/// Attempts made before giving up on a mostly connected sample.
pub const MAX_ATTEMPTS: u64 = 20;

/// Fraction of nodes the largest component must cover.
pub const MIN_COVERAGE: f64 = 0.95;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedPartitionSpec {
    pub n: usize,
    pub k: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl PlantedPartitionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= k <= n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        let ordered = 0.0 <= self.p_out && self.p_out < self.p_in && self.p_in <= 1.0;
        let complete = self.p_in == 1.0 && self.p_out == 1.0;
        if !(ordered || complete) {
            return Err(Error::InvalidConfig(format!(
                "need 0 <= p_out < p_in <= 1, got p_in = {}, p_out = {}",
                self.p_in, self.p_out
            )));
        }
        Ok(())
    }

    /// Block of every node; the first `n mod k` blocks get one extra node.
    pub fn blocks(&self) -> Vec<usize> {
        let base = self.n / self.k;
        let extra = self.n % self.k;
        (0..self.k)
            .flat_map(|b| std::iter::repeat_n(b, base + usize::from(b < extra)))
            .collect()
    }
}

/// Samples every unordered pair independently with the within- or
/// between-block probability and returns the largest connected component
/// together with the planted labels of its nodes.
pub fn generate_planted_partition(spec: &PlantedPartitionSpec) -> Result<(Graph, Vec<usize>)> {
    spec.validate()?;
    let blocks = spec.blocks();
    let labels: Vec<String> = (0..spec.n).map(|i| i.to_string()).collect();
    let mut best_coverage = 0;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(attempt);
        let mut edges = Vec::new();
        for i in 0..spec.n {
            for j in (i + 1)..spec.n {
                let p = if blocks[i] == blocks[j] { spec.p_in } else { spec.p_out };
                if rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        let full = match Graph::from_edges(labels.clone(), &edges) {
            Ok((g, _)) => g,
            Err(Error::EmptyGraph) => continue,
            Err(e) => return Err(e),
        };
        let (component, kept) = full.largest_component_with_map()?;
        best_coverage = best_coverage.max(kept.len());
        if (kept.len() as f64) >= MIN_COVERAGE * spec.n as f64 {
            let truth = kept.iter().map(|&i| blocks[i]).collect();
            return Ok((component, truth));
        }
    }
    Err(Error::Generation(format!(
        "no sample out of {MAX_ATTEMPTS} had a connected component covering {:.0}% of {} nodes (best: {best_coverage})",
        MIN_COVERAGE * 100.0,
        spec.n
    )))
}

/// Loads an edge list and its `node community` file, aligned on node
/// labels.
pub fn load_lfr_pair<E: BufRead, C: BufRead>(edges: E, communities: C) -> Result<(Graph, Vec<usize>)> {
    let (graph, _) = load_edge_list(edges)?;
    let labels = load_ground_truth(communities, &graph)?;
    Ok((graph, labels))
}
