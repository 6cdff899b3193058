//! Partition quality measures and the run summary.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::descriptor::Descriptor;
use crate::embedding::EmbeddingResult;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{Partition, PartitionConfig};
use crate::solver::{IterateState, SolverConfig};

/// Modularity `sum_c [m_c / m - (D_c / 2m)^2]` of a labelling, which equals
/// `Tr(H^T Q H)` for the membership matrix `H`. Runs in `O(n + m)`.
pub fn modularity_of_partition(graph: &Graph, labels: &[usize]) -> Result<f64> {
    let n = graph.node_count();
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: n,
        });
    }
    if let Some(&bad) = labels.iter().find(|&&c| c >= n) {
        return Err(Error::LabelOutOfRange { label: bad, nodes: n });
    }
    let clusters = labels.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0usize; clusters];
    let mut volume = vec![0usize; clusters];
    for i in 0..n {
        volume[labels[i]] += graph.degree(i);
    }
    for (i, j) in graph.edges() {
        if labels[i] == labels[j] {
            internal[labels[i]] += 1;
        }
    }
    let m = graph.edge_count() as f64;
    let vol = graph.volume();
    Ok(internal
        .iter()
        .zip(&volume)
        .map(|(&mc, &dc)| mc as f64 / m - (dc as f64 / vol).powi(2))
        .sum())
}

/// Normalized mutual information `2 I(A;B) / (H(A) + H(B))`, natural logs.
///
/// Returns exactly 1 when the partitions agree up to relabelling (this
/// includes two single-cluster partitions) and 0 when exactly one of them
/// is a single cluster. The result is exactly symmetric in its arguments.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(1.0);
    }
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut count_a: HashMap<usize, usize> = HashMap::new();
    let mut count_b: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *count_a.entry(x).or_default() += 1;
        *count_b.entry(y).or_default() += 1;
    }
    if joint.len() == count_a.len() && joint.len() == count_b.len() {
        return Ok(1.0);
    }
    if count_a.len() == 1 || count_b.len() == 1 {
        return Ok(0.0);
    }

    let total = a.len() as f64;
    let entropy = |counts: &HashMap<usize, usize>| {
        sorted_sum(counts.values().map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        }))
    };
    let mutual = sorted_sum(joint.iter().map(|(&(x, y), &c)| {
        let c = c as f64;
        let expected = count_a[&x] as f64 * count_b[&y] as f64;
        c / total * (c * total / expected).ln()
    }));
    let value = 2.0 * mutual / (entropy(&count_a) + entropy(&count_b));
    Ok(value.clamp(0.0, 1.0))
}

/// Order-independent sum: terms are sorted before accumulation.
fn sorted_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = terms.collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

pub const SCHEMA_VERSION: u32 = 1;

/// NMI normalization recorded in summaries.
pub const NMI_NORMALIZATION: &str = "arithmetic";

/// Number of leading `rho / n` eigenvalues kept in a summary.
pub const SPECTRUM_HEAD: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverEcho {
    pub descriptor: Descriptor,
    pub d0: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub momentum: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum_variant: Option<String>,
    pub seed: u64,
    pub shift_epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub k_init: usize,
    pub restarts: usize,
    pub tail_tolerance: f64,
    /// Embedding coordinates the partition was computed on.
    pub coordinates: usize,
    pub clusters: usize,
    pub modularity: f64,
    pub objective: f64,
    pub rounds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmi_normalization: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub delta_criterion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSummary {
    pub rank: usize,
    pub d_eff: usize,
    pub epsilon: f64,
    pub rho_spectrum_head: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub graph: GraphStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionSummary>,
    /// Wall-clock milliseconds per stage; absent unless requested, so that
    /// repeated runs produce identical files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

/// Everything a summary is assembled from. Stages that did not run in this
/// invocation are `None`.
pub struct RunArtifacts<'a> {
    pub graph: &'a Graph,
    pub solve: Option<(Descriptor, &'a SolverConfig, &'a IterateState)>,
    pub embedding: Option<&'a EmbeddingResult>,
    pub partition: Option<(&'a Partition, &'a PartitionConfig)>,
    pub truth: Option<&'a [usize]>,
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

pub fn summarize(artifacts: &RunArtifacts<'_>) -> Result<RunSummary> {
    let partition = match artifacts.partition {
        None => None,
        Some((p, cfg)) => {
            let nmi = artifacts.truth.map(|t| nmi(t, p.labels())).transpose()?;
            Some(PartitionSummary {
                k_init: p.k_init(),
                restarts: cfg.restarts,
                tail_tolerance: cfg.tail_tolerance,
                coordinates: p.centroids().ncols(),
                clusters: p.cluster_count(),
                modularity: p.modularity(),
                objective: p.objective(),
                rounds: p.rounds(),
                nmi,
                nmi_normalization: nmi.map(|_| NMI_NORMALIZATION.to_owned()),
            })
        }
    };
    let solver = artifacts.solve.map(|(descriptor, cfg, _)| SolverEcho {
        descriptor,
        d0: cfg.dimension,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        momentum: cfg.momentum,
        momentum_variant: cfg.momentum.then(|| cfg.momentum_variant.name().to_owned()),
        seed: cfg.seed,
        shift_epsilon: cfg.shift_epsilon,
    });
    let solve = artifacts.solve.map(|(_, _, state)| SolveSummary {
        iterations: state.iterations,
        converged: state.converged,
        objective: state.objective,
        delta_criterion: state.delta,
    });
    let embedding = artifacts.embedding.map(|e| EmbeddingSummary {
        rank: e.rank(),
        d_eff: e.effective_dimension(),
        epsilon: e.epsilon(),
        rho_spectrum_head: e.rho_spectrum().into_iter().take(SPECTRUM_HEAD).collect(),
    });
    let summary = RunSummary {
        schema_version: SCHEMA_VERSION,
        graph: GraphStats {
            nodes: artifacts.graph.node_count(),
            edges: artifacts.graph.edge_count(),
            sha256: artifacts.graph.content_hash(),
        },
        solver,
        solve,
        embedding,
        partition,
        timings_ms: artifacts.timings_ms.clone(),
    };
    summary.validate()?;
    Ok(summary)
}

impl RunSummary {
    /// Checks the schema-level invariants.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported summary schema version {}",
                self.schema_version
            )));
        }
        let mut numbers = Vec::new();
        if let Some(s) = &self.solver {
            numbers.extend([s.tol, s.shift_epsilon]);
        }
        if let Some(s) = &self.solve {
            numbers.extend([s.objective, s.delta_criterion]);
        }
        if let Some(e) = &self.embedding {
            numbers.push(e.epsilon);
            numbers.extend(&e.rho_spectrum_head);
        }
        if let Some(p) = &self.partition {
            numbers.extend([p.modularity, p.objective, p.tail_tolerance]);
            if !(-1.0..=1.0).contains(&p.modularity) {
                return Err(Error::InvalidConfig("modularity outside [-1, 1]".into()));
            }
            if let Some(v) = p.nmi {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidConfig("nmi outside [0, 1]".into()));
                }
            }
        }
        if let Some(t) = &self.timings_ms {
            numbers.extend(t.values());
        }
        if numbers.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("run summary"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let summary: RunSummary = serde_json::from_str(text)?;
        summary.validate()?;
        Ok(summary)
    }
}
