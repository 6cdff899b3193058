//! Ellipsoidal graph embeddings computed by a generalized power method on a
//! shifted descriptor matrix, and community detection by vector
//! partitioning of the embedding ("embed-and-partition").
//!
//! ```
//! use ellembed::{embed_and_partition, Descriptor, Graph, PartitionConfig, SolverConfig};
//!
//! let g = Graph::from_index_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)]).unwrap();
//! let solver = SolverConfig { dimension: 6, ..Default::default() };
//! let (embedded, partition) =
//!     embed_and_partition(&g, Descriptor::Modularity, &solver, 0.01, &PartitionConfig::default()).unwrap();
//! assert!(embedded.solve.converged);
//! assert_eq!(partition.cluster_count(), 2);
//! ```

pub mod cli;
pub mod descriptor;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod pipeline;
pub mod plot;
pub mod solver;
pub mod synthetic;

pub use descriptor::{Descriptor, DescriptorOperator, ShiftedOperator};
pub use embedding::{svd_embedding, EmbeddingResult};
pub use error::{Error, Result};
pub use graph::{load_edge_list, load_ground_truth, Graph, LoadReport};
pub use metrics::{modularity_of_partition, nmi, summarize, RunArtifacts, RunSummary};
pub use partition::{best_of_restarts, Partition, PartitionConfig};
pub use pipeline::{embed, embed_and_partition, Embedded};
pub use solver::{gpm_solve, gpmm_solve, solve, IterateState, MomentumVariant, SolverConfig};
pub use synthetic::{generate_planted_partition, PlantedPartitionSpec};
