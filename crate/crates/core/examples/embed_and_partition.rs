//! Embed-and-partition on two triangles joined by a bridge.

use ellembed::{embed_and_partition, Descriptor, Graph, PartitionConfig, SolverConfig};

fn main() -> ellembed::Result<()> {
    let g = Graph::from_index_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)])?;
    let (embedded, part) = embed_and_partition(
        &g,
        Descriptor::Modularity,
        &SolverConfig::default(),
        0.01,
        &PartitionConfig::default(),
    )?;
    println!(
        "solve: {} iterations, converged {}, f = {:.6}, Delta = {:.2e}",
        embedded.solve.iterations, embedded.solve.converged, embedded.solve.objective, embedded.solve.delta
    );
    println!("d_eff {}", embedded.embedding.effective_dimension());
    println!("labels {:?}", part.labels());
    println!("clusters {}, modularity {:.12} (5/14 = {:.12})", part.cluster_count(), part.modularity(), 5.0 / 14.0);
    Ok(())
}
