//! Recovers a planted partition and scores it against the truth with NMI.

use ellembed::{embed_and_partition, generate_planted_partition, nmi, Descriptor, PartitionConfig, PlantedPartitionSpec, SolverConfig};

fn main() -> ellembed::Result<()> {
    println!("p_out  seed  clusters  d_eff  modularity  nmi");
    for p_out in [0.01, 0.03, 0.05] {
        for seed in 0..3 {
            let spec = PlantedPartitionSpec { n: 300, k: 3, p_in: 0.2, p_out, seed };
            let (g, truth) = generate_planted_partition(&spec)?;
            let (embedded, part) = embed_and_partition(
                &g,
                Descriptor::Modularity,
                &SolverConfig { dimension: 10, seed, ..Default::default() },
                0.01,
                &PartitionConfig { k: 30, restarts: 5, seed, ..Default::default() },
            )?;
            println!(
                "{p_out:5}  {seed:4}  {:8}  {:5}  {:10.6}  {:.4}",
                part.cluster_count(),
                embedded.embedding.effective_dimension(),
                part.modularity(),
                nmi(&truth, part.labels())?
            );
        }
    }
    Ok(())
}
