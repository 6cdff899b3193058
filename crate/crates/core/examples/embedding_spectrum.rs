//! Embeds a planted graph and prints the spectrum of rho, the effective
//! dimension for a few thresholds and the mass a truncation drops.

use ellembed::{embed, generate_planted_partition, Descriptor, PlantedPartitionSpec, SolverConfig};

fn main() -> ellembed::Result<()> {
    let spec = PlantedPartitionSpec { n: 200, k: 4, p_in: 0.25, p_out: 0.01, seed: 5 };
    let (g, _) = generate_planted_partition(&spec)?;
    let cfg = SolverConfig { dimension: 12, seed: 5, ..Default::default() };
    for descriptor in [Descriptor::Modularity, Descriptor::NormalizedLaplacian] {
        let e = embed(&g, descriptor, &cfg, 0.01)?.embedding;
        println!("{descriptor:?}: rank {}", e.rank());
        for (l, v) in e.rho_spectrum().iter().take(6).enumerate() {
            println!("  lambda_{} / n = {v:.6}", l + 1);
        }
        for eps in [0.2, 0.05, 0.01, 0.001] {
            println!("  d_eff(eps = {eps}) = {}", e.effective_dimension_at(eps)?);
        }
        let t = e.truncate();
        println!(
            "  truncated to {} coordinates, dropped {:.3e} <= eps n = {:.3e}",
            t.rank(),
            e.truncated_nuclear_mass(),
            e.epsilon() * e.node_count() as f64
        );
    }
    Ok(())
}
