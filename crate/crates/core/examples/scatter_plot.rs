//! Writes a two-panel SVG scatter of the spherical embedding of a planted
//! graph, colored by the recovered clusters.
//!
//! cargo run --example scatter_plot -- out.svg

use ellembed::plot::render_scatter_svg;
use ellembed::{embed_and_partition, generate_planted_partition, Descriptor, PartitionConfig, PlantedPartitionSpec, SolverConfig};

fn main() -> ellembed::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "scatter.svg".into());
    let spec = PlantedPartitionSpec { n: 200, k: 4, p_in: 0.3, p_out: 0.01, seed: 7 };
    let (g, _) = generate_planted_partition(&spec)?;
    let (embedded, part) = embed_and_partition(
        &g,
        Descriptor::Modularity,
        &SolverConfig { dimension: 10, seed: 7, ..Default::default() },
        0.01,
        &PartitionConfig::default(),
    )?;
    let coords = embedded.embedding.spherical();
    let svg = render_scatter_svg(coords.view(), Some(part.labels()), 2)?;
    std::fs::write(&path, svg)?;
    println!("wrote {path} ({} clusters)", part.cluster_count());
    Ok(())
}
