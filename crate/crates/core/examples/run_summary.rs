//! Builds the JSON run summary the command-line tool writes, including
//! NMI against a known labelling and per-stage timings.

use std::collections::BTreeMap;
use std::time::Instant;

use ellembed::pipeline::partition;
use ellembed::{
    embed, generate_planted_partition, summarize, Descriptor, PartitionConfig, PlantedPartitionSpec, RunArtifacts,
    SolverConfig,
};

fn main() -> ellembed::Result<()> {
    let spec = PlantedPartitionSpec { n: 120, k: 3, p_in: 0.3, p_out: 0.02, seed: 4 };
    let (g, truth) = generate_planted_partition(&spec)?;
    let solver = SolverConfig { dimension: 8, seed: 4, ..Default::default() };
    let pcfg = PartitionConfig { k: 30, seed: 4, ..Default::default() };

    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let embedded = embed(&g, Descriptor::Modularity, &solver, 0.01)?;
    timings.insert("embed".to_owned(), start.elapsed().as_secs_f64() * 1e3);
    let start = Instant::now();
    let part = partition(&g, &embedded.embedding, &pcfg)?;
    timings.insert("partition".to_owned(), start.elapsed().as_secs_f64() * 1e3);

    let summary = summarize(&RunArtifacts {
        graph: &g,
        solve: Some((Descriptor::Modularity, &solver, &embedded.solve)),
        embedding: Some(&embedded.embedding),
        partition: Some((&part, &pcfg)),
        truth: Some(&truth),
        timings_ms: Some(timings),
    })?;
    println!("{}", summary.to_json()?);
    Ok(())
}
