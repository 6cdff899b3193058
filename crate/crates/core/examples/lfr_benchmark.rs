//! Scores embed-and-partition on externally generated LFR graphs. Pass
//! pairs of `network.dat community.dat` paths; pairs that do not exist are
//! skipped.
//!
//! cargo run --release --example lfr_benchmark -- mu0.1/network.dat mu0.1/community.dat

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use ellembed::synthetic::load_lfr_pair;
use ellembed::{embed_and_partition, nmi, Descriptor, PartitionConfig, SolverConfig};

fn main() -> ellembed::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args.len() % 2 != 0 {
        println!("usage: lfr_benchmark EDGES COMMUNITIES [EDGES COMMUNITIES ...]");
        return Ok(());
    }
    for pair in args.chunks(2) {
        if !Path::new(&pair[0]).exists() || !Path::new(&pair[1]).exists() {
            println!("skip {} (missing)", pair[0]);
            continue;
        }
        let (g, truth) = load_lfr_pair(
            BufReader::new(File::open(&pair[0])?),
            BufReader::new(File::open(&pair[1])?),
        )?;
        let (embedded, part) = embed_and_partition(
            &g,
            Descriptor::Modularity,
            &SolverConfig { dimension: 30, ..Default::default() },
            0.01,
            &PartitionConfig { k: 100, restarts: 5, ..Default::default() },
        )?;
        println!(
            "{}: n {}, d_eff {}, clusters {}, modularity {:.4}, nmi {:.4}",
            pair[0],
            g.node_count(),
            embedded.embedding.effective_dimension(),
            part.cluster_count(),
            part.modularity(),
            nmi(&truth, part.labels())?
        );
    }
    Ok(())
}
