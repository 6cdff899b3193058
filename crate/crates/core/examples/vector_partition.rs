//! Vector partitioning on its own: every restart of a multi-start run,
//! and the per-round log of the best one.

use ellembed::partition::restart_runs;
use ellembed::{best_of_restarts, embed, generate_planted_partition, Descriptor, PartitionConfig, PlantedPartitionSpec, SolverConfig};

fn main() -> ellembed::Result<()> {
    let spec = PlantedPartitionSpec { n: 150, k: 5, p_in: 0.3, p_out: 0.01, seed: 2 };
    let (g, _) = generate_planted_partition(&spec)?;
    let e = embed(&g, Descriptor::Modularity, &SolverConfig { dimension: 10, ..Default::default() }, 0.01)?.embedding;
    let u = e.resolved(ellembed::partition::TAIL_TOLERANCE);
    println!("partitioning {} of {} coordinates", u.rank(), e.rank());
    let cfg = PartitionConfig { k: 40, restarts: 6, ..Default::default() };
    for (r, run) in restart_runs(u.ellipsoidal(), &g, &cfg)?.iter().enumerate() {
        println!(
            "restart {r}: {} clusters after {} rounds, objective {:.6}, modularity {:.6}",
            run.cluster_count(),
            run.rounds(),
            run.objective(),
            run.modularity()
        );
    }
    let best = best_of_restarts(u.ellipsoidal(), &g, &cfg)?;
    println!("best: {} clusters, modularity {:.6}", best.cluster_count(), best.modularity());
    println!("{}", best.log_json()?);
    Ok(())
}
