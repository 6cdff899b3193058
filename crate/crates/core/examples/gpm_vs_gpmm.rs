//! Runs the plain and the momentum power method from the same start point
//! and compares iteration counts and final objectives.

use ellembed::solver::{gpm_solve_from, gpmm_solve_from, initial_point, solver_rng};
use ellembed::{generate_planted_partition, DescriptorOperator, PlantedPartitionSpec, SolverConfig};

fn main() -> ellembed::Result<()> {
    println!("seed  gpm_iter  gpmm_iter  gpm_f          gpmm_f");
    for seed in 0..5 {
        let spec = PlantedPartitionSpec { n: 300, k: 3, p_in: 0.2, p_out: 0.01, seed };
        let (g, _) = generate_planted_partition(&spec)?;
        let k = DescriptorOperator::modularity(&g)?.shifted(0.0)?;
        let cfg = SolverConfig { dimension: 10, seed, ..Default::default() };
        let x0 = initial_point(&k, cfg.dimension, &mut solver_rng(seed))?;
        let plain = gpm_solve_from(&k, x0.clone(), &cfg)?;
        let fast = gpmm_solve_from(&k, x0, &cfg)?;
        println!(
            "{seed:4}  {:8}  {:9}  {:.8}  {:.8}",
            plain.iterations, fast.iterations, plain.objective, fast.objective
        );
    }
    Ok(())
}
