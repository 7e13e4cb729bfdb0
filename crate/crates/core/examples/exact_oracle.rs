//! Exact optima from the exhaustive search and the dynamic program.

use cms::oracle::{exact_min_machines, gen_random, ExactLimits, ExactOutcome, GenParams};
use cms::ptas::dp_min_machines;

fn main() -> cms::Result<()> {
    for seed in 0..5 {
        let inst = gen_random(&GenParams { n: 4, seed, ..GenParams::default() })?;
        let dp = dp_min_machines(&inst, ExactLimits::default())?;
        match exact_min_machines(&inst, ExactLimits::default()) {
            ExactOutcome::Optimal { machines, .. } => println!("seed {seed}: optimum {machines}, dp {dp}"),
            other => println!("seed {seed}: {other:?}"),
        }
    }
    let tiny = ExactLimits::with_budget(3);
    let inst = gen_random(&GenParams { n: 5, seed: 9, ..GenParams::default() })?;
    println!("budget of 3 nodes: {:?}", exact_min_machines(&inst, tiny));
    Ok(())
}
