//! Highest-throughput-first on its bad family: n machines where 2 suffice.

use cms::greedy::{highest_throughput_first, BlockCaps};
use cms::oracle::{exact_min_machines, gen_tight_greedy_family, ExactLimits};

fn main() -> cms::Result<()> {
    println!("n  greedy  optimum");
    for n in 2..=8 {
        let inst = gen_tight_greedy_family(n)?;
        let demand: Vec<u64> = inst.jobs.iter().map(|j| j.demand).collect();
        let greedy = highest_throughput_first(&inst, &BlockCaps::Unbounded, &demand)?.cost();
        let opt = exact_min_machines(&inst, ExactLimits::default()).machines();
        println!("{n}  {greedy:6}  {opt:?}");
    }
    Ok(())
}
