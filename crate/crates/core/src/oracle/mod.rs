//! Ground truth: exhaustive optimum, brute-force single-machine throughput,
//! and seeded instance generators.

mod exact;
mod gen;

pub(crate) use exact::minimal_vectors;

pub use exact::{exact_min_machines, exact_schedule, ExactLimits, ExactOutcome, DEFAULT_NODE_BUDGET};
pub use gen::{gen_numerical_random, gen_random, gen_tight_greedy_family, GenParams};

use crate::error::{CmsError, Result};
use crate::model::{Configuration, Instance};

pub const MAX_BRUTE_SLOTS: u64 = 6;

/// Best throughput of one machine with configuration `sigma` against demand
/// `demand`, over every block-to-job map (idle blocks included).
pub fn brute_max_throughput(inst: &Instance, demand: &[u64], sigma: &Configuration) -> Result<u64> {
    if sigma.size() > MAX_BRUTE_SLOTS {
        return Err(CmsError::GuardExceeded(format!(
            "brute-force throughput needs at most {MAX_BRUTE_SLOTS} slots, got {}",
            sigma.size()
        )));
    }
    let slots: Vec<usize> = sigma.slots().collect();
    let n = inst.n_jobs();
    let mut given = vec![0u64; n];

    fn go(inst: &Instance, demand: &[u64], slots: &[usize], given: &mut [u64]) -> u64 {
        let Some((&block, rest)) = slots.split_first() else {
            return given.iter().zip(demand).map(|(g, d)| *g.min(d)).sum();
        };
        let mut best = go(inst, demand, rest, given);
        for j in 0..given.len() {
            let f = inst.jobs[j].value(block);
            given[j] += f;
            best = best.max(go(inst, demand, rest, given));
            given[j] -= f;
        }
        best
    }
    Ok(go(inst, demand, &slots, &mut given[..]))
}
