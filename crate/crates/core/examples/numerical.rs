//! Machines of capacity k split into blocks of any size: knapsack per job,
//! then first-fit packing.

use cms::lp::ratio;
use cms::model::{Instance, Job};
use cms::numerical::{min_knapsack_exact, solve_numerical_detailed};
use cms::oracle::{exact_min_machines, ExactLimits};

fn main() -> cms::Result<()> {
    // Value of a block of size 1..=4 for each job.
    let inst = Instance::numerical(
        4,
        vec![
            Job::new("train", 6, vec![1, 3, 4, 5]),
            Job::new("serve", 5, vec![2, 3, 5, 5]),
            Job::new("etl", 3, vec![1, 2, 3, 3]),
        ],
    );
    for job in &inst.jobs {
        println!("{:6} cheapest blocks {:?}", job.id, min_knapsack_exact(job, 4)?.sizes());
    }
    let run = solve_numerical_detailed(&inst, &ratio(1, 4))?;
    println!("lower bound {} machines", run.lower_bound);
    for m in &run.schedule.machines {
        let blocks: Vec<String> = m
            .assignment
            .iter()
            .map(|s| match s.job {
                Some(j) => format!("{}:{}", s.block + 1, inst.jobs[j].id),
                None => format!("{}:idle", s.block + 1),
            })
            .collect();
        println!("{} x [{}]", m.multiplicity, blocks.join(" "));
    }
    let opt = exact_min_machines(&inst, ExactLimits::default()).machines();
    println!("cost {}, optimum {:?}", run.schedule.cost(), opt);
    Ok(())
}
