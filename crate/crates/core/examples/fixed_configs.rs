//! Rounding LP extreme points over a pseudo-forest when the menu is small.

use cms::fixed_configs::{solve_fixed_configs_traced, FixedParams};
use cms::lp::ratio;
use cms::model::{Configuration, Instance, Job};
use cms::oracle::{exact_min_machines, ExactLimits};

fn main() -> cms::Result<()> {
    let inst = Instance::combinatorial(
        vec!["a".into(), "b".into()],
        vec![Configuration::new(vec![2]), Configuration::new(vec![1, 1])],
        vec![
            Job::new("j1", 7, vec![3, 1]),
            Job::new("j2", 5, vec![1, 4]),
            Job::new("j3", 4, vec![2, 2]),
        ],
    );
    let run = solve_fixed_configs_traced(&inst, &FixedParams::new(ratio(1, 2)))?;
    println!("grid of machine counts: {:?}", run.grid);
    for c in &run.candidates {
        println!(
            "C*={:?} m={:?}: {} nonzero x (bound {}), pseudo-forest {}, cost {}",
            c.cstar, c.m, c.nonzero, c.sparsity_bound, c.pseudo_forest, c.cost
        );
    }
    let opt = exact_min_machines(&inst, ExactLimits::default()).machines();
    println!("chosen cost {}, optimum {:?}", run.schedule.cost(), opt);
    Ok(())
}
