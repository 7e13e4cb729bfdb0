//! LP relaxation, split into integer and fractional parts, then greedy covering.

use cms::greedy::solve_greedy_log_detailed;
use cms::model::{validate_schedule, Configuration, Instance, Job};

fn main() -> cms::Result<()> {
    let inst = Instance::combinatorial(
        vec!["small".into(), "large".into()],
        vec![
            Configuration::new(vec![4]),
            Configuration::new(vec![2, 1]),
            Configuration::new(vec![0, 2]),
        ],
        vec![
            Job::new("web", 9, vec![2, 5]),
            Job::new("batch", 14, vec![1, 4]),
            Job::new("cache", 3, vec![3, 3]),
        ],
    );
    let run = solve_greedy_log_detailed(&inst)?;
    println!("LP value        {}", run.lp_value);
    println!("integer part    {} machines", run.s1.cost());
    println!("fractional part {} machines", run.s2.cost());
    println!("final schedule  {} machines", run.schedule.cost());
    assert!(validate_schedule(&inst, &run.schedule).is_empty());
    Ok(())
}
