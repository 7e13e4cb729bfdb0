//! The approximation scheme on a small instance and on one large enough to
//! take the LP route.

use cms::lp::{ratio, rational};
use cms::model::{validate_schedule, Configuration, Instance, Job};
use cms::ptas::{solve_ptas_detailed, PtasOptions, PtasPath};

fn main() -> cms::Result<()> {
    let small = Instance::combinatorial(
        vec!["a".into(), "b".into()],
        vec![Configuration::new(vec![1, 1]), Configuration::new(vec![2])],
        vec![Job::new("j1", 5, vec![1, 1]), Job::new("j2", 2, vec![2, 1])],
    );
    let run = solve_ptas_detailed(&small, &ratio(1, 2), &PtasOptions::default())?;
    println!(
        "small instance: {} large / {} small jobs, {:?}, cost {}",
        run.classification.large.len(),
        run.classification.small.len(),
        run.path,
        run.schedule.cost()
    );

    let many = Instance::combinatorial(
        vec!["slot".into()],
        vec![Configuration::new(vec![1])],
        (0..100).map(|j| Job::new(format!("t{j}"), 1, vec![1])).collect(),
    );
    let run = solve_ptas_detailed(&many, &rational(1), &PtasOptions::default())?;
    if let PtasPath::Lp { lp_value, overflow_machines } = &run.path {
        println!("100 unit jobs: LP value {lp_value}, {overflow_machines} overflow machines");
    }
    println!("100 unit jobs: cost {}", run.schedule.cost());
    assert!(validate_schedule(&many, &run.schedule).is_empty());
    Ok(())
}
