//! Every solver against the exact optimum on a seeded suite.

use cms::bench::{default_algorithms, run_bench, suite_instances, BenchEps, Suite};
use cms::oracle::ExactLimits;

fn main() -> cms::Result<()> {
    let limits = ExactLimits::default();
    for suite in [Suite::Small, Suite::Numerical] {
        let instances = suite_instances(suite, 5, 1)?;
        let report = run_bench(&instances, &default_algorithms(suite, &BenchEps::default(), limits), limits, false);
        print!("{}", report.to_text());
    }
    Ok(())
}
