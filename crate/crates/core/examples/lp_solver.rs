//! The exact rational simplex on its own.

use cms::lp::{rational, solve_min, LinearProgram, Relation};

fn main() {
    // min x + y  s.t.  x + 2y >= 3,  3x + y >= 4
    let mut lp = LinearProgram::new();
    let x = lp.add_variable("x", rational(1));
    let y = lp.add_variable("y", rational(1));
    lp.add_constraint("first", vec![(x, rational(1)), (y, rational(2))], Relation::Ge, rational(3));
    lp.add_constraint("second", vec![(x, rational(3)), (y, rational(1))], Relation::Ge, rational(4));
    let sol = solve_min(&lp);
    println!("{:?}: x = {}, y = {}, value {}", sol.status, sol.values[x], sol.values[y], sol.objective_value);
    println!("extreme point: {}", lp.is_extreme_point(&sol.values));
}
