//! Minimisation LPs in exact rational arithmetic, and the two CMS relaxations
//! built on top of them.

mod simplex;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{CmsError, Result};
use crate::model::Instance;

pub type Rational = num_rational::BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"0.25"` or `"1/4"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || CmsError::InvalidInput(format!("not a number: {text:?}"));
    let t = text.trim();
    if t.contains('/') {
        return t.parse::<Rational>().map_err(|_| bad());
    }
    let (whole, frac) = t.split_once('.').unwrap_or((t, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(Rational::new(numer, denom))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, a)| acc + a * &values[*v])
    }

    pub fn holds(&self, values: &[Rational]) -> bool {
        let lhs = self.lhs(values);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// `min c·x` subject to linear `<=`/`>=` rows and `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new() -> Self {
        LinearProgram::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, cost: Rational) -> usize {
        self.variables.push(name.into());
        self.objective.push(cost);
        self.variables.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// Every term must reference a declared variable.
    pub fn is_well_formed(&self) -> bool {
        self.objective.len() == self.variables.len()
            && self
                .constraints
                .iter()
                .all(|c| c.terms.iter().all(|(v, _)| *v < self.variables.len()))
    }

    /// Exact feasibility check of a point (nonnegativity included).
    pub fn is_feasible_point(&self, values: &[Rational]) -> bool {
        values.len() == self.n_vars()
            && values.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.holds(values))
    }

    /// Rank of the tight constraint set at `values`, counting binding
    /// nonnegativity bounds.
    pub fn tight_rank(&self, values: &[Rational]) -> usize {
        let n = self.n_vars();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for c in &self.constraints {
            if c.lhs(values) == c.rhs {
                let mut row = vec![Rational::zero(); n];
                for (v, a) in &c.terms {
                    row[*v] += a.clone();
                }
                rows.push(row);
            }
        }
        for (v, x) in values.iter().enumerate() {
            if x.is_zero() {
                let mut row = vec![Rational::zero(); n];
                row[v] = Rational::one();
                rows.push(row);
            }
        }
        rank(rows, n)
    }

    /// Whether `values` is a vertex of the feasible polytope.
    pub fn is_extreme_point(&self, values: &[Rational]) -> bool {
        self.is_feasible_point(values) && self.tight_rank(values) == self.n_vars()
    }
}

fn rank(mut rows: Vec<Vec<Rational>>, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a -= &f * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(f: &mut fmt::Formatter<'_>, a: &Rational, name: &str) -> fmt::Result {
            if a.is_negative() {
                write!(f, " - {} {}", -a, name)
            } else {
                write!(f, " + {} {}", a, name)
            }
        }
        writeln!(f, "minimize")?;
        write!(f, "  obj:")?;
        for (v, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                term(f, c, &self.variables[v])?;
            }
        }
        writeln!(f)?;
        writeln!(f, "subject to")?;
        for c in &self.constraints {
            write!(f, "  {}:", c.name)?;
            for (v, a) in &c.terms {
                term(f, a, &self.variables[*v])?;
            }
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Ge => ">=",
            };
            writeln!(f, " {rel} {}", c.rhs)?;
        }
        writeln!(f, "bounds")?;
        writeln!(f, "  all variables >= 0")?;
        writeln!(f, "end")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct BasicSolution {
    pub status: LpStatus,
    pub values: Vec<Rational>,
    pub objective_value: Rational,
}

impl BasicSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Optimal extreme point of `lp`, or the reason none exists.
pub fn solve_min(lp: &LinearProgram) -> BasicSolution {
    debug_assert!(lp.is_well_formed());
    simplex::solve(lp, true)
}

/// Phase one only: a basic feasible solution, ignoring the objective.
pub fn solve_feasibility(lp: &LinearProgram) -> BasicSolution {
    debug_assert!(lp.is_well_formed());
    simplex::solve(lp, false)
}

/// Machine-count LP relaxation of the general problem: `x[i][j]` blocks of type `i` serve job
/// `j`, `y[s]` machines use configuration `s`.
#[derive(Clone, Debug)]
pub struct CmsLp {
    pub lp: LinearProgram,
    /// Variable index of `x_{i,j}`, indexed `[block][job]`.
    pub x: Vec<Vec<usize>>,
    pub y: Vec<usize>,
}

impl CmsLp {
    /// Reads `x*_{i,j}` out of a solution, indexed `[block][job]`.
    pub fn x_values(&self, sol: &BasicSolution) -> Vec<Vec<Rational>> {
        self.x
            .iter()
            .map(|row| row.iter().map(|&v| sol.values[v].clone()).collect())
            .collect()
    }
}

pub fn build_cms_lp(inst: &Instance) -> Result<CmsLp> {
    inst.require_combinatorial("machine-count LP")?;
    let mut lp = LinearProgram::new();
    let x: Vec<Vec<usize>> = (0..inst.n_blocks())
        .map(|i| {
            (0..inst.n_jobs())
                .map(|j| {
                    lp.add_variable(
                        format!("x_{}_{}", inst.blocks[i], inst.jobs[j].id),
                        Rational::zero(),
                    )
                })
                .collect()
        })
        .collect();
    let y: Vec<usize> = (0..inst.configurations.len())
        .map(|s| lp.add_variable(format!("y_{s}"), Rational::one()))
        .collect();

    for (i, xi) in x.iter().enumerate() {
        let mut terms: Vec<(usize, Rational)> = xi.iter().map(|&v| (v, Rational::one())).collect();
        for (s, config) in inst.configurations.iter().enumerate() {
            let a = config.count(i);
            if a > 0 {
                terms.push((y[s], -from_u64(a)));
            }
        }
        lp.add_constraint(format!("blocks_{}", inst.blocks[i]), terms, Relation::Le, Rational::zero());
    }
    for (j, job) in inst.jobs.iter().enumerate() {
        let terms = (0..inst.n_blocks())
            .filter(|&i| job.value(i) > 0)
            .map(|i| (x[i][j], from_u64(job.value(i))))
            .collect();
        lp.add_constraint(format!("demand_{}", job.id), terms, Relation::Ge, from_u64(job.demand));
    }
    Ok(CmsLp { lp, x, y })
}

/// `LP_f`: the relaxation restricted to block types of a configuration subset
/// `C*`, with machine counts fixed to `m`. Pure feasibility, zero objective.
#[derive(Clone, Debug)]
pub struct FeasibilityLp {
    pub lp: LinearProgram,
    /// Block types appearing in some configuration of `C*`, ascending.
    pub bstar: Vec<usize>,
    /// `(block, job)` behind every variable, in variable order.
    pub pairs: Vec<(usize, usize)>,
}

pub fn build_feasibility_lp(inst: &Instance, cstar: &[usize], m: &[u64]) -> FeasibilityLp {
    assert_eq!(cstar.len(), m.len(), "one machine count per chosen configuration");
    let n_blocks = inst.n_blocks();
    let mut supply = vec![0u64; n_blocks];
    for (&s, &count) in cstar.iter().zip(m) {
        for (i, &a) in inst.configurations[s].counts().iter().enumerate() {
            if i < n_blocks {
                supply[i] += a * count;
            }
        }
    }
    let bstar: Vec<usize> = (0..n_blocks)
        .filter(|&i| cstar.iter().any(|&s| inst.configurations[s].count(i) > 0))
        .collect();

    let mut lp = LinearProgram::new();
    let mut pairs = Vec::new();
    let mut var = vec![vec![usize::MAX; inst.n_jobs()]; n_blocks];
    for &i in &bstar {
        for (j, (slot, job)) in var[i].iter_mut().zip(&inst.jobs).enumerate() {
            *slot = lp.add_variable(format!("x_{}_{}", inst.blocks[i], job.id), Rational::zero());
            pairs.push((i, j));
        }
    }
    for &i in &bstar {
        let terms = (0..inst.n_jobs()).map(|j| (var[i][j], Rational::one())).collect();
        lp.add_constraint(format!("blocks_{}", inst.blocks[i]), terms, Relation::Le, from_u64(supply[i]));
    }
    for (j, job) in inst.jobs.iter().enumerate() {
        let terms = bstar
            .iter()
            .filter(|&&i| job.value(i) > 0)
            .map(|&i| (var[i][j], from_u64(job.value(i))))
            .collect();
        lp.add_constraint(format!("demand_{}", job.id), terms, Relation::Ge, from_u64(job.demand));
    }
    FeasibilityLp { lp, bstar, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Configuration, Job};

    fn t1() -> Instance {
        Instance::combinatorial(
            vec!["b1".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        )
    }

    #[test]
    fn single_lower_bound() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", rational(1));
        lp.add_constraint("c", vec![(x, rational(1))], Relation::Ge, rational(3));
        let sol = solve_min(&lp);
        assert!(sol.is_optimal());
        assert_eq!(sol.values, vec![rational(3)]);
        assert_eq!(sol.objective_value, rational(3));
        assert!(lp.is_extreme_point(&sol.values));
    }

    #[test]
    fn degenerate_optimum_is_a_vertex() {
        // min x + y  s.t.  x + y >= 2, x <= 1/2
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", rational(1));
        let y = lp.add_variable("y", rational(1));
        lp.add_constraint("sum", vec![(x, rational(1)), (y, rational(1))], Relation::Ge, rational(2));
        lp.add_constraint("cap", vec![(x, rational(1))], Relation::Le, ratio(1, 2));
        let sol = solve_min(&lp);
        assert_eq!(sol.objective_value, rational(2));
        let candidates = [vec![ratio(1, 2), ratio(3, 2)], vec![rational(0), rational(2)]];
        assert!(candidates.contains(&sol.values), "{:?}", sol.values);
        assert!(lp.is_extreme_point(&sol.values));
    }

    #[test]
    fn infeasible_and_unbounded_are_statuses() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", rational(1));
        lp.add_constraint("lo", vec![(x, rational(1))], Relation::Ge, rational(3));
        lp.add_constraint("hi", vec![(x, rational(1))], Relation::Le, rational(2));
        assert_eq!(solve_min(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", rational(-1));
        lp.add_constraint("lo", vec![(x, rational(1))], Relation::Ge, rational(1));
        assert_eq!(solve_min(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_rhs_rows_are_normalised() {
        // min x  s.t.  -x <= -4
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", rational(1));
        lp.add_constraint("c", vec![(x, rational(-1))], Relation::Le, rational(-4));
        let sol = solve_min(&lp);
        assert_eq!(sol.values, vec![rational(4)]);
    }

    #[test]
    fn redundant_equalities_do_not_confuse_phase_one() {
        // x + y >= 1 twice, x + y <= 1: artificial rows become redundant.
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", rational(2));
        let y = lp.add_variable("y", rational(1));
        for _ in 0..2 {
            lp.add_constraint("ge", vec![(x, rational(1)), (y, rational(1))], Relation::Ge, rational(1));
        }
        lp.add_constraint("le", vec![(x, rational(1)), (y, rational(1))], Relation::Le, rational(1));
        let sol = solve_min(&lp);
        assert_eq!(sol.values, vec![rational(0), rational(1)]);
        assert!(lp.is_extreme_point(&sol.values));
    }

    #[test]
    fn cms_lp_structure_and_value() {
        let built = build_cms_lp(&t1()).unwrap();
        assert_eq!(built.lp.n_vars(), 2);
        assert_eq!(built.lp.constraints.len(), 2);
        let sol = solve_min(&built.lp);
        assert_eq!(sol.objective_value, rational(1));

        let two = Instance::combinatorial(
            vec!["a".into(), "b".into()],
            vec![Configuration::new(vec![1, 1]), Configuration::new(vec![2])],
            vec![Job::new("j1", 3, vec![1, 2]), Job::new("j2", 2, vec![2, 1])],
        );
        let built = build_cms_lp(&two).unwrap();
        assert_eq!(built.x.iter().flatten().count(), 4);
        assert_eq!(built.y.len(), 2);
        assert_eq!(built.lp.constraints.len(), 4);
    }

    #[test]
    fn cms_lp_with_dead_job_is_infeasible() {
        let inst = Instance::combinatorial(
            vec!["b1".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 3, vec![0])],
        );
        let built = build_cms_lp(&inst).unwrap();
        assert_eq!(solve_min(&built.lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn cms_lp_rejects_numerical() {
        let inst = Instance::numerical(2, vec![]);
        assert!(build_cms_lp(&inst).is_err());
    }

    #[test]
    fn feasibility_lp_cases() {
        let inst = t1();
        let f = build_feasibility_lp(&inst, &[0], &[1]);
        let sol = solve_feasibility(&f.lp);
        assert!(sol.is_optimal());
        assert_eq!(sol.values, vec![rational(1)]);

        let f = build_feasibility_lp(&inst, &[0], &[0]);
        assert_eq!(solve_feasibility(&f.lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn text_dump_mentions_every_row() {
        let built = build_cms_lp(&t1()).unwrap();
        let text = built.lp.to_string();
        assert!(text.starts_with("minimize"));
        assert!(text.contains("blocks_b1: + 1 x_b1_j1 - 1 y_0 <= 0"), "{text}");
        assert!(text.contains("demand_j1: + 5 x_b1_j1 >= 5"));
    }

    #[test]
    fn parses_numbers() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("3").unwrap(), rational(3));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }
}
