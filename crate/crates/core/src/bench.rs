//! Benchmark harness: runs solvers on seeded suites, compares them against
//! the exact optimum and checks the proven guarantees.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{CmsError, Result};
use crate::fixed_configs::solve_fixed_configs;
use crate::greedy::solve_greedy_log;
use crate::lp::{from_u64, ratio, rational, Rational};
use crate::model::{validate_schedule, Instance, Schedule};
use crate::numerical::solve_numerical;
use crate::oracle::{
    exact_min_machines, gen_numerical_random, gen_random, gen_tight_greedy_family, ExactLimits,
    ExactOutcome, GenParams,
};
use crate::ptas::{dp_schedule, solve_ptas};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Small,
    Tight,
    Numerical,
}

impl std::str::FromStr for Suite {
    type Err = CmsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Suite::Small),
            "tight" => Ok(Suite::Tight),
            "numerical" => Ok(Suite::Numerical),
            other => Err(CmsError::InvalidInput(format!("unknown suite {other}"))),
        }
    }
}

/// What a solver promises relative to the optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    None,
    /// Cost equals the optimum.
    Exact,
    /// Cost is at most `mult * OPT + add`.
    Affine { mult: Rational, add: Rational },
    /// Cost is at most `mult * OPT + |C|`.
    PlusMenu { mult: Rational },
    All(Vec<Bound>),
}

impl Bound {
    pub fn holds(&self, cost: u64, opt: u64, menu_size: usize) -> bool {
        match self {
            Bound::None => true,
            Bound::Exact => cost == opt,
            Bound::Affine { mult, add } => from_u64(cost) <= mult * from_u64(opt) + add,
            Bound::PlusMenu { mult } => {
                from_u64(cost) <= mult * from_u64(opt) + from_u64(menu_size as u64)
            }
            Bound::All(all) => all.iter().all(|b| b.holds(cost, opt, menu_size)),
        }
    }
}

pub type SolverFn = Box<dyn Fn(&Instance) -> Result<Schedule>>;

pub struct Algorithm {
    pub name: String,
    pub solve: SolverFn,
    pub bound: Bound,
}

impl Algorithm {
    pub fn new(
        name: impl Into<String>,
        bound: Bound,
        solve: impl Fn(&Instance) -> Result<Schedule> + 'static,
    ) -> Self {
        Algorithm {
            name: name.into(),
            solve: Box::new(solve),
            bound,
        }
    }
}

/// Epsilons used by the default solver line-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchEps {
    pub fixed: Rational,
    pub ptas: Rational,
    pub numerical: Rational,
}

impl Default for BenchEps {
    fn default() -> Self {
        BenchEps {
            fixed: ratio(1, 2),
            ptas: rational(1),
            numerical: ratio(1, 4),
        }
    }
}

impl BenchEps {
    pub fn uniform(eps: Rational) -> Self {
        BenchEps {
            fixed: eps.clone(),
            ptas: eps.clone(),
            numerical: eps,
        }
    }
}

pub fn default_algorithms(suite: Suite, eps: &BenchEps, limits: ExactLimits) -> Vec<Algorithm> {
    let two = rational(2);
    let exact = move |inst: &Instance| exact_min_machines(inst, limits).into_schedule();
    let dp = move |inst: &Instance| dp_schedule(inst, limits);
    match suite {
        Suite::Small | Suite::Tight => {
            let e = eps.fixed.clone();
            let fixed_bound = Bound::All(vec![
                Bound::PlusMenu {
                    mult: &two * (Rational::one() + &e),
                },
                Bound::Affine {
                    mult: rational(3) + &two * &e,
                    add: rational(0),
                },
            ]);
            let pe = eps.ptas.clone();
            let mut algs = vec![
                Algorithm::new("greedy-log", Bound::None, solve_greedy_log),
                Algorithm::new("fixed", fixed_bound, move |inst| solve_fixed_configs(inst, &e)),
            ];
            if suite == Suite::Small {
                algs.push(Algorithm::new(
                    "ptas",
                    Bound::Affine {
                        mult: Rational::one() + &pe,
                        add: rational(0),
                    },
                    move |inst| solve_ptas(inst, &pe),
                ));
                algs.push(Algorithm::new("dp", Bound::Exact, dp));
            }
            algs.push(Algorithm::new("exact", Bound::Exact, exact));
            algs
        }
        Suite::Numerical => {
            let e = eps.numerical.clone();
            vec![
                Algorithm::new(
                    "numerical",
                    Bound::Affine {
                        mult: &two * (Rational::one() + &e),
                        add: rational(1),
                    },
                    move |inst| solve_numerical(inst, &e),
                ),
                Algorithm::new("dp", Bound::Exact, dp),
                Algorithm::new("exact", Bound::Exact, exact),
            ]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: String,
    pub cost: Option<u64>,
    pub opt: Option<u64>,
    pub ratio: Option<String>,
    pub feasible: bool,
    pub within_bound: Option<bool>,
    /// `ok`, `skipped: ...` or `error: ...`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<String>,
}

impl BenchRow {
    /// A row counts against the run if its schedule is infeasible or breaks
    /// the solver's guarantee.
    pub fn is_failure(&self) -> bool {
        self.status == "ok" && (!self.feasible || self.within_bound == Some(false))
            || self.status.starts_with("error")
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_failure()).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let timed = self.rows.iter().any(|r| r.wall_ms.is_some());
        let mut header = vec![
            "instance",
            "algorithm",
            "cost",
            "opt",
            "ratio",
            "feasible",
            "within_bound",
            "status",
        ];
        if timed {
            header.push("wall_ms");
        }
        w.write_record(&header).map_err(csv_error)?;
        for r in &self.rows {
            w.serialize(r).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| CmsError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| CmsError::InvalidInput(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let cell = |v: &Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
        let table: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.instance.clone(),
                    r.algorithm.clone(),
                    cell(&r.cost),
                    cell(&r.opt),
                    r.ratio.clone().unwrap_or_else(|| "-".into()),
                    r.feasible.to_string(),
                    r.within_bound.map_or("-".into(), |b| b.to_string()),
                    r.status.clone(),
                ]
            })
            .collect();
        let header = ["instance", "algorithm", "cost", "opt", "ratio", "feasible", "bound", "status"];
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in &table {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(header.to_vec(), &mut out);
        for row in &table {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        let _ = writeln!(out, "{} rows, {} failures", self.rows.len(), self.failures());
        out
    }
}

fn csv_error(e: csv::Error) -> CmsError {
    CmsError::InvalidInput(format!("csv: {e}"))
}

/// The seeded instances of a suite, with stable ids.
pub fn suite_instances(suite: Suite, trials: usize, seed: u64) -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    match suite {
        Suite::Small => {
            for t in 0..trials {
                let s = seed.wrapping_mul(1_000_003).wrapping_add(t as u64);
                let params = GenParams {
                    n: 1 + (s % 5) as usize,
                    blocks: 1 + (s / 5 % 3) as usize,
                    configs: 1 + (s / 15 % 3) as usize,
                    max_config_size: 3,
                    max_demand: 10,
                    max_table: 10,
                    capacity: 1,
                    seed: s,
                };
                out.push((format!("small-{t:04}"), gen_random(&params)?));
            }
        }
        Suite::Tight => {
            if trials > 0 {
                for n in 3..=6 {
                    out.push((format!("tight-{n}"), gen_tight_greedy_family(n)?));
                }
            }
        }
        Suite::Numerical => {
            for t in 0..trials {
                let s = seed.wrapping_mul(1_000_003).wrapping_add(t as u64);
                let params = GenParams {
                    n: 1 + (s % 5) as usize,
                    capacity: 1 + (s / 5 % 5),
                    max_demand: 12,
                    max_table: 12,
                    seed: s,
                    ..GenParams::default()
                };
                out.push((format!("numerical-{t:04}"), gen_numerical_random(&params)?));
            }
        }
    }
    Ok(out)
}

fn format_ratio(cost: u64, opt: u64) -> Option<String> {
    if opt == 0 {
        return None;
    }
    let r = Rational::new(cost.into(), opt.into());
    Some(format!("{:.4}", r.to_f64().unwrap_or(f64::NAN)))
}

/// Runs every algorithm on every instance; rows come out sorted by
/// `(instance, algorithm)`.
pub fn run_bench(
    instances: &[(String, Instance)],
    algorithms: &[Algorithm],
    limits: ExactLimits,
    timings: bool,
) -> BenchReport {
    let mut rows = Vec::new();
    for (id, inst) in instances {
        let opt = match exact_min_machines(inst, limits) {
            ExactOutcome::Optimal { machines, .. } => Some(machines),
            _ => None,
        };
        for alg in algorithms {
            let start = Instant::now();
            let result = (alg.solve)(inst);
            let wall_ms = timings.then(|| format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
            let mut row = BenchRow {
                instance: id.clone(),
                algorithm: alg.name.clone(),
                cost: None,
                opt,
                ratio: None,
                feasible: false,
                within_bound: None,
                status: "ok".into(),
                wall_ms,
            };
            match result {
                Ok(schedule) => {
                    let cost = schedule.cost();
                    row.cost = Some(cost);
                    row.feasible = validate_schedule(inst, &schedule).is_empty();
                    if let Some(o) = opt {
                        row.ratio = format_ratio(cost, o);
                        row.within_bound = Some(alg.bound.holds(cost, o, inst.configurations.len()));
                    }
                }
                Err(CmsError::GuardExceeded(msg)) => row.status = format!("skipped: {msg}"),
                Err(e) => row.status = format!("error: {e}"),
            }
            rows.push(row);
        }
    }
    rows.sort_by(|a, b| (&a.instance, &a.algorithm).cmp(&(&b.instance, &b.algorithm)));
    BenchReport { rows }
}
