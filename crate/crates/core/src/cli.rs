//! The `cms` command line: generate, solve, validate, oracle and bench.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{default_algorithms, run_bench, suite_instances, BenchEps, Suite};
use crate::error::{CmsError, Result};
use crate::fixed_configs::{solve_fixed_configs_with, FixedParams, DEFAULT_MAX_CONFIGS};
use crate::greedy::solve_greedy_log;
use crate::json::{instance_to_json, parse_instance, parse_schedule, schedule_to_json};
use crate::lp::{parse_rational, Rational};
use crate::model::{validate_schedule, Instance, Schedule};
use crate::numerical::solve_numerical;
use crate::oracle::{
    exact_min_machines, gen_numerical_random, gen_random, gen_tight_greedy_family, ExactLimits,
    GenParams, DEFAULT_NODE_BUDGET,
};
use crate::ptas::{dp_solve, solve_ptas_detailed, PtasOptions, DEFAULT_PATTERN_CAP};

pub const NODE_BUDGET_ENV: &str = "CMS_NODE_BUDGET";

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const GUARD: i32 = 3;
    pub const BOUND: i32 = 4;
    pub const IO: i32 = 5;
    pub const KIND: i32 = 6;
}

pub fn exit_code(e: &CmsError) -> i32 {
    match e {
        CmsError::Infeasible(_) | CmsError::Stuck(_) => exit::INFEASIBLE,
        CmsError::GuardExceeded(_) => exit::GUARD,
        CmsError::KindMismatch(_) => exit::KIND,
        CmsError::InvalidInput(_) | CmsError::Io(_) | CmsError::Json(_) => exit::IO,
        CmsError::NothingToSchedule | CmsError::NotPseudoForest | CmsError::UnknownJob(_) => {
            exit::INTERNAL
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cms", version, about = "Scheduling splittable jobs on configurable machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance as JSON.
    Gen(GenArgs),
    /// Solve an instance and print `cost=<c> feasible=<bool>`.
    Solve(SolveArgs),
    /// Check an instance and, optionally, a schedule for it.
    Validate(ValidateArgs),
    /// Compute the optimum exactly.
    Oracle(OracleArgs),
    /// Run solvers against the oracle on a seeded suite.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Random,
    TightGreedy,
    NumericalRandom,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub blocks: usize,
    #[arg(long, default_value_t = 3)]
    pub configs: usize,
    #[arg(long, default_value_t = 3)]
    pub max_config_size: u64,
    #[arg(long, default_value_t = 10)]
    pub max_demand: u64,
    #[arg(long, default_value_t = 10)]
    pub max_table: u64,
    #[arg(long, default_value_t = 4)]
    pub capacity: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Alg {
    GreedyLog,
    Fixed,
    Ptas,
    Numerical,
    Exact,
    Dp,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub alg: Alg,
    /// Accuracy parameter, as a decimal or a fraction.
    #[arg(long, default_value = "0.5")]
    pub epsilon: String,
    #[arg(short, long)]
    pub input: PathBuf,
    /// Where to write the schedule JSON.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_CONFIGS)]
    pub max_configs: usize,
    #[arg(long, default_value_t = DEFAULT_PATTERN_CAP)]
    pub pattern_cap: u64,
    /// Also compute the optimum and report the ratio.
    #[arg(long)]
    pub opt: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    Exact,
    Dp,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleMethod::Exact)]
    pub method: OracleMethod,
    /// Where to write an optimal schedule.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "small")]
    pub suite: String,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the rows as CSV to this path (`-` for stdout instead of the table).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Add a wall-time column (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
    /// Use this epsilon for every approximation instead of the defaults.
    #[arg(long)]
    pub epsilon: Option<String>,
}

fn limits() -> Result<ExactLimits> {
    match std::env::var(NODE_BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(ExactLimits::with_budget)
            .map_err(|_| CmsError::InvalidInput(format!("{NODE_BUDGET_ENV}={v:?} is not a count"))),
        Err(_) => Ok(ExactLimits::with_budget(DEFAULT_NODE_BUDGET)),
    }
}

fn write_out(path: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text)?,
        _ => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(path: &PathBuf, err: &mut dyn Write) -> Result<Instance> {
    let loaded = parse_instance(&fs::read_to_string(path)?)?;
    for w in &loaded.warnings {
        writeln!(err, "warning: {w}")?;
    }
    Ok(loaded.instance)
}

fn format_ratio(cost: u64, opt: u64) -> String {
    if opt == 0 {
        return if cost == 0 { "1.0000".into() } else { "inf".into() };
    }
    format!("{:.4}", cost as f64 / opt as f64)
}

/// Dispatches `alg` on `inst`.
pub fn solve_with(inst: &Instance, alg: Alg, eps: &Rational, args: &SolveArgs) -> Result<Schedule> {
    let limits = limits()?;
    match alg {
        Alg::GreedyLog => solve_greedy_log(inst),
        Alg::Fixed => solve_fixed_configs_with(
            inst,
            &FixedParams {
                eps: eps.clone(),
                max_configs: args.max_configs,
            },
        ),
        Alg::Ptas => {
            let options = PtasOptions {
                pattern_cap: args.pattern_cap,
                exact: limits,
            };
            Ok(solve_ptas_detailed(inst, eps, &options)?.schedule)
        }
        Alg::Numerical => solve_numerical(inst, eps),
        Alg::Exact => exact_min_machines(inst, limits).into_schedule(),
        Alg::Dp => Ok(dp_solve(inst, limits)?.1),
    }
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let params = GenParams {
        n: args.n,
        blocks: args.blocks,
        configs: args.configs,
        max_config_size: args.max_config_size,
        max_demand: args.max_demand,
        max_table: args.max_table,
        capacity: args.capacity,
        seed: args.seed,
    };
    let inst = match args.kind {
        GenKind::Random => gen_random(&params)?,
        GenKind::NumericalRandom => gen_numerical_random(&params)?,
        GenKind::TightGreedy => gen_tight_greedy_family(args.n)?,
    };
    let mut text = instance_to_json(&inst)?;
    text.push('\n');
    write_out(args.output.as_ref(), &text, out)?;
    Ok(exit::OK)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let eps = parse_rational(&args.epsilon)?;
    let inst = load(&args.input, err)?;
    let schedule = solve_with(&inst, args.alg, &eps, args)?;
    let violations = validate_schedule(&inst, &schedule);
    for v in &violations {
        writeln!(err, "violation: {v}")?;
    }
    if let Some(path) = &args.output {
        let mut text = schedule_to_json(&inst, &schedule)?;
        text.push('\n');
        write_out(Some(path), &text, out)?;
    }
    let cost = schedule.cost();
    let mut line = format!("cost={cost} feasible={}", violations.is_empty());
    if args.opt {
        let opt = exact_min_machines(&inst, limits()?).into_schedule()?.cost();
        line.push_str(&format!(" opt={opt} ratio={}", format_ratio(cost, opt)));
    }
    writeln!(out, "{line}")?;
    Ok(if violations.is_empty() { exit::OK } else { exit::INTERNAL })
}

fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let inst = load(&args.input, err)?;
    writeln!(
        out,
        "instance ok: {} jobs, {} block types, {} configurations",
        inst.n_jobs(),
        inst.n_blocks(),
        inst.configurations.len()
    )?;
    let Some(path) = &args.schedule else {
        return Ok(exit::OK);
    };
    let schedule = parse_schedule(&inst, &fs::read_to_string(path)?)?;
    let violations = validate_schedule(&inst, &schedule);
    for v in &violations {
        writeln!(out, "violation: {v}")?;
    }
    writeln!(out, "cost={} feasible={}", schedule.cost(), violations.is_empty())?;
    Ok(if violations.is_empty() { exit::OK } else { exit::INFEASIBLE })
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let inst = load(&args.input, err)?;
    let limits = limits()?;
    let schedule = match args.method {
        OracleMethod::Exact => exact_min_machines(&inst, limits).into_schedule()?,
        OracleMethod::Dp => dp_solve(&inst, limits)?.1,
    };
    if let Some(path) = &args.output {
        let mut text = schedule_to_json(&inst, &schedule)?;
        text.push('\n');
        write_out(Some(path), &text, out)?;
    }
    writeln!(out, "opt={}", schedule.cost())?;
    Ok(exit::OK)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let eps = match &args.epsilon {
        Some(e) => BenchEps::uniform(parse_rational(e)?),
        None => BenchEps::default(),
    };
    let limits = limits()?;
    let instances = suite_instances(suite, args.trials, args.seed)?;
    let algorithms = default_algorithms(suite, &eps, limits);
    let report = run_bench(&instances, &algorithms, limits, args.timings);
    let csv_to_stdout = args.csv.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if let Some(path) = &args.csv {
        write_out(Some(path), &report.to_csv()?, out)?;
    }
    if !csv_to_stdout {
        out.write_all(report.to_text().as_bytes())?;
    }
    Ok(if report.failures() > 0 { exit::BOUND } else { exit::OK })
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::IO } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Validate(a) => cmd_validate(a, out, err),
        Command::Oracle(a) => cmd_oracle(a, out, err),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
