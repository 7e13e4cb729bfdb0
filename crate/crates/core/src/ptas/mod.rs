//! `(1+ε)`-approximation for a constant number of configurations of constant
//! size.
//!
//! Jobs are split into small ones (some single machine covers an `ε`
//! fraction of the demand) and large ones. Small jobs are grouped by the set
//! of block patterns that satisfy them, large jobs get per-type block counts,
//! and an LP over both chooses how many machines of each configuration to
//! open. Rounding every variable up and hosting any block overflow on extra
//! machines gives the schedule. Instances with few jobs are solved exactly.

mod dp;

pub use dp::{dp_min_machines, dp_schedule, dp_solve};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CmsError, Result};
use crate::lp::{self, from_u64, LinearProgram, Rational, Relation};
use crate::model::{Configuration, Instance, Schedule};
use crate::oracle::{exact_min_machines, ExactLimits};

pub const DEFAULT_PATTERN_CAP: u64 = 1_000_000;

/// Per-type block counts for one small job.
pub type Pattern = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtasParams {
    pub eps: Rational,
    /// `ε / (2k)`.
    pub lambda: Rational,
    /// Largest configuration size.
    pub k: u64,
    /// Number of block types.
    pub b: usize,
    /// `⌊k / λ²⌋`, the most blocks a pattern may use.
    pub pattern_bound: u64,
    /// `|W|`, the number of patterns.
    pub pattern_count: BigUint,
}

impl PtasParams {
    pub fn new(inst: &Instance, eps: &Rational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(CmsError::InvalidInput("epsilon must be positive".into()));
        }
        let k = inst.max_config_size();
        if k == 0 {
            return Err(CmsError::InvalidInput("instance has no non-empty configuration".into()));
        }
        let lambda = eps / from_u64(2 * k);
        let bound = (from_u64(k) / (&lambda * &lambda)).floor().to_integer();
        let pattern_bound = bound.to_u64().ok_or_else(|| {
            CmsError::GuardExceeded("pattern size bound does not fit in 64 bits".into())
        })?;
        let b = inst.n_blocks();
        Ok(PtasParams {
            eps: eps.clone(),
            lambda,
            k,
            b,
            pattern_bound,
            pattern_count: binomial(pattern_bound + b as u64, b as u64),
        })
    }

    /// `γ = 2^|W|`, when it is small enough to write down.
    pub fn gamma(&self) -> Option<BigUint> {
        let bits = self.pattern_count.to_u32().filter(|&w| w <= 1 << 16)?;
        Some(BigUint::one() << bits)
    }

    /// Whether `n` jobs fall under the exact-enumeration threshold
    /// `k (|C| + γ) / λ`.
    pub fn uses_enumeration(&self, n: usize, n_configs: usize) -> bool {
        let Some(gamma) = self.gamma() else {
            return true;
        };
        let threshold = Rational::from_integer(BigInt::from(self.k))
            * Rational::from_integer(BigInt::from(n_configs) + BigInt::from(gamma))
            / &self.lambda;
        from_u64(n as u64) <= threshold
    }
}

fn binomial(n: u64, r: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub large: Vec<usize>,
    pub small: Vec<usize>,
}

/// Small iff some configuration, fully given to the job, delivers at least
/// `ε d_j`.
pub fn classify_jobs(inst: &Instance, eps: &Rational) -> Result<Classification> {
    if !eps.is_positive() {
        return Err(CmsError::InvalidInput("epsilon must be positive".into()));
    }
    let mut out = Classification::default();
    for (j, job) in inst.jobs.iter().enumerate() {
        let best = inst
            .configurations
            .iter()
            .map(|c| job.config_value(c))
            .max()
            .unwrap_or(0);
        if from_u64(best) >= eps * from_u64(job.demand) {
            out.small.push(j);
        } else {
            out.large.push(j);
        }
    }
    Ok(out)
}

/// Every `b`-vector with entries summing to at most `bound`, ordered with the
/// last coordinate most significant.
pub fn enumerate_patterns(b: usize, bound: u64, cap: u64) -> Result<Vec<Pattern>> {
    let size = (bound as f64).powi(b as i32);
    if size > cap as f64 {
        return Err(CmsError::GuardExceeded(format!(
            "{bound}^{b} patterns exceed the cap of {cap}; use a larger epsilon or raise the pattern cap"
        )));
    }
    fn go(b: usize, left: u64, current: &mut Vec<u64>, out: &mut Vec<Pattern>) {
        if current.len() == b {
            out.push(current.clone());
            return;
        }
        for v in 0..=left {
            current.push(v);
            go(b, left - v, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(b, bound, &mut Vec::with_capacity(b), &mut out);
    out.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    Ok(out)
}

/// Indices of the patterns that satisfy `job` on their own.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JobType {
    pub satisfying: Vec<usize>,
}

pub fn job_type(job: &crate::model::Job, patterns: &[Pattern]) -> JobType {
    let satisfying = patterns
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            let got: u64 = p.iter().enumerate().map(|(i, &c)| c * job.value(i)).sum();
            got >= job.demand
        })
        .map(|(i, _)| i)
        .collect();
    JobType { satisfying }
}

/// The PTAS linear program with handles to its variables.
#[derive(Clone, Debug)]
pub struct PtasLp {
    pub lp: LinearProgram,
    /// `(job, block, var)` for large jobs.
    pub x: Vec<(usize, usize, usize)>,
    /// One per configuration.
    pub y: Vec<usize>,
    /// Realized types with their small jobs (ascending).
    pub types: Vec<(JobType, Vec<usize>)>,
    /// `(type index, pattern index, var)`.
    pub z: Vec<(usize, usize, usize)>,
}

pub fn build_ptas_lp(inst: &Instance, classification: &Classification, patterns: &[Pattern]) -> Result<PtasLp> {
    let mut grouped: BTreeMap<JobType, Vec<usize>> = BTreeMap::new();
    for &j in &classification.small {
        let t = job_type(&inst.jobs[j], patterns);
        if t.satisfying.is_empty() {
            return Err(CmsError::Infeasible(format!(
                "no pattern satisfies job {}",
                inst.jobs[j].id
            )));
        }
        grouped.entry(t).or_default().push(j);
    }
    let types: Vec<(JobType, Vec<usize>)> = grouped.into_iter().collect();

    let mut lp = LinearProgram::new();
    let mut x = Vec::new();
    for &j in &classification.large {
        for p in 0..inst.n_blocks() {
            let v = lp.add_variable(format!("x_{}_{}", inst.jobs[j].id, inst.blocks[p]), Rational::zero());
            x.push((j, p, v));
        }
    }
    let y: Vec<usize> = (0..inst.configurations.len())
        .map(|s| lp.add_variable(format!("y_{s}"), Rational::one()))
        .collect();
    let mut z = Vec::new();
    for (t, (ty, _)) in types.iter().enumerate() {
        for &pi in &ty.satisfying {
            let v = lp.add_variable(format!("z_{t}_{pi}"), Rational::zero());
            z.push((t, pi, v));
        }
    }

    for (p, name) in inst.blocks.iter().enumerate() {
        let mut terms: Vec<(usize, Rational)> = x
            .iter()
            .filter(|&&(_, q, _)| q == p)
            .map(|&(_, _, v)| (v, Rational::one()))
            .collect();
        terms.extend(
            z.iter()
                .filter(|&&(_, pi, _)| patterns[pi][p] > 0)
                .map(|&(_, pi, v)| (v, from_u64(patterns[pi][p]))),
        );
        terms.extend(
            inst.configurations
                .iter()
                .enumerate()
                .filter(|(_, c)| c.count(p) > 0)
                .map(|(s, c)| (y[s], -from_u64(c.count(p)))),
        );
        lp.add_constraint(format!("blocks_{name}"), terms, Relation::Le, Rational::zero());
    }
    for &j in &classification.large {
        let job = &inst.jobs[j];
        let terms = x
            .iter()
            .filter(|&&(jj, p, _)| jj == j && job.value(p) > 0)
            .map(|&(_, p, v)| (v, from_u64(job.value(p))))
            .collect();
        lp.add_constraint(format!("large_{}", job.id), terms, Relation::Ge, from_u64(job.demand));
    }
    for (t, (_, members)) in types.iter().enumerate() {
        let terms = z
            .iter()
            .filter(|&&(tt, _, _)| tt == t)
            .map(|&(_, _, v)| (v, Rational::one()))
            .collect();
        lp.add_constraint(format!("small_{t}"), terms, Relation::Ge, from_u64(members.len() as u64));
    }
    Ok(PtasLp { lp, x, y, types, z })
}

#[derive(Clone, Debug)]
pub enum PtasPath {
    Enumeration,
    Lp {
        lp_value: Rational,
        /// Machines added to host blocks beyond the rounded configuration counts.
        overflow_machines: u64,
    },
}

#[derive(Clone, Debug)]
pub struct PtasRun {
    pub params: PtasParams,
    pub classification: Classification,
    pub path: PtasPath,
    pub schedule: Schedule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtasOptions {
    pub pattern_cap: u64,
    pub exact: ExactLimits,
}

impl Default for PtasOptions {
    fn default() -> Self {
        PtasOptions {
            pattern_cap: DEFAULT_PATTERN_CAP,
            exact: ExactLimits::default(),
        }
    }
}

fn ceil_u64(r: &Rational) -> u64 {
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn solve_ptas_detailed(inst: &Instance, eps: &Rational, options: &PtasOptions) -> Result<PtasRun> {
    inst.require_combinatorial("PTAS")?;
    let params = PtasParams::new(inst, eps)?;
    let classification = classify_jobs(inst, eps)?;

    if params.uses_enumeration(inst.n_jobs(), inst.configurations.len()) {
        let schedule = exact_min_machines(inst, options.exact).into_schedule()?;
        return Ok(PtasRun {
            params,
            classification,
            path: PtasPath::Enumeration,
            schedule,
        });
    }

    let patterns = enumerate_patterns(params.b, params.pattern_bound, options.pattern_cap)?;
    let plp = build_ptas_lp(inst, &classification, &patterns)?;
    let sol = lp::solve_min(&plp.lp);
    if !sol.is_optimal() {
        return Err(CmsError::Infeasible("PTAS linear program has no solution".into()));
    }

    let nb = inst.n_blocks();
    let mut counts = vec![vec![0u64; inst.n_jobs()]; nb];
    for &(j, p, v) in &plp.x {
        counts[p][j] = ceil_u64(&sol.values[v]);
    }
    for (t, (_, members)) in plp.types.iter().enumerate() {
        let mut queue = members.iter();
        for &(_, pi, v) in plp.z.iter().filter(|&&(tt, _, _)| tt == t) {
            for _ in 0..ceil_u64(&sol.values[v]) {
                let Some(&j) = queue.next() else { break };
                for (p, &c) in patterns[pi].iter().enumerate() {
                    counts[p][j] += c;
                }
            }
        }
    }

    let mut machines: Vec<(Configuration, u64)> = inst
        .configurations
        .iter()
        .zip(&plp.y)
        .map(|(c, &v)| (c.clone(), ceil_u64(&sol.values[v])))
        .collect();
    let mut supply: Vec<u64> = (0..nb)
        .map(|p| machines.iter().map(|(c, m)| c.count(p) * m).sum())
        .collect();
    let mut overflow_machines = 0;
    for p in 0..nb {
        let need: u64 = counts[p].iter().sum();
        if need <= supply[p] {
            continue;
        }
        let s = inst
            .configurations
            .iter()
            .position(|c| c.count(p) > 0)
            .ok_or_else(|| CmsError::Infeasible(format!("no configuration offers {}", inst.blocks[p])))?;
        let per = inst.configurations[s].count(p);
        let extra = (need - supply[p]).div_ceil(per);
        overflow_machines += extra;
        machines[s].1 += extra;
        for (q, sup) in supply.iter_mut().enumerate() {
            *sup += inst.configurations[s].count(q) * extra;
        }
    }
    let schedule = Schedule::from_block_counts(inst, &counts, &machines)?;
    Ok(PtasRun {
        params,
        classification,
        path: PtasPath::Lp {
            lp_value: sol.objective_value,
            overflow_machines,
        },
        schedule,
    })
}

pub fn solve_ptas(inst: &Instance, eps: &Rational) -> Result<Schedule> {
    Ok(solve_ptas_detailed(inst, eps, &PtasOptions::default())?.schedule)
}
