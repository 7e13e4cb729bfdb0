//! Logarithmic approximation for general CMS.
//!
//! The pipeline solves the machine-count LP, splits every `x*_{i,j}` into an integer
//! part and a thresholded, doubled fractional part, covers the integer block
//! requirements with greedy multiset multicover (`S1`), serves the demand
//! carried by the fractional parts with highest-throughput-first (`S2`), and
//! returns `(S1 ⊕ S1) ⊕ (S2 ⊕ S2)`.

use num_traits::{ToPrimitive, Zero};

use crate::error::{CmsError, Result};
use crate::lp::{self, from_u64, Rational};
use crate::model::{Configuration, Instance, MachineUse, Schedule};

/// Per-(block, job) limits on how many blocks highest-throughput-first may
/// hand out over the whole run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockCaps {
    Unbounded,
    /// Indexed `[block][job]`.
    PerPair(Vec<Vec<u64>>),
}

impl BlockCaps {
    fn remaining(&self, block: usize, job: usize) -> u64 {
        match self {
            BlockCaps::Unbounded => u64::MAX,
            BlockCaps::PerPair(caps) => caps
                .get(block)
                .and_then(|row| row.get(job))
                .copied()
                .unwrap_or(0),
        }
    }

    fn consume(&mut self, block: usize, job: usize, amount: u64) {
        if let BlockCaps::PerPair(caps) = self {
            caps[block][job] -= amount;
        }
    }
}

/// A single machine picked by the throughput heuristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyMachine {
    pub configuration: usize,
    /// Job per slot, in the configuration's slot order.
    pub jobs: Vec<Option<usize>>,
    pub throughput: u64,
}

/// Greedy block-by-block assignment on one configuration: every slot goes to
/// the job maximising `min{f_j(i), D_j - (already given to j on this machine)}`,
/// lowest job index on ties, idle if that value is zero.
pub fn greedy_assignment(
    inst: &Instance,
    demand: &[u64],
    config: &Configuration,
    caps: &BlockCaps,
) -> (Vec<Option<usize>>, u64) {
    let n = inst.n_jobs();
    let mut given = vec![0u64; n];
    let mut used: Vec<(usize, usize, u64)> = Vec::new();
    let mut jobs = Vec::with_capacity(config.size() as usize);
    let mut throughput = 0;

    for block in config.slots() {
        let mut best: Option<(usize, u64)> = None;
        for (j, job) in inst.jobs.iter().enumerate() {
            let already = used
                .iter()
                .find(|(b, jj, _)| *b == block && *jj == j)
                .map_or(0, |u| u.2);
            if caps.remaining(block, j) <= already {
                continue;
            }
            let value = job.value(block).min(demand[j] - given[j]);
            if value > 0 && best.is_none_or(|(_, v)| value > v) {
                best = Some((j, value));
            }
        }
        match best {
            Some((j, value)) => {
                given[j] += value;
                throughput += value;
                match used.iter_mut().find(|(b, jj, _)| *b == block && *jj == j) {
                    Some(u) => u.2 += 1,
                    None => used.push((block, j, 1)),
                }
                jobs.push(Some(j));
            }
            None => jobs.push(None),
        }
    }
    (jobs, throughput)
}

fn best_machine(inst: &Instance, demand: &[u64], caps: &BlockCaps) -> Result<GreedyMachine> {
    if demand.iter().all(|&d| d == 0) {
        return Err(CmsError::NothingToSchedule);
    }
    let mut best: Option<GreedyMachine> = None;
    for (s, config) in inst.configurations.iter().enumerate() {
        let (jobs, throughput) = greedy_assignment(inst, demand, config, caps);
        if best.as_ref().is_none_or(|b| throughput > b.throughput) {
            best = Some(GreedyMachine {
                configuration: s,
                jobs,
                throughput,
            });
        }
    }
    best.ok_or_else(|| CmsError::Infeasible("instance has no configurations".into()))
}

/// The maximum-throughput machine under the greedy assignment, scanning
/// configurations in menu order (lowest index wins ties).
pub fn max_throughput_machine(inst: &Instance, demand: &[u64]) -> Result<GreedyMachine> {
    inst.require_combinatorial("max-throughput machine")?;
    best_machine(inst, demand, &BlockCaps::Unbounded)
}

/// Output of [`highest_throughput_first_traced`].
#[derive(Clone, Debug)]
pub struct HtfRun {
    pub schedule: Schedule,
    /// Number of batches (loop iterations).
    pub iterations: usize,
}

/// Highest Throughput Placement First: repeatedly add the best greedy
/// machine in a batch of `a*` copies until every remaining demand is zero.
pub fn highest_throughput_first(inst: &Instance, caps: &BlockCaps, demand: &[u64]) -> Result<Schedule> {
    highest_throughput_first_traced(inst, caps, demand).map(|r| r.schedule)
}

pub fn highest_throughput_first_traced(
    inst: &Instance,
    caps: &BlockCaps,
    demand: &[u64],
) -> Result<HtfRun> {
    inst.require_combinatorial("highest-throughput-first")?;
    if demand.len() != inst.n_jobs() {
        return Err(CmsError::InvalidInput("one remaining demand per job expected".into()));
    }
    let mut remaining = demand.to_vec();
    let mut caps = caps.clone();
    let mut schedule = Schedule::new();
    let mut iterations = 0;

    while remaining.iter().any(|&d| d > 0) {
        let machine = best_machine(inst, &remaining, &caps)?;
        if machine.throughput == 0 {
            let stuck = remaining.iter().position(|&d| d > 0).unwrap_or(0);
            return Err(CmsError::Stuck(stuck));
        }
        let config = &inst.configurations[machine.configuration];
        let slots: Vec<usize> = config.slots().collect();

        // Per job on the machine: full contribution c_j and the largest
        // single-block contribution min{f_j(i), D_j}.
        let mut per_job: Vec<(usize, u64, u64)> = Vec::new();
        let mut per_pair: Vec<(usize, usize, u64)> = Vec::new();
        for (&block, job) in slots.iter().zip(&machine.jobs) {
            let Some(j) = *job else { continue };
            let f = inst.jobs[j].value(block);
            let single = f.min(remaining[j]);
            match per_job.iter_mut().find(|e| e.0 == j) {
                Some(e) => {
                    e.1 += f;
                    e.2 = e.2.max(single);
                }
                None => per_job.push((j, f, single)),
            }
            match per_pair.iter_mut().find(|e| e.0 == block && e.1 == j) {
                Some(e) => e.2 += 1,
                None => per_pair.push((block, j, 1)),
            }
        }

        // a* = min_j least a with D_j - a*c_j < max single contribution.
        let mut batch = per_job
            .iter()
            .map(|&(j, c, single)| (remaining[j] - single) / c + 1)
            .min()
            .unwrap_or(1);
        for &(block, j, count) in &per_pair {
            batch = batch.min(caps.remaining(block, j) / count);
        }
        debug_assert!(batch >= 1);

        for &(j, c, _) in &per_job {
            remaining[j] = remaining[j].saturating_sub(batch.saturating_mul(c));
        }
        for &(block, j, count) in &per_pair {
            caps.consume(block, j, batch * count);
        }
        schedule.push(MachineUse::new(batch, config.clone(), &machine.jobs));
        iterations += 1;
    }
    Ok(HtfRun { schedule, iterations })
}

/// Greedy multiset multicover: repeatedly take the configuration covering the
/// most residual requirement, lowest index on ties. Returns one entry per
/// machine, in pick order.
pub fn multicover_picks(requirements: &[u64], configs: &[Configuration]) -> Result<Vec<usize>> {
    for (i, &r) in requirements.iter().enumerate() {
        if r > 0 && configs.iter().all(|c| c.count(i) == 0) {
            return Err(CmsError::Infeasible(format!(
                "block type {i} is required but no configuration contains it"
            )));
        }
    }
    let mut residual = requirements.to_vec();
    let mut picks = Vec::new();
    while residual.iter().any(|&r| r > 0) {
        let coverage = |c: &Configuration| -> u64 {
            residual
                .iter()
                .enumerate()
                .map(|(i, &r)| r.min(c.count(i)))
                .sum()
        };
        let (s, _) = configs
            .iter()
            .enumerate()
            .map(|(s, c)| (s, coverage(c)))
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        for (i, r) in residual.iter_mut().enumerate() {
            *r = r.saturating_sub(configs[s].count(i));
        }
        picks.push(s);
    }
    Ok(picks)
}

/// Greedy multiset multicover as a schedule of idle machines.
pub fn multiset_multicover_greedy(requirements: &[u64], configs: &[Configuration]) -> Result<Schedule> {
    let picks = multicover_picks(requirements, configs)?;
    let mut schedule = Schedule::new();
    for s in picks {
        schedule.push(MachineUse::idle(1, configs[s].clone()));
    }
    Ok(schedule.merged())
}

/// LP solution split into `x̄ = ⌊x*⌋` and the thresholded fractional part `x̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitSolution {
    /// `[block][job]`.
    pub integer_part: Vec<Vec<u64>>,
    /// `[block][job]`; each entry is `0` or `2 z*` with `z* = x* - ⌊x*⌋`.
    pub fractional_part: Vec<Vec<Rational>>,
}

/// Splits `x*` (indexed `[block][job]`) using `k` = number of block types:
/// `x̂ = 0` when `z* < 1/(2k)` or `f_j(i) z*_{i,j} < max_{i'} f_j(i') z*_{i',j} / k`,
/// else `x̂ = 2 z*`.
pub fn split_lp_solution(xstar: &[Vec<Rational>], inst: &Instance) -> SplitSolution {
    let nb = xstar.len();
    let n = inst.n_jobs();
    let k = from_u64(nb.max(1) as u64);
    let half_over_k = Rational::new(1.into(), 2.into()) / &k;

    let mut integer_part = vec![vec![0u64; n]; nb];
    let mut frac = vec![vec![Rational::zero(); n]; nb];
    for i in 0..nb {
        for j in 0..n {
            let x = &xstar[i][j];
            let floor = x.floor();
            integer_part[i][j] = floor.to_integer().to_u64().unwrap_or(0);
            frac[i][j] = x - floor;
        }
    }

    let mut fractional_part = vec![vec![Rational::zero(); n]; nb];
    for (j, job) in inst.jobs.iter().enumerate() {
        let weighted: Vec<Rational> = (0..nb).map(|i| from_u64(job.value(i)) * &frac[i][j]).collect();
        let max_weighted = weighted.iter().max().cloned().unwrap_or_else(Rational::zero);
        let threshold = &max_weighted / &k;
        for i in 0..nb {
            let z = &frac[i][j];
            if *z < half_over_k || weighted[i] < threshold {
                continue;
            }
            fractional_part[i][j] = z * from_u64(2);
        }
    }
    SplitSolution {
        integer_part,
        fractional_part,
    }
}

/// Every intermediate product of [`solve_greedy_log`].
#[derive(Clone, Debug)]
pub struct GreedyLogRun {
    pub lp_value: Rational,
    pub split: SplitSolution,
    /// Multicover schedule over the integer parts, blocks assigned by `x̄`.
    pub s1: Schedule,
    /// Highest-throughput-first schedule over the fractional parts.
    pub s2: Schedule,
    /// `(S1 ⊕ S1) ⊕ (S2 ⊕ S2)`.
    pub schedule: Schedule,
}

pub fn solve_greedy_log(inst: &Instance) -> Result<Schedule> {
    solve_greedy_log_detailed(inst).map(|r| r.schedule)
}

pub fn solve_greedy_log_detailed(inst: &Instance) -> Result<GreedyLogRun> {
    inst.require_combinatorial("greedy-log")?;
    let built = lp::build_cms_lp(inst)?;
    let sol = lp::solve_min(&built.lp);
    if !sol.is_optimal() {
        return Err(CmsError::Infeasible(format!("machine-count LP is {:?}", sol.status)));
    }
    let split = split_lp_solution(&built.x_values(&sol), inst);
    let nb = inst.n_blocks();
    let n = inst.n_jobs();

    // S1: cover Σ_j x̄_{i,j} blocks of every type, then hand block slots to
    // jobs in lowest-index order until each job holds its x̄ quota.
    let requirements: Vec<u64> = split.integer_part.iter().map(|row| row.iter().sum()).collect();
    let picks = multicover_picks(&requirements, &inst.configurations)?;
    let mut quota = split.integer_part.clone();
    let mut s1 = Schedule::new();
    for s in picks {
        let config = &inst.configurations[s];
        let jobs: Vec<Option<usize>> = config
            .slots()
            .map(|i| {
                let j = (0..n).find(|&j| quota[i][j] > 0)?;
                quota[i][j] -= 1;
                Some(j)
            })
            .collect();
        s1.push(MachineUse::new(1, config.clone(), &jobs));
    }
    let s1 = s1.merged();

    // S2: D_j = min{d_j, ⌈Σ_i x̂_{i,j} f_j(i)⌉}, block caps ⌈x̂_{i,j}⌉.
    let mut caps = vec![vec![0u64; n]; nb];
    let mut demand = vec![0u64; n];
    for (j, job) in inst.jobs.iter().enumerate() {
        let mut carried = Rational::zero();
        for (i, row) in caps.iter_mut().enumerate() {
            let xh = &split.fractional_part[i][j];
            carried += xh * from_u64(job.value(i));
            row[j] = xh.ceil().to_integer().to_u64().unwrap_or(0);
        }
        let carried = carried.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
        demand[j] = job.demand.min(carried);
    }
    let s2 = highest_throughput_first(inst, &BlockCaps::PerPair(caps), &demand)?;

    let schedule = s1.clone().doubled().union(s2.clone().doubled());
    Ok(GreedyLogRun {
        lp_value: sol.objective_value,
        split,
        s1,
        s2,
        schedule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::ratio;
    use crate::model::{validate_schedule, Job};

    fn blocks(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn two_job_pair() -> Instance {
        Instance::combinatorial(
            blocks(&["b1", "b2"]),
            vec![Configuration::new(vec![1, 1])],
            vec![Job::new("j1", 3, vec![3, 3]), Job::new("j2", 3, vec![2, 1])],
        )
    }

    #[test]
    fn throughput_machine_follows_greedy_order() {
        let m = max_throughput_machine(&two_job_pair(), &[3, 3]).unwrap();
        assert_eq!(m.jobs, vec![Some(0), Some(1)]);
        assert_eq!(m.throughput, 4);
    }

    #[test]
    fn throughput_is_capped_by_remaining_demand() {
        let inst = Instance::combinatorial(
            blocks(&["b1"]),
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        );
        assert_eq!(max_throughput_machine(&inst, &[5]).unwrap().throughput, 5);
        assert_eq!(max_throughput_machine(&inst, &[2]).unwrap().throughput, 2);
        assert!(matches!(
            max_throughput_machine(&inst, &[0]),
            Err(CmsError::NothingToSchedule)
        ));
    }

    #[test]
    fn htf_batches_identical_jobs() {
        let inst = Instance::combinatorial(
            blocks(&["b1"]),
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5]), Job::new("j2", 5, vec![5])],
        );
        let s = highest_throughput_first(&inst, &BlockCaps::Unbounded, &[5, 5]).unwrap();
        assert_eq!(s.cost(), 2);
        assert!(validate_schedule(&inst, &s).is_empty());
    }

    #[test]
    fn htf_repeats_a_machine_in_one_batch() {
        // one job needing ten unit blocks: a single batch of ten machines
        let inst = Instance::combinatorial(
            blocks(&["b1"]),
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 10, vec![1])],
        );
        let run = highest_throughput_first_traced(&inst, &BlockCaps::Unbounded, &[10]).unwrap();
        assert_eq!(run.schedule.cost(), 10);
        assert_eq!(run.iterations, 1);
    }

    #[test]
    fn htf_respects_caps() {
        let inst = two_job_pair();
        // j1 may only use b2, once.
        let caps = BlockCaps::PerPair(vec![vec![0, 5], vec![1, 5]]);
        let s = highest_throughput_first(&inst, &caps, &[3, 3]).unwrap();
        let b2_for_j1: u64 = s
            .machines
            .iter()
            .map(|m| m.multiplicity * m.assignment.iter().filter(|sl| sl.block == 1 && sl.job == Some(0)).count() as u64)
            .sum();
        let b1_for_j1: u64 = s
            .machines
            .iter()
            .map(|m| m.multiplicity * m.assignment.iter().filter(|sl| sl.block == 0 && sl.job == Some(0)).count() as u64)
            .sum();
        assert_eq!(b2_for_j1, 1);
        assert_eq!(b1_for_j1, 0);
        assert!(validate_schedule(&inst, &s).is_empty());
    }

    #[test]
    fn multicover_examples() {
        let bb = vec![Configuration::new(vec![2])];
        assert_eq!(multiset_multicover_greedy(&[2], &bb).unwrap().cost(), 1);
        assert_eq!(multiset_multicover_greedy(&[3], &bb).unwrap().cost(), 2);

        let menu = vec![Configuration::new(vec![1]), Configuration::new(vec![1, 1])];
        assert_eq!(multicover_picks(&[2, 1], &menu).unwrap(), vec![1, 0]);
        assert!(multicover_picks(&[0, 0, 1], &menu).is_err());
    }

    #[test]
    fn split_rules() {
        let single = Instance::combinatorial(
            blocks(&["b1"]),
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        );
        let s = split_lp_solution(&[vec![ratio(13, 5)]], &single);
        assert_eq!(s.integer_part, vec![vec![2]]);
        assert_eq!(s.fractional_part, vec![vec![ratio(6, 5)]]);

        let s = split_lp_solution(&[vec![ratio(201, 100)]], &single);
        assert_eq!(s.integer_part, vec![vec![2]]);
        assert!(s.fractional_part[0][0].is_zero());

        let pair = Instance::combinatorial(
            blocks(&["b1", "b2"]),
            vec![Configuration::new(vec![1, 1])],
            vec![Job::new("j1", 100, vec![100, 1])],
        );
        let s = split_lp_solution(&[vec![ratio(2, 5)], vec![ratio(2, 5)]], &pair);
        assert_eq!(s.fractional_part[0][0], ratio(4, 5));
        assert!(s.fractional_part[1][0].is_zero());
    }

    #[test]
    fn greedy_log_on_single_job() {
        let inst = Instance::combinatorial(
            blocks(&["b1"]),
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        );
        let run = solve_greedy_log_detailed(&inst).unwrap();
        assert_eq!(run.s1.cost(), 1);
        assert_eq!(run.s2.cost(), 0);
        assert_eq!(run.schedule.cost(), 2);
        assert!(validate_schedule(&inst, &run.schedule).is_empty());
    }

    #[test]
    fn greedy_log_rejects_dead_job() {
        let inst = Instance::combinatorial(
            blocks(&["b1"]),
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![0])],
        );
        assert!(matches!(solve_greedy_log(&inst), Err(CmsError::Infeasible(_))));
    }
}
