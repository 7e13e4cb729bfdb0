//! Exhaustive minimum-machine search.
//!
//! Iterative deepening over the machine count `M`: for every multiset of `M`
//! machine shapes, decide whether the resulting block supply can serve all
//! jobs by a depth-first search that hands each job one of its
//! inclusion-minimal block vectors. Failed `(job, remaining supply)` states
//! are remembered across the whole search.

use std::collections::HashSet;

use crate::error::{CmsError, Result};
use crate::model::{Configuration, Instance, MachineUse, Schedule};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    /// Give up beyond this many machines.
    pub max_machines: Option<u64>,
    /// Give up after visiting this many search nodes.
    pub node_budget: u64,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_machines: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl ExactLimits {
    pub fn with_budget(node_budget: u64) -> Self {
        ExactLimits {
            node_budget,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    /// Minimum machine count with a witness schedule of that cost.
    Optimal { machines: u64, schedule: Schedule },
    /// Some job can never be satisfied.
    Infeasible,
    ExceedsBudget { explored: u64 },
}

impl ExactOutcome {
    pub fn machines(&self) -> Option<u64> {
        match self {
            ExactOutcome::Optimal { machines, .. } => Some(*machines),
            _ => None,
        }
    }

    pub fn into_schedule(self) -> Result<Schedule> {
        match self {
            ExactOutcome::Optimal { schedule, .. } => Ok(schedule),
            ExactOutcome::Infeasible => Err(CmsError::Infeasible(
                "some job cannot be served by any admissible block".into(),
            )),
            ExactOutcome::ExceedsBudget { explored } => Err(CmsError::GuardExceeded(format!(
                "exact search gave up after {explored} nodes"
            ))),
        }
    }
}

struct Search {
    menu: Vec<Configuration>,
    jobs: Vec<usize>,
    /// Inclusion-minimal block vectors satisfying each entry of `jobs`.
    options: Vec<Vec<Vec<u64>>>,
    failed: HashSet<(usize, Vec<u64>)>,
    tried_supplies: HashSet<Vec<u64>>,
    nodes: u64,
    budget: u64,
}

struct OutOfBudget;

/// Minimal count vectors `m` with `Σ m_i f(i) >= demand`, over block types
/// `useful` (others fixed at zero).
pub(crate) fn minimal_vectors(values: &[u64], useful: &[usize], demand: u64, nb: usize) -> Vec<Vec<u64>> {
    fn go(
        values: &[u64],
        useful: &[usize],
        idx: usize,
        remaining: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        if idx == useful.len() {
            return;
        }
        let b = useful[idx];
        let f = values[b];
        let most = remaining.div_ceil(f);
        for c in 0..=most {
            current[b] = c;
            go(values, useful, idx + 1, remaining.saturating_sub(c * f), current, out);
        }
        current[b] = 0;
    }
    let mut all = Vec::new();
    go(values, useful, 0, demand, &mut vec![0; nb], &mut all);
    all.retain(|m| {
        let total: u64 = m.iter().zip(values).map(|(c, f)| c * f).sum();
        m.iter()
            .zip(values)
            .all(|(&c, &f)| c == 0 || total - f < demand)
    });
    all.sort_by_key(|m| m.iter().sum::<u64>());
    all
}

impl Search {
    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// Tries to serve `jobs[t..]` from `supply`; fills `chosen` on success.
    fn assign(
        &mut self,
        t: usize,
        supply: &mut Vec<u64>,
        chosen: &mut Vec<usize>,
    ) -> Result<bool, OutOfBudget> {
        if t == self.jobs.len() {
            return Ok(true);
        }
        if self.failed.contains(&(t, supply.clone())) {
            return Ok(false);
        }
        self.tick()?;
        for o in 0..self.options[t].len() {
            if !self.options[t][o].iter().zip(supply.iter()).all(|(m, s)| m <= s) {
                continue;
            }
            for (s, m) in supply.iter_mut().zip(&self.options[t][o]) {
                *s -= m;
            }
            chosen.push(o);
            let ok = self.assign(t + 1, supply, chosen)?;
            for (s, m) in supply.iter_mut().zip(&self.options[t][o]) {
                *s += m;
            }
            if ok {
                return Ok(true);
            }
            chosen.pop();
        }
        self.failed.insert((t, supply.clone()));
        Ok(false)
    }

    /// Enumerates multisets of `machines` menu entries with indices `>= from`.
    fn level(
        &mut self,
        machines: u64,
        from: usize,
        picked: &mut Vec<usize>,
        supply: &mut Vec<u64>,
    ) -> Result<Option<Vec<usize>>, OutOfBudget> {
        self.tick()?;
        if machines == 0 {
            if !self.tried_supplies.insert(supply.clone()) {
                return Ok(None);
            }
            let mut chosen = Vec::new();
            let mut s = supply.clone();
            return Ok(self.assign(0, &mut s, &mut chosen)?.then_some(chosen));
        }
        for c in from..self.menu.len() {
            for (s, &a) in supply.iter_mut().zip(self.menu[c].counts()) {
                *s += a;
            }
            picked.push(c);
            let found = self.level(machines - 1, c, picked, supply)?;
            if found.is_some() {
                return Ok(found);
            }
            picked.pop();
            for (s, &a) in supply.iter_mut().zip(self.menu[c].counts()) {
                *s -= a;
            }
        }
        Ok(None)
    }

    fn witness(&self, picked: &[usize], chosen: &[usize]) -> Schedule {
        let mut machines: Vec<(Configuration, Vec<Option<usize>>)> = picked
            .iter()
            .map(|&c| {
                let config = self.menu[c].clone();
                let slots = vec![None; config.size() as usize];
                (config, slots)
            })
            .collect();
        for (t, &o) in chosen.iter().enumerate() {
            let j = self.jobs[t];
            for (b, &need) in self.options[t][o].iter().enumerate() {
                let mut need = need;
                for (config, slots) in machines.iter_mut() {
                    for (slot, block) in slots.iter_mut().zip(config.slots()) {
                        if need == 0 {
                            break;
                        }
                        if block == b && slot.is_none() {
                            *slot = Some(j);
                            need -= 1;
                        }
                    }
                }
            }
        }
        let mut schedule = Schedule::new();
        for (config, slots) in machines {
            schedule.push(MachineUse::new(1, config, &slots));
        }
        schedule.merged()
    }
}

/// Minimum number of machines, by exhaustive search.
pub fn exact_min_machines(inst: &Instance, limits: ExactLimits) -> ExactOutcome {
    let mut menu: Vec<Configuration> = Vec::new();
    for c in inst.machine_menu() {
        if !c.is_empty() && !menu.contains(&c) {
            menu.push(c);
        }
    }
    let nb = inst.n_blocks();
    let offered: Vec<bool> = (0..nb).map(|b| menu.iter().any(|c| c.count(b) > 0)).collect();
    let max_size = menu.iter().map(Configuration::size).max().unwrap_or(0);

    let mut jobs = Vec::new();
    let mut options = Vec::new();
    let mut lower = 0u64;
    let mut block_total = 0u64;
    let mut upper = 0u64;
    for (j, job) in inst.jobs.iter().enumerate() {
        if job.demand == 0 {
            continue;
        }
        let useful: Vec<usize> = (0..nb).filter(|&b| offered[b] && job.value(b) > 0).collect();
        let Some(best_block) = useful.iter().map(|&b| job.value(b)).max() else {
            return ExactOutcome::Infeasible;
        };
        let best_machine = menu.iter().map(|c| job.config_value(c)).max().unwrap_or(0);
        lower = lower.max(job.demand.div_ceil(best_machine));
        let fewest_blocks = job.demand.div_ceil(best_block);
        block_total += fewest_blocks;
        upper += fewest_blocks;

        let values: Vec<u64> = (0..nb).map(|b| job.value(b)).collect();
        jobs.push(j);
        options.push(minimal_vectors(&values, &useful, job.demand, nb));
    }
    if jobs.is_empty() {
        return ExactOutcome::Optimal {
            machines: 0,
            schedule: Schedule::new(),
        };
    }
    lower = lower.max(block_total.div_ceil(max_size.max(1)));
    if let Some(cap) = limits.max_machines {
        upper = upper.min(cap);
    }

    let mut search = Search {
        menu,
        jobs,
        options,
        failed: HashSet::new(),
        tried_supplies: HashSet::new(),
        nodes: 0,
        budget: limits.node_budget,
    };
    for machines in lower..=upper {
        let mut picked = Vec::new();
        let mut supply = vec![0u64; nb];
        match search.level(machines, 0, &mut picked, &mut supply) {
            Err(OutOfBudget) => {
                return ExactOutcome::ExceedsBudget {
                    explored: search.nodes,
                }
            }
            Ok(Some(chosen)) => {
                let schedule = search.witness(&picked, &chosen);
                return ExactOutcome::Optimal { machines, schedule };
            }
            Ok(None) => {}
        }
    }
    ExactOutcome::ExceedsBudget {
        explored: search.nodes,
    }
}

/// [`exact_min_machines`] as a schedule, with failures mapped to errors.
pub fn exact_schedule(inst: &Instance, limits: ExactLimits) -> Result<Schedule> {
    exact_min_machines(inst, limits).into_schedule()
}
