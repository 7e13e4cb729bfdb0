//! Pseudo-polynomial exact solver.
//!
//! `S(t, n)` says whether jobs `t..` can be served from `n_i` blocks of each
//! type `i`; it holds when some block vector `m <= n` serves job `t` and
//! `S(t + 1, n - m)` holds. The machine count `N` is found by a galloping
//! then binary search, trying every way of splitting `N` machines among the
//! configurations.

use std::collections::{HashMap, HashSet};

use crate::error::{CmsError, Result};
use crate::model::{Configuration, Instance, Schedule};
use crate::oracle::{minimal_vectors, ExactLimits};

struct Dp {
    menu: Vec<Configuration>,
    jobs: Vec<usize>,
    options: Vec<Vec<Vec<u64>>>,
    /// More blocks of a type than this can never be used.
    cap: Vec<u64>,
    memo: HashMap<(usize, Vec<u64>), bool>,
    nodes: u64,
    budget: u64,
}

impl Dp {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CmsError::GuardExceeded(format!(
                "dynamic program gave up after {} states",
                self.budget
            )));
        }
        Ok(())
    }

    fn serves(&mut self, t: usize, supply: &[u64]) -> Result<bool> {
        if t == self.jobs.len() {
            return Ok(true);
        }
        let key = (t, supply.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.tick()?;
        let mut ok = false;
        for o in 0..self.options[t].len() {
            let m = &self.options[t][o];
            if m.iter().zip(supply).all(|(a, s)| a <= s) {
                let rest: Vec<u64> = supply.iter().zip(m).map(|(s, a)| s - a).collect();
                if self.serves(t + 1, &rest)? {
                    ok = true;
                    break;
                }
            }
        }
        self.memo.insert(key, ok);
        Ok(ok)
    }

    fn supply_of(&self, picked: &[usize]) -> Vec<u64> {
        let mut supply = vec![0u64; self.cap.len()];
        for &c in picked {
            for (s, &a) in supply.iter_mut().zip(self.menu[c].counts()) {
                *s += a;
            }
        }
        supply.iter().zip(&self.cap).map(|(s, c)| *s.min(c)).collect()
    }

    /// Some split of `machines` machines among the menu that serves every job.
    fn feasible(&mut self, machines: u64) -> Result<Option<Vec<usize>>> {
        let mut seen = HashSet::new();
        let mut picked = Vec::new();
        self.split(machines, 0, &mut picked, &mut seen)
    }

    fn split(
        &mut self,
        left: u64,
        from: usize,
        picked: &mut Vec<usize>,
        seen: &mut HashSet<Vec<u64>>,
    ) -> Result<Option<Vec<usize>>> {
        self.tick()?;
        if left == 0 {
            let supply = self.supply_of(picked);
            if seen.insert(supply.clone()) && self.serves(0, &supply)? {
                return Ok(Some(picked.clone()));
            }
            return Ok(None);
        }
        for c in from..self.menu.len() {
            picked.push(c);
            if let Some(found) = self.split(left - 1, c, picked, seen)? {
                return Ok(Some(found));
            }
            picked.pop();
        }
        Ok(None)
    }

    fn witness(&mut self, inst: &Instance, picked: &[usize]) -> Result<Schedule> {
        let mut supply = self.supply_of(picked);
        let mut counts = vec![vec![0u64; inst.n_jobs()]; inst.n_blocks()];
        for t in 0..self.jobs.len() {
            let mut chosen = None;
            for o in 0..self.options[t].len() {
                let m = self.options[t][o].clone();
                if m.iter().zip(&supply).all(|(a, s)| a <= s) {
                    let rest: Vec<u64> = supply.iter().zip(&m).map(|(s, a)| s - a).collect();
                    if self.serves(t + 1, &rest)? {
                        chosen = Some((m, rest));
                        break;
                    }
                }
            }
            let (m, rest) = chosen.expect("feasible state has a witness");
            for (i, &a) in m.iter().enumerate() {
                counts[i][self.jobs[t]] = a;
            }
            supply = rest;
        }
        let mut machines: Vec<(Configuration, u64)> = Vec::new();
        for &c in picked {
            match machines.iter_mut().find(|(cfg, _)| *cfg == self.menu[c]) {
                Some(entry) => entry.1 += 1,
                None => machines.push((self.menu[c].clone(), 1)),
            }
        }
        Schedule::from_block_counts(inst, &counts, &machines)
    }
}

/// Optimal machine count and a witness schedule.
pub fn dp_solve(inst: &Instance, limits: ExactLimits) -> Result<(u64, Schedule)> {
    let mut menu: Vec<Configuration> = Vec::new();
    for c in inst.machine_menu() {
        if !c.is_empty() && !menu.contains(&c) {
            menu.push(c);
        }
    }
    let nb = inst.n_blocks();
    let offered: Vec<bool> = (0..nb).map(|b| menu.iter().any(|c| c.count(b) > 0)).collect();

    let mut jobs = Vec::new();
    let mut options = Vec::new();
    let mut cap = vec![0u64; nb];
    let mut upper = 0u64;
    for (j, job) in inst.jobs.iter().enumerate() {
        if job.demand == 0 {
            continue;
        }
        let useful: Vec<usize> = (0..nb).filter(|&b| offered[b] && job.value(b) > 0).collect();
        let Some(best) = useful.iter().map(|&b| job.value(b)).max() else {
            return Err(CmsError::Infeasible(format!(
                "job {} cannot be served by any offered block",
                job.id
            )));
        };
        upper += job.demand.div_ceil(best);
        let values: Vec<u64> = (0..nb).map(|b| job.value(b)).collect();
        let opts = minimal_vectors(&values, &useful, job.demand, nb);
        for (i, c) in cap.iter_mut().enumerate() {
            *c += opts.iter().map(|m| m[i]).max().unwrap_or(0);
        }
        jobs.push(j);
        options.push(opts);
    }
    if jobs.is_empty() {
        return Ok((0, Schedule::new()));
    }
    if let Some(m) = limits.max_machines {
        upper = upper.min(m);
    }

    let mut dp = Dp {
        menu,
        jobs,
        options,
        cap,
        memo: HashMap::new(),
        nodes: 0,
        budget: limits.node_budget,
    };

    // Galloping search for a feasible count, then bisection below it.
    let mut lo = 0u64;
    let mut hi = 1u64;
    let mut found = loop {
        let probe = hi.min(upper.max(1));
        if let Some(p) = dp.feasible(probe)? {
            hi = probe;
            break p;
        }
        if probe >= upper {
            return Err(CmsError::GuardExceeded(format!(
                "no schedule with at most {upper} machines"
            )));
        }
        lo = probe;
        hi = probe * 2;
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match dp.feasible(mid)? {
            Some(p) => {
                hi = mid;
                found = p;
            }
            None => lo = mid,
        }
    }
    let schedule = dp.witness(inst, &found)?;
    Ok((hi, schedule))
}

pub fn dp_min_machines(inst: &Instance, limits: ExactLimits) -> Result<u64> {
    Ok(dp_solve(inst, limits)?.0)
}

pub fn dp_schedule(inst: &Instance, limits: ExactLimits) -> Result<Schedule> {
    Ok(dp_solve(inst, limits)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_schedule, Job};
    use crate::oracle::gen_tight_greedy_family;

    #[test]
    fn small_optima() {
        let t1 = Instance::combinatorial(
            vec!["b1".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        );
        assert_eq!(dp_min_machines(&t1, ExactLimits::default()).unwrap(), 1);

        let fam = gen_tight_greedy_family(3).unwrap();
        let (n, s) = dp_solve(&fam, ExactLimits::default()).unwrap();
        assert_eq!(n, 2);
        assert_eq!(s.cost(), 2);
        assert!(validate_schedule(&fam, &s).is_empty());

        let full = Instance::combinatorial(
            vec!["a".into()],
            vec![Configuration::new(vec![2])],
            vec![Job::new("j1", 4, vec![2]), Job::new("j2", 4, vec![2])],
        );
        assert_eq!(dp_min_machines(&full, ExactLimits::default()).unwrap(), 2);
    }

    #[test]
    fn dead_job_is_infeasible() {
        let dead = Instance::combinatorial(
            vec!["a".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j", 2, vec![0])],
        );
        assert!(matches!(
            dp_min_machines(&dead, ExactLimits::default()),
            Err(CmsError::Infeasible(_))
        ));
    }
}
