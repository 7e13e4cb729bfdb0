//! Instances, schedules and their validation.
//!
//! Block types and jobs are addressed by their index in the owning
//! [`Instance`]; names only matter at the JSON boundary. A numerical instance
//! of capacity `k` has block types `0..k`, where block index `i` stands for a
//! block of size `i + 1`.

use std::cmp::Reverse;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{CmsError, Result};

/// Multiplicity of every block type in a configuration, indexed by block.
///
/// Trailing zero counts are trimmed so that equal multisets compare equal
/// regardless of how many block types the caller padded with.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    counts: Vec<u64>,
}

impl Configuration {
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Configuration { counts }
    }

    /// Builds a configuration from a list of block indices (with repeats).
    pub fn from_blocks<I: IntoIterator<Item = usize>>(blocks: I) -> Self {
        let mut counts = Vec::new();
        for b in blocks {
            if counts.len() <= b {
                counts.resize(b + 1, 0);
            }
            counts[b] += 1;
        }
        Configuration::new(counts)
    }

    pub fn count(&self, block: usize) -> u64 {
        self.counts.get(block).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of blocks, `|σ|`.
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Largest block index referenced, plus one.
    pub fn span(&self) -> usize {
        self.counts.len()
    }

    /// Block slots in declaration order: every block index repeated by its count.
    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(b, &c)| std::iter::repeat_n(b, c as usize))
    }

    /// Block indices with a positive count.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(b, _)| b)
    }

    /// Total capacity used when block index `i` has size `i + 1`.
    pub fn numerical_size(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub id: String,
    pub demand: u64,
    /// Demand units one block of each type satisfies; missing entries are zero.
    pub table: Vec<u64>,
}

impl Job {
    pub fn new(id: impl Into<String>, demand: u64, table: Vec<u64>) -> Self {
        Job {
            id: id.into(),
            demand,
            table,
        }
    }

    /// `f_j(i)`.
    pub fn value(&self, block: usize) -> u64 {
        self.table.get(block).copied().unwrap_or(0)
    }

    /// Demand satisfied if every block of `config` runs this job.
    pub fn config_value(&self, config: &Configuration) -> u64 {
        config
            .counts()
            .iter()
            .enumerate()
            .map(|(b, &c)| c * self.value(b))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Combinatorial,
    Numerical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub blocks: Vec<String>,
    /// The configuration menu `C`; empty for numerical instances.
    pub configurations: Vec<Configuration>,
    /// Machine capacity `k`; only set for numerical instances.
    pub capacity: Option<u64>,
    pub jobs: Vec<Job>,
}

impl Instance {
    pub fn combinatorial(
        blocks: Vec<String>,
        configurations: Vec<Configuration>,
        jobs: Vec<Job>,
    ) -> Self {
        Instance {
            kind: InstanceKind::Combinatorial,
            blocks,
            configurations,
            capacity: None,
            jobs,
        }
    }

    /// Numerical instance: block types are the sizes `1..=capacity` and every
    /// size multiset of total at most `capacity` is an admissible machine.
    pub fn numerical(capacity: u64, jobs: Vec<Job>) -> Self {
        Instance {
            kind: InstanceKind::Numerical,
            blocks: (1..=capacity).map(|s| s.to_string()).collect(),
            configurations: Vec::new(),
            capacity: Some(capacity),
            jobs,
        }
    }

    pub fn is_numerical(&self) -> bool {
        self.kind == InstanceKind::Numerical
    }

    pub fn n_jobs(&self) -> usize {
        self.jobs.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b == name)
    }

    pub fn job_index(&self, id: &str) -> Option<usize> {
        self.jobs.iter().position(|j| j.id == id)
    }

    pub fn total_demand(&self) -> u64 {
        self.jobs.iter().map(|j| j.demand).sum()
    }

    /// Largest configuration size `k` (numerical: the capacity, all size-1 blocks).
    pub fn max_config_size(&self) -> u64 {
        match self.kind {
            InstanceKind::Numerical => self.capacity.unwrap_or(0),
            InstanceKind::Combinatorial => self
                .configurations
                .iter()
                .map(Configuration::size)
                .max()
                .unwrap_or(0),
        }
    }

    /// Whether a machine may be set up with `config`.
    pub fn admits(&self, config: &Configuration) -> bool {
        match self.kind {
            InstanceKind::Combinatorial => self.configurations.contains(config),
            InstanceKind::Numerical => {
                config.span() <= self.n_blocks()
                    && config.numerical_size() <= self.capacity.unwrap_or(0)
            }
        }
    }

    /// Every machine shape worth considering: the menu for combinatorial
    /// instances, the integer partitions of the capacity for numerical ones
    /// (a machine below capacity can always be padded with idle size-1 blocks).
    pub fn machine_menu(&self) -> Vec<Configuration> {
        match self.kind {
            InstanceKind::Combinatorial => self.configurations.clone(),
            InstanceKind::Numerical => partitions(self.capacity.unwrap_or(0)),
        }
    }

    /// Index of `config` in the menu, if present.
    pub fn configuration_index(&self, config: &Configuration) -> Option<usize> {
        self.configurations.iter().position(|c| c == config)
    }

    pub fn require_combinatorial(&self, what: &str) -> Result<()> {
        match self.kind {
            InstanceKind::Combinatorial => Ok(()),
            InstanceKind::Numerical => Err(CmsError::KindMismatch(format!(
                "{what} needs a combinatorial instance"
            ))),
        }
    }

    pub fn require_numerical(&self, what: &str) -> Result<()> {
        match self.kind {
            InstanceKind::Numerical => Ok(()),
            InstanceKind::Combinatorial => Err(CmsError::KindMismatch(format!(
                "{what} needs a numerical instance"
            ))),
        }
    }

    /// Clamps every `f_j(i) > d_j` down to `d_j`, returning one warning per
    /// clamped entry.
    pub fn normalize(&mut self) -> Vec<String> {
        let mut warnings = Vec::new();
        for job in &mut self.jobs {
            for (b, v) in job.table.iter_mut().enumerate() {
                if *v > job.demand {
                    warnings.push(format!(
                        "job {}: table entry for block {} clamped from {} to demand {}",
                        job.id,
                        self.blocks.get(b).map(String::as_str).unwrap_or("?"),
                        v,
                        job.demand
                    ));
                    *v = job.demand;
                }
            }
        }
        warnings
    }
}

/// Integer partitions of `k` as size multisets (block index = size - 1),
/// largest parts first.
pub fn partitions(k: u64) -> Vec<Configuration> {
    fn go(rest: u64, max_part: u64, parts: &mut Vec<usize>, out: &mut Vec<Configuration>) {
        if rest == 0 {
            out.push(Configuration::from_blocks(parts.iter().copied()));
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            parts.push(part as usize - 1);
            go(rest - part, part, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(k, k, &mut Vec::new(), &mut out);
    }
    out
}

/// One broken rule, naming the entity it concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub entity: String,
    pub message: String,
}

impl Violation {
    fn new(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            entity: entity.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.message)
    }
}

pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let nb = inst.n_blocks();

    for (i, name) in inst.blocks.iter().enumerate() {
        if inst.blocks[..i].contains(name) {
            out.push(Violation::new(format!("block {name}"), "duplicate block type"));
        }
    }
    for (i, job) in inst.jobs.iter().enumerate() {
        if inst.jobs[..i].iter().any(|j| j.id == job.id) {
            out.push(Violation::new(format!("job {}", job.id), "duplicate job id"));
        }
        if job.table.len() > nb && job.table[nb..].iter().any(|&v| v > 0) {
            out.push(Violation::new(format!("job {}", job.id), "unknown block type"));
        }
        for (b, &v) in job.table.iter().enumerate() {
            if v > job.demand {
                let block = inst.blocks.get(b).map(String::as_str).unwrap_or("?");
                out.push(Violation::new(
                    format!("job {}", job.id),
                    format!("table exceeds demand ({v} > {} on block {block})", job.demand),
                ));
            }
        }
    }

    match inst.kind {
        InstanceKind::Combinatorial => {
            if inst.capacity.is_some() {
                out.push(Violation::new("instance", "combinatorial instance carries a capacity"));
            }
            for (s, config) in inst.configurations.iter().enumerate() {
                if config.is_empty() {
                    out.push(Violation::new(format!("configuration {s}"), "empty configuration"));
                }
                if config.span() > nb {
                    out.push(Violation::new(format!("configuration {s}"), "unknown block type"));
                }
            }
        }
        InstanceKind::Numerical => match inst.capacity {
            None | Some(0) => {
                out.push(Violation::new("instance", "numerical instance needs a positive capacity"))
            }
            Some(k) => {
                let expected: Vec<String> = (1..=k).map(|s| s.to_string()).collect();
                if inst.blocks != expected {
                    out.push(Violation::new("instance", "numerical block types must be 1..k"));
                }
                if !inst.configurations.is_empty() {
                    out.push(Violation::new("instance", "numerical instance lists configurations"));
                }
            }
        },
    }
    out
}

/// One block slot of a machine: its block type and the job it runs, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub block: usize,
    pub job: Option<usize>,
}

/// `multiplicity` identical machines sharing one configuration and assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MachineUse {
    pub multiplicity: u64,
    pub configuration: Configuration,
    pub assignment: Vec<Slot>,
}

impl MachineUse {
    /// Pairs `jobs[s]` with the `s`-th slot of `configuration` (declaration
    /// order). Missing trailing entries are idle.
    pub fn new(multiplicity: u64, configuration: Configuration, jobs: &[Option<usize>]) -> Self {
        let assignment = configuration
            .slots()
            .enumerate()
            .map(|(s, block)| Slot {
                block,
                job: jobs.get(s).copied().flatten(),
            })
            .collect();
        MachineUse {
            multiplicity,
            configuration,
            assignment,
        }
    }

    pub fn idle(multiplicity: u64, configuration: Configuration) -> Self {
        MachineUse::new(multiplicity, configuration, &[])
    }

    /// Demand units one copy of this machine gives job `j`.
    pub fn value_for(&self, inst: &Instance, j: usize) -> u64 {
        let job = &inst.jobs[j];
        self.assignment
            .iter()
            .filter(|s| s.job == Some(j))
            .map(|s| job.value(s.block))
            .sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub machines: Vec<MachineUse>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    /// Number of machines, counting multiplicities.
    pub fn cost(&self) -> u64 {
        self.machines.iter().map(|m| m.multiplicity).sum()
    }

    pub fn push(&mut self, machine: MachineUse) {
        if machine.multiplicity > 0 {
            self.machines.push(machine);
        }
    }

    /// Multiset union.
    pub fn union(mut self, other: Schedule) -> Schedule {
        self.machines.extend(other.machines);
        self
    }

    /// `S ⊕ S`: every multiplicity doubled.
    pub fn doubled(mut self) -> Schedule {
        for m in &mut self.machines {
            m.multiplicity *= 2;
        }
        self
    }

    /// Merges machine uses with identical configuration and assignment,
    /// keeping first-appearance order.
    pub fn merged(self) -> Schedule {
        let mut index: HashMap<(Configuration, Vec<Slot>), usize> = HashMap::new();
        let mut out: Vec<MachineUse> = Vec::new();
        for m in self.machines {
            let key = (m.configuration.clone(), m.assignment.clone());
            match index.get(&key) {
                Some(&i) => out[i].multiplicity += m.multiplicity,
                None => {
                    index.insert(key, out.len());
                    out.push(m);
                }
            }
        }
        Schedule { machines: out }
    }

    /// Opens `count` machines of each listed configuration and hands out
    /// their slots so that job `j` receives `counts[i][j]` blocks of type `i`.
    /// Per block type, jobs are served by descending `f_j(i) * counts[i][j]`
    /// (lower index first on ties); leftover slots stay idle.
    pub fn from_block_counts(
        inst: &Instance,
        counts: &[Vec<u64>],
        machines: &[(Configuration, u64)],
    ) -> Result<Schedule> {
        let mut owners: Vec<VecDeque<(usize, u64)>> = (0..inst.n_blocks())
            .map(|i| {
                let row = counts.get(i).map(Vec::as_slice).unwrap_or(&[]);
                let mut jobs: Vec<usize> = (0..row.len()).filter(|&j| row[j] > 0).collect();
                jobs.sort_by_key(|&j| (Reverse(inst.jobs[j].value(i).saturating_mul(row[j])), j));
                jobs.into_iter().map(|j| (j, row[j])).collect()
            })
            .collect();
        let mut schedule = Schedule::new();
        for (config, count) in machines {
            for _ in 0..*count {
                let slots: Vec<Option<usize>> = config
                    .slots()
                    .map(|i| {
                        let queue = &mut owners[i];
                        let front = queue.front_mut()?;
                        let j = front.0;
                        front.1 -= 1;
                        if front.1 == 0 {
                            queue.pop_front();
                        }
                        Some(j)
                    })
                    .collect();
                schedule.push(MachineUse::new(1, config.clone(), &slots));
            }
        }
        if let Some(i) = owners.iter().position(|q| !q.is_empty()) {
            return Err(CmsError::Infeasible(format!(
                "not enough blocks of type {} for the requested assignment",
                inst.blocks[i]
            )));
        }
        Ok(schedule.merged())
    }
}

/// Demand units delivered to job `j`, without capping at `d_j`.
pub fn satisfied_demand(inst: &Instance, sched: &Schedule, j: usize) -> Result<u64> {
    if j >= inst.n_jobs() {
        return Err(CmsError::UnknownJob(j));
    }
    Ok(sched
        .machines
        .iter()
        .map(|m| m.multiplicity.saturating_mul(m.value_for(inst, j)))
        .fold(0u64, u64::saturating_add))
}

pub fn validate_schedule(inst: &Instance, sched: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut structurally_sound = true;

    for (m, machine) in sched.machines.iter().enumerate() {
        let entity = format!("machine {m}");
        if machine.multiplicity == 0 {
            out.push(Violation::new(&entity, "zero multiplicity"));
        }
        let mut seen = vec![0u64; machine.configuration.span().max(inst.n_blocks())];
        for slot in &machine.assignment {
            if slot.block >= inst.n_blocks() {
                out.push(Violation::new(&entity, format!("unknown block index {}", slot.block)));
                structurally_sound = false;
                continue;
            }
            seen[slot.block] += 1;
            if let Some(j) = slot.job {
                if j >= inst.n_jobs() {
                    out.push(Violation::new(&entity, format!("unknown job index {j}")));
                    structurally_sound = false;
                }
            }
        }
        for (b, &c) in seen.iter().enumerate() {
            if c != machine.configuration.count(b) {
                out.push(Violation::new(
                    &entity,
                    format!(
                        "slot count for block {b} is {c}, configuration has {}",
                        machine.configuration.count(b)
                    ),
                ));
            }
        }
        match inst.kind {
            InstanceKind::Combinatorial => {
                if !inst.admits(&machine.configuration) {
                    out.push(Violation::new(&entity, "configuration not in the instance menu"));
                }
            }
            InstanceKind::Numerical => {
                let k = inst.capacity.unwrap_or(0);
                let used = machine.configuration.numerical_size();
                if machine.configuration.span() > inst.n_blocks() {
                    out.push(Violation::new(&entity, "block size exceeds capacity"));
                } else if used > k {
                    out.push(Violation::new(&entity, format!("capacity exceeded ({used} > {k})")));
                }
            }
        }
    }

    if structurally_sound {
        for (j, job) in inst.jobs.iter().enumerate() {
            let got = satisfied_demand(inst, sched, j).unwrap_or(0);
            if got < job.demand {
                out.push(Violation::new(
                    format!("job {}", job.id),
                    format!("unsatisfied ({got}/{})", job.demand),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> Instance {
        Instance::combinatorial(
            vec!["b1".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        )
    }

    #[test]
    fn valid_single_job_instance() {
        assert!(validate_instance(&t1()).is_empty());
    }

    #[test]
    fn table_above_demand_is_flagged_and_clamped() {
        let mut inst = t1();
        inst.jobs[0].table[0] = 7;
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("table exceeds demand"));
        let warnings = inst.normalize();
        assert_eq!(warnings.len(), 1);
        assert_eq!(inst.jobs[0].value(0), 5);
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn undeclared_block_in_configuration() {
        let mut inst = t1();
        inst.configurations.push(Configuration::from_blocks([8]));
        let v = validate_instance(&inst);
        assert!(v.iter().any(|v| v.message == "unknown block type"), "{v:?}");
    }

    #[test]
    fn schedule_checks() {
        let inst = t1();
        let one = Schedule {
            machines: vec![MachineUse::new(1, Configuration::new(vec![1]), &[Some(0)])],
        };
        assert!(validate_schedule(&inst, &one).is_empty());

        let empty = Schedule::new();
        let v = validate_schedule(&inst, &empty);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "job j1: unsatisfied (0/5)");
    }

    #[test]
    fn numerical_capacity_is_enforced() {
        let inst = Instance::numerical(4, vec![Job::new("j1", 1, vec![1, 1, 1, 1])]);
        // two blocks of size 3
        let sched = Schedule {
            machines: vec![MachineUse::new(
                1,
                Configuration::new(vec![0, 0, 2]),
                &[Some(0), None],
            )],
        };
        let v = validate_schedule(&inst, &sched);
        assert!(v.iter().any(|v| v.message == "capacity exceeded (6 > 4)"), "{v:?}");
    }

    #[test]
    fn satisfied_demand_is_additive_and_uncapped() {
        let inst = t1();
        let two = Schedule {
            machines: vec![MachineUse::new(2, Configuration::new(vec![1]), &[Some(0)])],
        };
        assert_eq!(satisfied_demand(&inst, &two, 0).unwrap(), 10);
        assert_eq!(satisfied_demand(&inst, &Schedule::new(), 0).unwrap(), 0);
        assert!(matches!(
            satisfied_demand(&inst, &two, 3),
            Err(CmsError::UnknownJob(3))
        ));

        let mixed = Instance::combinatorial(
            vec!["b1".into(), "b2".into()],
            vec![Configuration::new(vec![1, 1])],
            vec![Job::new("j1", 5, vec![2, 3])],
        );
        let s = Schedule {
            machines: vec![MachineUse::new(1, Configuration::new(vec![1, 1]), &[Some(0), Some(0)])],
        };
        assert_eq!(satisfied_demand(&mixed, &s, 0).unwrap(), 5);
    }

    #[test]
    fn merging_and_doubling_preserve_cost_arithmetic() {
        let c = Configuration::new(vec![1]);
        let s = Schedule {
            machines: vec![
                MachineUse::new(1, c.clone(), &[Some(0)]),
                MachineUse::new(2, c.clone(), &[Some(0)]),
                MachineUse::new(1, c, &[None]),
            ],
        };
        assert_eq!(s.cost(), 4);
        let m = s.clone().merged();
        assert_eq!(m.machines.len(), 2);
        assert_eq!(m.cost(), 4);
        assert_eq!(s.clone().union(s.clone()).cost(), 8);
        assert_eq!(s.doubled().cost(), 8);
    }

    #[test]
    fn partitions_of_small_capacities() {
        let counts: Vec<usize> = (1..=6).map(|k| partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
        assert!(partitions(5).iter().all(|c| c.numerical_size() == 5));
    }

    #[test]
    fn configuration_equality_ignores_trailing_zeros() {
        assert_eq!(Configuration::new(vec![1, 0, 0]), Configuration::new(vec![1]));
        assert_eq!(Configuration::from_blocks([1, 0, 1]).counts(), &[1, 2]);
        let slots: Vec<_> = Configuration::new(vec![2, 1]).slots().collect();
        assert_eq!(slots, vec![0, 0, 1]);
    }
}
