//! Numerical CMS: machines of capacity `k` split into blocks of any sizes.
//!
//! Each job independently picks the cheapest multiset of block sizes that
//! covers its demand (an unbounded minimum knapsack), and the resulting
//! blocks are packed first-fit by descending size.

use num_traits::{One, Signed};

use crate::error::{CmsError, Result};
use crate::lp::{from_u64, Rational};
use crate::model::{Configuration, Instance, Job, MachineUse, Schedule};

/// Demands up to this value go to the exact DP.
pub const EXACT_DEMAND_THRESHOLD: u64 = 100_000;

/// Block sizes for one job; `counts[s - 1]` copies of size `s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockMultiset {
    counts: Vec<u64>,
}

impl BlockMultiset {
    pub fn empty(k: u64) -> Self {
        BlockMultiset {
            counts: vec![0; k as usize],
        }
    }

    pub fn from_sizes(k: u64, sizes: &[u64]) -> Self {
        let mut m = Self::empty(k);
        for &s in sizes {
            m.counts[s as usize - 1] += 1;
        }
        m
    }

    pub fn count(&self, size: u64) -> u64 {
        self.counts.get(size as usize - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Σ size · count.
    pub fn total_size(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum()
    }

    /// Σ count · f_j(size).
    pub fn total_value(&self, job: &Job) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| job.value(i) * c)
            .sum()
    }

    /// Sizes in ascending order, with repeats.
    pub fn sizes(&self) -> Vec<u64> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i as u64 + 1, c as usize))
            .collect()
    }

    fn add(&mut self, size: u64) {
        self.counts[size as usize - 1] += 1;
    }
}

fn check_job(job: &Job, k: u64) -> Result<()> {
    if k == 0 {
        return Err(CmsError::InvalidInput("capacity must be positive".into()));
    }
    if job.demand > 0 && (0..k as usize).all(|i| job.value(i) == 0) {
        return Err(CmsError::Infeasible(format!(
            "job {} has demand {} but no useful block size",
            job.id, job.demand
        )));
    }
    Ok(())
}

/// Cheapest multiset by a DP over covered value; among optimal multisets the
/// one whose ascending size list is lexicographically smallest.
pub fn min_knapsack_exact(job: &Job, k: u64) -> Result<BlockMultiset> {
    check_job(job, k)?;
    let d = job.demand as usize;
    let sizes = 1..=k;
    let mut cost = vec![u64::MAX; d + 1];
    cost[0] = 0;
    for v in 1..=d {
        for s in sizes.clone() {
            let f = job.value(s as usize - 1) as usize;
            if f == 0 {
                continue;
            }
            let rest = cost[v.saturating_sub(f)];
            if rest != u64::MAX && s + rest < cost[v] {
                cost[v] = s + rest;
            }
        }
    }
    let mut out = BlockMultiset::empty(k);
    let mut v = d;
    while v > 0 {
        let s = sizes
            .clone()
            .find(|&s| {
                let f = job.value(s as usize - 1) as usize;
                f > 0 && cost[v.saturating_sub(f)].saturating_add(s) == cost[v]
            })
            .expect("optimal value has a witness");
        out.add(s);
        v = v.saturating_sub(job.value(s as usize - 1) as usize);
    }
    Ok(out)
}

/// `(1+ε)`-approximate knapsack; exact DP below `EXACT_DEMAND_THRESHOLD`.
pub fn min_knapsack_fptas(job: &Job, k: u64, eps: &Rational) -> Result<BlockMultiset> {
    min_knapsack_fptas_with_threshold(job, k, eps, EXACT_DEMAND_THRESHOLD)
}

/// As [`min_knapsack_fptas`] with an explicit cut-over demand.
///
/// Above the threshold, the best-density size repeated `⌈d / f⌉` times costs
/// at most `OPT + k`. If that is already within `(1+ε)` of the lower bound
/// `⌈d · s / f(s)⌉` it is returned; otherwise `OPT < k/ε`, and a DP over
/// total size up to the greedy cost finds the optimum in `O(k²/ε)`.
pub fn min_knapsack_fptas_with_threshold(
    job: &Job,
    k: u64,
    eps: &Rational,
    threshold: u64,
) -> Result<BlockMultiset> {
    if !eps.is_positive() {
        return Err(CmsError::InvalidInput("epsilon must be positive".into()));
    }
    check_job(job, k)?;
    if job.demand <= threshold {
        return min_knapsack_exact(job, k);
    }
    let d = job.demand;
    // Best value per unit size; smaller size wins ties.
    let best = (1..=k)
        .filter(|&s| job.value(s as usize - 1) > 0)
        .max_by(|&a, &b| {
            let (fa, fb) = (job.value(a as usize - 1), job.value(b as usize - 1));
            (fa as u128 * b as u128).cmp(&(fb as u128 * a as u128)).then(b.cmp(&a))
        })
        .expect("checked above");
    let f = job.value(best as usize - 1);
    let copies = d.div_ceil(f);
    let greedy_cost = copies * best;
    let lower = Rational::new((d as u128 * best as u128).into(), (f as u128).into()).ceil();
    if from_u64(greedy_cost) <= (Rational::one() + eps) * lower {
        let mut out = BlockMultiset::empty(k);
        out.counts[best as usize - 1] = copies;
        return Ok(out);
    }

    // reach[c]: most value (capped at d) from total size at most c.
    let g = greedy_cost as usize;
    let mut reach = vec![0u64; g + 1];
    for c in 1..=g {
        let mut r = reach[c - 1];
        for s in 1..=k.min(c as u64) {
            let v = job.value(s as usize - 1);
            r = r.max((v + reach[c - s as usize]).min(d));
        }
        reach[c] = r;
    }
    let mut c = (0..=g).find(|&c| reach[c] >= d).expect("greedy cost reaches d");
    let mut out = BlockMultiset::empty(k);
    while c > 0 {
        if reach[c] == reach[c - 1] {
            c -= 1;
            continue;
        }
        let s = (1..=k.min(c as u64))
            .find(|&s| (job.value(s as usize - 1) + reach[c - s as usize]).min(d) == reach[c])
            .expect("DP value has a witness");
        out.add(s);
        c -= s as usize;
    }
    Ok(out)
}

/// First-fit by descending size (job index breaks ties), each machine padded
/// with idle size-1 blocks up to exactly `k`, identical machines merged.
pub fn pack_blocks(multisets: &[BlockMultiset], k: u64) -> Result<Schedule> {
    let mut blocks: Vec<(u64, usize)> = Vec::new();
    for (j, m) in multisets.iter().enumerate() {
        for s in m.sizes() {
            if s > k {
                return Err(CmsError::InvalidInput(format!(
                    "block of size {s} does not fit capacity {k}"
                )));
            }
            blocks.push((s, j));
        }
    }
    blocks.sort_by_key(|&(s, j)| (std::cmp::Reverse(s), j));

    let mut machines: Vec<(u64, Vec<(u64, usize)>)> = Vec::new();
    for (s, j) in blocks {
        match machines.iter_mut().find(|(used, _)| used + s <= k) {
            Some((used, content)) => {
                *used += s;
                content.push((s, j));
            }
            None => machines.push((s, vec![(s, j)])),
        }
    }

    let mut schedule = Schedule::new();
    for (used, mut content) in machines {
        content.sort();
        let mut counts = vec![0u64; k as usize];
        for &(s, _) in &content {
            counts[s as usize - 1] += 1;
        }
        counts[0] += k - used;
        // Slots run through block indices ascending: idle padding follows
        // the real size-1 blocks.
        let mut slots: Vec<Option<usize>> = Vec::new();
        for size in 1..=k {
            slots.extend(content.iter().filter(|(s, _)| *s == size).map(|&(_, j)| Some(j)));
            if size == 1 {
                slots.extend(std::iter::repeat_n(None, (k - used) as usize));
            }
        }
        schedule.push(MachineUse::new(1, Configuration::new(counts), &slots));
    }
    Ok(schedule.merged())
}

#[derive(Clone, Debug)]
pub struct NumericalRun {
    pub multisets: Vec<BlockMultiset>,
    pub schedule: Schedule,
    /// `Σ_j size(Ŝ_j) / (k (1+ε))`, a lower bound on the optimum.
    pub lower_bound: Rational,
}

pub fn solve_numerical_detailed(inst: &Instance, eps: &Rational) -> Result<NumericalRun> {
    inst.require_numerical("numerical solver")?;
    let k = inst.capacity.unwrap_or(0);
    let multisets = inst
        .jobs
        .iter()
        .map(|job| min_knapsack_fptas(job, k, eps))
        .collect::<Result<Vec<_>>>()?;
    let schedule = pack_blocks(&multisets, k)?;
    let total: u64 = multisets.iter().map(BlockMultiset::total_size).sum();
    let lower_bound = from_u64(total) / (from_u64(k) * (Rational::one() + eps));
    Ok(NumericalRun {
        multisets,
        schedule,
        lower_bound,
    })
}

pub fn solve_numerical(inst: &Instance, eps: &Rational) -> Result<Schedule> {
    Ok(solve_numerical_detailed(inst, eps)?.schedule)
}
