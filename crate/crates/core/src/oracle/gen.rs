//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CmsError, Result};
use crate::model::{Configuration, Instance, Job};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    /// Number of block types (combinatorial only).
    pub blocks: usize,
    /// Number of configurations to draw (combinatorial only; duplicates are
    /// dropped, so the menu may come out smaller).
    pub configs: usize,
    pub max_config_size: u64,
    pub max_demand: u64,
    pub max_table: u64,
    /// Machine capacity (numerical only).
    pub capacity: u64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 4,
            blocks: 3,
            configs: 3,
            max_config_size: 3,
            max_demand: 10,
            max_table: 10,
            capacity: 4,
            seed: 0,
        }
    }
}

fn check(params: &GenParams, numerical: bool) -> Result<()> {
    let bad = |what: &str| Err(CmsError::InvalidInput(format!("{what} must be positive")));
    if params.max_table == 0 {
        return bad("max table value");
    }
    if numerical {
        if params.capacity == 0 {
            return bad("capacity");
        }
    } else {
        if params.blocks == 0 {
            return bad("block count");
        }
        if params.configs == 0 {
            return bad("configuration count");
        }
        if params.max_config_size == 0 {
            return bad("configuration size");
        }
    }
    Ok(())
}

/// Draws a table for demand `d` over `width` block types, then makes sure at
/// least one block in `offered` is useful so the instance stays feasible.
fn draw_job(
    rng: &mut ChaCha8Rng,
    id: String,
    d: u64,
    width: usize,
    offered: &[usize],
    max_table: u64,
) -> Job {
    let top = max_table.min(d);
    let mut table: Vec<u64> = (0..width).map(|_| rng.gen_range(0..=top)).collect();
    if d > 0 && offered.iter().all(|&b| table[b] == 0) {
        let b = offered[rng.gen_range(0..offered.len())];
        table[b] = rng.gen_range(1..=top);
    }
    Job::new(id, d, table)
}

/// Random combinatorial instance; a pure function of `params`.
pub fn gen_random(params: &GenParams) -> Result<Instance> {
    check(params, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let blocks: Vec<String> = (1..=params.blocks).map(|i| format!("b{i}")).collect();

    let mut configurations: Vec<Configuration> = Vec::new();
    for _ in 0..params.configs {
        let size = rng.gen_range(1..=params.max_config_size);
        let config =
            Configuration::from_blocks((0..size).map(|_| rng.gen_range(0..params.blocks)));
        if !configurations.contains(&config) {
            configurations.push(config);
        }
    }
    let mut offered: Vec<usize> = configurations.iter().flat_map(|c| c.support()).collect();
    offered.sort_unstable();
    offered.dedup();

    let jobs = (1..=params.n)
        .map(|j| {
            let d = rng.gen_range(0..=params.max_demand);
            draw_job(&mut rng, format!("j{j}"), d, params.blocks, &offered, params.max_table)
        })
        .collect();
    Ok(Instance::combinatorial(blocks, configurations, jobs))
}

/// Random numerical instance with capacity `params.capacity`.
pub fn gen_numerical_random(params: &GenParams) -> Result<Instance> {
    check(params, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = params.capacity as usize;
    let offered: Vec<usize> = (0..k).collect();
    let jobs = (1..=params.n)
        .map(|j| {
            let d = rng.gen_range(0..=params.max_demand);
            draw_job(&mut rng, format!("j{j}"), d, k, &offered, params.max_table)
        })
        .collect();
    Ok(Instance::numerical(params.capacity, jobs))
}

/// The two-configuration family on which highest-throughput-first needs `n`
/// machines while two suffice.
///
/// Block types are `b1..bn` plus `b{n+1}`; the menu is `[b{n+1}]` and
/// `[b1, ..., bn]`. Job `j_l` has demand `2^l`, value `2^(l-1)` on `b_l` and
/// `2^l` on `b{n+1}`.
pub fn gen_tight_greedy_family(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(CmsError::InvalidInput(format!(
            "tight family needs n >= 2, got {n}"
        )));
    }
    if n > 62 {
        return Err(CmsError::InvalidInput(format!(
            "tight family demands overflow for n = {n}"
        )));
    }
    let k = n + 1;
    let blocks: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
    let configurations = vec![
        Configuration::from_blocks([n]),
        Configuration::from_blocks(0..n),
    ];
    let jobs = (1..=n)
        .map(|l| {
            let mut table = vec![0; k];
            table[l - 1] = 1 << (l - 1);
            table[n] = 1 << l;
            Job::new(format!("j{l}"), 1 << l, table)
        })
        .collect();
    Ok(Instance::combinatorial(blocks, configurations, jobs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    #[test]
    fn same_seed_same_instance() {
        let p = GenParams {
            seed: 1,
            ..GenParams::default()
        };
        assert_eq!(gen_random(&p).unwrap(), gen_random(&p).unwrap());
        assert_eq!(
            gen_numerical_random(&p).unwrap(),
            gen_numerical_random(&p).unwrap()
        );
    }

    #[test]
    fn empty_instance() {
        let p = GenParams {
            n: 0,
            ..GenParams::default()
        };
        let inst = gen_random(&p).unwrap();
        assert!(inst.jobs.is_empty());
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn unit_demands() {
        for seed in 0..20 {
            let p = GenParams {
                max_demand: 1,
                n: 6,
                seed,
                ..GenParams::default()
            };
            let inst = gen_random(&p).unwrap();
            assert!(inst.jobs.iter().all(|j| j.demand <= 1));
        }
    }

    #[test]
    fn generated_instances_are_valid() {
        for seed in 0..100 {
            let p = GenParams {
                seed,
                ..GenParams::default()
            };
            let inst = gen_random(&p).unwrap();
            assert!(validate_instance(&inst).is_empty(), "seed {seed}");
            for job in inst.jobs.iter().filter(|j| j.demand > 0) {
                assert!(inst.configurations.iter().any(|c| job.config_value(c) > 0));
            }
            let num = gen_numerical_random(&p).unwrap();
            assert!(validate_instance(&num).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn tight_family_shape() {
        let inst = gen_tight_greedy_family(3).unwrap();
        assert_eq!(inst.n_blocks(), 4);
        let demands: Vec<u64> = inst.jobs.iter().map(|j| j.demand).collect();
        assert_eq!(demands, vec![2, 4, 8]);
        assert_eq!(inst.jobs[2].table, vec![0, 0, 4, 8]);

        let inst = gen_tight_greedy_family(2).unwrap();
        assert_eq!(inst.n_blocks(), 3);
        let demands: Vec<u64> = inst.jobs.iter().map(|j| j.demand).collect();
        assert_eq!(demands, vec![2, 4]);

        assert!(gen_tight_greedy_family(1).is_err());
    }

    #[test]
    fn rejects_degenerate_params() {
        let p = GenParams {
            blocks: 0,
            ..GenParams::default()
        };
        assert!(gen_random(&p).is_err());
    }
}
