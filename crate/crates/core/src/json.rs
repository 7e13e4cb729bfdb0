//! JSON instance and schedule files.
//!
//! Instance:
//! `{"kind":"combinatorial","blocks":["b1"],"configurations":[{"b1":2}],"jobs":[{"id":"j1","demand":5,"table":{"b1":2}}]}`;
//! numerical instances replace `blocks`/`configurations` with `"capacity":k`
//! and key their tables by block size.
//!
//! Schedule:
//! `{"machines":[{"multiplicity":2,"configuration":0,"assignment":[["b1","j1"],["b1",null]]}]}`,
//! where `configuration` indexes the instance menu, or is an inline list of
//! block sizes for numerical instances.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CmsError, Result};
use crate::model::{Configuration, Instance, InstanceKind, Job, MachineUse, Schedule, Slot};

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Combinatorial,
    Numerical,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    kind: KindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    configurations: Option<Vec<BTreeMap<String, u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacity: Option<u64>,
    jobs: Vec<JobDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JobDoc {
    id: String,
    demand: u64,
    #[serde(default)]
    table: BTreeMap<String, u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ConfigRef {
    Index(usize),
    Sizes(Vec<u64>),
}

#[derive(Debug, Serialize, Deserialize)]
struct MachineDoc {
    multiplicity: u64,
    configuration: ConfigRef,
    assignment: Vec<(String, Option<String>)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScheduleDoc {
    machines: Vec<MachineDoc>,
}

/// A parsed instance together with the normalization warnings raised while
/// loading it.
#[derive(Debug)]
pub struct Loaded {
    pub instance: Instance,
    pub warnings: Vec<String>,
}

pub fn parse_instance(text: &str) -> Result<Loaded> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let mut problems = Vec::new();

    let mut inst = match doc.kind {
        KindDoc::Combinatorial => {
            let blocks = doc.blocks.unwrap_or_default();
            if doc.capacity.is_some() {
                problems.push("combinatorial instance must not set capacity".to_string());
            }
            let mut configurations = Vec::new();
            for (s, map) in doc.configurations.unwrap_or_default().iter().enumerate() {
                let mut counts = vec![0u64; blocks.len()];
                for (name, &c) in map {
                    match blocks.iter().position(|b| b == name) {
                        Some(b) => counts[b] += c,
                        None => problems.push(format!("configuration {s}: unknown block type {name}")),
                    }
                }
                configurations.push(Configuration::new(counts));
            }
            let jobs = convert_jobs(&doc.jobs, &blocks, &mut problems);
            Instance::combinatorial(blocks, configurations, jobs)
        }
        KindDoc::Numerical => {
            let k = match doc.capacity {
                Some(k) if k > 0 => k,
                _ => {
                    return Err(CmsError::InvalidInput(
                        "numerical instance needs a positive capacity".into(),
                    ))
                }
            };
            if doc.blocks.is_some() || doc.configurations.is_some() {
                problems.push("numerical instance must not list blocks or configurations".into());
            }
            let blocks: Vec<String> = (1..=k).map(|s| s.to_string()).collect();
            let jobs = convert_jobs(&doc.jobs, &blocks, &mut problems);
            Instance::numerical(k, jobs)
        }
    };

    let warnings = inst.normalize();
    for w in &warnings {
        log::warn!("{w}");
    }
    problems.extend(crate::model::validate_instance(&inst).iter().map(|v| v.to_string()));
    if !problems.is_empty() {
        return Err(CmsError::InvalidInput(problems.join("; ")));
    }
    Ok(Loaded {
        instance: inst,
        warnings,
    })
}

fn convert_jobs(docs: &[JobDoc], blocks: &[String], problems: &mut Vec<String>) -> Vec<Job> {
    docs.iter()
        .map(|jd| {
            let mut table = vec![0u64; blocks.len()];
            for (name, &v) in &jd.table {
                match blocks.iter().position(|b| b == name) {
                    Some(b) => table[b] = v,
                    None => problems.push(format!("job {}: unknown block type {name}", jd.id)),
                }
            }
            Job::new(jd.id.clone(), jd.demand, table)
        })
        .collect()
}

pub fn instance_to_json(inst: &Instance) -> Result<String> {
    let jobs = inst
        .jobs
        .iter()
        .map(|j| JobDoc {
            id: j.id.clone(),
            demand: j.demand,
            table: j
                .table
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0)
                .map(|(b, &v)| (inst.blocks[b].clone(), v))
                .collect(),
        })
        .collect();
    let doc = match inst.kind {
        InstanceKind::Combinatorial => InstanceDoc {
            kind: KindDoc::Combinatorial,
            blocks: Some(inst.blocks.clone()),
            configurations: Some(
                inst.configurations
                    .iter()
                    .map(|c| {
                        c.counts()
                            .iter()
                            .enumerate()
                            .filter(|(_, &n)| n > 0)
                            .map(|(b, &n)| (inst.blocks[b].clone(), n))
                            .collect()
                    })
                    .collect(),
            ),
            capacity: None,
            jobs,
        },
        InstanceKind::Numerical => InstanceDoc {
            kind: KindDoc::Numerical,
            blocks: None,
            configurations: None,
            capacity: inst.capacity,
            jobs,
        },
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn parse_schedule(inst: &Instance, text: &str) -> Result<Schedule> {
    let doc: ScheduleDoc = serde_json::from_str(text)?;
    let mut machines = Vec::with_capacity(doc.machines.len());
    for (m, md) in doc.machines.into_iter().enumerate() {
        let configuration = match (&md.configuration, inst.kind) {
            (ConfigRef::Index(i), InstanceKind::Combinatorial) => inst
                .configurations
                .get(*i)
                .cloned()
                .ok_or_else(|| {
                    CmsError::InvalidInput(format!("machine {m}: configuration index {i} out of range"))
                })?,
            (ConfigRef::Sizes(sizes), InstanceKind::Numerical) => {
                if sizes.contains(&0) {
                    return Err(CmsError::InvalidInput(format!("machine {m}: zero block size")));
                }
                Configuration::from_blocks(sizes.iter().map(|&s| (s - 1) as usize))
            }
            _ => {
                return Err(CmsError::InvalidInput(format!(
                    "machine {m}: configuration form does not match instance kind"
                )))
            }
        };
        let mut assignment = Vec::with_capacity(md.assignment.len());
        for (block, job) in &md.assignment {
            let b = inst.block_index(block).ok_or_else(|| {
                CmsError::InvalidInput(format!("machine {m}: unknown block type {block}"))
            })?;
            let j = match job {
                Some(id) => Some(inst.job_index(id).ok_or_else(|| {
                    CmsError::InvalidInput(format!("machine {m}: unknown job {id}"))
                })?),
                None => None,
            };
            assignment.push(Slot { block: b, job: j });
        }
        machines.push(MachineUse {
            multiplicity: md.multiplicity,
            configuration,
            assignment,
        });
    }
    Ok(Schedule { machines })
}

pub fn schedule_to_json(inst: &Instance, sched: &Schedule) -> Result<String> {
    let machines = sched
        .machines
        .iter()
        .enumerate()
        .map(|(m, mu)| {
            let configuration = match inst.kind {
                InstanceKind::Combinatorial => {
                    ConfigRef::Index(inst.configuration_index(&mu.configuration).ok_or_else(|| {
                        CmsError::InvalidInput(format!("machine {m}: configuration not in menu"))
                    })?)
                }
                InstanceKind::Numerical => {
                    ConfigRef::Sizes(mu.configuration.slots().map(|b| b as u64 + 1).collect())
                }
            };
            let assignment = mu
                .assignment
                .iter()
                .map(|s| {
                    (
                        inst.blocks[s.block].clone(),
                        s.job.map(|j| inst.jobs[j].id.clone()),
                    )
                })
                .collect();
            Ok(MachineDoc {
                multiplicity: mu.multiplicity,
                configuration,
                assignment,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(serde_json::to_string_pretty(&ScheduleDoc { machines })?)
}
