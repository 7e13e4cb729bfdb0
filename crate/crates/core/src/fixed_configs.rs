//! Constant-factor scheduling when the configuration menu is small.
//!
//! For every non-empty subset `C*` of the menu, machine counts are guessed
//! from a geometric grid in ascending total. The first guess whose
//! feasibility LP has a solution yields an extreme point whose support graph
//! is a pseudo-forest; one edge per cycle is dropped, every tree is rooted at
//! a job, and the assignment is rounded (`⌊2x⌋` towards a job's parent
//! block, `⌈2x⌉` towards its children) against `2m + 1` machines per chosen
//! configuration. The cheapest candidate wins.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{CmsError, Result};
use crate::lp::{self, from_u64, FeasibilityLp, Rational};
use crate::model::{Configuration, Instance, Schedule};

pub const DEFAULT_MAX_CONFIGS: usize = 6;

/// `{⌊(1+ε)^i⌋ : (1+ε)^i <= total}`, deduplicated and ascending.
pub fn grid_l(total: u64, eps: &Rational) -> Result<Vec<u64>> {
    if !eps.is_positive() {
        return Err(CmsError::InvalidInput("epsilon must be positive".into()));
    }
    if total == 0 {
        return Err(CmsError::InvalidInput("total demand must be positive".into()));
    }
    let base = Rational::one() + eps;
    let limit = from_u64(total);
    let mut power = Rational::one();
    let mut grid: Vec<u64> = Vec::new();
    while power <= limit {
        let v = floor_u64(&power);
        if grid.last() != Some(&v) {
            grid.push(v);
        }
        power *= &base;
    }
    Ok(grid)
}

/// The grid extended by the first `⌊(1+ε)^i⌋` reaching `total`, so that any
/// machine count up to `total` has a grid value at least as large.
fn covering_grid(total: u64, eps: &Rational) -> Result<Vec<u64>> {
    let mut grid = grid_l(total, eps)?;
    if grid.last().is_some_and(|&g| g < total) {
        let base = Rational::one() + eps;
        let mut power = Rational::one();
        while floor_u64(&power) < total {
            power *= &base;
        }
        grid.push(floor_u64(&power));
    }
    Ok(grid)
}

fn floor_u64(r: &Rational) -> u64 {
    r.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

fn ceil_u64(r: &Rational) -> u64 {
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub job: usize,
    pub block: usize,
    pub x: Rational,
}

/// Bipartite support graph of an LP solution: jobs on one side, the block
/// types of `B*` on the other, an edge wherever `x_{b,j} > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentGraph {
    pub n_jobs: usize,
    pub bstar: Vec<usize>,
    pub edges: Vec<Edge>,
}

impl AssignmentGraph {
    pub fn n_nodes(&self) -> usize {
        self.n_jobs + self.bstar.len()
    }

    fn block_node(&self, block: usize) -> usize {
        self.n_jobs
            + self
                .bstar
                .iter()
                .position(|&b| b == block)
                .expect("edge block outside B*")
    }

    fn endpoints(&self, e: &Edge) -> (usize, usize) {
        (e.job, self.block_node(e.block))
    }

    /// Component id per node.
    fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n_nodes()).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        for e in &self.edges {
            let (a, b) = self.endpoints(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        (0..self.n_nodes()).map(|v| find(&mut parent, v)).collect()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_nodes()];
        for (k, e) in self.edges.iter().enumerate() {
            let (a, b) = self.endpoints(e);
            adj[a].push(k);
            adj[b].push(k);
        }
        adj
    }
}

/// Support graph of `x` over the variables of a feasibility LP.
pub fn build_assignment_graph(lpf: &FeasibilityLp, n_jobs: usize, x: &[Rational]) -> AssignmentGraph {
    let edges = lpf
        .pairs
        .iter()
        .zip(x)
        .filter(|(_, v)| v.is_positive())
        .map(|(&(block, job), v)| Edge {
            job,
            block,
            x: v.clone(),
        })
        .collect();
    AssignmentGraph {
        n_jobs,
        bstar: lpf.bstar.clone(),
        edges,
    }
}

/// True iff every connected component has no more edges than nodes.
pub fn check_pseudo_forest(g: &AssignmentGraph) -> bool {
    let comp = g.components();
    let mut nodes = vec![0usize; g.n_nodes()];
    let mut edges = vec![0usize; g.n_nodes()];
    for &c in &comp {
        nodes[c] += 1;
    }
    for e in &g.edges {
        edges[comp[e.job]] += 1;
    }
    edges.iter().zip(&nodes).all(|(e, n)| e <= n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedEdge {
    pub job: usize,
    pub block: usize,
    pub x: Rational,
    /// The job is the block's parent, so the block is one of the job's children.
    pub towards_child: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedForest {
    pub edges: Vec<RootedEdge>,
    /// Root job of every component that has edges.
    pub roots: Vec<usize>,
    /// Cycle edges dropped as `(job, block)`.
    pub removed: Vec<(usize, usize)>,
}

/// Drops one edge from every cycle and roots every tree at a job.
///
/// On a cycle, the lowest job `j` is the root; of its two cycle blocks
/// `b1 < b2`, the edge to `b2` is dropped when `x_{b1,j} f_j(b1) >=
/// x_{b2,j} f_j(b2)` and the edge to `b1` otherwise. Acyclic components are
/// rooted at their lowest job.
pub fn break_cycles_and_root(g: &AssignmentGraph, inst: &Instance) -> Result<RootedForest> {
    if !check_pseudo_forest(g) {
        return Err(CmsError::NotPseudoForest);
    }
    let comp = g.components();
    let adj = g.adjacency();
    let n_nodes = g.n_nodes();
    let mut alive = vec![true; g.edges.len()];
    let mut removed = Vec::new();
    let mut roots = Vec::new();

    let mut node_count = vec![0usize; n_nodes];
    let mut edge_count = vec![0usize; n_nodes];
    for &c in &comp {
        node_count[c] += 1;
    }
    for e in &g.edges {
        edge_count[comp[e.job]] += 1;
    }

    // Leaf stripping leaves exactly the cycle nodes of unicyclic components.
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut on_cycle = vec![true; n_nodes];
    let mut queue: VecDeque<usize> = (0..n_nodes).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !on_cycle[v] {
            continue;
        }
        on_cycle[v] = false;
        for &k in &adj[v] {
            let (a, b) = g.endpoints(&g.edges[k]);
            let u = if a == v { b } else { a };
            if on_cycle[u] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    queue.push_back(u);
                }
            }
        }
    }

    for c in 0..n_nodes {
        if comp[c] != c || edge_count[c] == 0 {
            continue;
        }
        let members = (0..g.n_jobs).filter(|&j| comp[j] == c);
        let root = if edge_count[c] == node_count[c] {
            let j = members
                .clone()
                .find(|&j| on_cycle[j])
                .expect("unicyclic component has a job on its cycle");
            let mut cyc: Vec<usize> = adj[j]
                .iter()
                .copied()
                .filter(|&k| on_cycle[g.block_node(g.edges[k].block)])
                .collect();
            cyc.sort_by_key(|&k| g.edges[k].block);
            let (k1, k2) = (cyc[0], cyc[1]);
            let weight = |k: usize| {
                let e = &g.edges[k];
                &e.x * from_u64(inst.jobs[e.job].value(e.block))
            };
            let drop = if weight(k1) >= weight(k2) { k2 } else { k1 };
            alive[drop] = false;
            removed.push((j, g.edges[drop].block));
            j
        } else {
            members.clone().next().expect("component with edges has a job")
        };
        roots.push(root);
    }

    // Orient every surviving edge away from its component's root.
    let mut seen = vec![false; n_nodes];
    let mut edges = Vec::new();
    for &r in &roots {
        let mut queue = VecDeque::from([r]);
        seen[r] = true;
        while let Some(v) = queue.pop_front() {
            for &k in &adj[v] {
                if !alive[k] {
                    continue;
                }
                let e = &g.edges[k];
                let (a, b) = g.endpoints(e);
                let u = if a == v { b } else { a };
                if seen[u] {
                    continue;
                }
                seen[u] = true;
                edges.push(RootedEdge {
                    job: e.job,
                    block: e.block,
                    x: e.x.clone(),
                    towards_child: v == e.job,
                });
                queue.push_back(u);
            }
        }
    }
    edges.sort_by_key(|e| (e.job, e.block));
    Ok(RootedForest {
        edges,
        roots,
        removed,
    })
}

/// Integral block counts `[block][job]`: `⌈2x⌉` on edges towards a job's
/// children, `⌊2x⌋` on the edge towards its parent, zero elsewhere.
pub fn round_tree(forest: &RootedForest, n_blocks: usize, n_jobs: usize) -> Vec<Vec<u64>> {
    let two = Rational::from_integer(BigInt::from(2));
    let mut out = vec![vec![0u64; n_jobs]; n_blocks];
    for e in &forest.edges {
        let doubled = &e.x * &two;
        out[e.block][e.job] = if e.towards_child {
            ceil_u64(&doubled)
        } else {
            floor_u64(&doubled)
        };
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedParams {
    pub eps: Rational,
    /// Refuse menus with more configurations than this.
    pub max_configs: usize,
}

impl FixedParams {
    pub fn new(eps: Rational) -> Self {
        FixedParams {
            eps,
            max_configs: DEFAULT_MAX_CONFIGS,
        }
    }
}

/// Everything recorded about one `(C*, m)` candidate that reached rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub cstar: Vec<usize>,
    pub m: Vec<u64>,
    pub pseudo_forest: bool,
    pub extreme_point: bool,
    pub nonzero: usize,
    /// `n + |B*|`.
    pub sparsity_bound: usize,
    /// Rounded counts `[block][job]`.
    pub x: Vec<Vec<u64>>,
    /// Machines per configuration of the whole menu.
    pub y: Vec<u64>,
    pub cost: u64,
    /// The rounded `(x, y)` satisfies every supply and demand row.
    pub integral_feasible: bool,
}

#[derive(Clone, Debug)]
pub struct FixedRun {
    pub grid: Vec<u64>,
    pub candidates: Vec<Candidate>,
    pub best: Option<usize>,
    pub schedule: Schedule,
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    all.sort();
    all
}

/// All `len`-tuples over `grid`, by ascending sum then lexicographically.
fn tuples(grid: &[u64], len: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                grid.iter().map(move |&g| {
                    let mut t = t.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out.sort_by(|a, b| {
        let (sa, sb): (u64, u64) = (a.iter().sum(), b.iter().sum());
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    out
}

fn integral_feasible(inst: &Instance, x: &[Vec<u64>], y: &[u64]) -> bool {
    let supply_ok = (0..inst.n_blocks()).all(|i| {
        let used: u64 = x[i].iter().sum();
        let supply: u64 = inst
            .configurations
            .iter()
            .zip(y)
            .map(|(c, &m)| c.count(i) * m)
            .sum();
        used <= supply
    });
    let demand_ok = inst.jobs.iter().enumerate().all(|(j, job)| {
        let got: u64 = (0..inst.n_blocks()).map(|i| job.value(i) * x[i][j]).sum();
        got >= job.demand
    });
    supply_ok && demand_ok
}

fn round_candidate(inst: &Instance, cstar: &[usize], m: &[u64], lpf: &FeasibilityLp, values: &[Rational]) -> Result<Candidate> {
    let graph = build_assignment_graph(lpf, inst.n_jobs(), values);
    let pseudo_forest = check_pseudo_forest(&graph);
    let forest = break_cycles_and_root(&graph, inst)?;
    let x = round_tree(&forest, inst.n_blocks(), inst.n_jobs());
    let mut y = vec![0u64; inst.configurations.len()];
    for (&s, &ms) in cstar.iter().zip(m) {
        y[s] = 2 * ms + 1;
    }
    let cost = y.iter().sum();
    Ok(Candidate {
        cstar: cstar.to_vec(),
        m: m.to_vec(),
        pseudo_forest,
        extreme_point: lpf.lp.is_extreme_point(values),
        nonzero: graph.edges.len(),
        sparsity_bound: inst.n_jobs() + lpf.bstar.len(),
        integral_feasible: integral_feasible(inst, &x, &y),
        x,
        y,
        cost,
    })
}

/// Runs the search and keeps every candidate for inspection.
pub fn solve_fixed_configs_traced(inst: &Instance, params: &FixedParams) -> Result<FixedRun> {
    inst.require_combinatorial("fixed-configuration algorithm")?;
    if !params.eps.is_positive() {
        return Err(CmsError::InvalidInput("epsilon must be positive".into()));
    }
    let n_configs = inst.configurations.len();
    if n_configs > params.max_configs {
        return Err(CmsError::GuardExceeded(format!(
            "{n_configs} configurations exceed the limit of {}",
            params.max_configs
        )));
    }
    let total = inst.total_demand();
    if total == 0 {
        return Ok(FixedRun {
            grid: Vec::new(),
            candidates: Vec::new(),
            best: None,
            schedule: Schedule::new(),
        });
    }
    let grid = covering_grid(total, &params.eps)?;
    let top = *grid.last().expect("grid is never empty");

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut best: Option<usize> = None;
    for cstar in subsets(n_configs) {
        // Feasibility only grows with m, so the largest guess decides
        // whether this subset can work at all.
        let ceiling = vec![top; cstar.len()];
        let probe = lp::build_feasibility_lp(inst, &cstar, &ceiling);
        if !lp::solve_feasibility(&probe.lp).is_optimal() {
            continue;
        }
        for m in tuples(&grid, cstar.len()) {
            let lpf = lp::build_feasibility_lp(inst, &cstar, &m);
            let sol = lp::solve_feasibility(&lpf.lp);
            if !sol.is_optimal() {
                continue;
            }
            let cand = round_candidate(inst, &cstar, &m, &lpf, &sol.values)?;
            log::debug!("C*={:?} m={:?} cost={}", cand.cstar, cand.m, cand.cost);
            if best.is_none_or(|b| cand.cost < candidates[b].cost) {
                best = Some(candidates.len());
            }
            candidates.push(cand);
            break;
        }
    }
    let Some(b) = best else {
        return Err(CmsError::Infeasible(
            "no configuration subset can serve every job".into(),
        ));
    };
    let machines: Vec<(Configuration, u64)> = inst
        .configurations
        .iter()
        .cloned()
        .zip(candidates[b].y.iter().copied())
        .collect();
    let schedule = Schedule::from_block_counts(inst, &candidates[b].x, &machines)?;
    Ok(FixedRun {
        grid,
        candidates,
        best,
        schedule,
    })
}

pub fn solve_fixed_configs_with(inst: &Instance, params: &FixedParams) -> Result<Schedule> {
    Ok(solve_fixed_configs_traced(inst, params)?.schedule)
}

pub fn solve_fixed_configs(inst: &Instance, eps: &Rational) -> Result<Schedule> {
    solve_fixed_configs_with(inst, &FixedParams::new(eps.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{ratio, rational};
    use crate::model::{validate_schedule, Job};

    fn t1() -> Instance {
        Instance::combinatorial(
            vec!["b1".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 5, vec![5])],
        )
    }

    #[test]
    fn grid_values() {
        assert_eq!(grid_l(8, &rational(1)).unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(grid_l(1, &ratio(1, 2)).unwrap(), vec![1]);
        assert_eq!(grid_l(1, &rational(3)).unwrap(), vec![1]);
        // 1.5^i: 1, 1.5, 2.25, 3.375, 5.06, 7.59 (11.39 > 10)
        assert_eq!(grid_l(10, &ratio(1, 2)).unwrap(), vec![1, 2, 3, 5, 7]);
        assert_eq!(covering_grid(10, &ratio(1, 2)).unwrap(), vec![1, 2, 3, 5, 7, 11]);
        assert!(grid_l(5, &rational(0)).is_err());
    }

    fn graph(n_jobs: usize, bstar: Vec<usize>, edges: &[(usize, usize, Rational)]) -> AssignmentGraph {
        AssignmentGraph {
            n_jobs,
            bstar,
            edges: edges
                .iter()
                .map(|(j, b, x)| Edge {
                    job: *j,
                    block: *b,
                    x: x.clone(),
                })
                .collect(),
        }
    }

    #[test]
    fn pseudo_forest_shapes() {
        let tree = graph(2, vec![0], &[(0, 0, rational(1)), (1, 0, rational(1))]);
        assert!(check_pseudo_forest(&tree));
        let cycle = graph(
            2,
            vec![0, 1],
            &[(0, 0, rational(1)), (1, 0, rational(1)), (0, 1, rational(1)), (1, 1, rational(1))],
        );
        assert!(check_pseudo_forest(&cycle));
        // Two jobs and three blocks, all joined: 6 edges on 5 nodes.
        let theta = graph(
            2,
            vec![0, 1, 2],
            &[
                (0, 0, rational(1)),
                (1, 0, rational(1)),
                (0, 1, rational(1)),
                (1, 1, rational(1)),
                (0, 2, rational(1)),
                (1, 2, rational(1)),
            ],
        );
        assert!(!check_pseudo_forest(&theta));
        assert!(matches!(
            break_cycles_and_root(&theta, &two_by_three()),
            Err(CmsError::NotPseudoForest)
        ));
    }

    fn two_by_three() -> Instance {
        Instance::combinatorial(
            vec!["b1".into(), "b2".into(), "b3".into()],
            vec![Configuration::new(vec![1, 1, 1])],
            vec![Job::new("j1", 4, vec![3, 2, 1]), Job::new("j2", 4, vec![1, 1, 1])],
        )
    }

    #[test]
    fn cycle_breaking_rule() {
        let inst = two_by_three();
        // x·f: (j1,b1) = 3, (j1,b2) = 2 -> drop (j1,b2).
        let g = graph(
            2,
            vec![0, 1],
            &[(0, 0, rational(1)), (1, 0, rational(1)), (0, 1, rational(1)), (1, 1, rational(1))],
        );
        let f = break_cycles_and_root(&g, &inst).unwrap();
        assert_eq!(f.removed, vec![(0, 1)]);
        assert_eq!(f.roots, vec![0]);
        assert_eq!(f.edges.len(), 3);

        // Products tie at 2: the edge to the higher block goes.
        let g = graph(
            2,
            vec![0, 1],
            &[(0, 0, ratio(2, 3)), (1, 0, rational(1)), (0, 1, rational(1)), (1, 1, rational(1))],
        );
        let f = break_cycles_and_root(&g, &inst).unwrap();
        assert_eq!(f.removed, vec![(0, 1)]);

        // (j1,b1) = 3/2 < (j1,b2) = 2 -> drop (j1,b1).
        let g = graph(
            2,
            vec![0, 1],
            &[(0, 0, ratio(1, 2)), (1, 0, rational(1)), (0, 1, rational(1)), (1, 1, rational(1))],
        );
        let f = break_cycles_and_root(&g, &inst).unwrap();
        assert_eq!(f.removed, vec![(0, 0)]);
    }

    #[test]
    fn trees_are_rooted_at_lowest_job() {
        let inst = two_by_three();
        let g = graph(2, vec![0], &[(1, 0, rational(1)), (0, 0, rational(1))]);
        let f = break_cycles_and_root(&g, &inst).unwrap();
        assert!(f.removed.is_empty());
        assert_eq!(f.roots, vec![0]);
        let towards: Vec<bool> = f.edges.iter().map(|e| e.towards_child).collect();
        assert_eq!(towards, vec![true, false]);
    }

    #[test]
    fn rounding_directions() {
        let forest = RootedForest {
            edges: vec![
                RootedEdge { job: 0, block: 0, x: ratio(3, 5), towards_child: true },
                RootedEdge { job: 0, block: 1, x: ratio(7, 10), towards_child: true },
                RootedEdge { job: 1, block: 0, x: ratio(3, 4), towards_child: false },
                RootedEdge { job: 2, block: 1, x: ratio(2, 5), towards_child: false },
            ],
            roots: vec![0],
            removed: vec![],
        };
        let x = round_tree(&forest, 2, 3);
        assert_eq!(x[0][0], 2);
        assert_eq!(x[1][0], 2);
        assert_eq!(x[0][1], 1);
        assert_eq!(x[1][2], 0);
    }

    #[test]
    fn graph_from_lp_solutions() {
        let inst = t1();
        let lpf = lp::build_feasibility_lp(&inst, &[0], &[1]);
        let g = build_assignment_graph(&lpf, 1, &[rational(0)]);
        assert!(g.edges.is_empty());
        let g = build_assignment_graph(&lpf, 1, &[rational(1)]);
        assert_eq!(g.edges.len(), 1);

        // One block shared by two jobs: each needs more than half of it.
        let shared = Instance::combinatorial(
            vec!["b".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j1", 3, vec![4]), Job::new("j2", 3, vec![4])],
        );
        let lpf = lp::build_feasibility_lp(&shared, &[0], &[2]);
        let sol = lp::solve_feasibility(&lpf.lp);
        assert!(sol.is_optimal());
        let g = build_assignment_graph(&lpf, 2, &sol.values);
        assert!(check_pseudo_forest(&g));
        assert_eq!(g.edges.len(), 2);
    }

    #[test]
    fn single_job_single_block() {
        let inst = t1();
        let run = solve_fixed_configs_traced(&inst, &FixedParams::new(ratio(1, 2))).unwrap();
        assert_eq!(run.schedule.cost(), 3);
        assert!(validate_schedule(&inst, &run.schedule).is_empty());
        let best = &run.candidates[run.best.unwrap()];
        assert_eq!(best.m, vec![1]);
        assert!(best.pseudo_forest && best.integral_feasible && best.extreme_point);
    }

    #[test]
    fn two_configurations_both_needed() {
        // OPT = 2: one machine of each configuration.
        let inst = Instance::combinatorial(
            vec!["a".into(), "b".into()],
            vec![Configuration::new(vec![2]), Configuration::new(vec![0, 2])],
            vec![Job::new("ja", 4, vec![2, 0]), Job::new("jb", 4, vec![0, 2])],
        );
        let eps = ratio(1, 2);
        let s = solve_fixed_configs(&inst, &eps).unwrap();
        assert!(validate_schedule(&inst, &s).is_empty());
        // 2(1+ε)·2 + 2 = 8
        assert!(s.cost() <= 8, "cost {}", s.cost());
    }

    #[test]
    fn dead_job_and_guards() {
        let dead = Instance::combinatorial(
            vec!["b".into()],
            vec![Configuration::new(vec![1])],
            vec![Job::new("j", 3, vec![0])],
        );
        assert!(matches!(
            solve_fixed_configs(&dead, &rational(1)),
            Err(CmsError::Infeasible(_))
        ));
        let num = Instance::numerical(3, vec![Job::new("j", 1, vec![1, 1, 1])]);
        assert!(matches!(
            solve_fixed_configs(&num, &rational(1)),
            Err(CmsError::KindMismatch(_))
        ));
        let params = FixedParams {
            eps: rational(1),
            max_configs: 0,
        };
        assert!(matches!(
            solve_fixed_configs_with(&t1(), &params),
            Err(CmsError::GuardExceeded(_))
        ));
    }
}
