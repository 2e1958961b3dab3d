//! The dismantling loop and greedy reinsertion.
//!
//! [`dismantle`] repeatedly takes the largest remaining component, bisects
//! it spectrally and removes a weighted vertex cover of the cut, until no
//! component exceeds the target size. [`reinsert`] then greedily puts back
//! removed nodes while every component stays within the target.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cost::{CostMode, CostVector};
use crate::cover::{cut_edges, weighted_vertex_cover_by};
use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::graph::{components, gcc_size, Graph, NodeMask};
use crate::rng::{bisection_seed, PRNG_NAME};
use crate::spectral::{
    approx_fiedler, fine_tune_partition, iteration_budget, sign_partition, WeightedLaplacian,
};

/// Largest component size allowed once dismantling stops.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DismantlingTarget {
    max_gcc: usize,
    fraction: Option<f64>,
}

impl DismantlingTarget {
    pub const DEFAULT_FRACTION: f64 = 0.01;

    /// `C = max(1, ceil(fraction * n))`.
    pub fn from_fraction(n: usize, fraction: f64) -> Result<Self> {
        if !(fraction.is_finite() && fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "target fraction {fraction} outside (0, 1]"
            )));
        }
        let max_gcc = ((fraction * n as f64).ceil() as usize).max(1);
        Ok(Self {
            max_gcc,
            fraction: Some(fraction),
        })
    }

    pub fn absolute(max_gcc: usize) -> Result<Self> {
        if max_gcc == 0 {
            return Err(Error::InvalidConfig(
                "target size must be at least 1".into(),
            ));
        }
        Ok(Self {
            max_gcc,
            fraction: None,
        })
    }

    pub fn max_gcc(&self) -> usize {
        self.max_gcc
    }

    pub fn fraction(&self) -> Option<f64> {
        self.fraction
    }
}

/// Per-run knobs for [`dismantle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DismantleParams {
    pub seed: u64,
    /// Iteration-budget multiplier `D`.
    pub multiplier: usize,
    pub fine_tuning: bool,
}

impl Default for DismantleParams {
    fn default() -> Self {
        Self {
            seed: 0,
            multiplier: 1,
            fine_tuning: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemovalStep {
    pub node: usize,
    pub cost: f64,
    pub gcc_size_after: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub cumulative_cost: f64,
    pub gcc_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionMetadata {
    pub seed: u64,
    pub multiplier: usize,
    pub fine_tuning: bool,
    pub reinserted: bool,
    pub prng: String,
    pub target_size: usize,
    pub bisections: usize,
    /// Power-iteration steps summed over all bisections.
    pub power_iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DismantlingSolution {
    pub removal_order: Vec<RemovalStep>,
    /// Removed nodes, ascending.
    pub removed: Vec<usize>,
    pub total_cost: f64,
    /// Starts at `(0, initial gcc)`, then one point per removed node.
    pub trajectory: Vec<TrajectoryPoint>,
    pub metadata: SolutionMetadata,
}

impl DismantlingSolution {
    pub fn final_gcc(&self) -> usize {
        self.trajectory.last().map_or(0, |p| p.gcc_size)
    }

    pub fn removed_count(&self) -> usize {
        self.removed.len()
    }

    /// Mask of the network left after removing every node in the solution.
    pub fn remaining_mask(&self, n: usize) -> NodeMask {
        let mut mask = NodeMask::full(n);
        for &v in &self.removed {
            mask.deactivate(v);
        }
        mask
    }
}

/// Wall-clock spent in each phase of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    /// Operator assembly, power iteration, partition and fine-tuning.
    pub spectral: Duration,
    /// Cut extraction and vertex cover.
    pub cover: Duration,
    pub reinsert: Duration,
    /// Component bookkeeping and trajectory recording.
    pub bookkeeping: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.spectral + self.cover + self.reinsert + self.bookkeeping
    }
}

pub fn dismantle(
    graph: &Graph,
    costs: &CostVector,
    target: &DismantlingTarget,
    params: &DismantleParams,
) -> Result<DismantlingSolution> {
    dismantle_timed(graph, costs, target, params, &mut PhaseTimings::default())
}

pub fn dismantle_timed(
    graph: &Graph,
    costs: &CostVector,
    target: &DismantlingTarget,
    params: &DismantleParams,
    timings: &mut PhaseTimings,
) -> Result<DismantlingSolution> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::InvalidConfig("graph has no nodes".into()));
    }
    if costs.len() != n {
        return Err(Error::InvalidCosts(format!(
            "{} costs for {} nodes",
            costs.len(),
            n
        )));
    }
    if params.multiplier == 0 {
        return Err(Error::InvalidConfig(
            "iteration multiplier must be at least 1".into(),
        ));
    }
    let limit = target.max_gcc();
    let mut mask = NodeMask::full(n);
    let mut scratch = Bfs::new(n);
    let mut removal_order = Vec::new();
    let mut trajectory = Vec::new();
    let mut cumulative = 0.0;
    let mut bisections = 0usize;
    let mut power_iterations = 0usize;

    loop {
        let clock = Instant::now();
        let comps = components(graph, &mask);
        if trajectory.is_empty() {
            trajectory.push(TrajectoryPoint {
                cumulative_cost: 0.0,
                gcc_size: comps.gcc_size(),
            });
        }
        let Some(k) = comps.gcc_id().filter(|_| comps.gcc_size() > limit) else {
            timings.bookkeeping += clock.elapsed();
            break;
        };
        let component = comps.members(k);
        let others_max = comps
            .sizes()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &s)| s)
            .max()
            .unwrap_or(0);
        timings.bookkeeping += clock.elapsed();

        let clock = Instant::now();
        let op = WeightedLaplacian::build(graph, &mask, costs, &component)?;
        let iterations = iteration_budget(component.len(), params.multiplier);
        let seed = bisection_seed(params.seed, bisections as u64);
        let vector = approx_fiedler(&op, seed, iterations)?;
        power_iterations += vector.iterations();
        let mut partition = sign_partition(&vector);
        if params.fine_tuning {
            partition = fine_tune_partition(graph, &mask, &partition);
        }
        timings.spectral += clock.elapsed();

        let clock = Instant::now();
        let cut = cut_edges(graph, &mask, &partition);
        let cover =
            weighted_vertex_cover_by(&cut, costs.weights(), |v| mask.active_degree(graph, v))?;
        timings.cover += clock.elapsed();
        if cover.cover.is_empty() {
            return Err(Error::Invariant(format!(
                "empty cover while bisecting a component of size {}",
                component.len()
            )));
        }

        let clock = Instant::now();
        for &v in &cover.cover {
            mask.deactivate(v);
            cumulative += costs.get(v);
            let gcc = others_max.max(scratch.largest_within(graph, &mask, &component));
            removal_order.push(RemovalStep {
                node: v,
                cost: costs.get(v),
                gcc_size_after: gcc,
            });
            trajectory.push(TrajectoryPoint {
                cumulative_cost: cumulative,
                gcc_size: gcc,
            });
        }
        bisections += 1;
        timings.bookkeeping += clock.elapsed();
    }

    let mut removed: Vec<usize> = removal_order.iter().map(|s| s.node).collect();
    removed.sort_unstable();
    Ok(DismantlingSolution {
        removal_order,
        removed,
        total_cost: cumulative,
        trajectory,
        metadata: SolutionMetadata {
            seed: params.seed,
            multiplier: params.multiplier,
            fine_tuning: params.fine_tuning,
            reinserted: false,
            prng: PRNG_NAME.to_owned(),
            target_size: limit,
            bisections,
            power_iterations,
        },
    })
}

/// Breadth-first search restricted to a node subset, with reusable buffers.
struct Bfs {
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Self {
            seen: vec![0; n],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    /// Largest component among the active nodes of `nodes`. `nodes` must be
    /// closed under active adjacency (a former component).
    fn largest_within(&mut self, graph: &Graph, mask: &NodeMask, nodes: &[usize]) -> usize {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        let mut best = 0;
        for &start in nodes {
            if !mask.is_active(start) || self.seen[start] == self.stamp {
                continue;
            }
            self.seen[start] = self.stamp;
            self.queue.push_back(start);
            let mut size = 0;
            while let Some(v) = self.queue.pop_front() {
                size += 1;
                for &u in graph.neighbors(v) {
                    if mask.is_active(u) && self.seen[u] != self.stamp {
                        self.seen[u] = self.stamp;
                        self.queue.push_back(u);
                    }
                }
            }
            best = best.max(size);
        }
        best
    }
}

/// Trajectory obtained by removing `order` one node at a time from the full graph.
pub fn replay_trajectory(
    graph: &Graph,
    costs: &CostVector,
    order: &[usize],
) -> Vec<TrajectoryPoint> {
    let mut mask = NodeMask::full(graph.node_count());
    let mut out = Vec::with_capacity(order.len() + 1);
    out.push(TrajectoryPoint {
        cumulative_cost: 0.0,
        gcc_size: gcc_size(graph, &mask),
    });
    let mut cumulative = 0.0;
    for &v in order {
        mask.deactivate(v);
        cumulative += costs.get(v);
        out.push(TrajectoryPoint {
            cumulative_cost: cumulative,
            gcc_size: gcc_size(graph, &mask),
        });
    }
    out
}

/// Size of the component `v` would join if reactivated.
fn merged_size(
    graph: &Graph,
    mask: &NodeMask,
    dsu: &mut DisjointSet,
    v: usize,
    roots: &mut Vec<usize>,
) -> usize {
    roots.clear();
    for &u in graph.neighbors(v) {
        if mask.is_active(u) {
            roots.push(dsu.find(u));
        }
    }
    roots.sort_unstable();
    roots.dedup();
    1 + roots.iter().map(|&r| dsu.root_size(r)).sum::<usize>()
}

/// Greedy reinsertion.
///
/// While some removed node can come back without creating a component larger
/// than the target, reinsert the one forming the smallest merged component
/// (ties: larger cost first, then smaller id).
pub fn reinsert(
    graph: &Graph,
    costs: &CostVector,
    target: &DismantlingTarget,
    solution: &DismantlingSolution,
) -> Result<DismantlingSolution> {
    let n = graph.node_count();
    let limit = target.max_gcc();
    let mut mask = solution.remaining_mask(n);
    if gcc_size(graph, &mask) > limit {
        return Err(Error::InvalidConfig(
            "solution does not meet the dismantling target".into(),
        ));
    }
    let mut dsu = DisjointSet::new(n);
    for &(u, v) in graph.edges() {
        if mask.is_active(u) && mask.is_active(v) {
            dsu.union(u, v);
        }
    }

    let mut pending: Vec<usize> = solution.removed.clone();
    let mut roots = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (i, &v) in pending.iter().enumerate() {
            let s = merged_size(graph, &mask, &mut dsu, v, &mut roots);
            if s > limit {
                continue;
            }
            let better = match best {
                None => true,
                Some((j, bs)) => {
                    let u = pending[j];
                    s < bs
                        || (s == bs
                            && (costs.get(v) > costs.get(u)
                                || (costs.get(v) == costs.get(u) && v < u)))
                }
            };
            if better {
                best = Some((i, s));
            }
        }
        let Some((i, _)) = best else { break };
        let v = pending.swap_remove(i);
        mask.activate(v);
        for &u in graph.neighbors(v) {
            if mask.is_active(u) {
                dsu.union(u, v);
            }
        }
    }

    pending.sort_unstable();
    let kept: Vec<usize> = solution
        .removal_order
        .iter()
        .map(|s| s.node)
        .filter(|v| pending.binary_search(v).is_ok())
        .collect();
    let trajectory = replay_trajectory(graph, costs, &kept);
    let removal_order: Vec<RemovalStep> = kept
        .iter()
        .zip(&trajectory[1..])
        .map(|(&node, point)| RemovalStep {
            node,
            cost: costs.get(node),
            gcc_size_after: point.gcc_size,
        })
        .collect();
    let total_cost = trajectory.last().map_or(0.0, |p| p.cumulative_cost);

    let mut metadata = solution.metadata.clone();
    metadata.reinserted = true;
    Ok(DismantlingSolution {
        removal_order,
        removed: pending,
        total_cost,
        trajectory,
        metadata,
    })
}

/// Reported cost: node count for unit costs, otherwise the removed share of
/// total cost (a fraction in `[0, 1]`).
pub fn cost_of(solution: &DismantlingSolution, costs: &CostVector) -> f64 {
    match costs.mode() {
        CostMode::Unit => solution.removed.len() as f64,
        CostMode::Degree | CostMode::Custom => {
            let total = costs.total();
            if total == 0.0 {
                0.0
            } else {
                solution.removed.iter().map(|&v| costs.get(v)).sum::<f64>() / total
            }
        }
    }
}

/// Whether reactivating `v` alone would create a component above the target.
pub fn reinsertion_blocked(
    graph: &Graph,
    mask: &NodeMask,
    target: &DismantlingTarget,
    v: usize,
) -> bool {
    let mut trial = mask.clone();
    trial.activate(v);
    let comps = components(graph, &trial);
    let k = comps.component_of(v).expect("just activated");
    comps.sizes()[k] > target.max_gcc()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn target_from_fraction() {
        assert_eq!(
            DismantlingTarget::from_fraction(754, 0.01)
                .unwrap()
                .max_gcc(),
            8
        );
        assert_eq!(
            DismantlingTarget::from_fraction(2000, 0.01)
                .unwrap()
                .max_gcc(),
            20
        );
        assert_eq!(
            DismantlingTarget::from_fraction(10, 0.01)
                .unwrap()
                .max_gcc(),
            1
        );
        assert!(DismantlingTarget::from_fraction(10, 0.0).is_err());
        assert!(DismantlingTarget::absolute(0).is_err());
    }

    #[test]
    fn star_loses_only_its_hub() {
        let g = star(8);
        let costs = CostVector::unit(&g);
        let target = DismantlingTarget::absolute(1).unwrap();
        for fine_tuning in [false, true] {
            for seed in 0..10 {
                let params = DismantleParams {
                    seed,
                    multiplier: 1,
                    fine_tuning,
                };
                let sol = dismantle(&g, &costs, &target, &params).unwrap();
                assert_eq!(
                    sol.removed,
                    vec![0],
                    "seed {seed} fine_tuning {fine_tuning}"
                );
                assert_eq!(sol.total_cost, 1.0);
                assert_eq!(sol.final_gcc(), 1);
            }
        }
    }

    #[test]
    fn already_dismantled_graph_is_left_alone() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let costs = CostVector::unit(&g);
        let target = DismantlingTarget::absolute(2).unwrap();
        let sol = dismantle(&g, &costs, &target, &DismantleParams::default()).unwrap();
        assert!(sol.removed.is_empty());
        assert_eq!(sol.total_cost, 0.0);
        assert_eq!(cost_of(&sol, &CostVector::degree(&g)), 0.0);
        assert_eq!(sol.trajectory.len(), 1);
    }

    #[test]
    fn reinsert_restores_harmless_node() {
        // Path 0-1-2-3-4, all of 1..=3 removed; with C=5 everything comes back.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let costs = CostVector::unit(&g);
        let order = [1, 2, 3];
        let trajectory = replay_trajectory(&g, &costs, &order);
        let sol = DismantlingSolution {
            removal_order: order
                .iter()
                .zip(&trajectory[1..])
                .map(|(&node, p)| RemovalStep {
                    node,
                    cost: 1.0,
                    gcc_size_after: p.gcc_size,
                })
                .collect(),
            removed: order.to_vec(),
            total_cost: 3.0,
            trajectory,
            metadata: SolutionMetadata {
                seed: 0,
                multiplier: 1,
                fine_tuning: true,
                reinserted: false,
                prng: PRNG_NAME.into(),
                target_size: 5,
                bisections: 0,
                power_iterations: 0,
            },
        };
        let target = DismantlingTarget::absolute(5).unwrap();
        let back = reinsert(&g, &costs, &target, &sol).unwrap();
        assert!(back.removed.is_empty());
        assert!(back.metadata.reinserted);

        // With C=2 only one endpoint-adjacent node can return.
        let tight = DismantlingTarget::absolute(2).unwrap();
        let back = reinsert(&g, &costs, &tight, &sol).unwrap();
        assert_eq!(back.removed.len(), 2);
        assert!(back.final_gcc() <= 2);
    }

    #[test]
    fn reinsert_fixpoint_when_nothing_fits() {
        let g = star(4);
        let costs = CostVector::unit(&g);
        let target = DismantlingTarget::absolute(1).unwrap();
        let sol = dismantle(&g, &costs, &target, &DismantleParams::default()).unwrap();
        let back = reinsert(&g, &costs, &target, &sol).unwrap();
        assert_eq!(back.removed, sol.removed);
        assert_eq!(back.removal_order, sol.removal_order);
        assert_eq!(back.trajectory, sol.trajectory);
    }

    #[test]
    fn reported_costs() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let unit = CostVector::unit(&g);
        let degree = CostVector::degree(&g);
        let target = DismantlingTarget::absolute(1).unwrap();
        let sol = dismantle(&g, &unit, &target, &DismantleParams::default()).unwrap();
        assert_eq!(sol.removed, vec![1]);
        assert_eq!(cost_of(&sol, &unit), 1.0);
        assert_eq!(cost_of(&sol, &degree), 0.5);

        let mut all = sol.clone();
        all.removed = vec![0, 1, 2];
        assert_eq!(cost_of(&all, &degree), 1.0);
    }

    #[test]
    fn recorded_trajectory_matches_replay() {
        let g = crate::synth::erdos_renyi(60, 0.08, 5);
        let costs = CostVector::degree(&g);
        let target = DismantlingTarget::absolute(3).unwrap();
        let sol = dismantle(
            &g,
            &costs,
            &target,
            &DismantleParams {
                seed: 11,
                ..Default::default()
            },
        )
        .unwrap();
        let order: Vec<usize> = sol.removal_order.iter().map(|s| s.node).collect();
        assert_eq!(replay_trajectory(&g, &costs, &order), sol.trajectory);
        assert!(sol.final_gcc() <= 3);
    }
}
