//! Cut edges of a partition and their local-ratio weighted vertex cover.

use crate::cost;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeMask};
use crate::spectral::Partition;

/// Active edges between the two groups of a partition, `(min, max)` sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutEdgeSet {
    edges: Vec<(usize, usize)>,
}

impl CutEdgeSet {
    /// Normalizes endpoint order and sorts lexicographically.
    pub fn from_edges(mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        edges.dedup();
        Self { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn cut_edges(graph: &Graph, mask: &NodeMask, partition: &Partition) -> CutEdgeSet {
    let mut edges = Vec::new();
    for (&v, &group) in partition.nodes().iter().zip(partition.labels()) {
        for &u in graph.neighbors(v) {
            if u <= v || !mask.is_active(u) {
                continue;
            }
            if partition.group_of(u).is_some_and(|g| g != group) {
                edges.push((v, u));
            }
        }
    }
    // Rows are visited in ascending v with ascending neighbors.
    CutEdgeSet { edges }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverResult {
    /// Ascending node ids.
    pub cover: Vec<usize>,
    pub total_cost: f64,
}

/// Local-ratio 2-approximate minimum-cost cover of the cut edges.
///
/// Edges are paid for in lexicographic order; a redundancy pass then visits
/// cover nodes by descending cost (ties: fewer incident cut edges first, then
/// ascending id) and drops any node whose cut edges are all covered by others.
pub fn weighted_vertex_cover(cut: &CutEdgeSet, costs: &[f64]) -> Result<CoverResult> {
    let mut incident = std::collections::HashMap::<usize, usize>::new();
    for &(u, v) in cut.edges() {
        *incident.entry(u).or_default() += 1;
        *incident.entry(v).or_default() += 1;
    }
    weighted_vertex_cover_by(cut, costs, |v| incident[&v])
}

/// As [`weighted_vertex_cover`], with `tie_rank` ordering equal-cost nodes in
/// the redundancy pass: lower rank is considered for dropping first.
pub fn weighted_vertex_cover_by<F>(
    cut: &CutEdgeSet,
    costs: &[f64],
    tie_rank: F,
) -> Result<CoverResult>
where
    F: Fn(usize) -> usize,
{
    let mut sweep = Sweep::run(cut, costs)?;
    sweep.drop_redundant(tie_rank);
    Ok(sweep.into_result(costs))
}

/// The bare local-ratio sweep, without the redundancy pass.
pub fn local_ratio_cover(cut: &CutEdgeSet, costs: &[f64]) -> Result<CoverResult> {
    Ok(Sweep::run(cut, costs)?.into_result(costs))
}

struct Sweep {
    endpoints: Vec<usize>,
    endpoint_costs: Vec<f64>,
    adjacency: Vec<Vec<usize>>,
    in_cover: Vec<bool>,
}

impl Sweep {
    fn run(cut: &CutEdgeSet, costs: &[f64]) -> Result<Self> {
        let mut endpoints: Vec<usize> = cut.edges().iter().flat_map(|&(u, v)| [u, v]).collect();
        endpoints.sort_unstable();
        endpoints.dedup();
        if let Some(&last) = endpoints.last() {
            if last >= costs.len() {
                return Err(Error::InvalidCosts(format!("no cost for node {last}")));
            }
        }
        let endpoint_costs: Vec<f64> = endpoints.iter().map(|&v| costs[v]).collect();
        cost::validate(&endpoint_costs)?;

        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); endpoints.len()];
        let mut residual = endpoint_costs.clone();
        for &(u, v) in cut.edges() {
            let iu = endpoints.binary_search(&u).expect("endpoint");
            let iv = endpoints.binary_search(&v).expect("endpoint");
            adjacency[iu].push(iv);
            adjacency[iv].push(iu);
            if residual[iu] > 0.0 && residual[iv] > 0.0 {
                // Subtract min(r_u, r_v) from both; the minimum lands on 0 exactly.
                if residual[iu] <= residual[iv] {
                    residual[iv] -= residual[iu];
                    residual[iu] = 0.0;
                } else {
                    residual[iu] -= residual[iv];
                    residual[iv] = 0.0;
                }
            }
        }
        let in_cover = residual.iter().map(|&r| r <= 0.0).collect();
        Ok(Self {
            endpoints,
            endpoint_costs,
            adjacency,
            in_cover,
        })
    }

    fn drop_redundant<F: Fn(usize) -> usize>(&mut self, tie_rank: F) {
        let mut order: Vec<usize> = (0..self.endpoints.len())
            .filter(|&i| self.in_cover[i])
            .collect();
        let (ids, costs) = (&self.endpoints, &self.endpoint_costs);
        order.sort_by(|&a, &b| {
            costs[b]
                .total_cmp(&costs[a])
                .then_with(|| tie_rank(ids[a]).cmp(&tie_rank(ids[b])))
                .then(ids[a].cmp(&ids[b]))
        });
        for i in order {
            if self.adjacency[i].iter().all(|&j| self.in_cover[j]) {
                self.in_cover[i] = false;
            }
        }
    }

    fn into_result(self, costs: &[f64]) -> CoverResult {
        let cover: Vec<usize> = self
            .endpoints
            .iter()
            .zip(&self.in_cover)
            .filter(|(_, &c)| c)
            .map(|(&v, _)| v)
            .collect();
        let total_cost = cover.iter().map(|&v| costs[v]).sum();
        CoverResult { cover, total_cost }
    }
}
