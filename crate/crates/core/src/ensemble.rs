//! Best-of-K ensembles over spectral initializations.
//!
//! Member `k` runs the full dismantling pipeline with seed `base_seed + k`.
//! Members share the graph and costs read-only and are otherwise
//! independent, so they run in parallel; the report is assembled in member
//! order and does not depend on scheduling.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::dismantler::{
    cost_of, dismantle, reinsert, DismantleParams, DismantlingSolution, DismantlingTarget,
    TrajectoryPoint,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Member count `K`.
    pub members: usize,
    pub base_seed: u64,
    /// Iteration-budget multiplier `D`.
    pub multiplier: usize,
    pub reinsertion: bool,
    pub fine_tuning: bool,
    /// Worker cap; `None` uses every core.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            members: 1000,
            base_seed: 0,
            multiplier: 1,
            reinsertion: true,
            fine_tuning: true,
            workers: None,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.members == 0 {
            return Err(Error::InvalidConfig(
                "ensemble needs at least one member".into(),
            ));
        }
        if self.multiplier == 0 {
            return Err(Error::InvalidConfig(
                "iteration multiplier must be at least 1".into(),
            ));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig(
                "worker count must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn member_seed(&self, index: usize) -> u64 {
        self.base_seed.wrapping_add(index as u64)
    }
}

#[derive(Clone, Debug)]
pub struct MemberResult {
    pub index: usize,
    pub seed: u64,
    /// Final solution: reinserted when the ensemble reinserts.
    pub solution: DismantlingSolution,
    pub cost: f64,
    /// Reported cost before reinsertion.
    pub dismantled_cost: f64,
    pub dismantled_final_gcc: usize,
    pub elapsed: Duration,
}

impl MemberResult {
    pub fn final_gcc(&self) -> usize {
        self.solution.final_gcc()
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleReport {
    pub config: EnsembleConfig,
    pub members: Vec<MemberResult>,
    pub best_index: usize,
}

/// Smallest cost, then smallest final GCC, then smallest index.
pub fn best_index<I>(candidates: I) -> Option<usize>
where
    I: IntoIterator<Item = (f64, usize)>,
{
    let mut best: Option<(usize, f64, usize)> = None;
    for (i, (cost, gcc)) in candidates.into_iter().enumerate() {
        let better = match best {
            None => true,
            Some((_, bc, bg)) => cost < bc || (cost == bc && gcc < bg),
        };
        if better {
            best = Some((i, cost, gcc));
        }
    }
    best.map(|(i, _, _)| i)
}

impl EnsembleReport {
    pub fn best(&self) -> &MemberResult {
        &self.members[self.best_index]
    }

    pub fn best_cost(&self) -> f64 {
        self.best().cost
    }

    /// Best member judged on costs before reinsertion (the plain ensemble).
    pub fn best_dismantled_index(&self) -> usize {
        best_index(
            self.members
                .iter()
                .map(|m| (m.dismantled_cost, m.dismantled_final_gcc)),
        )
        .expect("non-empty report")
    }

    pub fn best_dismantled_cost(&self) -> f64 {
        self.members[self.best_dismantled_index()].dismantled_cost
    }

    pub fn cost_summary(&self) -> CostSummary {
        CostSummary::of(self.members.iter().map(|m| m.cost))
    }

    pub fn total_power_iterations(&self) -> usize {
        self.members
            .iter()
            .map(|m| m.solution.metadata.power_iterations)
            .sum()
    }
}

/// Min, median and max of member costs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl CostSummary {
    fn of<I: IntoIterator<Item = f64>>(costs: I) -> Self {
        let mut v: Vec<f64> = costs.into_iter().collect();
        v.sort_by(f64::total_cmp);
        if v.is_empty() {
            return Self {
                min: f64::NAN,
                median: f64::NAN,
                max: f64::NAN,
            };
        }
        let mid = v.len() / 2;
        let median = if v.len().is_multiple_of(2) {
            (v[mid - 1] + v[mid]) / 2.0
        } else {
            v[mid]
        };
        Self {
            min: v[0],
            median,
            max: v[v.len() - 1],
        }
    }
}

pub fn run_member(
    graph: &Graph,
    costs: &CostVector,
    target: &DismantlingTarget,
    cfg: &EnsembleConfig,
    index: usize,
) -> Result<MemberResult> {
    let clock = Instant::now();
    let seed = cfg.member_seed(index);
    let params = DismantleParams {
        seed,
        multiplier: cfg.multiplier,
        fine_tuning: cfg.fine_tuning,
    };
    let dismantled = dismantle(graph, costs, target, &params)?;
    let dismantled_cost = cost_of(&dismantled, costs);
    let dismantled_final_gcc = dismantled.final_gcc();
    let solution = if cfg.reinsertion {
        reinsert(graph, costs, target, &dismantled)?
    } else {
        dismantled
    };
    Ok(MemberResult {
        index,
        seed,
        cost: cost_of(&solution, costs),
        solution,
        dismantled_cost,
        dismantled_final_gcc,
        elapsed: clock.elapsed(),
    })
}

pub fn run_ensemble(
    graph: &Graph,
    costs: &CostVector,
    target: &DismantlingTarget,
    cfg: &EnsembleConfig,
) -> Result<EnsembleReport> {
    cfg.validate()?;
    let outcomes = par::map_indexed(cfg.members, cfg.workers, |k| {
        run_member(graph, costs, target, cfg, k)
    });
    let mut members = Vec::with_capacity(outcomes.len());
    for (index, outcome) in outcomes.into_iter().enumerate() {
        members.push(outcome.map_err(|e| Error::Member {
            index,
            source: Box::new(e),
        })?);
    }
    let best_index =
        best_index(members.iter().map(|m| (m.cost, m.final_gcc()))).ok_or(Error::EmptyReport)?;
    Ok(EnsembleReport {
        config: *cfg,
        members,
        best_index,
    })
}

/// The report's selected solution, re-derived from member costs.
pub fn select_best(report: &EnsembleReport) -> Result<&DismantlingSolution> {
    let i = best_index(report.members.iter().map(|m| (m.cost, m.final_gcc())))
        .ok_or(Error::EmptyReport)?;
    Ok(&report.members[i].solution)
}

/// GCC as a right-continuous step function of cumulative cost.
pub fn gcc_at(trajectory: &[TrajectoryPoint], cost: f64) -> Option<usize> {
    let first = trajectory.first()?;
    let idx = trajectory.partition_point(|p| p.cumulative_cost <= cost);
    Some(if idx == 0 {
        first.gcc_size
    } else {
        trajectory[idx - 1].gcc_size
    })
}

/// Sorted union of the cumulative costs of both trajectories.
pub fn shared_cost_grid(a: &[TrajectoryPoint], b: &[TrajectoryPoint]) -> Vec<f64> {
    let mut grid: Vec<f64> = a.iter().chain(b).map(|p| p.cumulative_cost).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Counts of pointwise differences `gcc_a(c) - gcc_b(c)` keyed by difference.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceHistogram {
    pub bins: BTreeMap<i64, usize>,
}

impl DifferenceHistogram {
    pub fn total(&self) -> usize {
        self.bins.values().sum()
    }

    pub fn merge(&mut self, other: &DifferenceHistogram) {
        for (&d, &c) in &other.bins {
            *self.bins.entry(d).or_default() += c;
        }
    }

    fn share(&self, keep: impl Fn(i64) -> bool) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let hit: usize = self
            .bins
            .iter()
            .filter(|(&d, _)| keep(d))
            .map(|(_, &c)| c)
            .sum();
        hit as f64 / total as f64
    }

    pub fn positive_share(&self) -> f64 {
        self.share(|d| d > 0)
    }

    pub fn negative_share(&self) -> f64 {
        self.share(|d| d < 0)
    }

    pub fn zero_share(&self) -> f64 {
        self.share(|d| d == 0)
    }
}

pub fn gcc_difference_histogram(
    curve_a: &[TrajectoryPoint],
    curve_b: &[TrajectoryPoint],
    cost_grid: &[f64],
) -> Result<DifferenceHistogram> {
    if curve_a.is_empty() || curve_b.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let mut hist = DifferenceHistogram::default();
    for &c in cost_grid {
        let a = gcc_at(curve_a, c).expect("non-empty") as i64;
        let b = gcc_at(curve_b, c).expect("non-empty") as i64;
        *hist.bins.entry(a - b).or_default() += 1;
    }
    Ok(hist)
}
