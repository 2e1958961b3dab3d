//! JSON records and CSV writers for solutions and ensemble reports.
//!
//! Reals are written in Rust's shortest round-trip form (`Display` for
//! `f64`, `ryu` inside serde_json), which never depends on locale and always
//! uses `.` as the decimal separator.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cost::{CostMode, CostVector};
use crate::dismantler::{cost_of, DismantlingSolution, SolutionMetadata, TrajectoryPoint};
use crate::ensemble::{CostSummary, EnsembleConfig, EnsembleReport};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemovalRecord {
    pub node: usize,
    pub label: String,
    pub cost: f64,
    pub gcc_size_after: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub metadata: SolutionMetadata,
    pub cost_mode: CostMode,
    pub removal_order: Vec<RemovalRecord>,
    pub trajectory: Vec<TrajectoryPoint>,
    pub total_cost: f64,
    pub reported_cost: f64,
}

impl SolutionRecord {
    pub fn new(graph: &Graph, costs: &CostVector, solution: &DismantlingSolution) -> Self {
        Self {
            metadata: solution.metadata.clone(),
            cost_mode: costs.mode(),
            removal_order: solution
                .removal_order
                .iter()
                .map(|s| RemovalRecord {
                    node: s.node,
                    label: graph.label(s.node).to_owned(),
                    cost: s.cost,
                    gcc_size_after: s.gcc_size_after,
                })
                .collect(),
            trajectory: solution.trajectory.clone(),
            total_cost: solution.total_cost,
            reported_cost: cost_of(solution, costs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberRecord {
    pub index: usize,
    pub seed: u64,
    pub cost: f64,
    pub final_gcc: usize,
    pub dismantled_cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub config: EnsembleConfig,
    pub cost_mode: CostMode,
    pub members: Vec<MemberRecord>,
    pub best_index: usize,
    pub best_seed: u64,
    pub best_cost: f64,
    pub best_dismantled_cost: f64,
    pub cost_summary: CostSummary,
}

impl EnsembleRecord {
    pub fn new(costs: &CostVector, report: &EnsembleReport) -> Self {
        let mut config = report.config;
        // Worker count does not influence results.
        config.workers = None;
        Self {
            config,
            cost_mode: costs.mode(),
            members: report
                .members
                .iter()
                .map(|m| MemberRecord {
                    index: m.index,
                    seed: m.seed,
                    cost: m.cost,
                    final_gcc: m.final_gcc(),
                    dismantled_cost: m.dismantled_cost,
                })
                .collect(),
            best_index: report.best_index,
            best_seed: report.best().seed,
            best_cost: report.best_cost(),
            best_dismantled_cost: report.best_dismantled_cost(),
            cost_summary: report.cost_summary(),
        }
    }
}

pub fn write_trajectory_csv<W: Write>(
    mut out: W,
    trajectory: &[TrajectoryPoint],
) -> std::io::Result<()> {
    writeln!(out, "cumulative_cost,gcc_size")?;
    for p in trajectory {
        writeln!(out, "{},{}", p.cumulative_cost, p.gcc_size)?;
    }
    Ok(())
}

/// Every member's trajectory in one table, keyed by member index and seed.
pub fn write_member_trajectories_csv<W: Write>(
    mut out: W,
    report: &EnsembleReport,
) -> std::io::Result<()> {
    writeln!(out, "member,seed,cumulative_cost,gcc_size")?;
    for m in &report.members {
        for p in &m.solution.trajectory {
            writeln!(
                out,
                "{},{},{},{}",
                m.index, m.seed, p.cumulative_cost, p.gcc_size
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dismantler::{dismantle, DismantleParams, DismantlingTarget};

    #[test]
    fn trajectory_csv_format() {
        let t = [
            TrajectoryPoint {
                cumulative_cost: 0.0,
                gcc_size: 5,
            },
            TrajectoryPoint {
                cumulative_cost: 2.5,
                gcc_size: 2,
            },
        ];
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &t).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "cumulative_cost,gcc_size\n0,5\n2.5,2\n"
        );
    }

    #[test]
    fn solution_record_round_trips() {
        let g = crate::graph::parse_edge_list_str("x y\ny z\n").unwrap();
        let costs = CostVector::unit(&g);
        let target = DismantlingTarget::absolute(1).unwrap();
        let sol = dismantle(&g, &costs, &target, &DismantleParams::default()).unwrap();
        let rec = SolutionRecord::new(&g, &costs, &sol);
        assert_eq!(rec.removal_order[0].label, "y");
        assert_eq!(rec.reported_cost, 1.0);
        let text = serde_json::to_string(&rec).unwrap();
        let back: SolutionRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }
}
