use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    /// Every node costs 1.
    Unit,
    /// A node costs its degree in the original graph.
    Degree,
    /// Caller-supplied weights.
    Custom,
}

/// Non-negative removal cost per node.
#[derive(Clone, Debug, PartialEq)]
pub struct CostVector {
    weights: Vec<f64>,
    mode: CostMode,
}

impl CostVector {
    pub fn unit(graph: &Graph) -> Self {
        Self {
            weights: vec![1.0; graph.node_count()],
            mode: CostMode::Unit,
        }
    }

    /// Degrees are frozen from the graph as given; they are not updated as
    /// nodes are removed.
    pub fn degree(graph: &Graph) -> Self {
        Self {
            weights: (0..graph.node_count())
                .map(|v| graph.degree(v) as f64)
                .collect(),
            mode: CostMode::Degree,
        }
    }

    pub fn for_mode(graph: &Graph, mode: CostMode) -> Result<Self> {
        match mode {
            CostMode::Unit => Ok(Self::unit(graph)),
            CostMode::Degree => Ok(Self::degree(graph)),
            CostMode::Custom => Err(Error::InvalidCosts(
                "custom costs need explicit weights".into(),
            )),
        }
    }

    pub fn custom(weights: Vec<f64>) -> Result<Self> {
        validate(&weights)?;
        Ok(Self {
            weights,
            mode: CostMode::Custom,
        })
    }

    pub fn mode(&self) -> CostMode {
        self.mode
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub(crate) fn validate(weights: &[f64]) -> Result<()> {
    match weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
        Some(v) => Err(Error::InvalidCosts(format!(
            "node {v} has cost {}",
            weights[v]
        ))),
        None => Ok(()),
    }
}
