//! Generalized network dismantling.
//!
//! Given a graph, per-node removal costs and a target size `C`, find a cheap
//! node set whose removal leaves no connected component larger than `C`.
//! The pipeline bisects the largest component with a node-weighted spectral
//! split, removes a weighted vertex cover of the cut, optionally reinserts
//! nodes greedily, and can repeat the whole run from many spectral
//! initializations and keep the cheapest result.
//!
//! ```
//! use dismantle::{CostVector, DismantlingTarget, EnsembleConfig, Graph};
//!
//! let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
//! let costs = CostVector::unit(&g);
//! let target = DismantlingTarget::absolute(2).unwrap();
//! let cfg = EnsembleConfig { members: 4, ..Default::default() };
//! let report = dismantle::run_ensemble(&g, &costs, &target, &cfg).unwrap();
//! assert!(report.best().final_gcc() <= 2);
//! ```

pub mod cost;
pub mod cover;
pub mod dismantler;
mod dsu;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod io;
pub mod par;
pub mod rng;
pub mod spectral;
pub mod synth;

pub use cost::{CostMode, CostVector};
pub use cover::{cut_edges, weighted_vertex_cover, CoverResult, CutEdgeSet};
pub use dismantler::{
    cost_of, dismantle, reinsert, DismantleParams, DismantlingSolution, DismantlingTarget,
    PhaseTimings, RemovalStep, TrajectoryPoint,
};
pub use ensemble::{run_ensemble, select_best, EnsembleConfig, EnsembleReport};
pub use error::{Error, Result};
pub use graph::{components, gcc_size, parse_edge_list, ComponentDecomposition, Graph, NodeMask};
pub use spectral::{
    approx_fiedler, fine_tune_partition, iteration_budget, sign_partition, Group, Partition,
    SpectralVector, WeightedLaplacian,
};
