// SPDX-License-Identifier: Apache-2.0

//! Approximate all-pairs shortest paths and distance oracles for undirected
//! graphs with non-negative integer weights.

pub mod additive;
pub mod audit;
pub mod bk;
pub mod bunches;
pub mod dist;
pub mod error;
pub mod estimate;
pub mod framework;
pub mod graph;
pub mod hitting;
pub mod minplus;
mod rng;
pub mod weighted;

pub use audit::{audit, StretchAudit};
pub use bunches::{compute_bunches, BunchStructure};
pub use dist::{Rational, Stretch, INF, MAX_WEIGHT};
pub use error::{Error, Result};
pub use estimate::EstimateMatrix;
pub use graph::{exact_apsp, gen_gnp, load_graph, DistanceVector, Graph};
pub use hitting::{hit, HittingSet};

pub use additive::{additive_apsp_2, additive_apsp_k};
pub use bk::{bk_apsp, bk_scheme, build_r_hierarchy, RHierarchy};
pub use framework::{
    framework_apsp, near_additive_apsp, reduce_2eps_to_2, two_approx_apsp,
    two_approx_combinatorial, two_approx_unweighted, FrameworkConfig,
};
pub use minplus::{approx_minplus, exact_minplus, MinPlusMatrix};
pub use weighted::{
    build_oracle_2, build_oracle_2w, dense_apsp, mssp, DistanceOracle2, DistanceOracle2W,
};
