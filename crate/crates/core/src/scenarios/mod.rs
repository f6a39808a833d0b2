//! Synthetic ground truth: planted-failure slopes, the 9-node example
//! network and brute-force cut oracles.

mod diff;
mod fixture;
mod oracle;
mod random;
mod slope;

use thiserror::Error;

use crate::kinematics::KinematicsError;
use crate::netflow::NetflowError;

pub use fixture::{example_network, fixture_label, fixture_node, EXAMPLE_LINKS};
pub use diff::{oracle_diff, OracleDiffConfig, OracleDiffReport};
pub use oracle::{
    brute_force_min_cut, brute_force_pair_capacities, brute_force_pairwise_ratio_cut, MAX_ORACLE_NODES,
};
pub use random::random_network;
pub use slope::{generate_slope, SlopeScenario};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("exhaustive oracle refused: {n} nodes exceeds the limit of {max}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("no bipartition satisfies the constraints")]
    NoFeasibleBipartition,
    #[error("invalid scenario geometry: {0}")]
    InvalidGeometry(String),
    #[error(transparent)]
    Netflow(#[from] NetflowError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}
