//! Capacitated undirected networks, maximum flow / minimum cut, Gomory-Hu
//! cut trees and the balance-constrained bottleneck search.

mod bottleneck;
mod cut;
mod gomory_hu;
mod maxflow;
mod network;

use thiserror::Error;

pub use bottleneck::{
    ratio_constrained_cut, ratio_scan, realize_entry, select_admissible, RatioEntry, RhoWindow,
};
pub use cut::{approx_eq, cmp_capacity, cut_capacity, CutRatio, CutResult, REL_TOL};
pub use gomory_hu::{gomory_hu_tree, query_min_cut, GomoryHuTree, TreeLink};
pub use maxflow::{max_flow, min_cut, FlowAssignment, FlowSolver};
pub use network::{CapacitatedNetwork, Link, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetflowError {
    #[error("node {node} does not exist (network has {n} nodes)")]
    UnknownNode { node: NodeId, n: usize },
    #[error("self-loop on node {node}")]
    SelfLoop { node: NodeId },
    #[error("link {link} listed more than once")]
    DuplicateLink { link: Link },
    #[error("link {link} has invalid capacity {capacity}")]
    InvalidCapacity { link: Link, capacity: f64 },
    #[error("source and sink are the same node ({node})")]
    SameSourceSink { node: NodeId },
    #[error("cut side must be a non-empty proper subset (got {size} of {n} nodes)")]
    ImproperSide { size: usize, n: usize },
    #[error("network has {components} connected components; analyze each component separately")]
    Disconnected { components: usize },
    #[error("a cut tree needs at least 2 nodes (got {n})")]
    TooFewNodes { n: usize },
    #[error("links do not form a spanning tree")]
    NotATree,
    #[error("tree has {tree} nodes but network has {net}")]
    TreeMismatch { tree: usize, net: usize },
    #[error("invalid cut-ratio window [{min}, {max}]; need 0 < min <= max <= 1")]
    InvalidRhoWindow { min: f64, max: f64 },
    #[error("no admissible cut with ratio in [{min}, {max}]; widen the window")]
    NoAdmissibleCut { min: f64, max: f64 },
}
