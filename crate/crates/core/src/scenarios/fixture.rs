//! The 9-node grid example network.
//!
//! Nodes are labelled 1..=9 row by row on a 3x3 grid and stored as ids
//! `label - 1`:
//!
//! ```text
//!   1 --5-- 2 --2-- 3
//!   |1      |3      |1
//!   4 --2-- 5 --4-- 6
//!   |1      |4      |4
//!   7 --1-- 8 --4-- 9
//! ```
//!
//! The capacities were chosen so that, verified by exhaustive enumeration of
//! all 255 bipartitions:
//! * the unique global minimum cut has capacity 2 and isolates node 7
//!   through links {4,7} and {7,8};
//! * the unique minimum cut between nodes 1 and 8 has capacity 5, separates
//!   {1,2,3} through links {1,4}, {2,5}, {3,6};
//! * exactly the pairs (1,5) (1,6) (1,8) (1,9) (2,5) (2,6) (2,8) (2,9) share
//!   that cut as their minimum cut;
//! * every other bipartition whose smaller side has at least 3 nodes costs
//!   at least 7.

use crate::netflow::{CapacitatedNetwork, NodeId};

/// Links as `(label, label, capacity)`.
pub const EXAMPLE_LINKS: [(usize, usize, f64); 12] = [
    (1, 2, 5.0),
    (2, 3, 2.0),
    (4, 5, 2.0),
    (5, 6, 4.0),
    (7, 8, 1.0),
    (8, 9, 4.0),
    (1, 4, 1.0),
    (2, 5, 3.0),
    (3, 6, 1.0),
    (4, 7, 1.0),
    (5, 8, 4.0),
    (6, 9, 4.0),
];

/// Node id of a 1-based fixture label.
pub fn fixture_node(label: usize) -> NodeId {
    assert!((1..=9).contains(&label), "fixture labels run from 1 to 9");
    label - 1
}

/// 1-based label of a fixture node id.
pub fn fixture_label(node: NodeId) -> usize {
    node + 1
}

pub fn example_network() -> CapacitatedNetwork {
    CapacitatedNetwork::new(9, EXAMPLE_LINKS.iter().map(|&(a, b, c)| (a - 1, b - 1, c)))
        .expect("fixture links are valid")
}
