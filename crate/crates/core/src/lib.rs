//! Failure-location and failure-time analysis of monitored slopes from
//! displacement time series.
//!
//! Each time state turns the displacement field into a capacitated network
//! whose link capacities fall as neighbouring points slip past each other.
//! The least-capacity balanced cut of that network (found through a
//! Gomory-Hu tree) splits the points into two kinematic clusters; the
//! faster one is the predicted failure region. Cluster quality, cluster
//! persistence and cut capacity over time locate a regime change, after
//! which the inverse mean velocity of the active cluster is extrapolated to
//! a failure time.
//!
//! * [`netflow`]: networks, max-flow/min-cut, cut trees, bottleneck search.
//! * [`kinematics`]: displacement ingestion, connectivity, capacities.
//! * [`stability`]: per-state analysis, metrics, regime change, forecasts.
//! * [`scenarios`]: synthetic slopes, the 9-node fixture, brute-force oracles.
//! * [`cli`]: run configuration and the batch pipeline.

// Pair loops over symmetric matrices read better with indices, and the
// negated float comparisons are there to reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod cli;
pub mod kinematics;
pub mod netflow;
pub mod scenarios;
pub mod stability;
