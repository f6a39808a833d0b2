//! Randomized comparison of the flow code against the exhaustive oracles.

use serde::{Deserialize, Serialize};

use super::oracle::{brute_force_min_cut, brute_force_pair_capacities, brute_force_pairwise_ratio_cut};
use super::random::random_network;
use super::ScenarioError;
use crate::netflow::{
    approx_eq, gomory_hu_tree, max_flow, min_cut, ratio_constrained_cut, NetflowError, RhoWindow,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleDiffConfig {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub trials: usize,
    pub seed: u64,
    /// Extra-link probability on top of the random spanning tree.
    pub density: f64,
    pub window: RhoWindow,
}

impl Default for OracleDiffConfig {
    fn default() -> Self {
        OracleDiffConfig { min_nodes: 4, max_nodes: 12, trials: 200, seed: 0, density: 0.3, window: RhoWindow::primary() }
    }
}

/// Counts per check. Trials alternate integer and real capacities.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleDiffReport {
    pub trials: usize,
    pub pair_queries: usize,
    /// Max-flow values differing from the pairwise minimum cut.
    pub flow_mismatches: usize,
    /// Min cut between nodes 0 and n-1 differing in capacity or in the
    /// inclusion-minimal source side.
    pub cut_mismatches: usize,
    /// Cut-tree pair values differing from the pairwise minimum cut.
    pub tree_mismatches: usize,
    /// Bottleneck cuts that are inadmissible, are not a minimum cut for
    /// their own pair, or (real capacities) miss the pairwise-minimal
    /// oracle.
    pub bottleneck_mismatches: usize,
    /// Integer-capacity trials where a tied cut tree made the bottleneck
    /// heavier than the pairwise-minimal oracle. Informational.
    pub bottleneck_tie_gaps: usize,
    /// Trials where the bottleneck is heavier than the least-capacity
    /// bipartition in the window. Informational: a tree search cannot see
    /// cuts that are no pair's minimum.
    pub exhaustive_gaps: usize,
    /// Descriptions of the first few mismatches.
    pub examples: Vec<String>,
}

impl OracleDiffReport {
    pub fn mismatches(&self) -> usize {
        self.flow_mismatches + self.cut_mismatches + self.tree_mismatches + self.bottleneck_mismatches
    }
}

pub fn oracle_diff(cfg: &OracleDiffConfig) -> Result<OracleDiffReport, ScenarioError> {
    if cfg.min_nodes < 2 || cfg.max_nodes < cfg.min_nodes {
        return Err(ScenarioError::InvalidGeometry(format!(
            "node range {}..={} is invalid",
            cfg.min_nodes, cfg.max_nodes
        )));
    }
    cfg.window.validate()?;
    let mut rep = OracleDiffReport { trials: cfg.trials, ..Default::default() };
    let span = cfg.max_nodes - cfg.min_nodes + 1;
    for trial in 0..cfg.trials {
        let seed = cfg.seed.wrapping_add(trial as u64);
        let n = cfg.min_nodes + trial % span;
        let integer = trial % 2 == 0;
        let net = random_network(seed, n, cfg.density, integer);
        let same = |a: f64, b: f64| if integer { a == b } else { approx_eq(a, b) };
        let note = |rep: &mut OracleDiffReport, what: String| {
            if rep.examples.len() < 10 {
                rep.examples.push(format!("trial {trial} (seed {seed}, n {n}): {what}"));
            }
        };

        let lambda = brute_force_pair_capacities(&net)?;
        let tree = gomory_hu_tree(&net)?;
        for u in 0..n {
            for v in u + 1..n {
                rep.pair_queries += 1;
                let f = max_flow(&net, u, v)?.value;
                if !same(f, lambda[u][v]) {
                    rep.flow_mismatches += 1;
                    note(&mut rep, format!("max flow {u}-{v} = {f}, oracle {}", lambda[u][v]));
                }
                let g = tree.min_cut_value(u, v);
                if !same(g, lambda[u][v]) {
                    rep.tree_mismatches += 1;
                    note(&mut rep, format!("tree value {u}-{v} = {g}, oracle {}", lambda[u][v]));
                }
            }
        }

        let cut = min_cut(&net, 0, n - 1)?;
        let want = brute_force_min_cut(&net, None, Some((0, n - 1)))?;
        if !same(cut.capacity, want.capacity) || cut.side_w != want.side_w {
            rep.cut_mismatches += 1;
            note(&mut rep, format!("min cut 0-{} side {:?}, oracle {:?}", n - 1, cut.side_w, want.side_w));
        }

        let got = match ratio_constrained_cut(&tree, &net, cfg.window) {
            Ok(c) => Some(c),
            Err(NetflowError::NoAdmissibleCut { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let bound = brute_force_pairwise_ratio_cut(&net, cfg.window)?;
        match (&got, bound) {
            (Some(c), Some(b)) => {
                let (s, t) = c.terminals.expect("tree cuts carry their pair");
                let sound = cfg.window.contains(c.ratio) && same(c.capacity, lambda[s][t]);
                if !sound {
                    rep.bottleneck_mismatches += 1;
                    note(&mut rep, format!("bottleneck {} is not a valid pair minimum", c.capacity));
                } else if !same(c.capacity, b) {
                    if integer && c.capacity > b {
                        rep.bottleneck_tie_gaps += 1;
                    } else {
                        rep.bottleneck_mismatches += 1;
                        note(&mut rep, format!("bottleneck {}, pairwise oracle {b}", c.capacity));
                    }
                }
                let balanced = brute_force_min_cut(&net, Some(cfg.window), None)?.capacity;
                if c.capacity > balanced && !approx_eq(c.capacity, balanced) {
                    rep.exhaustive_gaps += 1;
                }
            }
            (None, None) => {}
            (Some(c), None) => {
                rep.bottleneck_mismatches += 1;
                note(&mut rep, format!("bottleneck {} but the oracle has no admissible cut", c.capacity));
            }
            (None, Some(b)) => {
                if integer {
                    rep.bottleneck_tie_gaps += 1;
                } else {
                    rep.bottleneck_mismatches += 1;
                    note(&mut rep, format!("no admissible tree cut, pairwise oracle {b}"));
                }
            }
        }
    }
    Ok(rep)
}
