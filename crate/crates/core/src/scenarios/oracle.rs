//! Exhaustive bipartition oracles for small networks.
//!
//! These enumerate every bipartition explicitly and share no code with the
//! flow solvers, so they can check them.

use std::cmp::Ordering;

use crate::netflow::{approx_eq, cmp_capacity, CapacitatedNetwork, CutRatio, CutResult, NodeId, RhoWindow};

use super::ScenarioError;

/// Largest network the oracles will enumerate.
pub const MAX_ORACLE_NODES: usize = 20;

fn guard(net: &CapacitatedNetwork) -> Result<usize, ScenarioError> {
    let n = net.node_count();
    if n > MAX_ORACLE_NODES {
        return Err(ScenarioError::OracleTooLarge { n, max: MAX_ORACLE_NODES });
    }
    if n < 2 {
        return Err(crate::netflow::NetflowError::TooFewNodes { n }.into());
    }
    Ok(n)
}

fn mask_capacity(net: &CapacitatedNetwork, mask: u32) -> f64 {
    net.links()
        .iter()
        .zip(net.capacities())
        .filter(|(l, _)| (mask >> l.lo() & 1) != (mask >> l.hi() & 1))
        .map(|(_, &c)| c)
        .sum()
}

struct Candidate {
    mask: u32,
    capacity: f64,
    size: usize,
    ratio: CutRatio,
}

/// Exact minimizer over all bipartitions `{W, W'}` meeting the constraints.
///
/// With `terminals = Some((s, t))`, `W` holds `s` and excludes `t`, and ties
/// on capacity go to the smallest `W` (the inclusion-minimal source side,
/// which is unique). Without terminals, `W` is the side holding node 0.
/// Remaining ties go to the smaller ratio, then to the smaller membership
/// bitmask of `W`.
pub fn brute_force_min_cut(
    net: &CapacitatedNetwork,
    window: Option<RhoWindow>,
    terminals: Option<(NodeId, NodeId)>,
) -> Result<CutResult, ScenarioError> {
    let n = guard(net)?;
    if let Some((s, t)) = terminals {
        net.check_node(s)?;
        net.check_node(t)?;
        if s == t {
            return Err(crate::netflow::NetflowError::SameSourceSink { node: s }.into());
        }
    }
    let anchor = terminals.map_or(0, |(s, _)| s);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    let mut best: Option<Candidate> = None;
    for mask in 1..full {
        if mask >> anchor & 1 == 0 {
            continue;
        }
        if let Some((_, t)) = terminals {
            if mask >> t & 1 == 1 {
                continue;
            }
        }
        let size = mask.count_ones() as usize;
        let ratio = CutRatio::from_sides(size, n - size);
        if let Some(w) = window {
            if !w.contains(ratio.value()) {
                continue;
            }
        }
        let cand = Candidate { mask, capacity: mask_capacity(net, mask), size, ratio };
        let better = match &best {
            None => true,
            Some(b) => {
                let mut ord = cmp_capacity(cand.capacity, b.capacity);
                if terminals.is_some() {
                    ord = ord.then(cand.size.cmp(&b.size));
                }
                ord.then_with(|| cand.ratio.cmp_exact(&b.ratio)).then(cand.mask.cmp(&b.mask))
                    == Ordering::Less
            }
        };
        if better {
            best = Some(cand);
        }
    }

    let best = best.ok_or(ScenarioError::NoFeasibleBipartition)?;
    let in_w: Vec<bool> = (0..n).map(|v| best.mask >> v & 1 == 1).collect();
    Ok(CutResult::from_membership(net, &in_w, terminals))
}

/// Minimum cut capacity for every node pair, by enumerating each
/// bipartition once. Entry `[u][v]` is symmetric; the diagonal is infinite.
pub fn brute_force_pair_capacities(net: &CapacitatedNetwork) -> Result<Vec<Vec<f64>>, ScenarioError> {
    let n = guard(net)?;
    let mut best = vec![vec![f64::INFINITY; n]; n];
    // Fixing node n-1 outside W visits each bipartition once.
    for mask in 1u32..(1u32 << (n - 1)) {
        let c = mask_capacity(net, mask);
        let inside: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let outside: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 0).collect();
        for &u in &inside {
            for &v in &outside {
                if c < best[u][v] {
                    best[u][v] = c;
                    best[v][u] = c;
                }
            }
        }
    }
    Ok(best)
}

/// Least capacity over bipartitions with ratio in `window` that are a
/// minimum cut for at least one pair of nodes they separate. `None` when no
/// such bipartition exists.
///
/// A cut tree only stores pairwise-minimum cuts, so this is the tightest
/// bound a tree-based search can reach; the unrestricted balanced minimum
/// can be strictly smaller.
pub fn brute_force_pairwise_ratio_cut(
    net: &CapacitatedNetwork,
    window: RhoWindow,
) -> Result<Option<f64>, ScenarioError> {
    let n = guard(net)?;
    let lambda = brute_force_pair_capacities(net)?;
    let mut best: Option<f64> = None;
    for mask in 1u32..(1u32 << (n - 1)) {
        let size = mask.count_ones() as usize;
        if !window.contains(CutRatio::from_sides(size, n - size).value()) {
            continue;
        }
        let c = mask_capacity(net, mask);
        let realizes_pair = (0..n)
            .filter(|&u| mask >> u & 1 == 1)
            .any(|u| (0..n).any(|v| mask >> v & 1 == 0 && approx_eq(lambda[u][v], c)));
        if realizes_pair && best.is_none_or(|b| c < b) {
            best = Some(c);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_global_minimum() {
        let net = CapacitatedNetwork::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let cut = brute_force_min_cut(&net, None, None).unwrap();
        assert_eq!(cut.capacity, 2.0);
        assert_eq!(cut.side_w, vec![0]);
    }

    #[test]
    fn terminal_ties_pick_minimal_source_side() {
        // Both {0} and {0,1} cost 1; the smaller side wins.
        let net = CapacitatedNetwork::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let cut = brute_force_min_cut(&net, None, Some((0, 2))).unwrap();
        assert_eq!(cut.side_w, vec![0]);
        let cut = brute_force_min_cut(&net, None, Some((2, 0))).unwrap();
        assert_eq!(cut.side_w, vec![2]);
    }

    #[test]
    fn window_restricts_candidates() {
        let net = CapacitatedNetwork::new(4, [(0, 1, 1.0), (1, 2, 5.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(brute_force_min_cut(&net, None, None).unwrap().capacity, 1.0);
        let cut = brute_force_min_cut(&net, Some(RhoWindow::new(1.0, 1.0).unwrap()), None).unwrap();
        assert_eq!(cut.capacity, 2.0);
        assert_eq!(cut.side_w, vec![0, 3]);
    }

    #[test]
    fn pair_table_matches_direct_enumeration() {
        let net = CapacitatedNetwork::new(4, [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 2.0), (0, 3, 4.0)])
            .unwrap();
        let table = brute_force_pair_capacities(&net).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    let cut = brute_force_min_cut(&net, None, Some((u, v))).unwrap();
                    assert_eq!(table[u][v], cut.capacity);
                }
            }
        }
    }

    #[test]
    fn refuses_large_networks() {
        let net = CapacitatedNetwork::new(21, (0..20).map(|i| (i, i + 1, 1.0))).unwrap();
        assert!(matches!(
            brute_force_min_cut(&net, None, None),
            Err(ScenarioError::OracleTooLarge { n: 21, .. })
        ));
    }

    #[test]
    fn pairwise_bound_exceeds_balanced_minimum_on_a_square() {
        // Unit 4-cycle: {0,1}|{2,3} costs 2 and is balanced, and every pair
        // has minimum cut 2, so the bound is attained here.
        let net = CapacitatedNetwork::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
        let w = RhoWindow::new(1.0, 1.0).unwrap();
        assert_eq!(brute_force_pairwise_ratio_cut(&net, w).unwrap(), Some(2.0));
        // A heavy chord 0-2: the cheapest balanced split {0,2}|{1,3} costs 4
        // but is no pair's minimum cut (those cost 2 or 7).
        let net = CapacitatedNetwork::new(
            4,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0), (0, 2, 5.0)],
        )
        .unwrap();
        assert_eq!(brute_force_min_cut(&net, Some(w), None).unwrap().capacity, 4.0);
        assert_eq!(brute_force_pairwise_ratio_cut(&net, w).unwrap(), Some(7.0));
    }
}
