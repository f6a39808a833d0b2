//! Maximum flow by blocking flows on layered residual graphs (Dinic).
//!
//! Each undirected link `k = {a, b}` with capacity `c` becomes the arc pair
//! `2k: a -> b` and `2k + 1: b -> a`, each starting with residual `c` and
//! each acting as the other's reverse arc. The net flow on the link, oriented
//! `a -> b`, is `c - residual[2k]`.
//!
//! The number of phases is bounded by `n` and does not depend on the
//! capacity values, so real-valued capacities terminate.

use std::collections::VecDeque;

use super::{CapacitatedNetwork, CutResult, NetflowError, NodeId};

/// Residuals at or below this fraction of their link capacity are treated
/// as saturated. Float round-off on a link never exceeds a few ulps of its
/// own capacity, so the threshold is scale free and per link.
const SATURATION_TOL: f64 = 1e-11;

/// A feasible flow from `source` to `sink`.
#[derive(Clone, Debug)]
pub struct FlowAssignment {
    pub source: NodeId,
    pub sink: NodeId,
    /// Flow value f(x): net outflow of the source.
    pub value: f64,
    /// Net flow per network link, oriented from `lo` to `hi`.
    pub link_flow: Vec<f64>,
}

impl FlowAssignment {
    /// Flow on each directed arc as `(from, to, x)` with `x >= 0`.
    /// Both orientations of every link are listed; at most one is non-zero.
    pub fn arc_flows<'a>(
        &'a self,
        net: &'a CapacitatedNetwork,
    ) -> impl Iterator<Item = (NodeId, NodeId, f64)> + 'a {
        net.links().iter().zip(&self.link_flow).flat_map(|(l, &f)| {
            [(l.lo(), l.hi(), f.max(0.0)), (l.hi(), l.lo(), (-f).max(0.0))]
        })
    }

    /// Largest |inflow - outflow| over nodes other than source and sink.
    pub fn conservation_violation(&self, net: &CapacitatedNetwork) -> f64 {
        let excess = self.net_outflow(net);
        (0..net.node_count())
            .filter(|&v| v != self.source && v != self.sink)
            .map(|v| excess[v].abs())
            .fold(0.0, f64::max)
    }

    /// Largest amount by which an arc flow exceeds its capacity (0 when
    /// feasible).
    pub fn capacity_violation(&self, net: &CapacitatedNetwork) -> f64 {
        self.link_flow
            .iter()
            .zip(net.capacities())
            .map(|(f, c)| (f.abs() - c).max(0.0))
            .fold(0.0, f64::max)
    }

    fn net_outflow(&self, net: &CapacitatedNetwork) -> Vec<f64> {
        let mut out = vec![0.0; net.node_count()];
        for (l, &f) in net.links().iter().zip(&self.link_flow) {
            out[l.lo()] += f;
            out[l.hi()] -= f;
        }
        out
    }
}

/// Reusable Dinic workspace for one network. Solving several source/sink
/// pairs on the same network (as the Gomory-Hu construction does) reuses
/// the buffers.
pub struct FlowSolver<'a> {
    net: &'a CapacitatedNetwork,
    residual: Vec<f64>,
    level: Vec<u32>,
    cursor: Vec<usize>,
    queue: VecDeque<NodeId>,
    path: Vec<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl<'a> FlowSolver<'a> {
    pub fn new(net: &'a CapacitatedNetwork) -> Self {
        let n = net.node_count();
        FlowSolver {
            net,
            residual: vec![0.0; 2 * net.link_count()],
            level: vec![UNSEEN; n],
            cursor: vec![0; n],
            queue: VecDeque::with_capacity(n),
            path: Vec::new(),
        }
    }

    #[inline]
    fn open(&self, arc: usize) -> bool {
        self.residual[arc] > self.net.capacity_of(arc >> 1) * SATURATION_TOL
    }

    /// Arc index leaving `v` along adjacency entry `(w, k)`.
    #[inline]
    fn arc_from(&self, v: NodeId, k: usize) -> usize {
        if self.net.link(k).lo() == v {
            2 * k
        } else {
            2 * k + 1
        }
    }

    fn check_terminals(&self, source: NodeId, sink: NodeId) -> Result<(), NetflowError> {
        self.net.check_node(source)?;
        self.net.check_node(sink)?;
        if source == sink {
            return Err(NetflowError::SameSourceSink { node: source });
        }
        Ok(())
    }

    /// Computes a maximum flow; residuals stay available for
    /// [`FlowSolver::source_side`].
    pub fn solve(&mut self, source: NodeId, sink: NodeId) -> Result<f64, NetflowError> {
        self.check_terminals(source, sink)?;
        for (k, &c) in self.net.capacities().iter().enumerate() {
            self.residual[2 * k] = c;
            self.residual[2 * k + 1] = c;
        }
        let mut value = 0.0;
        while self.build_levels(source, sink) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            value += self.blocking_flow(source, sink);
        }
        Ok(value)
    }

    fn build_levels(&mut self, source: NodeId, sink: NodeId) -> bool {
        self.level.iter_mut().for_each(|l| *l = UNSEEN);
        self.queue.clear();
        self.level[source] = 0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            let next = self.level[v] + 1;
            for &(w, k) in self.net.neighbors(v) {
                if self.level[w] == UNSEEN && self.open(self.arc_from(v, k)) {
                    self.level[w] = next;
                    if w == sink {
                        return true;
                    }
                    self.queue.push_back(w);
                }
            }
        }
        false
    }

    /// Iterative DFS over the level graph with per-node cursors.
    fn blocking_flow(&mut self, source: NodeId, sink: NodeId) -> f64 {
        let sink_level = self.level[sink];
        let mut total = 0.0;
        let mut v = source;
        self.path.clear();
        loop {
            if v == sink {
                let push = self
                    .path
                    .iter()
                    .map(|&a| self.residual[a])
                    .fold(f64::INFINITY, f64::min);
                let mut retreat_to = None;
                for (i, &a) in self.path.iter().enumerate() {
                    self.residual[a] -= push;
                    self.residual[a ^ 1] += push;
                    if retreat_to.is_none() && !self.open(a) {
                        retreat_to = Some(i);
                    }
                }
                total += push;
                // Back up to the tail of the first saturated arc.
                let i = retreat_to.unwrap_or(0);
                self.path.truncate(i);
                v = self.path.last().map_or(source, |&a| self.head(a));
                continue;
            }

            let adj = self.net.neighbors(v);
            let mut advanced = false;
            if self.level[v] < sink_level {
                while self.cursor[v] < adj.len() {
                    let (w, k) = adj[self.cursor[v]];
                    let arc = self.arc_from(v, k);
                    if self.level[w] == self.level[v] + 1 && self.open(arc) {
                        self.path.push(arc);
                        v = w;
                        advanced = true;
                        break;
                    }
                    self.cursor[v] += 1;
                }
            }
            if advanced {
                continue;
            }
            // Dead end: drop v from the level graph and retreat.
            self.level[v] = UNSEEN;
            match self.path.pop() {
                None => return total,
                Some(a) => {
                    v = self.tail(a);
                    self.cursor[v] += 1;
                }
            }
        }
    }

    #[inline]
    fn head(&self, arc: usize) -> NodeId {
        let l = self.net.link(arc >> 1);
        if arc & 1 == 0 {
            l.hi()
        } else {
            l.lo()
        }
    }

    #[inline]
    fn tail(&self, arc: usize) -> NodeId {
        let l = self.net.link(arc >> 1);
        if arc & 1 == 0 {
            l.lo()
        } else {
            l.hi()
        }
    }

    /// Nodes reachable from `source` through open residual arcs after
    /// [`FlowSolver::solve`]. This is the inclusion-minimal source side of a
    /// minimum cut.
    pub fn source_side(&mut self, source: NodeId) -> Vec<bool> {
        let mut reach = vec![false; self.net.node_count()];
        self.queue.clear();
        reach[source] = true;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            for &(w, k) in self.net.neighbors(v) {
                if !reach[w] && self.open(self.arc_from(v, k)) {
                    reach[w] = true;
                    self.queue.push_back(w);
                }
            }
        }
        reach
    }

    fn link_flows(&self) -> Vec<f64> {
        self.net
            .capacities()
            .iter()
            .enumerate()
            .map(|(k, &c)| c - self.residual[2 * k])
            .collect()
    }
}

/// Maximum `source`-`sink` flow of `net`.
pub fn max_flow(
    net: &CapacitatedNetwork,
    source: NodeId,
    sink: NodeId,
) -> Result<FlowAssignment, NetflowError> {
    let mut solver = FlowSolver::new(net);
    let value = solver.solve(source, sink)?;
    Ok(FlowAssignment { source, sink, value, link_flow: solver.link_flows() })
}

/// Minimum `source`-`sink` cut. `side_w` is the set of nodes reachable from
/// the source in the final residual graph.
pub fn min_cut(
    net: &CapacitatedNetwork,
    source: NodeId,
    sink: NodeId,
) -> Result<CutResult, NetflowError> {
    let mut solver = FlowSolver::new(net);
    solver.solve(source, sink)?;
    let side = solver.source_side(source);
    Ok(CutResult::from_membership(net, &side, Some((source, sink))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netflow::Link;

    fn path3() -> CapacitatedNetwork {
        CapacitatedNetwork::new(3, [(0, 1, 3.0), (1, 2, 5.0)]).unwrap()
    }

    #[test]
    fn series_bottleneck() {
        let flow = max_flow(&path3(), 0, 2).unwrap();
        assert_eq!(flow.value, 3.0);
        assert_eq!(flow.conservation_violation(&path3()), 0.0);
    }

    #[test]
    fn single_link() {
        let net = CapacitatedNetwork::new(2, [(0, 1, 7.0)]).unwrap();
        assert_eq!(max_flow(&net, 0, 1).unwrap().value, 7.0);
        assert_eq!(max_flow(&net, 1, 0).unwrap().value, 7.0);
    }

    #[test]
    fn path_min_cut_is_first_link() {
        let cut = min_cut(&path3(), 0, 2).unwrap();
        assert_eq!(cut.links, vec![Link::new(0, 1)]);
        assert_eq!(cut.capacity, 3.0);
        assert_eq!(cut.side_w, vec![0]);
        assert_eq!(cut.side_w_prime, vec![1, 2]);
    }

    #[test]
    fn disconnected_terminals_have_empty_cut() {
        let net = CapacitatedNetwork::new(4, [(0, 1, 2.0), (2, 3, 2.0)]).unwrap();
        let cut = min_cut(&net, 0, 3).unwrap();
        assert_eq!(cut.capacity, 0.0);
        assert!(cut.links.is_empty());
        assert_eq!(cut.side_w, vec![0, 1]);
        assert_eq!(max_flow(&net, 0, 3).unwrap().value, 0.0);
    }

    #[test]
    fn terminal_errors() {
        let net = path3();
        assert!(matches!(max_flow(&net, 1, 1), Err(NetflowError::SameSourceSink { node: 1 })));
        assert!(matches!(max_flow(&net, 0, 9), Err(NetflowError::UnknownNode { node: 9, .. })));
        assert!(matches!(min_cut(&net, 4, 0), Err(NetflowError::UnknownNode { .. })));
    }

    #[test]
    fn zero_capacity_link_carries_nothing() {
        let net = CapacitatedNetwork::new(3, [(0, 1, 0.0), (1, 2, 4.0), (0, 2, 1.0)]).unwrap();
        let flow = max_flow(&net, 0, 2).unwrap();
        assert_eq!(flow.value, 1.0);
        assert_eq!(flow.link_flow[0], 0.0);
        let cut = min_cut(&net, 0, 2).unwrap();
        assert_eq!(cut.side_w, vec![0]);
        assert_eq!(cut.capacity, 1.0);
    }

    #[test]
    fn arc_flows_are_non_negative_and_within_capacity() {
        let net = CapacitatedNetwork::new(
            5,
            [(0, 1, 2.0), (0, 2, 3.0), (1, 2, 1.0), (1, 3, 2.5), (2, 4, 1.5), (3, 4, 4.0)],
        )
        .unwrap();
        let flow = max_flow(&net, 0, 4).unwrap();
        for (from, to, x) in flow.arc_flows(&net) {
            assert!(x >= 0.0);
            assert!(x <= net.capacity_between(from, to).unwrap());
        }
        assert!(flow.capacity_violation(&net) == 0.0);
        assert!(flow.conservation_violation(&net) < 1e-12);
        assert_eq!(flow.value, 4.0);
    }
}
