//! Gomory-Hu cut trees built with Gusfield's method: `n - 1` max-flow calls
//! on the original network, no contraction.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cut::cmp_capacity;
use super::maxflow::FlowSolver;
use super::{CapacitatedNetwork, CutResult, Link, NetflowError, NodeId};

/// One tree link. `source`/`sink` is the explicit pair whose minimum cut
/// the link encodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeLink {
    pub link: Link,
    pub weight: f64,
    pub source: NodeId,
    pub sink: NodeId,
}

/// A cut tree: removing any tree link splits the nodes into the two sides
/// of a minimum cut between the link's endpoints, with capacity equal to
/// the link weight.
#[derive(Clone, Debug)]
pub struct GomoryHuTree {
    n: usize,
    /// Sorted by `link`.
    links: Vec<TreeLink>,
    /// `(neighbor, tree link index)` per node.
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl GomoryHuTree {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn links(&self) -> &[TreeLink] {
        &self.links
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[v]
    }

    /// Builds the tree from an explicit link list (mainly for tests and
    /// deserialization). Fails unless the links form a spanning tree.
    pub fn from_links(n: usize, mut links: Vec<TreeLink>) -> Result<Self, NetflowError> {
        if n == 0 || links.len() + 1 != n {
            return Err(NetflowError::NotATree);
        }
        links.sort_by_key(|a| a.link);
        let mut adjacency = vec![Vec::new(); n];
        for (i, tl) in links.iter().enumerate() {
            let (a, b) = tl.link.endpoints();
            if b >= n {
                return Err(NetflowError::UnknownNode { node: b, n });
            }
            adjacency[a].push((b, i));
            adjacency[b].push((a, i));
        }
        let tree = GomoryHuTree { n, links, adjacency };
        if tree.component_of(0, usize::MAX).iter().filter(|&&x| x).count() != n {
            return Err(NetflowError::NotATree);
        }
        Ok(tree)
    }

    /// Membership of the component containing `start` after removing tree
    /// link `removed` (pass `usize::MAX` to remove nothing).
    pub(crate) fn component_of(&self, start: NodeId, removed: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &(w, i) in &self.adjacency[v] {
                if i != removed && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Tree links on the unique path from `u` to `v`, in path order.
    pub fn path(&self, u: NodeId, v: NodeId) -> Vec<usize> {
        let mut via = vec![usize::MAX; self.n];
        let mut prev = vec![usize::MAX; self.n];
        let mut stack = vec![u];
        prev[u] = u;
        while let Some(x) = stack.pop() {
            if x == v {
                break;
            }
            for &(w, i) in &self.adjacency[x] {
                if prev[w] == usize::MAX {
                    prev[w] = x;
                    via[w] = i;
                    stack.push(w);
                }
            }
        }
        let mut out = Vec::new();
        let mut x = v;
        while x != u {
            out.push(via[x]);
            x = prev[x];
        }
        out.reverse();
        out
    }

    /// Smallest tree-link weight on the `u`-`v` path: the `u`-`v` minimum
    /// cut capacity.
    pub fn min_cut_value(&self, u: NodeId, v: NodeId) -> f64 {
        self.path(u, v).into_iter().map(|i| self.links[i].weight).fold(f64::INFINITY, f64::min)
    }

    /// Edge-list text: `u v weight` per line, sorted by `(u, v)`, `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for tl in &self.links {
            let _ = writeln!(s, "{} {} {}", tl.link.lo(), tl.link.hi(), tl.weight);
        }
        s
    }
}

/// Builds a Gomory-Hu cut tree of a connected network.
pub fn gomory_hu_tree(net: &CapacitatedNetwork) -> Result<GomoryHuTree, NetflowError> {
    let n = net.node_count();
    if n < 2 {
        return Err(NetflowError::TooFewNodes { n });
    }
    let components = net.components();
    if components.len() > 1 {
        return Err(NetflowError::Disconnected { components: components.len() });
    }

    let mut parent = vec![0usize; n];
    let mut weight = vec![0.0f64; n];
    let mut solver = FlowSolver::new(net);
    for s in 1..n {
        let t = parent[s];
        let f = solver.solve(s, t)?;
        let side = solver.source_side(s);
        weight[s] = f;
        for i in 0..n {
            if i != s && side[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        if side[parent[t]] {
            parent[s] = parent[t];
            parent[t] = s;
            weight[s] = weight[t];
            weight[t] = f;
        }
    }

    let links = (1..n)
        .map(|s| TreeLink {
            link: Link::new(s, parent[s]),
            weight: weight[s],
            source: s,
            sink: parent[s],
        })
        .collect();
    GomoryHuTree::from_links(n, links)
}

/// Minimum `u`-`v` cut read off the tree: the lightest link on the tree
/// path (ties go to the lexicographically smallest link) is removed and the
/// component containing `u` becomes `side_w`.
pub fn query_min_cut(
    tree: &GomoryHuTree,
    net: &CapacitatedNetwork,
    u: NodeId,
    v: NodeId,
) -> Result<CutResult, NetflowError> {
    net.check_node(u)?;
    net.check_node(v)?;
    if tree.node_count() != net.node_count() {
        return Err(NetflowError::TreeMismatch { tree: tree.node_count(), net: net.node_count() });
    }
    if u == v {
        return Err(NetflowError::SameSourceSink { node: u });
    }
    let best = tree
        .path(u, v)
        .into_iter()
        .min_by(|&a, &b| {
            let (la, lb) = (&tree.links[a], &tree.links[b]);
            match cmp_capacity(la.weight, lb.weight) {
                Ordering::Equal => la.link.cmp(&lb.link),
                o => o,
            }
        })
        .expect("distinct nodes have a non-empty tree path");
    let side = tree.component_of(u, best);
    let tl = tree.links[best];
    Ok(CutResult::from_membership(net, &side, Some((tl.source, tl.sink))))
}
