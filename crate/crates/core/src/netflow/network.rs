use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::NetflowError;

/// Index of a node in a [`CapacitatedNetwork`], always in `0..n`.
pub type NodeId = usize;

/// An unordered node pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Link {
    lo: NodeId,
    hi: NodeId,
}

impl Link {
    pub fn new(i: NodeId, j: NodeId) -> Self {
        if i <= j {
            Link { lo: i, hi: j }
        } else {
            Link { lo: j, hi: i }
        }
    }

    pub fn lo(&self) -> NodeId {
        self.lo
    }

    pub fn hi(&self) -> NodeId {
        self.hi
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.lo, self.hi)
    }

    pub fn touches(&self, v: NodeId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint opposite `v`. `v` must be an endpoint.
    pub fn other(&self, v: NodeId) -> NodeId {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Undirected graph with one non-negative capacity per link.
///
/// Links are kept sorted by `(lo, hi)` so that every algorithm iterating
/// over them sees the same order regardless of how the network was built.
/// Adjacency is stored in compressed rows: for node `v`, the entries
/// `adj[adj_start[v]..adj_start[v + 1]]` hold `(neighbor, link index)`.
#[derive(Clone, Debug)]
pub struct CapacitatedNetwork {
    n: usize,
    links: Vec<Link>,
    capacity: Vec<f64>,
    adj_start: Vec<usize>,
    adj: Vec<(NodeId, usize)>,
}

impl CapacitatedNetwork {
    pub fn new<I>(n: usize, links: I) -> Result<Self, NetflowError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut entries: Vec<(Link, f64)> = Vec::new();
        for (i, j, c) in links {
            for v in [i, j] {
                if v >= n {
                    return Err(NetflowError::UnknownNode { node: v, n });
                }
            }
            if i == j {
                return Err(NetflowError::SelfLoop { node: i });
            }
            if !c.is_finite() || c < 0.0 {
                return Err(NetflowError::InvalidCapacity { link: Link::new(i, j), capacity: c });
            }
            entries.push((Link::new(i, j), c));
        }
        entries.sort_by_key(|a| a.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(NetflowError::DuplicateLink { link: w[0].0 });
            }
        }
        let (links, capacity): (Vec<Link>, Vec<f64>) = entries.into_iter().unzip();

        let mut degree = vec![0usize; n + 1];
        for l in &links {
            degree[l.lo + 1] += 1;
            degree[l.hi + 1] += 1;
        }
        for v in 0..n {
            degree[v + 1] += degree[v];
        }
        let adj_start = degree;
        let mut fill = adj_start.clone();
        let mut adj = vec![(0, 0); 2 * links.len()];
        for (k, l) in links.iter().enumerate() {
            adj[fill[l.lo]] = (l.hi, k);
            fill[l.lo] += 1;
            adj[fill[l.hi]] = (l.lo, k);
            fill[l.hi] += 1;
        }

        Ok(CapacitatedNetwork { n, links, capacity, adj_start, adj })
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacity
    }

    pub fn link(&self, k: usize) -> Link {
        self.links[k]
    }

    pub fn capacity_of(&self, k: usize) -> f64 {
        self.capacity[k]
    }

    /// Looks up the capacity of the link joining `i` and `j`, if present.
    pub fn capacity_between(&self, i: NodeId, j: NodeId) -> Option<f64> {
        self.link_index(Link::new(i, j)).map(|k| self.capacity[k])
    }

    pub fn link_index(&self, link: Link) -> Option<usize> {
        self.links.binary_search(&link).ok()
    }

    /// `(neighbor, link index)` pairs incident to `v`.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    pub fn check_node(&self, v: NodeId) -> Result<(), NetflowError> {
        if v < self.n {
            Ok(())
        } else {
            Err(NetflowError::UnknownNode { node: v, n: self.n })
        }
    }

    /// Connected components by link existence (zero-capacity links count).
    /// Components are ordered by their smallest node; nodes inside each
    /// component are sorted.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &(w, _) in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Same topology with every capacity multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, NetflowError> {
        let links = self.links.iter().zip(&self.capacity).map(|(l, &c)| (l.lo, l.hi, c * factor));
        CapacitatedNetwork::new(self.n, links)
    }
}
