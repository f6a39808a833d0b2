use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{CapacitatedNetwork, Link, NetflowError, NodeId};

/// Relative tolerance used when comparing capacities and flow values.
pub const REL_TOL: f64 = 1e-9;

/// `a` and `b` agree within [`REL_TOL`] relative to the larger magnitude
/// (absolute near zero).
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Orders two capacities, treating values within [`REL_TOL`] as equal.
pub fn cmp_capacity(a: f64, b: f64) -> Ordering {
    if approx_eq(a, b) {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Node-count balance of a bipartition: smaller side over larger side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRatio {
    pub smaller: usize,
    pub larger: usize,
}

impl CutRatio {
    pub fn from_sides(a: usize, b: usize) -> Self {
        CutRatio { smaller: a.min(b), larger: a.max(b) }
    }

    pub fn value(&self) -> f64 {
        self.smaller as f64 / self.larger as f64
    }

    /// Exact comparison by cross-multiplication.
    pub fn cmp_exact(&self, other: &CutRatio) -> Ordering {
        (self.smaller * other.larger).cmp(&(other.smaller * self.larger))
    }
}

/// A cut realized in a network: the crossing links, their total capacity
/// and the two node sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    /// Crossing links, sorted.
    pub links: Vec<Link>,
    pub capacity: f64,
    /// Side containing the source (or the designated endpoint), sorted.
    pub side_w: Vec<NodeId>,
    /// Complement of `side_w`, sorted.
    pub side_w_prime: Vec<NodeId>,
    pub ratio: f64,
    /// Explicit source-sink pair this cut separates, when known.
    pub terminals: Option<(NodeId, NodeId)>,
}

impl CutResult {
    /// Realizes the bipartition described by `in_w` on `net`.
    pub(crate) fn from_membership(
        net: &CapacitatedNetwork,
        in_w: &[bool],
        terminals: Option<(NodeId, NodeId)>,
    ) -> Self {
        let mut links = Vec::new();
        let mut capacity = 0.0;
        for (k, l) in net.links().iter().enumerate() {
            if in_w[l.lo()] != in_w[l.hi()] {
                links.push(*l);
                capacity += net.capacity_of(k);
            }
        }
        let (side_w, side_w_prime): (Vec<NodeId>, Vec<NodeId>) =
            (0..net.node_count()).partition(|&v| in_w[v]);
        let ratio = CutRatio::from_sides(side_w.len(), side_w_prime.len()).value();
        CutResult { links, capacity, side_w, side_w_prime, ratio, terminals }
    }

    pub fn cut_ratio(&self) -> CutRatio {
        CutRatio::from_sides(self.side_w.len(), self.side_w_prime.len())
    }

    /// Membership mask over `n` nodes: `true` for nodes in `side_w`.
    pub fn membership(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.side_w {
            m[v] = true;
        }
        m
    }

    /// Nodes incident to at least one crossing link, sorted.
    pub fn boundary_nodes(&self) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = self.links.iter().flat_map(|l| [l.lo(), l.hi()]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }
}

/// Total capacity of the links crossing between `side` and its complement.
pub fn cut_capacity(net: &CapacitatedNetwork, side: &[NodeId]) -> Result<f64, NetflowError> {
    let mut in_side = vec![false; net.node_count()];
    let mut count = 0;
    for &v in side {
        net.check_node(v)?;
        if !in_side[v] {
            in_side[v] = true;
            count += 1;
        }
    }
    if count == 0 || count == net.node_count() {
        return Err(NetflowError::ImproperSide { size: count, n: net.node_count() });
    }
    Ok(net
        .links()
        .iter()
        .enumerate()
        .filter(|(_, l)| in_side[l.lo()] != in_side[l.hi()])
        .map(|(k, _)| net.capacity_of(k))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CapacitatedNetwork {
        CapacitatedNetwork::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_single_node_side() {
        assert_eq!(cut_capacity(&triangle(), &[0]).unwrap(), 2.0);
    }

    #[test]
    fn side_and_complement_agree() {
        let net = CapacitatedNetwork::new(4, [(0, 1, 1.5), (1, 2, 2.0), (2, 3, 0.25), (0, 3, 4.0)])
            .unwrap();
        let a = cut_capacity(&net, &[0, 1]).unwrap();
        let b = cut_capacity(&net, &[2, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, 6.0);
    }

    #[test]
    fn empty_and_full_sides_are_rejected() {
        let net = triangle();
        assert!(matches!(cut_capacity(&net, &[]), Err(NetflowError::ImproperSide { .. })));
        assert!(matches!(cut_capacity(&net, &[0, 1, 2]), Err(NetflowError::ImproperSide { .. })));
        assert!(matches!(cut_capacity(&net, &[5]), Err(NetflowError::UnknownNode { .. })));
    }

    #[test]
    fn ratio_compares_exactly() {
        let a = CutRatio::from_sides(3, 6);
        let b = CutRatio::from_sides(4, 8);
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        assert_eq!(a.value(), 0.5);
        assert_eq!(CutRatio::from_sides(2, 7).cmp_exact(&a), Ordering::Less);
    }

    #[test]
    fn tolerant_capacity_order() {
        assert_eq!(cmp_capacity(1.0, 1.0 + 1e-12), Ordering::Equal);
        assert_eq!(cmp_capacity(1.0, 1.0 + 1e-6), Ordering::Less);
        assert_eq!(cmp_capacity(0.0, 0.0), Ordering::Equal);
    }
}
