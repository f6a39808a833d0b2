//! Balance-constrained bottleneck search over the cuts stored in a
//! Gomory-Hu tree.
//!
//! Every tree link is scored by its weight and by the node-count ratio of
//! the two components left when it is removed. The admissible link of least
//! weight wins; ties go to the smaller ratio, then to the lexicographically
//! smallest link.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::cut::{cmp_capacity, CutRatio};
use super::{CapacitatedNetwork, CutResult, GomoryHuTree, Link, NetflowError};

/// Inclusive bounds on the cut ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoWindow {
    pub min: f64,
    pub max: f64,
}

impl RhoWindow {
    pub fn new(min: f64, max: f64) -> Result<Self, NetflowError> {
        if !(min > 0.0 && min <= max && max <= 1.0) {
            return Err(NetflowError::InvalidRhoWindow { min, max });
        }
        Ok(RhoWindow { min, max })
    }

    /// `[0.3, 1]`: the smaller side holds at least 30% as many nodes as the
    /// larger one.
    pub fn primary() -> Self {
        RhoWindow { min: 0.3, max: 1.0 }
    }

    /// `[0.03, 0.3]`: small clusters near the edge of the monitored domain.
    pub fn secondary() -> Self {
        RhoWindow { min: 0.03, max: 0.3 }
    }

    pub fn contains(&self, ratio: f64) -> bool {
        self.min <= ratio && ratio <= self.max
    }

    pub fn validate(&self) -> Result<(), NetflowError> {
        RhoWindow::new(self.min, self.max).map(|_| ())
    }
}

/// One row of the scan over tree links: the link, its weight and the ratio
/// of the components its removal produces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub link: Link,
    pub weight: f64,
    pub ratio: CutRatio,
    /// Index into [`GomoryHuTree::links`].
    pub tree_link: usize,
    /// Size of the component holding `link.lo()`.
    pub lo_side: usize,
}

/// Scores every tree link, in tree-link order.
pub fn ratio_scan(tree: &GomoryHuTree) -> Vec<RatioEntry> {
    let n = tree.node_count();
    // Root at 0 and accumulate subtree sizes in reverse BFS order.
    let mut order = Vec::with_capacity(n);
    let mut parent_link = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(w, i) in tree.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent_link[w] = i;
                order.push(w);
            }
        }
    }
    let mut subtree = vec![1usize; n];
    let mut below = vec![0usize; n - 1];
    let mut child_of = vec![0usize; n - 1];
    for &v in order.iter().rev() {
        let i = parent_link[v];
        if i != usize::MAX {
            below[i] = subtree[v];
            child_of[i] = v;
            let p = tree.links()[i].link.other(v);
            subtree[p] += subtree[v];
        }
    }
    tree.links()
        .iter()
        .enumerate()
        .map(|(i, tl)| {
            let lo_side = if child_of[i] == tl.link.lo() { below[i] } else { n - below[i] };
            RatioEntry {
                link: tl.link,
                weight: tl.weight,
                ratio: CutRatio::from_sides(below[i], n - below[i]),
                tree_link: i,
                lo_side,
            }
        })
        .collect()
}

fn rank(a: &RatioEntry, b: &RatioEntry) -> Ordering {
    cmp_capacity(a.weight, b.weight)
        .then_with(|| a.ratio.cmp_exact(&b.ratio))
        .then_with(|| a.link.cmp(&b.link))
}

/// Best admissible entry of a scan, if any.
pub fn select_admissible(scan: &[RatioEntry], window: RhoWindow) -> Option<&RatioEntry> {
    scan.iter()
        .filter(|e| window.contains(e.ratio.value()))
        .min_by(|a, b| rank(a, b))
}

/// Minimum-weight tree cut whose ratio lies in `window`, realized in `net`.
/// `side_w` is the component holding the smaller endpoint of the selected
/// tree link.
pub fn ratio_constrained_cut(
    tree: &GomoryHuTree,
    net: &CapacitatedNetwork,
    window: RhoWindow,
) -> Result<CutResult, NetflowError> {
    window.validate()?;
    if tree.node_count() != net.node_count() {
        return Err(NetflowError::TreeMismatch { tree: tree.node_count(), net: net.node_count() });
    }
    let scan = ratio_scan(tree);
    let best = select_admissible(&scan, window)
        .ok_or(NetflowError::NoAdmissibleCut { min: window.min, max: window.max })?;
    Ok(realize_entry(tree, net, best))
}

/// Realizes a scan entry in `net`; `side_w` holds the entry link's smaller endpoint.
pub fn realize_entry(tree: &GomoryHuTree, net: &CapacitatedNetwork, entry: &RatioEntry) -> CutResult {
    let side = tree.component_of(entry.link.lo(), entry.tree_link);
    let tl = tree.links()[entry.tree_link];
    CutResult::from_membership(net, &side, Some((tl.source, tl.sink)))
}
