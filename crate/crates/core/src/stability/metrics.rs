//! Clustering quality (silhouette) and temporal persistence (normalized
//! mutual information) of two-cluster labelings.

use std::collections::BTreeMap;

use super::StabilityError;
use crate::kinematics::{DisplacementSeries, DisplacementWindow, KinematicsError};

/// Displacement change of point `p` over `window` ending at state `t`.
pub(crate) fn windowed_increment(
    series: &DisplacementSeries,
    p: usize,
    t: usize,
    window: DisplacementWindow,
) -> Result<Vec<f64>, KinematicsError> {
    let t0 = match window {
        DisplacementWindow::Increment(0) => {
            return Err(KinematicsError::Invalid("increment window must be at least 1".into()))
        }
        DisplacementWindow::Increment(w) => t.checked_sub(w).ok_or(KinematicsError::WindowOutOfRange { t, window: w })?,
        DisplacementWindow::Cumulative => 0,
    };
    if t >= series.state_count() {
        return Err(KinematicsError::StateOutOfRange { t, states: series.state_count() });
    }
    let (a, b) = (series.displacement(t, p), series.displacement(t0, p));
    Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
}

/// Mean silhouette of a two-cluster labeling of `points` (series point ids),
/// using Euclidean distance between windowed displacement increments.
///
/// A point alone in its cluster scores 0, as does a point whose `a` and `b`
/// are both zero.
pub fn silhouette_score(
    series: &DisplacementSeries,
    points: &[usize],
    labels: &[u8],
    t: usize,
    window: DisplacementWindow,
) -> Result<f64, StabilityError> {
    if points.len() != labels.len() {
        return Err(StabilityError::LabelMismatch { left: points.len(), right: labels.len() });
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(StabilityError::InvalidParameter("silhouette labels must be 0 or 1".into()));
    }
    let sizes = [labels.iter().filter(|&&l| l == 0).count(), labels.iter().filter(|&&l| l == 1).count()];
    if sizes[0] == 0 || sizes[1] == 0 {
        return Err(StabilityError::SingleCluster);
    }
    let dim = series.dim();
    let mut coords = Vec::with_capacity(points.len() * dim);
    for &p in points {
        if p >= series.point_count() {
            return Err(StabilityError::InvalidParameter(format!("point {p} is not in the series")));
        }
        coords.extend(windowed_increment(series, p, t, window)?);
    }
    let at = |i: usize| &coords[i * dim..(i + 1) * dim];
    let dist = |i: usize, j: usize| -> f64 {
        at(i).iter().zip(at(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };

    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i] as usize;
        if sizes[own] == 1 {
            continue;
        }
        let mut sums = [0.0f64; 2];
        for j in 0..n {
            if j != i {
                sums[labels[j] as usize] += dist(i, j);
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = sums[1 - own] / sizes[1 - own] as f64;
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    Ok(total / n as f64)
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `I(X;Y) / sqrt(H(X) H(Y))` between two
/// labelings of the same points (natural log).
///
/// When either entropy vanishes the ratio is undefined; the result is 1 if
/// the labelings induce the same partition and 0 otherwise.
pub fn nmi<A: Ord + Copy, B: Ord + Copy>(x: &[A], y: &[B]) -> Result<f64, StabilityError> {
    if x.len() != y.len() {
        return Err(StabilityError::LabelMismatch { left: x.len(), right: y.len() });
    }
    if x.is_empty() {
        return Err(StabilityError::InvalidParameter("labelings are empty".into()));
    }
    let n = x.len() as f64;
    let mut joint: BTreeMap<(A, B), usize> = BTreeMap::new();
    let mut cx: BTreeMap<A, usize> = BTreeMap::new();
    let mut cy: BTreeMap<B, usize> = BTreeMap::new();
    for (&a, &b) in x.iter().zip(y) {
        *joint.entry((a, b)).or_default() += 1;
        *cx.entry(a).or_default() += 1;
        *cy.entry(b).or_default() += 1;
    }
    // Same partition iff the contingency table is a bijection. Answering
    // that case exactly keeps rounding out of the persistence test.
    let same = joint.len() == cx.len() && joint.len() == cy.len();
    if same {
        return Ok(1.0);
    }
    let hx = entropy(cx.values().copied(), n);
    let hy = entropy(cy.values().copied(), n);
    if hx == 0.0 || hy == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (&(a, b), &c) in &joint {
        let pxy = c as f64 / n;
        let px = cx[&a] as f64 / n;
        let py = cy[&b] as f64 / n;
        mi += pxy * (pxy / (px * py)).ln();
    }
    Ok((mi / (hx * hy).sqrt()).clamp(0.0, 1.0))
}
