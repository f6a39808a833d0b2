use log::warn;
use serde::{Deserialize, Serialize};

use super::series::ObservationPoint;
use super::KinematicsError;
use crate::netflow::Link;

/// Multiple of the median nearest-neighbour spacing used as the default
/// proximity threshold. On a regular grid this admits the diagonal
/// neighbours (spacing times 1.414) and nothing further.
pub const PROXIMITY_FACTOR: f64 = 1.45;

/// Contact links per time state, over point ids of the series.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContactSchedule {
    per_state: Vec<Vec<Link>>,
}

impl ContactSchedule {
    pub fn new(per_state: Vec<Vec<Link>>) -> Self {
        ContactSchedule { per_state }
    }

    pub fn state_count(&self) -> usize {
        self.per_state.len()
    }

    pub fn links_at(&self, t: usize) -> &[Link] {
        self.per_state.get(t).map_or(&[], Vec::as_slice)
    }
}

/// How points are linked into the physical network.
#[derive(Clone, Debug, PartialEq)]
pub enum ConnectivitySpec {
    /// Every pair within `threshold` meters, fixed over time.
    Proximity { threshold: f64 },
    /// Contact lists that change with the state.
    ExplicitContacts(ContactSchedule),
}

/// The network actually analyzed at one state: the largest connected
/// component of the link set, renumbered densely.
#[derive(Clone, Debug, PartialEq)]
pub struct Connectivity {
    /// Series point id of each local node, increasing.
    pub nodes: Vec<usize>,
    /// Links over local node ids.
    pub links: Vec<Link>,
    /// Series point ids outside the analyzed component, increasing.
    pub excluded: Vec<usize>,
}

impl Connectivity {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Median nearest-neighbour distance times [`PROXIMITY_FACTOR`].
pub fn default_proximity_threshold(points: &[ObservationPoint]) -> Result<f64, KinematicsError> {
    if points.len() < 2 {
        return Err(KinematicsError::Connectivity("need at least two points for a proximity threshold".into()));
    }
    let mut nn: Vec<f64> = points
        .iter()
        .map(|p| {
            points
                .iter()
                .filter(|q| q.id != p.id)
                .map(|q| p.distance(q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    nn.sort_by(f64::total_cmp);
    let m = nn.len();
    let median = if m % 2 == 1 { nn[m / 2] } else { 0.5 * (nn[m / 2 - 1] + nn[m / 2]) };
    if median <= 0.0 {
        return Err(KinematicsError::Connectivity("points share coordinates; median spacing is zero".into()));
    }
    Ok(PROXIMITY_FACTOR * median)
}

/// All pairs at Euclidean distance `<= threshold`, sorted.
pub fn proximity_links(points: &[ObservationPoint], threshold: f64) -> Result<Vec<Link>, KinematicsError> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(KinematicsError::Connectivity(format!("proximity threshold must be positive (got {threshold})")));
    }
    // Sweep along x so only nearby pairs are measured.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].coords[0].total_cmp(&points[b].coords[0]).then(a.cmp(&b)));
    let mut links = Vec::new();
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if points[b].coords[0] - points[a].coords[0] > threshold {
                break;
            }
            if points[a].distance(&points[b]) <= threshold {
                links.push(Link::new(points[a].id, points[b].id));
            }
        }
    }
    links.sort_unstable();
    Ok(links)
}

/// Link set over series point ids at state `t`.
pub fn build_connectivity(
    points: &[ObservationPoint],
    spec: &ConnectivitySpec,
    t: usize,
) -> Result<Vec<Link>, KinematicsError> {
    match spec {
        ConnectivitySpec::Proximity { threshold } => proximity_links(points, *threshold),
        ConnectivitySpec::ExplicitContacts(schedule) => {
            let links = schedule.links_at(t).to_vec();
            if let Some(l) = links.iter().find(|l| l.hi() >= points.len()) {
                return Err(KinematicsError::Connectivity(format!("contact {l} references an unknown point")));
            }
            Ok(links)
        }
    }
}

/// Keeps the largest connected component (ties go to the one holding the
/// smallest point id) and renumbers it densely.
pub fn restrict_to_largest_component(n: usize, links: &[Link]) -> Connectivity {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for l in links {
        let (a, b) = (find(&mut parent, l.lo()), find(&mut parent, l.hi()));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let mut size = vec![0usize; n];
    for &r in &roots {
        size[r] += 1;
    }
    // Roots are the smallest member, so the first maximum is the tie winner.
    let best = (0..n).fold(0, |best, r| if size[r] > size[best] { r } else { best });

    let mut local = vec![usize::MAX; n];
    let mut nodes = Vec::new();
    let mut excluded = Vec::new();
    for v in 0..n {
        if roots[v] == best {
            local[v] = nodes.len();
            nodes.push(v);
        } else {
            excluded.push(v);
        }
    }
    if !excluded.is_empty() {
        warn!(
            "connectivity network is disconnected; analyzing the largest component ({} of {n} points)",
            nodes.len()
        );
    }
    let links = links
        .iter()
        .filter(|l| local[l.lo()] != usize::MAX)
        .map(|l| Link::new(local[l.lo()], local[l.hi()]))
        .collect();
    Connectivity { nodes, links, excluded }
}
