use serde::{Deserialize, Serialize};

use super::connectivity::Connectivity;
use super::series::DisplacementSeries;
use super::KinematicsError;
use crate::netflow::{CapacitatedNetwork, Link, NetflowError};

/// Relative displacements below this many millimeters count as zero motion.
pub const DEFAULT_EPSILON_MM: f64 = 1e-3;

/// Baseline against which displacement changes are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisplacementWindow {
    /// Change over the last `w` states.
    Increment(usize),
    /// Change since the first state.
    Cumulative,
}

impl Default for DisplacementWindow {
    fn default() -> Self {
        DisplacementWindow::Increment(1)
    }
}

impl DisplacementWindow {
    /// First state index at which the window is defined.
    pub fn first_valid_state(&self) -> usize {
        match *self {
            DisplacementWindow::Increment(w) => w,
            DisplacementWindow::Cumulative => 1,
        }
    }

    fn baseline(&self, t: usize) -> Result<usize, KinematicsError> {
        match *self {
            DisplacementWindow::Increment(0) => {
                Err(KinematicsError::Invalid("increment window must be at least 1".into()))
            }
            DisplacementWindow::Increment(w) => {
                t.checked_sub(w).ok_or(KinematicsError::WindowOutOfRange { t, window: w })
            }
            DisplacementWindow::Cumulative => Ok(0),
        }
    }
}

/// Magnitude of the relative displacement of the link's endpoints between
/// the window baseline and state `t`, in the series' displacement units.
pub fn relative_displacement(
    series: &DisplacementSeries,
    link: Link,
    t: usize,
    window: DisplacementWindow,
) -> Result<f64, KinematicsError> {
    if t >= series.state_count() {
        return Err(KinematicsError::StateOutOfRange { t, states: series.state_count() });
    }
    if link.hi() >= series.point_count() {
        return Err(KinematicsError::Connectivity(format!("link {link} references an unknown point")));
    }
    let t0 = window.baseline(t)?;
    Ok(rel_norm(series, link.lo(), link.hi(), t0, t))
}

fn rel_norm(series: &DisplacementSeries, i: usize, j: usize, t0: usize, t: usize) -> f64 {
    let (a1, a0) = (series.displacement(t, i), series.displacement(t0, i));
    let (b1, b0) = (series.displacement(t, j), series.displacement(t0, j));
    let mut sq = 0.0;
    for k in 0..series.dim() {
        let d = (a1[k] - a0[k]) - (b1[k] - b0[k]);
        sq += d * d;
    }
    sq.sqrt()
}

/// Capacitated network of state `t` over the local node ids of `conn`:
/// each link gets `1 / max(|du|, epsilon)^2`.
pub fn assign_capacities(
    conn: &Connectivity,
    series: &DisplacementSeries,
    t: usize,
    window: DisplacementWindow,
    epsilon: f64,
) -> Result<CapacitatedNetwork, KinematicsError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(KinematicsError::InvalidEpsilon(epsilon));
    }
    if t >= series.state_count() {
        return Err(KinematicsError::StateOutOfRange { t, states: series.state_count() });
    }
    let t0 = window.baseline(t)?;
    if let Some(&p) = conn.nodes.iter().find(|&&p| p >= series.point_count()) {
        return Err(KinematicsError::Connectivity(format!("node maps to unknown point {p}")));
    }
    let caps = conn.links.iter().map(|l| {
        let du = rel_norm(series, conn.nodes[l.lo()], conn.nodes[l.hi()], t0, t).max(epsilon);
        (l.lo(), l.hi(), 1.0 / (du * du))
    });
    CapacitatedNetwork::new(conn.node_count(), caps).map_err(|e: NetflowError| e.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{restrict_to_largest_component, ObservationPoint, TimeStamp};
    use crate::netflow::min_cut;

    fn series(dim: usize, states: &[&[f64]]) -> DisplacementSeries {
        let l = states[0].len() / dim;
        let points =
            (0..l).map(|id| ObservationPoint { id, label: id as u64, coords: vec![id as f64, 0.0] }).collect();
        let times = (0..states.len()).map(|t| TimeStamp::index(t as i64)).collect();
        DisplacementSeries::new(points, times, dim, states.concat()).unwrap()
    }

    #[test]
    fn rigid_pair_has_zero_relative_motion() {
        let s = series(1, &[&[0.0, 5.0], &[2.0, 7.0]]);
        let du = relative_displacement(&s, Link::new(0, 1), 1, DisplacementWindow::Increment(1)).unwrap();
        assert_eq!(du, 0.0);
    }

    #[test]
    fn opposite_line_of_sight_motion_adds() {
        let s = series(1, &[&[0.0, 0.0], &[3.0, -1.0]]);
        let du = relative_displacement(&s, Link::new(0, 1), 1, DisplacementWindow::Increment(1)).unwrap();
        assert_eq!(du, 4.0);
    }

    #[test]
    fn planar_norm() {
        let s = series(2, &[&[0.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]]);
        let du = relative_displacement(&s, Link::new(0, 1), 1, DisplacementWindow::Increment(1)).unwrap();
        assert!((du - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn window_bounds() {
        let s = series(1, &[&[0.0, 0.0], &[1.0, 0.0], &[3.0, 0.0]]);
        let l = Link::new(0, 1);
        assert!(matches!(
            relative_displacement(&s, l, 1, DisplacementWindow::Increment(2)),
            Err(KinematicsError::WindowOutOfRange { .. })
        ));
        assert_eq!(relative_displacement(&s, l, 2, DisplacementWindow::Increment(1)).unwrap(), 2.0);
        assert_eq!(relative_displacement(&s, l, 2, DisplacementWindow::Cumulative).unwrap(), 3.0);
        assert!(relative_displacement(&s, l, 3, DisplacementWindow::Cumulative).is_err());
    }

    #[test]
    fn capacity_formula_and_floor() {
        let s = series(1, &[&[0.0, 0.0, 0.0], &[0.5, 0.0, 0.0]]);
        let conn = restrict_to_largest_component(3, &[Link::new(0, 1), Link::new(1, 2)]);
        let net = assign_capacities(&conn, &s, 1, DisplacementWindow::Increment(1), DEFAULT_EPSILON_MM).unwrap();
        assert_eq!(net.capacity_between(0, 1), Some(4.0));
        assert!((net.capacity_between(1, 2).unwrap() - 1e6).abs() < 1e-6);
        assert!(assign_capacities(&conn, &s, 1, DisplacementWindow::Increment(1), 0.0).is_err());
    }

    #[test]
    fn chain_min_cut_sits_on_the_faster_link() {
        // |du| = 1 on {0,1} and 2 on {1,2}.
        let s = series(1, &[&[0.0, 0.0, 0.0], &[0.0, 1.0, 3.0]]);
        let conn = restrict_to_largest_component(3, &[Link::new(0, 1), Link::new(1, 2)]);
        let net = assign_capacities(&conn, &s, 1, DisplacementWindow::Increment(1), DEFAULT_EPSILON_MM).unwrap();
        assert_eq!(net.capacities(), &[1.0, 0.25]);
        let cut = min_cut(&net, 0, 2).unwrap();
        assert_eq!(cut.capacity, 0.25);
        assert_eq!(cut.links, vec![Link::new(1, 2)]);
    }

    #[test]
    fn capacities_map_through_local_ids() {
        // Point 0 is isolated, so local node 0 is series point 1.
        let s = series(1, &[&[0.0, 0.0, 0.0], &[9.0, 0.0, 0.5]]);
        let conn = restrict_to_largest_component(3, &[Link::new(1, 2)]);
        let net = assign_capacities(&conn, &s, 1, DisplacementWindow::Increment(1), DEFAULT_EPSILON_MM).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.capacity_between(0, 1), Some(4.0));
    }
}
