use serde::{Deserialize, Serialize};

use super::metrics::silhouette_score;
use super::{StabilityError, StabilityParams};
use crate::kinematics::DisplacementSeries;
use crate::netflow::{
    approx_eq, realize_entry, gomory_hu_tree, ratio_scan, select_admissible, CapacitatedNetwork,
    CutResult, NetflowError,
};

/// Result of analyzing one time state.
///
/// Cut results use the local node ids of the analyzed network; `nodes`
/// maps them back to series point ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateAnalysis {
    /// Series state index.
    pub t: usize,
    /// Time label as given in the input.
    pub time: String,
    pub nodes: Vec<usize>,
    /// Series points left out of this state's network.
    pub excluded: Vec<usize>,
    pub bottleneck: Option<CutResult>,
    pub failure_resistance: Option<f64>,
    /// Per analyzed node: 1 for the active cluster, 0 for the other.
    pub labels: Option<Vec<u8>>,
    /// Whether the active cluster is the bottleneck's `side_w`.
    pub omega_is_w: Option<bool>,
    /// Mean speed (displacement units per state) of `side_w` and
    /// `side_w_prime`.
    pub mean_speed: Option<[f64; 2]>,
    pub silhouette: Option<f64>,
    /// Bottleneck within the secondary (small-cluster) window, if any.
    pub secondary: Option<CutResult>,
    /// Why the metrics are absent, for flagged states.
    pub flag: Option<String>,
}

impl StateAnalysis {
    /// Series point ids of the active cluster.
    pub fn omega_points(&self) -> Option<Vec<usize>> {
        let labels = self.labels.as_ref()?;
        Some(self.nodes.iter().zip(labels).filter(|(_, &l)| l == 1).map(|(&p, _)| p).collect())
    }

    /// Series point ids incident to a bottleneck link, increasing.
    pub fn boundary_points(&self) -> Vec<usize> {
        self.bottleneck
            .as_ref()
            .map(|c| c.boundary_nodes().into_iter().map(|v| self.nodes[v]).collect())
            .unwrap_or_default()
    }
}

fn point_speed(series: &DisplacementSeries, p: usize, t: usize) -> f64 {
    let (a, b) = (series.displacement(t, p), series.displacement(t - 1, p));
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Bottleneck, active cluster and silhouette of state `t`.
///
/// `net` is the capacitated network of the state over local ids and
/// `nodes[v]` the series point of local node `v`. A state without an
/// admissible cut in the primary window is returned flagged, with its
/// metrics absent.
pub fn analyze_state(
    net: &CapacitatedNetwork,
    nodes: &[usize],
    excluded: &[usize],
    series: &DisplacementSeries,
    t: usize,
    params: &StabilityParams,
) -> Result<StateAnalysis, StabilityError> {
    if nodes.len() != net.node_count() {
        return Err(StabilityError::LabelMismatch { left: nodes.len(), right: net.node_count() });
    }
    if t == 0 || t >= series.state_count() {
        return Err(StabilityError::InvalidParameter(format!(
            "state {t} cannot be analyzed (needs 1 <= t < {})",
            series.state_count()
        )));
    }
    params.primary.validate()?;
    let tree = gomory_hu_tree(net)?;
    let scan = ratio_scan(&tree);

    let mut out = StateAnalysis {
        t,
        time: series.times()[t].raw.clone(),
        nodes: nodes.to_vec(),
        excluded: excluded.to_vec(),
        bottleneck: None,
        failure_resistance: None,
        labels: None,
        omega_is_w: None,
        mean_speed: None,
        silhouette: None,
        secondary: None,
        flag: None,
    };
    if let Some(w) = params.secondary {
        w.validate()?;
        out.secondary = select_admissible(&scan, w).map(|e| realize_entry(&tree, net, e));
    }
    let Some(entry) = select_admissible(&scan, params.primary) else {
        out.flag = Some(
            NetflowError::NoAdmissibleCut { min: params.primary.min, max: params.primary.max }.to_string(),
        );
        return Ok(out);
    };
    let cut = realize_entry(&tree, net, entry);

    let speeds: Vec<f64> = nodes.iter().map(|&p| point_speed(series, p, t)).collect();
    let in_w = cut.membership(nodes.len());
    let mean = |side: bool| {
        let (sum, count) = speeds
            .iter()
            .zip(&in_w)
            .filter(|(_, &m)| m == side)
            .fold((0.0, 0usize), |(s, c), (&v, _)| (s + v, c + 1));
        sum / count as f64
    };
    let mean_speed = [mean(true), mean(false)];
    let omega_is_w = if approx_eq(mean_speed[0], mean_speed[1]) {
        // Tie: the cluster holding the fastest point (lowest id on ties).
        let fastest = (0..speeds.len()).fold(0, |b, v| if speeds[v] > speeds[b] { v } else { b });
        in_w[fastest]
    } else {
        mean_speed[0] > mean_speed[1]
    };
    let labels: Vec<u8> = in_w.iter().map(|&m| u8::from(m == omega_is_w)).collect();
    out.silhouette = Some(silhouette_score(series, nodes, &labels, t, params.silhouette_window)?);
    out.failure_resistance = Some(cut.capacity);
    out.bottleneck = Some(cut);
    out.labels = Some(labels);
    out.omega_is_w = Some(omega_is_w);
    out.mean_speed = Some(mean_speed);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{
        assign_capacities, proximity_links, restrict_to_largest_component, DisplacementWindow,
        ObservationPoint, TimeStamp,
    };
    use crate::netflow::{Link, RhoWindow};

    fn series_2d(coords: &[(f64, f64)], after: &[f64]) -> DisplacementSeries {
        let points = coords
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| ObservationPoint { id, label: 100 + id as u64, coords: vec![x, y] })
            .collect();
        let before = vec![0.0; coords.len()];
        DisplacementSeries::new(points, vec![TimeStamp::index(0), TimeStamp::index(1)], 1, [&before[..], after].concat())
            .unwrap()
    }

    fn run(series: &DisplacementSeries, threshold: f64, params: &StabilityParams) -> StateAnalysis {
        let links = proximity_links(series.points(), threshold).unwrap();
        let conn = restrict_to_largest_component(series.point_count(), &links);
        let net = assign_capacities(&conn, series, 1, DisplacementWindow::Increment(1), 1e-3).unwrap();
        analyze_state(&net, &conn.nodes, &conn.excluded, series, 1, params).unwrap()
    }

    #[test]
    fn uniform_square_cuts_two_links() {
        // Every point moves by 1: all |du| = 0, so all capacities are 1e6.
        let s = series_2d(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)], &[1.0; 4]);
        let a = run(&s, 1.1, &StabilityParams::default());
        assert!((a.failure_resistance.unwrap() - 2e6).abs() < 1e-3);
        assert_eq!(a.bottleneck.as_ref().unwrap().links.len(), 2);
        // Equal speeds: the fastest point is point 0 (first of equals).
        assert_eq!(a.omega_points().unwrap()[0], 0);
    }

    #[test]
    fn weak_link_splits_chain() {
        // Increments 0, 1, 1.5, 3.5: |du| = 1, 0.5, 2 so the last link is weakest.
        let coords: Vec<(f64, f64)> = (0..4).map(|i| (i as f64, 0.0)).collect();
        let s = series_2d(&coords, &[0.0, 1.0, 1.5, 3.5]);
        let params = StabilityParams { primary: RhoWindow::new(0.3, 1.0).unwrap(), ..Default::default() };
        let a = run(&s, 1.1, &params);
        assert_eq!(a.failure_resistance, Some(0.25));
        assert_eq!(a.bottleneck.as_ref().unwrap().links, vec![Link::new(2, 3)]);
        assert_eq!(a.omega_points().unwrap(), vec![3]);
        assert_eq!(a.boundary_points(), vec![2, 3]);
        assert!(a.silhouette.unwrap() > 0.0);
    }

    #[test]
    fn impossible_window_flags_the_state() {
        let coords: Vec<(f64, f64)> = (0..3).map(|i| (i as f64, 0.0)).collect();
        let s = series_2d(&coords, &[0.0, 1.0, 2.0]);
        let params = StabilityParams { primary: RhoWindow::new(0.9, 1.0).unwrap(), ..Default::default() };
        let a = run(&s, 1.1, &params);
        assert!(a.bottleneck.is_none() && a.failure_resistance.is_none() && a.silhouette.is_none());
        assert!(a.flag.unwrap().contains("no admissible cut"));
    }
}
