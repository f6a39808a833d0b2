use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::forecast::{cluster_mean_velocity, inv_forecast, ForecastFit};
use super::metrics::nmi;
use super::regime::detect_regime_change;
use super::{StabilityError, StabilityParams, StateAnalysis};
use crate::kinematics::DisplacementSeries;

/// Per-state analyses joined with the metrics that couple states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityTimeline {
    pub states: Vec<StateAnalysis>,
    pub silhouette: Vec<Option<f64>>,
    /// NMI of each state's labeling against the previous state's.
    pub nmi: Vec<Option<f64>>,
    /// Smoothed mean speed of the active cluster.
    pub omega_velocity: Vec<Option<f64>>,
    /// Series state index of the regime change.
    pub regime_change: Option<usize>,
    /// Rolling inverse-velocity fit per state (present from the regime
    /// change onward, once enough states are usable).
    pub rolling_forecasts: Vec<Option<ForecastFit>>,
}

/// NMI over the points both states analyzed.
fn aligned_nmi(a: &StateAnalysis, b: &StateAnalysis) -> Result<Option<f64>, StabilityError> {
    let (Some(la), Some(lb)) = (&a.labels, &b.labels) else { return Ok(None) };
    if a.nodes == b.nodes {
        return nmi(la, lb).map(Some);
    }
    let pos: HashMap<usize, usize> = b.nodes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, p) in a.nodes.iter().enumerate() {
        if let Some(&j) = pos.get(p) {
            x.push(la[i]);
            y.push(lb[j]);
        }
    }
    if x.is_empty() {
        return Ok(None);
    }
    nmi(&x, &y).map(Some)
}

impl StabilityTimeline {
    /// Sequential reduction over per-state results in state order.
    pub fn assemble(
        series: &DisplacementSeries,
        states: Vec<StateAnalysis>,
        params: &StabilityParams,
    ) -> Result<Self, StabilityError> {
        if states.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(StabilityError::InvalidParameter("states must be strictly time-ordered".into()));
        }
        if states.last().is_some_and(|s| s.t >= series.state_count()) {
            return Err(StabilityError::InvalidParameter("state index beyond the series".into()));
        }
        let silhouette: Vec<Option<f64>> = states.iter().map(|s| s.silhouette).collect();
        let mut nmi_series = vec![None; states.len()];
        for i in 1..states.len() {
            nmi_series[i] = aligned_nmi(&states[i], &states[i - 1])?;
        }

        let mut members = vec![None; series.state_count()];
        for s in &states {
            members[s.t] = s.omega_points();
        }
        let velocity = cluster_mean_velocity(series, &members, params.smoothing_window)?;
        let omega_velocity: Vec<Option<f64>> = states.iter().map(|s| velocity[s.t]).collect();

        let f_star: Vec<Option<f64>> = states.iter().map(|s| s.failure_resistance).collect();
        let idx = detect_regime_change(&f_star, &silhouette, &nmi_series, &params.regime)?;
        let regime_change = idx.map(|i| states[i].t);

        let mut rolling_forecasts = vec![None; states.len()];
        if let Some(t_star) = regime_change {
            for (i, s) in states.iter().enumerate().filter(|(_, s)| s.t >= t_star) {
                rolling_forecasts[i] = inv_forecast(&velocity, t_star, s.t, &params.forecast)?;
            }
        }
        Ok(StabilityTimeline { states, silhouette, nmi: nmi_series, omega_velocity, regime_change, rolling_forecasts })
    }

    /// Fit made at the last state, if any.
    pub fn forecast(&self) -> Option<&ForecastFit> {
        self.rolling_forecasts.last().and_then(Option::as_ref)
    }

    pub fn failure_resistance(&self) -> Vec<Option<f64>> {
        self.states.iter().map(|s| s.failure_resistance).collect()
    }

    /// Compact per-state records for JSON output.
    pub fn records(&self, series: &DisplacementSeries) -> Vec<StateRecord> {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| StateRecord {
                t: s.t,
                time: s.time.clone(),
                f_star: s.failure_resistance,
                silhouette: self.silhouette[i],
                nmi: self.nmi[i],
                omega_size: s.labels.as_ref().map(|l| l.iter().filter(|&&x| x == 1).count()),
                omega_mean_v: self.omega_velocity[i],
                boundary_ids: s.boundary_points().iter().map(|&p| series.points()[p].label).collect(),
                labels_digest: s.labels.as_ref().map(|l| labels_digest(series, &s.nodes, l)),
                secondary_f_star: s.secondary.as_ref().map(|c| c.capacity),
                t_f_estimate: self.rolling_forecasts[i].and_then(|f| f.t_failure),
                flag: s.flag.clone(),
            })
            .collect()
    }

    /// Summary table `t,F_star,S,NMI,omega_mean_v,inv_v,t_F_estimate`;
    /// absent values are empty fields.
    pub fn write_summary_csv<W: Write>(&self, writer: W) -> Result<(), StabilityError> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "F_star", "S", "NMI", "omega_mean_v", "inv_v", "t_F_estimate"])?;
        for (i, s) in self.states.iter().enumerate() {
            let v = self.omega_velocity[i];
            w.write_record([
                s.time.clone(),
                opt(s.failure_resistance),
                opt(self.silhouette[i]),
                opt(self.nmi[i]),
                opt(v),
                opt(v.filter(|&x| x > 0.0).map(|x| 1.0 / x)),
                opt(self.rolling_forecasts[i].and_then(|f| f.t_failure)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn labels_digest(series: &DisplacementSeries, nodes: &[usize], labels: &[u8]) -> String {
    let mut h = Sha256::new();
    for (&p, &l) in nodes.iter().zip(labels) {
        h.update(series.points()[p].label.to_le_bytes());
        h.update([l]);
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// One line of the per-state JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub t: usize,
    pub time: String,
    pub f_star: Option<f64>,
    pub silhouette: Option<f64>,
    pub nmi: Option<f64>,
    pub omega_size: Option<usize>,
    pub omega_mean_v: Option<f64>,
    /// Input labels of points incident to the bottleneck.
    pub boundary_ids: Vec<u64>,
    pub labels_digest: Option<String>,
    pub secondary_f_star: Option<f64>,
    pub t_f_estimate: Option<f64>,
    pub flag: Option<String>,
}
