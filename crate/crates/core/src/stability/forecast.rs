//! Active-cluster velocity and inverse-velocity failure-time forecasts.

use serde::{Deserialize, Serialize};

use super::StabilityError;
use crate::kinematics::DisplacementSeries;

/// Per-state mean speed of a changing set of points.
///
/// Each point's per-state increments are smoothed with a centered moving
/// average of `smoothing_window` states (clipped at the ends of the
/// record); its speed is the norm of the smoothed increment. `members[t]`
/// lists the series point ids in the cluster at state `t`; `None` or an
/// empty list leaves that state absent, as does state 0 (no increment).
pub fn cluster_mean_velocity(
    series: &DisplacementSeries,
    members: &[Option<Vec<usize>>],
    smoothing_window: usize,
) -> Result<Vec<Option<f64>>, StabilityError> {
    if smoothing_window == 0 || smoothing_window.is_multiple_of(2) {
        return Err(StabilityError::InvalidParameter(format!(
            "smoothing window must be odd and positive (got {smoothing_window})"
        )));
    }
    let n_states = series.state_count();
    if members.len() != n_states {
        return Err(StabilityError::LabelMismatch { left: members.len(), right: n_states });
    }
    let h = smoothing_window / 2;
    let dim = series.dim();
    let mut out = vec![None; n_states];
    let mut acc = vec![0.0; dim];
    for t in 1..n_states {
        let Some(ids) = members[t].as_ref().filter(|m| !m.is_empty()) else { continue };
        let lo = t.saturating_sub(h).max(1);
        let hi = (t + h).min(n_states - 1);
        let mut total = 0.0;
        for &p in ids {
            if p >= series.point_count() {
                return Err(StabilityError::InvalidParameter(format!("point {p} is not in the series")));
            }
            acc.iter_mut().for_each(|a| *a = 0.0);
            for s in lo..=hi {
                let (a, b) = (series.displacement(s, p), series.displacement(s - 1, p));
                for k in 0..dim {
                    acc[k] += a[k] - b[k];
                }
            }
            let span = (hi - lo + 1) as f64;
            total += acc.iter().map(|a| (a / span) * (a / span)).sum::<f64>().sqrt();
        }
        out[t] = Some(total / ids.len() as f64);
    }
    Ok(out)
}

/// Settings of the rolling inverse-velocity regression.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForecastParams {
    /// Trailing states per fit.
    pub regression_window: usize,
    pub min_states: usize,
    pub min_r_squared: f64,
}

impl Default for ForecastParams {
    fn default() -> Self {
        ForecastParams { regression_window: 50, min_states: 10, min_r_squared: 0.5 }
    }
}

impl ForecastParams {
    pub fn validate(&self) -> Result<(), StabilityError> {
        if self.regression_window < 2 || self.min_states < 2 || !(0.0..=1.0).contains(&self.min_r_squared) {
            return Err(StabilityError::InvalidParameter(format!("forecast settings out of range: {self:?}")));
        }
        Ok(())
    }
}

/// One least-squares fit of inverse velocity against state index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForecastFit {
    /// State at which the fit was made (last state of the window).
    pub t: usize,
    pub window_start: usize,
    pub used_states: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Zero crossing of the fitted line, when the fit passes the gate.
    pub t_failure: Option<f64>,
}

/// Fits `1/v` against `t` over the trailing window ending at `t`, starting
/// no earlier than `t_star`. States with absent or non-positive velocity
/// are skipped. Returns `None` when fewer than `min_states` remain.
pub fn inv_forecast(
    velocity: &[Option<f64>],
    t_star: usize,
    t: usize,
    params: &ForecastParams,
) -> Result<Option<ForecastFit>, StabilityError> {
    params.validate()?;
    if t >= velocity.len() || t < t_star {
        return Err(StabilityError::InvalidParameter(format!(
            "forecast state {t} outside [{t_star}, {})",
            velocity.len()
        )));
    }
    let start = (t + 1).saturating_sub(params.regression_window).max(t_star);
    let pts: Vec<(f64, f64)> = (start..=t)
        .filter_map(|s| match velocity[s] {
            Some(v) if v > 0.0 && v.is_finite() => Some((s as f64, 1.0 / v)),
            _ => None,
        })
        .collect();
    if pts.len() < params.min_states {
        return Ok(None);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    // Rounding noise on a constant series must not read as a trend.
    let flat = syy <= 1e-24 * my * my * n;
    let slope = if flat { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let r_squared = if flat { 0.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    let t_failure =
        (slope < 0.0 && r_squared >= params.min_r_squared).then(|| -intercept / slope);
    Ok(Some(ForecastFit { t, window_start: start, used_states: pts.len(), slope, intercept, r_squared, t_failure }))
}
