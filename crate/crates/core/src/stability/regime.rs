use serde::{Deserialize, Serialize};

use super::StabilityError;

/// Conditions that must hold for `persistence` consecutive states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegimeThresholds {
    /// F* must be at most this fraction of its running maximum.
    pub f_fraction: f64,
    pub min_silhouette: f64,
    pub min_nmi: f64,
    pub persistence: usize,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds { f_fraction: 0.05, min_silhouette: 0.2, min_nmi: 0.9, persistence: 30 }
    }
}

impl RegimeThresholds {
    pub fn validate(&self) -> Result<(), StabilityError> {
        let ok = self.f_fraction > 0.0
            && self.f_fraction <= 1.0
            && (-1.0..=1.0).contains(&self.min_silhouette)
            && (0.0..=1.0).contains(&self.min_nmi)
            && self.persistence >= 1;
        if ok {
            Ok(())
        } else {
            Err(StabilityError::InvalidParameter(format!("regime thresholds out of range: {self:?}")))
        }
    }
}

/// Index of the earliest state from which all three conditions hold for
/// `persistence` consecutive states. Absent values never satisfy a
/// condition; the running maximum of F* skips them.
pub fn detect_regime_change(
    f_star: &[Option<f64>],
    silhouette: &[Option<f64>],
    nmi: &[Option<f64>],
    th: &RegimeThresholds,
) -> Result<Option<usize>, StabilityError> {
    th.validate()?;
    let n = f_star.len();
    if silhouette.len() != n || nmi.len() != n {
        return Err(StabilityError::LabelMismatch { left: n, right: silhouette.len().min(nmi.len()) });
    }
    let mut run_max = f64::NEG_INFINITY;
    let mut run = 0usize;
    for i in 0..n {
        if let Some(f) = f_star[i] {
            run_max = run_max.max(f);
        }
        let holds = matches!(f_star[i], Some(f) if f <= th.f_fraction * run_max)
            && matches!(silhouette[i], Some(s) if s >= th.min_silhouette)
            && matches!(nmi[i], Some(v) if v >= th.min_nmi);
        run = if holds { run + 1 } else { 0 };
        if run == th.persistence {
            return Ok(Some(i + 1 - th.persistence));
        }
    }
    Ok(None)
}
