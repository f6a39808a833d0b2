//! Per-state bottleneck and cluster analysis, cluster-quality time series,
//! regime-change detection and inverse-velocity failure-time forecasts.

mod forecast;
mod metrics;
mod regime;
mod state;
mod timeline;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kinematics::{DisplacementWindow, KinematicsError};
use crate::netflow::{NetflowError, RhoWindow};

pub use forecast::{cluster_mean_velocity, inv_forecast, ForecastFit, ForecastParams};
pub use metrics::{nmi, silhouette_score};
pub use regime::{detect_regime_change, RegimeThresholds};
pub use state::{analyze_state, StateAnalysis};
pub use timeline::{StabilityTimeline, StateRecord};

/// Settings of the stability analysis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityParams {
    pub primary: RhoWindow,
    /// Small-cluster window recorded alongside the primary bottleneck.
    pub secondary: Option<RhoWindow>,
    /// Displacement change used as the silhouette's state-space coordinate.
    pub silhouette_window: DisplacementWindow,
    pub regime: RegimeThresholds,
    /// Centered moving-average length for cluster velocities (odd).
    pub smoothing_window: usize,
    pub forecast: ForecastParams,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams {
            primary: RhoWindow::primary(),
            secondary: Some(RhoWindow::secondary()),
            silhouette_window: DisplacementWindow::Increment(1),
            regime: RegimeThresholds::default(),
            smoothing_window: 5,
            forecast: ForecastParams::default(),
        }
    }
}

impl StabilityParams {
    pub fn validate(&self) -> Result<(), StabilityError> {
        self.primary.validate()?;
        if let Some(w) = self.secondary {
            w.validate()?;
        }
        if self.silhouette_window == DisplacementWindow::Increment(0) {
            return Err(StabilityError::InvalidParameter("silhouette window must be at least 1".into()));
        }
        if self.smoothing_window == 0 || self.smoothing_window.is_multiple_of(2) {
            return Err(StabilityError::InvalidParameter(format!(
                "smoothing window must be odd and positive (got {})",
                self.smoothing_window
            )));
        }
        self.regime.validate()?;
        self.forecast.validate()
    }
}

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("labeling has a single cluster; two non-empty clusters are required")]
    SingleCluster,
    #[error("length mismatch: {left} vs {right}")]
    LabelMismatch { left: usize, right: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Netflow(#[from] NetflowError),
}
