use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::kinematics::{DisplacementWindow, ImputationPolicy, SeriesSchema, DEFAULT_EPSILON_MM};
use crate::stability::StabilityParams;

/// Length unit of an input column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    M,
    Cm,
    Mm,
}

impl LengthUnit {
    fn in_meters(self) -> f64 {
        match self {
            LengthUnit::M => 1.0,
            LengthUnit::Cm => 0.01,
            LengthUnit::Mm => 0.001,
        }
    }

    /// Factor converting this unit into `target`.
    pub fn factor_to(self, target: LengthUnit) -> f64 {
        if self == target {
            1.0
        } else {
            self.in_meters() / target.in_meters()
        }
    }
}

/// Units of the input columns. Coordinates are converted to meters and
/// displacements to millimeters on load.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Units {
    pub coordinates: LengthUnit,
    pub displacement: LengthUnit,
}

impl Default for Units {
    fn default() -> Self {
        Units { coordinates: LengthUnit::M, displacement: LengthUnit::Mm }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivityMode {
    Proximity,
    ExplicitContacts,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConnectivityConfig {
    pub mode: ConnectivityMode,
    /// Proximity threshold in meters; derived from point spacing if unset.
    pub threshold: Option<f64>,
}

impl Default for ConnectivityConfig {
    fn default() -> Self {
        ConnectivityConfig { mode: ConnectivityMode::Proximity, threshold: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacityConfig {
    /// Floor on relative displacement, mm.
    pub epsilon: f64,
    /// Differencing window in states (ignored when `cumulative`).
    pub window: usize,
    /// Measure displacement change from the first state instead.
    pub cumulative: bool,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig { epsilon: DEFAULT_EPSILON_MM, window: 1, cumulative: false }
    }
}

impl CapacityConfig {
    pub fn displacement_window(&self) -> DisplacementWindow {
        if self.cumulative {
            DisplacementWindow::Cumulative
        } else {
            DisplacementWindow::Increment(self.window)
        }
    }
}

/// Everything a pipeline run depends on. Serializes to JSON and back
/// without loss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: PathBuf,
    pub contacts: Option<PathBuf>,
    pub units: Units,
    pub schema: SeriesSchema,
    pub imputation: ImputationPolicy,
    pub connectivity: ConnectivityConfig,
    pub capacity: CapacityConfig,
    pub stability: StabilityParams,
    pub output_dir: PathBuf,
    /// Per-state wall-clock budget; overruns are logged, never enforced.
    pub budget_secs: f64,
    /// Worker threads for per-state analysis (0 = one per core).
    pub jobs: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::from("series.csv"),
            contacts: None,
            units: Units::default(),
            schema: SeriesSchema::default(),
            imputation: ImputationPolicy::default(),
            connectivity: ConnectivityConfig::default(),
            capacity: CapacityConfig::default(),
            stability: StabilityParams::default(),
            output_dir: PathBuf::from("out"),
            budget_secs: 50.0,
            jobs: 1,
            seed: 7,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if !(self.capacity.epsilon > 0.0 && self.capacity.epsilon.is_finite()) {
            return bad(format!("capacity.epsilon must be positive (got {})", self.capacity.epsilon));
        }
        if !self.capacity.cumulative && self.capacity.window == 0 {
            return bad("capacity.window must be at least 1".into());
        }
        if let Some(d) = self.connectivity.threshold {
            if !(d > 0.0 && d.is_finite()) {
                return bad(format!("connectivity.threshold must be positive (got {d})"));
            }
        }
        if self.connectivity.mode == ConnectivityMode::ExplicitContacts && self.contacts.is_none() {
            return bad("explicit_contacts mode needs a contacts file".into());
        }
        if !(self.budget_secs > 0.0 && self.budget_secs.is_finite()) {
            return bad(format!("budget_secs must be positive (got {})", self.budget_secs));
        }
        self.stability.validate().map_err(|e| PipelineError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netflow::RhoWindow;

    #[test]
    fn round_trips_through_json() {
        let mut cfg = RunConfig::default();
        cfg.capacity.epsilon = 0.1 + 0.2;
        cfg.connectivity.threshold = Some(1.45 * 3.5);
        cfg.stability.primary = RhoWindow::new(1.0 / 3.0, 1.0).unwrap();
        cfg.contacts = Some(PathBuf::from("contacts.csv"));
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = RunConfig::from_json(r#"{"input": "a.csv", "capacity": {"window": 3}}"#).unwrap();
        assert_eq!(cfg.capacity.window, 3);
        assert_eq!(cfg.capacity.epsilon, DEFAULT_EPSILON_MM);
        assert_eq!(cfg.stability.regime.persistence, 30);
        assert!(RunConfig::from_json(r#"{"inptu": "a.csv"}"#).is_err());
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut cfg = RunConfig::default();
        cfg.validate().unwrap();
        cfg.stability.primary = RhoWindow { min: 0.8, max: 0.4 };
        assert!(matches!(cfg.validate(), Err(PipelineError::Config(_))));
        let cfg = RunConfig { budget_secs: 0.0, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.connectivity.mode = ConnectivityMode::ExplicitContacts;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unit_factors() {
        assert_eq!(LengthUnit::Cm.factor_to(LengthUnit::Mm), 10.0);
        assert_eq!(LengthUnit::Mm.factor_to(LengthUnit::Mm), 1.0);
        assert_eq!(LengthUnit::Mm.factor_to(LengthUnit::M), 0.001);
    }
}
