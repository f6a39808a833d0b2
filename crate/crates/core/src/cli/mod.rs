//! Run configuration, the batch pipeline and the command-line front end.

mod args;
mod config;
mod fixture_check;
mod pipeline;

use thiserror::Error;

use crate::kinematics::KinematicsError;
use crate::stability::StabilityError;

pub use args::{run_cli, Cli, Command};
pub use config::{CapacityConfig, ConnectivityConfig, ConnectivityMode, LengthUnit, RunConfig, Units};
pub use fixture_check::{fixture_check, FixtureFact};
pub use pipeline::{
    analyze_series, build_report, load_input, run_pipeline, write_outputs, ForecastReport, RunOutcome,
};

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_ANALYSIS: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("output error: {0}")]
    Output(String),
    #[error("state {t} (t = {time}): {source}; hint: {hint}")]
    State {
        t: usize,
        time: String,
        hint: &'static str,
        #[source]
        source: StabilityError,
    },
    #[error(
        "{message}; first failing state {t} (t = {time}), and no state has an admissible cut; \
         hint: widen the cut-ratio window"
    )]
    NoAdmissibleCut { t: usize, time: String, message: String },
    #[error("analysis error: {0}")]
    Analysis(String),
}

impl PipelineError {
    pub(crate) fn from_kinematics(e: KinematicsError) -> Self {
        PipelineError::Input(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Config(_) => EXIT_CONFIG,
            PipelineError::Input(_) | PipelineError::Output(_) => EXIT_INPUT,
            PipelineError::State { .. } | PipelineError::NoAdmissibleCut { .. } | PipelineError::Analysis(_) => {
                EXIT_ANALYSIS
            }
        }
    }
}
