//! Displacement series ingestion, the physical connectivity network and the
//! per-state link capacities derived from relative displacement.

mod capacity;
mod connectivity;
mod csv_io;
mod series;

use thiserror::Error;

use crate::netflow::NetflowError;

pub use capacity::{
    assign_capacities, relative_displacement, DisplacementWindow, DEFAULT_EPSILON_MM,
};
pub use connectivity::{
    build_connectivity, default_proximity_threshold, proximity_links, restrict_to_largest_component,
    ConnectivitySpec, Connectivity, ContactSchedule, PROXIMITY_FACTOR,
};
pub use csv_io::{
    load_contacts, load_contacts_path, load_series, load_series_path, write_series,
    write_series_path, ImputationPolicy, SeriesSchema,
};
pub use series::{DisplacementSeries, ObservationPoint, TimeKey, TimeStamp};

#[derive(Debug, Error)]
pub enum KinematicsError {
    #[error("empty input: {0}")]
    Empty(String),
    #[error("invalid series: {0}")]
    Invalid(String),
    #[error("{path}: missing required column(s): {missing}")]
    MissingColumns { path: String, missing: String },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("time state {t} with window {window} reaches before the first state")]
    WindowOutOfRange { t: usize, window: usize },
    #[error("time state {t} out of range (series has {states} states)")]
    StateOutOfRange { t: usize, states: usize },
    #[error("invalid connectivity: {0}")]
    Connectivity(String),
    #[error("epsilon must be positive and finite (got {0})")]
    InvalidEpsilon(f64),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Netflow(#[from] NetflowError),
}
