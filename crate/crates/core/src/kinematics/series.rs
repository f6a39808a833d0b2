use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::KinematicsError;

/// A monitored location. `id` is its dense index in the series; `label` is
/// the identifier it carried in the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationPoint {
    pub id: usize,
    pub label: u64,
    /// Position in meters, 2 or 3 components.
    pub coords: Vec<f64>,
}

impl ObservationPoint {
    pub fn distance(&self, other: &ObservationPoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Ordering key of a time stamp: an integer state number or an instant in
/// milliseconds since the Unix epoch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TimeKey {
    Index(i64),
    EpochMillis(i64),
}

/// A time stamp as it appeared in the input plus its ordering key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeStamp {
    pub raw: String,
    pub key: TimeKey,
}

impl TimeStamp {
    pub fn index(i: i64) -> Self {
        TimeStamp { raw: i.to_string(), key: TimeKey::Index(i) }
    }

    /// Parses an integer state number or an ISO-8601 date/time.
    pub fn parse(raw: &str) -> Option<Self> {
        let s = raw.trim();
        if let Ok(i) = s.parse::<i64>() {
            return Some(TimeStamp { raw: s.to_string(), key: TimeKey::Index(i) });
        }
        let millis = if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(s) {
            dt.timestamp_millis()
        } else if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f") {
            dt.and_utc().timestamp_millis()
        } else if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%.f") {
            dt.and_utc().timestamp_millis()
        } else if let Ok(d) = chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d") {
            d.and_hms_opt(0, 0, 0)?.and_utc().timestamp_millis()
        } else {
            return None;
        };
        Some(TimeStamp { raw: s.to_string(), key: TimeKey::EpochMillis(millis) })
    }
}

impl PartialOrd for TimeStamp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimeStamp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Displacement vectors (mm) for every point at every time state.
///
/// Values are stored state-major: state `t`, point `p`, component `k` lives
/// at `(t * point_count + p) * dim + k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSeries {
    points: Vec<ObservationPoint>,
    times: Vec<TimeStamp>,
    dim: usize,
    values: Vec<f64>,
    /// Input labels of points removed during ingestion.
    dropped: Vec<u64>,
}

impl DisplacementSeries {
    pub fn new(
        points: Vec<ObservationPoint>,
        times: Vec<TimeStamp>,
        dim: usize,
        values: Vec<f64>,
    ) -> Result<Self, KinematicsError> {
        if points.is_empty() {
            return Err(KinematicsError::Empty("no observation points".into()));
        }
        if times.is_empty() {
            return Err(KinematicsError::Empty("no time states".into()));
        }
        if !(dim == 1 || dim == 2) {
            return Err(KinematicsError::Invalid(format!("displacement dimension {dim} unsupported")));
        }
        let coord_dim = points[0].coords.len();
        if !(coord_dim == 2 || coord_dim == 3) {
            return Err(KinematicsError::Invalid(format!("coordinate dimension {coord_dim}")));
        }
        for (i, p) in points.iter().enumerate() {
            if p.id != i {
                return Err(KinematicsError::Invalid(format!(
                    "point ids must be contiguous from 0; found {} at position {i}",
                    p.id
                )));
            }
            if p.coords.len() != coord_dim || p.coords.iter().any(|c| !c.is_finite()) {
                return Err(KinematicsError::Invalid(format!("bad coordinates for point {}", p.label)));
            }
        }
        let mut labels: Vec<u64> = points.iter().map(|p| p.label).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(KinematicsError::Invalid("duplicate point labels".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(KinematicsError::Invalid("time stamps must be strictly increasing".into()));
        }
        if values.len() != times.len() * points.len() * dim {
            return Err(KinematicsError::Invalid(format!(
                "expected {} displacement values, got {}",
                times.len() * points.len() * dim,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(KinematicsError::Invalid("displacements must be finite".into()));
        }
        Ok(DisplacementSeries { points, times, dim, values, dropped: Vec::new() })
    }

    pub(crate) fn with_dropped(mut self, dropped: Vec<u64>) -> Self {
        self.dropped = dropped;
        self
    }

    pub fn points(&self) -> &[ObservationPoint] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn times(&self) -> &[TimeStamp] {
        &self.times
    }

    pub fn state_count(&self) -> usize {
        self.times.len()
    }

    /// Displacement components per point (1 for line-of-sight, 2 planar).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord_dim(&self) -> usize {
        self.points[0].coords.len()
    }

    pub fn dropped_labels(&self) -> &[u64] {
        &self.dropped
    }

    pub fn displacement(&self, t: usize, p: usize) -> &[f64] {
        let start = (t * self.points.len() + p) * self.dim;
        &self.values[start..start + self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Copy with every displacement multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// Copy with every coordinate multiplied by `factor` (unit conversion).
    pub fn coords_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            p.coords.iter_mut().for_each(|c| *c *= factor);
        }
        out
    }

    /// Copy truncated to the first `states` time states.
    pub fn truncated(&self, states: usize) -> Self {
        let states = states.min(self.times.len()).max(1);
        let mut out = self.clone();
        out.times.truncate(states);
        out.values.truncate(states * self.points.len() * self.dim);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: usize) -> Vec<ObservationPoint> {
        (0..n)
            .map(|i| ObservationPoint { id: i, label: 10 + i as u64, coords: vec![i as f64, 0.0] })
            .collect()
    }

    #[test]
    fn indexing_is_state_major() {
        let s = DisplacementSeries::new(
            pts(2),
            vec![TimeStamp::index(1), TimeStamp::index(2)],
            2,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        )
        .unwrap();
        assert_eq!(s.displacement(0, 1), &[3.0, 4.0]);
        assert_eq!(s.displacement(1, 0), &[5.0, 6.0]);
    }

    #[test]
    fn rejects_non_increasing_times_and_bad_lengths() {
        let t = vec![TimeStamp::index(2), TimeStamp::index(2)];
        assert!(DisplacementSeries::new(pts(1), t, 1, vec![0.0, 0.0]).is_err());
        let t = vec![TimeStamp::index(1), TimeStamp::index(2)];
        assert!(DisplacementSeries::new(pts(1), t.clone(), 1, vec![0.0]).is_err());
        assert!(DisplacementSeries::new(pts(1), t, 1, vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn parses_integer_and_iso_stamps() {
        assert_eq!(TimeStamp::parse("17").unwrap().key, TimeKey::Index(17));
        let a = TimeStamp::parse("2016-08-23T10:00:00Z").unwrap();
        let b = TimeStamp::parse("2016-08-23 10:06:00").unwrap();
        let c = TimeStamp::parse("2016-08-24").unwrap();
        assert!(a < b && b < c);
        assert!(TimeStamp::parse("yesterday").is_none());
    }
}
