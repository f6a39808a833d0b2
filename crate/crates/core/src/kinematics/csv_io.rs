//! Long-format CSV ingestion and serialization.
//!
//! One row per (time state, point): `t,id,x,y[,z],d` for line-of-sight data
//! or `t,id,x,y,dx,dy` for planar displacements. Rows must appear with
//! non-decreasing `t`; within a state the order is free.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use super::connectivity::ContactSchedule;
use super::series::{DisplacementSeries, ObservationPoint, TimeKey, TimeStamp};
use super::KinematicsError;
use crate::netflow::Link;

/// Column names for each field. The defaults match the documented header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesSchema {
    pub t: String,
    pub id: String,
    pub x: String,
    pub y: String,
    /// Optional third coordinate; used only when present in the header.
    pub z: String,
    /// Line-of-sight displacement column.
    pub d: String,
    pub dx: String,
    pub dy: String,
}

impl Default for SeriesSchema {
    fn default() -> Self {
        SeriesSchema {
            t: "t".into(),
            id: "id".into(),
            x: "x".into(),
            y: "y".into(),
            z: "z".into(),
            d: "d".into(),
            dx: "dx".into(),
            dy: "dy".into(),
        }
    }
}

/// How missing displacements are repaired.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImputationPolicy {
    /// Longest run of consecutive missing states that forward-fill may
    /// bridge. Longer gaps, or gaps at the start of the series, drop the
    /// point for the whole campaign.
    pub max_gap: usize,
}

impl Default for ImputationPolicy {
    fn default() -> Self {
        ImputationPolicy { max_gap: 3 }
    }
}

struct Columns {
    t: usize,
    id: usize,
    coords: Vec<usize>,
    disp: Vec<usize>,
}

fn resolve_columns(headers: &csv::StringRecord, schema: &SeriesSchema, path: &str) -> Result<Columns, KinematicsError> {
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let mut missing = Vec::new();
    let mut need = |name: &str| {
        let pos = find(name);
        if pos.is_none() {
            missing.push(name.to_string());
        }
        pos.unwrap_or(usize::MAX)
    };
    let t = need(&schema.t);
    let id = need(&schema.id);
    let x = need(&schema.x);
    let y = need(&schema.y);
    let disp = match (find(&schema.d), find(&schema.dx), find(&schema.dy)) {
        (Some(d), None, None) => vec![d],
        (None, Some(dx), Some(dy)) => vec![dx, dy],
        (Some(_), _, _) => {
            return Err(KinematicsError::Invalid(format!(
                "{path}: header has both `{}` and planar displacement columns",
                schema.d
            )))
        }
        _ => {
            missing.push(format!("{} (or {} and {})", schema.d, schema.dx, schema.dy));
            Vec::new()
        }
    };
    if !missing.is_empty() {
        return Err(KinematicsError::MissingColumns { path: path.to_string(), missing: missing.join(", ") });
    }
    let mut coords = vec![x, y];
    if let Some(z) = find(&schema.z) {
        coords.push(z);
    }
    Ok(Columns { t, id, coords, disp })
}

fn parse_missing_or_f64(field: &str) -> Option<Option<f64>> {
    let s = field.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("nan") || s.eq_ignore_ascii_case("na") {
        return Some(None);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(Some(v)),
        Ok(_) => Some(None),
        Err(_) => None,
    }
}

/// Reads a displacement series. `source` names the input in error messages.
pub fn load_series<R: Read>(
    reader: R,
    source: &str,
    schema: &SeriesSchema,
    policy: ImputationPolicy,
) -> Result<DisplacementSeries, KinematicsError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let cols = resolve_columns(&headers, schema, source)?;
    let dim = cols.disp.len();

    let mut times: Vec<TimeStamp> = Vec::new();
    let mut coords: BTreeMap<u64, (Vec<f64>, usize)> = BTreeMap::new();
    // (state index, label) -> displacement, None when missing.
    let mut cells: HashMap<(usize, u64), (Option<Vec<f64>>, usize)> = HashMap::new();

    for (i, rec) in rdr.records().enumerate() {
        // Line 1 is the header.
        let row = i + 2;
        let rec = rec?;
        let err = |message: String| KinematicsError::Row { row, message };
        let field = |c: usize| rec.get(c).unwrap_or("");

        let ts = TimeStamp::parse(field(cols.t))
            .ok_or_else(|| err(format!("unparseable time stamp `{}`", field(cols.t))))?;
        let state = match times.last() {
            Some(last) if last.key == ts.key => times.len() - 1,
            Some(last) => {
                if std::mem::discriminant(&last.key) != std::mem::discriminant(&ts.key) {
                    return Err(err("time stamps mix integer states and calendar dates".into()));
                }
                if ts.key < last.key {
                    return Err(err(format!(
                        "time stamp `{}` precedes earlier row's `{}`; rows must be ordered by t",
                        ts.raw, last.raw
                    )));
                }
                times.push(ts);
                times.len() - 1
            }
            None => {
                times.push(ts);
                0
            }
        };

        let label: u64 = field(cols.id)
            .parse()
            .map_err(|_| err(format!("point id `{}` is not a non-negative integer", field(cols.id))))?;

        let mut xyz = Vec::with_capacity(cols.coords.len());
        for &c in &cols.coords {
            match parse_missing_or_f64(field(c)) {
                Some(Some(v)) => xyz.push(v),
                _ => return Err(err(format!("invalid coordinate `{}`", field(c)))),
            }
        }
        match coords.get(&label) {
            Some((prev, first_row)) if *prev != xyz => {
                return Err(err(format!(
                    "coordinates of point {label} differ from row {first_row}"
                )))
            }
            Some(_) => {}
            None => {
                coords.insert(label, (xyz, row));
            }
        }

        let mut disp = Vec::with_capacity(dim);
        let mut is_missing = false;
        for &c in &cols.disp {
            match parse_missing_or_f64(field(c)) {
                Some(Some(v)) => disp.push(v),
                Some(None) => is_missing = true,
                None => return Err(err(format!("invalid displacement `{}`", field(c)))),
            }
        }
        let value = if is_missing { None } else { Some(disp) };
        if let Some((_, first)) = cells.insert((state, label), (value, row)) {
            return Err(err(format!(
                "duplicate row for t = {}, id = {label} (first seen at row {first})",
                times[state].raw
            )));
        }
    }

    if times.is_empty() {
        return Err(KinematicsError::Empty(format!("{source}: no data rows")));
    }

    // Forward-fill each point's track; drop tracks that cannot be repaired.
    let labels: Vec<u64> = coords.keys().copied().collect();
    let n_states = times.len();
    let mut kept: Vec<(u64, Vec<f64>)> = Vec::new();
    let mut dropped = Vec::new();
    let mut filled = 0usize;
    for &label in &labels {
        let mut track = Vec::with_capacity(n_states * dim);
        let mut last: Option<Vec<f64>> = None;
        let mut gap = 0usize;
        let mut ok = true;
        for s in 0..n_states {
            match cells.get(&(s, label)).and_then(|(v, _)| v.clone()) {
                Some(v) => {
                    gap = 0;
                    track.extend_from_slice(&v);
                    last = Some(v);
                }
                None => {
                    gap += 1;
                    match &last {
                        Some(v) if gap <= policy.max_gap => {
                            track.extend_from_slice(v);
                            filled += 1;
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
        if ok {
            kept.push((label, track));
        } else {
            warn!("{source}: dropping point {label}: missing data cannot be forward-filled");
            dropped.push(label);
        }
    }
    if filled > 0 {
        info!("{source}: forward-filled {filled} missing displacement value(s)");
    }
    if kept.is_empty() {
        return Err(KinematicsError::Empty(format!("{source}: every point was dropped for missing data")));
    }

    let points: Vec<ObservationPoint> = kept
        .iter()
        .enumerate()
        .map(|(id, (label, _))| ObservationPoint { id, label: *label, coords: coords[label].0.clone() })
        .collect();
    let l = points.len();
    let mut values = vec![0.0; n_states * l * dim];
    for (p, (_, track)) in kept.iter().enumerate() {
        for s in 0..n_states {
            let dst = (s * l + p) * dim;
            values[dst..dst + dim].copy_from_slice(&track[s * dim..(s + 1) * dim]);
        }
    }
    Ok(DisplacementSeries::new(points, times, dim, values)?.with_dropped(dropped))
}

pub fn load_series_path(
    path: &Path,
    schema: &SeriesSchema,
    policy: ImputationPolicy,
) -> Result<DisplacementSeries, KinematicsError> {
    let file = File::open(path)?;
    load_series(file, &path.display().to_string(), schema, policy)
}

/// Writes a series with the default header. Values use the shortest text
/// that parses back to the same `f64`, so load after write is exact.
pub fn write_series<W: Write>(writer: W, series: &DisplacementSeries) -> Result<(), KinematicsError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["t", "id", "x", "y"];
    if series.coord_dim() == 3 {
        header.push("z");
    }
    if series.dim() == 1 {
        header.push("d");
    } else {
        header.extend(["dx", "dy"]);
    }
    w.write_record(&header)?;
    let mut rec: Vec<String> = Vec::with_capacity(header.len());
    for (s, ts) in series.times().iter().enumerate() {
        for p in series.points() {
            rec.clear();
            rec.push(ts.raw.clone());
            rec.push(p.label.to_string());
            rec.extend(p.coords.iter().map(|c| c.to_string()));
            rec.extend(series.displacement(s, p.id).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_series_path(path: &Path, series: &DisplacementSeries) -> Result<(), KinematicsError> {
    write_series(File::create(path)?, series)
}

/// Reads a `t,i,j` contact list against an already loaded series. Contacts
/// touching points dropped at ingestion are skipped; anything else that
/// does not resolve is an error.
pub fn load_contacts<R: Read>(
    reader: R,
    source: &str,
    series: &DisplacementSeries,
) -> Result<ContactSchedule, KinematicsError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let (ct, ci, cj) = match (find("t"), find("i"), find("j")) {
        (Some(t), Some(i), Some(j)) => (t, i, j),
        _ => {
            return Err(KinematicsError::MissingColumns { path: source.to_string(), missing: "t, i, j".into() })
        }
    };
    let by_key: HashMap<TimeKey, usize> = series.times().iter().enumerate().map(|(s, t)| (t.key, s)).collect();
    let by_label: HashMap<u64, usize> = series.points().iter().map(|p| (p.label, p.id)).collect();
    let dropped: std::collections::HashSet<u64> = series.dropped_labels().iter().copied().collect();

    let mut per_state: Vec<Vec<Link>> = vec![Vec::new(); series.state_count()];
    let mut skipped = 0usize;
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 2;
        let rec = rec?;
        let err = |message: String| KinematicsError::Row { row, message };
        let get = |c: usize| rec.get(c).unwrap_or("");
        let ts = TimeStamp::parse(get(ct)).ok_or_else(|| err(format!("unparseable time stamp `{}`", get(ct))))?;
        let s = *by_key
            .get(&ts.key)
            .ok_or_else(|| err(format!("time stamp `{}` is not a state of the series", ts.raw)))?;
        let mut ends = [0usize; 2];
        let mut skip = false;
        for (slot, c) in [ci, cj].into_iter().enumerate() {
            let label: u64 = get(c).parse().map_err(|_| err(format!("invalid point id `{}`", get(c))))?;
            match by_label.get(&label) {
                Some(&id) => ends[slot] = id,
                None if dropped.contains(&label) => skip = true,
                None => return Err(err(format!("contact references unknown point {label}"))),
            }
        }
        if skip {
            skipped += 1;
            continue;
        }
        if ends[0] == ends[1] {
            return Err(err(format!("contact of point {} with itself", get(ci))));
        }
        per_state[s].push(Link::new(ends[0], ends[1]));
    }
    if skipped > 0 {
        warn!("{source}: skipped {skipped} contact(s) touching dropped points");
    }
    for links in &mut per_state {
        links.sort_unstable();
        links.dedup();
    }
    Ok(ContactSchedule::new(per_state))
}

pub fn load_contacts_path(path: &Path, series: &DisplacementSeries) -> Result<ContactSchedule, KinematicsError> {
    load_contacts(File::open(path)?, &path.display().to_string(), series)
}
