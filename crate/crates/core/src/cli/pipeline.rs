use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ConnectivityMode, LengthUnit, RunConfig};
use super::PipelineError;
use crate::kinematics::{
    assign_capacities, build_connectivity, default_proximity_threshold, load_contacts_path,
    load_series_path, restrict_to_largest_component, Connectivity, ConnectivitySpec, ContactSchedule,
    DisplacementSeries,
};
use crate::netflow::NetflowError;
use crate::stability::{analyze_state, ForecastFit, StabilityError, StabilityTimeline, StateAnalysis};

/// Machine-readable run outcome, also written as `forecast.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForecastReport {
    pub points: usize,
    pub states: usize,
    pub analyzed_states: usize,
    /// Series state indices without an admissible cut.
    pub flagged_states: Vec<usize>,
    /// Labels of points dropped at ingestion.
    pub dropped_points: Vec<u64>,
    /// Labels of points outside the analyzed component in at least one
    /// state.
    pub excluded_points: Vec<u64>,
    pub proximity_threshold: Option<f64>,
    pub regime_change_state: Option<usize>,
    pub regime_change_time: Option<String>,
    /// Fit at the last analyzed state.
    pub forecast: Option<ForecastFit>,
    /// Forecast failure time in state units.
    pub t_failure: Option<f64>,
}

/// What a finished run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub timeline: StabilityTimeline,
    pub report: ForecastReport,
    pub files: Vec<PathBuf>,
}

fn hint_for(err: &StabilityError) -> &'static str {
    match err {
        StabilityError::Netflow(NetflowError::Disconnected { .. }) => {
            "raise the proximity threshold or check the contact list"
        }
        StabilityError::Netflow(NetflowError::TooFewNodes { .. }) => {
            "the analyzed component is too small; check connectivity settings"
        }
        StabilityError::Netflow(NetflowError::InvalidRhoWindow { .. }) => "fix the cut-ratio window",
        StabilityError::Kinematics(_) => "check the displacement window against the series length",
        _ => "inspect the input series at this state",
    }
}

/// Analyzes every state of `series` that the displacement window allows.
///
/// States run on a pool of `cfg.jobs` workers; results are joined in state
/// order, so the outcome does not depend on the pool size.
pub fn analyze_series(
    series: &DisplacementSeries,
    contacts: Option<&ContactSchedule>,
    cfg: &RunConfig,
) -> Result<(StabilityTimeline, Option<f64>), PipelineError> {
    cfg.validate()?;
    let window = cfg.capacity.displacement_window();
    let first = window.first_valid_state().max(1);
    if first >= series.state_count() {
        return Err(PipelineError::Input(format!(
            "series has {} states; the displacement window needs more than {first}",
            series.state_count()
        )));
    }

    let (spec, threshold) = match cfg.connectivity.mode {
        ConnectivityMode::Proximity => {
            let d = match cfg.connectivity.threshold {
                Some(d) => d,
                None => default_proximity_threshold(series.points()).map_err(PipelineError::from_kinematics)?,
            };
            info!("proximity threshold {d} m");
            (ConnectivitySpec::Proximity { threshold: d }, Some(d))
        }
        ConnectivityMode::ExplicitContacts => {
            let c = contacts.ok_or_else(|| PipelineError::Config("no contact schedule supplied".into()))?;
            (ConnectivitySpec::ExplicitContacts(c.clone()), None)
        }
    };
    // A proximity network is the same for every state.
    let fixed: Option<Connectivity> = match &spec {
        ConnectivitySpec::Proximity { .. } => {
            let links = build_connectivity(series.points(), &spec, 0).map_err(PipelineError::from_kinematics)?;
            Some(restrict_to_largest_component(series.point_count(), &links))
        }
        ConnectivitySpec::ExplicitContacts(_) => None,
    };

    let budget = cfg.budget_secs;
    let run_state = |t: usize| -> Result<StateAnalysis, PipelineError> {
        let started = Instant::now();
        let wrap = |source: StabilityError| PipelineError::State {
            t,
            time: series.times()[t].raw.clone(),
            hint: hint_for(&source),
            source,
        };
        let owned;
        let conn = match &fixed {
            Some(c) => c,
            None => {
                let links = build_connectivity(series.points(), &spec, t).map_err(|e| wrap(e.into()))?;
                owned = restrict_to_largest_component(series.point_count(), &links);
                &owned
            }
        };
        let net = assign_capacities(conn, series, t, window, cfg.capacity.epsilon).map_err(|e| wrap(e.into()))?;
        let out = analyze_state(&net, &conn.nodes, &conn.excluded, series, t, &cfg.stability).map_err(wrap)?;
        let secs = started.elapsed().as_secs_f64();
        if secs > budget {
            warn!("state {t} took {secs:.1} s, over the {budget} s budget");
        }
        Ok(out)
    };

    let jobs = if cfg.jobs == 0 { rayon::current_num_threads() } else { cfg.jobs };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| PipelineError::Config(format!("cannot start {jobs} workers: {e}")))?;
    let results: Vec<Result<StateAnalysis, PipelineError>> =
        pool.install(|| (first..series.state_count()).into_par_iter().map(run_state).collect());
    let states = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let flagged: Vec<&StateAnalysis> = states.iter().filter(|s| s.flag.is_some()).collect();
    if flagged.len() == states.len() {
        let s = flagged[0];
        return Err(PipelineError::NoAdmissibleCut {
            t: s.t,
            time: s.time.clone(),
            message: s.flag.clone().unwrap_or_default(),
        });
    }
    if !flagged.is_empty() {
        warn!(
            "{} state(s) have no admissible cut (first: state {}); their metrics are left empty",
            flagged.len(),
            flagged[0].t
        );
    }
    let timeline = StabilityTimeline::assemble(series, states, &cfg.stability)
        .map_err(|e| PipelineError::Analysis(e.to_string()))?;
    Ok((timeline, threshold))
}

/// Loads the configured input, applying unit conversion.
pub fn load_input(cfg: &RunConfig) -> Result<(DisplacementSeries, Option<ContactSchedule>), PipelineError> {
    let mut series =
        load_series_path(&cfg.input, &cfg.schema, cfg.imputation).map_err(PipelineError::from_kinematics)?;
    let cf = cfg.units.coordinates.factor_to(LengthUnit::M);
    if cf != 1.0 {
        series = series.coords_scaled(cf);
    }
    let df = cfg.units.displacement.factor_to(LengthUnit::Mm);
    if df != 1.0 {
        series = series.scaled(df);
    }
    let contacts = match (&cfg.contacts, cfg.connectivity.mode) {
        (Some(p), ConnectivityMode::ExplicitContacts) => {
            Some(load_contacts_path(p, &series).map_err(PipelineError::from_kinematics)?)
        }
        _ => None,
    };
    Ok((series, contacts))
}

/// Loads, analyzes and writes every artifact into `cfg.output_dir`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutcome, PipelineError> {
    cfg.validate()?;
    let (series, contacts) = load_input(cfg)?;
    info!("loaded {} points x {} states", series.point_count(), series.state_count());
    let (timeline, threshold) = analyze_series(&series, contacts.as_ref(), cfg)?;
    let report = build_report(&series, &timeline, threshold);
    let files = write_outputs(&cfg.output_dir, cfg, &series, &timeline, &report)?;
    Ok(RunOutcome { timeline, report, files })
}

pub fn build_report(series: &DisplacementSeries, tl: &StabilityTimeline, threshold: Option<f64>) -> ForecastReport {
    let mut excluded: Vec<u64> =
        tl.states.iter().flat_map(|s| s.excluded.iter().map(|&p| series.points()[p].label)).collect();
    excluded.sort_unstable();
    excluded.dedup();
    let forecast = tl.forecast().copied();
    ForecastReport {
        points: series.point_count(),
        states: series.state_count(),
        analyzed_states: tl.states.len(),
        flagged_states: tl.states.iter().filter(|s| s.flag.is_some()).map(|s| s.t).collect(),
        dropped_points: series.dropped_labels().to_vec(),
        excluded_points: excluded,
        proximity_threshold: threshold,
        regime_change_state: tl.regime_change,
        regime_change_time: tl.regime_change.map(|t| series.times()[t].raw.clone()),
        t_failure: forecast.and_then(|f| f.t_failure),
        forecast,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, PipelineError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| PipelineError::Output(format!("cannot create {}: {e}", path.display())))
}

fn out_err(path: &Path) -> impl Fn(std::io::Error) -> PipelineError + '_ {
    move |e| PipelineError::Output(format!("writing {}: {e}", path.display()))
}

/// Writes `summary.csv`, `states.jsonl`, `boundary_map.csv`,
/// `forecast.json` and `run_config.json`.
pub fn write_outputs(
    dir: &Path,
    cfg: &RunConfig,
    series: &DisplacementSeries,
    tl: &StabilityTimeline,
    report: &ForecastReport,
) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(dir).map_err(|e| PipelineError::Output(format!("cannot create {}: {e}", dir.display())))?;
    let mut files = Vec::new();

    let path = dir.join("summary.csv");
    tl.write_summary_csv(create(&path)?).map_err(|e| PipelineError::Output(e.to_string()))?;
    files.push(path);

    let path = dir.join("states.jsonl");
    let mut w = create(&path)?;
    for rec in tl.records(series) {
        let line = serde_json::to_string(&rec).map_err(|e| PipelineError::Output(e.to_string()))?;
        writeln!(w, "{line}").map_err(out_err(&path))?;
    }
    w.flush().map_err(out_err(&path))?;
    files.push(path);

    let path = dir.join("boundary_map.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    let mut header = vec!["t", "id", "x", "y"];
    if series.coord_dim() == 3 {
        header.push("z");
    }
    w.write_record(&header).map_err(|e| PipelineError::Output(e.to_string()))?;
    for s in &tl.states {
        for p in s.boundary_points() {
            let pt = &series.points()[p];
            let mut rec = vec![s.time.clone(), pt.label.to_string()];
            rec.extend(pt.coords.iter().map(|c| c.to_string()));
            w.write_record(&rec).map_err(|e| PipelineError::Output(e.to_string()))?;
        }
    }
    w.flush().map_err(out_err(&path))?;
    files.push(path);

    let path = dir.join("forecast.json");
    let text = serde_json::to_string_pretty(report).map_err(|e| PipelineError::Output(e.to_string()))?;
    fs::write(&path, text + "\n").map_err(out_err(&path))?;
    files.push(path);

    let path = dir.join("run_config.json");
    fs::write(&path, cfg.to_json() + "\n").map_err(out_err(&path))?;
    files.push(path);
    Ok(files)
}
