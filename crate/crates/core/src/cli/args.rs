use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::error;

use super::config::{ConnectivityMode, RunConfig};
use super::{fixture_check, run_pipeline, PipelineError, EXIT_ANALYSIS, EXIT_CONFIG, EXIT_OK};
use crate::kinematics::write_series_path;
use crate::netflow::RhoWindow;
use crate::scenarios::{generate_slope, oracle_diff, OracleDiffConfig, SlopeScenario};

/// Flow-network bottleneck analysis of slope displacement series.
///
/// Log verbosity follows the SLOPEFLOW_LOG environment variable
/// (error, warn, info, debug, trace; default warn).
#[derive(Debug, Parser)]
#[command(name = "slopeflow", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full analysis on a displacement series.
    Analyze(AnalyzeArgs),
    /// Write a synthetic planted-failure series.
    Generate(GenerateArgs),
    /// Verify the stated facts of the 9-node example network.
    FixtureCheck,
    /// Compare the flow code with exhaustive enumeration on random networks.
    OracleDiff(OracleDiffArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Displacement CSV (`t,id,x,y[,z],d` or `t,id,x,y,dx,dy`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Contact list CSV (`t,i,j`); switches to explicit-contact mode.
    #[arg(long)]
    pub contacts: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Proximity threshold in meters.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Relative-displacement floor in mm.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Displacement differencing window in states.
    #[arg(long)]
    pub window: Option<usize>,
    /// Measure displacement change from the first state.
    #[arg(long)]
    pub cumulative: bool,
    #[arg(long)]
    pub rho_min: Option<f64>,
    #[arg(long)]
    pub rho_max: Option<f64>,
    /// Consecutive states required for a regime change.
    #[arg(long)]
    pub persistence: Option<usize>,
    #[arg(long)]
    pub smoothing_window: Option<usize>,
    #[arg(long)]
    pub regression_window: Option<usize>,
    /// Per-state wall-clock budget in seconds (warning only).
    #[arg(long)]
    pub budget_secs: Option<f64>,
    /// Worker threads for per-state analysis (0 = one per core).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write the effective configuration to stdout and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Scenario JSON; defaults to the standard 30 x 30 scenario.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noise standard deviation as a fraction of the planted increment.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Output series CSV.
    #[arg(long, default_value = "series.csv")]
    pub output: PathBuf,
    /// Also write the effective scenario JSON here.
    #[arg(long)]
    pub scenario_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleDiffArgs {
    /// Node count of every trial (overrides --min-n/--max-n).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub min_n: usize,
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn build_config(a: &AnalyzeArgs) -> Result<RunConfig, PipelineError> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &a.input {
        cfg.input = v.clone();
    }
    if let Some(v) = &a.contacts {
        cfg.contacts = Some(v.clone());
        cfg.connectivity.mode = ConnectivityMode::ExplicitContacts;
    }
    if let Some(v) = &a.output_dir {
        cfg.output_dir = v.clone();
    }
    if let Some(v) = a.threshold {
        cfg.connectivity.threshold = Some(v);
    }
    if let Some(v) = a.epsilon {
        cfg.capacity.epsilon = v;
    }
    if let Some(v) = a.window {
        cfg.capacity.window = v;
    }
    if a.cumulative {
        cfg.capacity.cumulative = true;
    }
    if a.rho_min.is_some() || a.rho_max.is_some() {
        let min = a.rho_min.unwrap_or(cfg.stability.primary.min);
        let max = a.rho_max.unwrap_or(cfg.stability.primary.max);
        cfg.stability.primary =
            RhoWindow::new(min, max).map_err(|e| PipelineError::Config(e.to_string()))?;
    }
    if let Some(v) = a.persistence {
        cfg.stability.regime.persistence = v;
    }
    if let Some(v) = a.smoothing_window {
        cfg.stability.smoothing_window = v;
    }
    if let Some(v) = a.regression_window {
        cfg.stability.forecast.regression_window = v;
    }
    if let Some(v) = a.budget_secs {
        cfg.budget_secs = v;
    }
    if let Some(v) = a.jobs {
        cfg.jobs = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn analyze(a: &AnalyzeArgs) -> Result<(), PipelineError> {
    let cfg = build_config(a)?;
    if a.print_config {
        println!("{}", cfg.to_json());
        return Ok(());
    }
    let out = run_pipeline(&cfg)?;
    let r = &out.report;
    println!("analyzed {} of {} states ({} points)", r.analyzed_states, r.states, r.points);
    match (&r.regime_change_state, &r.regime_change_time) {
        (Some(t), Some(label)) => println!("regime change: state {t} (t = {label})"),
        _ => println!("regime change: none detected"),
    }
    match r.t_failure {
        Some(tf) => println!("forecast failure time: state {tf:.3}"),
        None => println!("forecast failure time: none"),
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn generate(a: &GenerateArgs) -> Result<(), PipelineError> {
    let mut scn = match &a.scenario {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str::<SlopeScenario>(&text)
                .map_err(|e| PipelineError::Config(format!("scenario: {e}")))?
        }
        None => SlopeScenario::standard(),
    };
    if let Some(s) = a.seed {
        scn.seed = s;
    }
    if let Some(n) = a.noise {
        scn.noise_fraction = n;
    }
    let series = generate_slope(&scn).map_err(|e| PipelineError::Config(e.to_string()))?;
    write_series_path(&a.output, &series).map_err(|e| PipelineError::Output(e.to_string()))?;
    println!("wrote {} ({} points x {} states)", a.output.display(), series.point_count(), series.state_count());
    if let Some(p) = &a.scenario_out {
        let text = serde_json::to_string_pretty(&scn).expect("scenario serializes");
        std::fs::write(p, text + "\n").map_err(|e| PipelineError::Output(format!("{}: {e}", p.display())))?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn run_fixture_check() -> Result<u8, PipelineError> {
    let facts = fixture_check().map_err(|e| PipelineError::Analysis(e.to_string()))?;
    let mut all = true;
    for f in &facts {
        let verdict = if f.passed { "PASS" } else { "FAIL" };
        println!("{verdict}  {}  [{}]", f.statement, f.observed);
        all &= f.passed;
    }
    Ok(if all { EXIT_OK } else { EXIT_ANALYSIS })
}

fn run_oracle_diff(a: &OracleDiffArgs) -> Result<u8, PipelineError> {
    let (min_nodes, max_nodes) = a.n.map_or((a.min_n, a.max_n), |n| (n, n));
    if max_nodes > crate::scenarios::MAX_ORACLE_NODES {
        return Err(PipelineError::Config(format!(
            "at most {} nodes can be enumerated",
            crate::scenarios::MAX_ORACLE_NODES
        )));
    }
    let cfg = OracleDiffConfig { min_nodes, max_nodes, trials: a.trials, seed: a.seed, ..Default::default() };
    let rep = oracle_diff(&cfg).map_err(|e| PipelineError::Config(e.to_string()))?;
    println!("trials: {} ({} pair queries)", rep.trials, rep.pair_queries);
    println!("max-flow mismatches: {}", rep.flow_mismatches);
    println!("min-cut mismatches: {}", rep.cut_mismatches);
    println!("cut-tree mismatches: {}", rep.tree_mismatches);
    println!("bottleneck mismatches: {}", rep.bottleneck_mismatches);
    println!("bottleneck gaps from tied integer trees (informational): {}", rep.bottleneck_tie_gaps);
    println!("bottleneck above the unrestricted balanced minimum (informational): {}", rep.exhaustive_gaps);
    for ex in &rep.examples {
        println!("  {ex}");
    }
    println!("mismatches: {}", rep.mismatches());
    Ok(if rep.mismatches() == 0 { EXIT_OK } else { EXIT_ANALYSIS })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a).map(|_| EXIT_OK),
        Command::Generate(a) => generate(a).map(|_| EXIT_OK),
        Command::FixtureCheck => run_fixture_check(),
        Command::OracleDiff(a) => run_oracle_diff(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
