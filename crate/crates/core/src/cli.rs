//! Command-line front end.
//!
//! Configuration is a flat `key = value` file (values in TOML syntax, bare
//! words accepted as strings) plus `--set key=value` overrides. Every output
//! file starts with a header naming the tool version and a hash of the
//! resolved configuration.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::characteristics::{self, Direction, TraceOptions, Tracer};
use crate::energy::{self, ConcaveGauge, EnergyDiagnostics};
use crate::error::Error;
use crate::field::{PeriodicGrid, StateField};
use crate::output::{self, write_csv, write_json};
use crate::pressure::{self, PressureLaw, ValidationReport};
use crate::riemann::Family;
use crate::solver::{self, SolverConfig, Trajectory, TrajectoryStatus};
use crate::verify::{self, InitialData, Scenario, SweepParams};

pub const N_MIN: usize = 16;
pub const N_MAX: usize = 4096;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{origin}: {msg}")]
    Config { origin: String, msg: String },
    #[error("unknown key `{key}` ({origin})")]
    UnknownKey { key: String, origin: String },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::UnknownKey { .. } => 2,
            CliError::Io { .. } | CliError::Run(_) => 1,
        }
    }

    fn config(origin: impl Into<String>, msg: impl Into<String>) -> Self {
        CliError::Config { origin: origin.into(), msg: msg.into() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawName {
    Quadratic,
    Quartic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Constant,
    SimpleWave,
    RandomTrig,
    Trig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyChoice {
    First,
    Second,
    Both,
}

impl FamilyChoice {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyChoice::First => vec![Family::First],
            FamilyChoice::Second => vec![Family::Second],
            FamilyChoice::Both => Family::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Default,
    Quick,
}

/// Resolved configuration. Keys irrelevant to a subcommand are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub law: LawName,
    pub quartic_a: f64,
    pub n: usize,
    pub preset: PresetName,
    pub u0: f64,
    pub v0: f64,
    pub u_center: f64,
    pub amplitude: f64,
    pub mode: u32,
    pub seed: u64,
    pub modes: u32,
    pub u_offset: f64,
    pub v_amplitude: f64,
    pub t0: f64,
    pub t_max: f64,
    pub cfl_safety: f64,
    pub grad_blowup_factor: f64,
    pub front_cells_min: f64,
    pub tail_ratio_max: f64,
    pub hyperbolicity_eps: f64,
    pub snapshot_stride: usize,
    pub fixed_dt: Option<f64>,
    pub reverse_time: bool,
    pub max_steps: usize,
    pub seeds: usize,
    pub family: FamilyChoice,
    pub direction: Direction,
    pub growth_factor: f64,
    pub eps_b: f64,
    pub gauge: ConcaveGauge,
    pub u_min: f64,
    pub u_max: f64,
    pub samples: usize,
    pub suite: SuiteName,
    pub output_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        RunConfig {
            law: LawName::Quadratic,
            quartic_a: 0.0,
            n: 256,
            preset: PresetName::SimpleWave,
            u0: -1.0,
            v0: 0.0,
            u_center: -1.0,
            amplitude: 0.3,
            mode: 1,
            seed: 1,
            modes: 4,
            u_offset: -1.0,
            v_amplitude: 0.0,
            t0: 0.0,
            t_max: 2.0,
            cfl_safety: solver.cfl_safety,
            grad_blowup_factor: solver.grad_blowup_factor,
            front_cells_min: solver.front_cells_min,
            tail_ratio_max: solver.tail_ratio_max,
            hyperbolicity_eps: solver.hyperbolicity_eps,
            snapshot_stride: solver.snapshot_stride,
            fixed_dt: None,
            reverse_time: false,
            max_steps: solver.max_steps,
            seeds: 16,
            family: FamilyChoice::Both,
            direction: Direction::Forward,
            growth_factor: characteristics::DEFAULT_GROWTH_FACTOR,
            eps_b: characteristics::DEFAULT_EPS_B,
            gauge: ConcaveGauge::Log1p,
            u_min: -10.0,
            u_max: 10.0,
            samples: 2001,
            suite: SuiteName::Default,
            output_dir: "out".into(),
        }
    }
}

impl RunConfig {
    pub fn law(&self) -> CliResult<PressureLaw> {
        match self.law {
            LawName::Quadratic => Ok(PressureLaw::Quadratic),
            LawName::Quartic => PressureLaw::quartic(self.quartic_a).map_err(|e| CliError::config("quartic_a", e.to_string())),
        }
    }

    pub fn initial_data(&self) -> InitialData {
        match self.preset {
            PresetName::Constant => InitialData::Constant { u0: self.u0, v0: self.v0 },
            PresetName::SimpleWave => {
                InitialData::SimpleWave { u_center: self.u_center, amplitude: self.amplitude, mode: self.mode }
            }
            PresetName::RandomTrig => InitialData::RandomTrig {
                seed: self.seed,
                modes: self.modes,
                amplitude: self.amplitude,
                u_offset: self.u_offset,
            },
            PresetName::Trig => InitialData::Trig {
                u0: self.u0,
                amplitude: self.amplitude,
                mode: self.mode,
                v0: self.v0,
                v_amplitude: self.v_amplitude,
            },
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cfl_safety: self.cfl_safety,
            t_max: self.t_max,
            grad_blowup_factor: self.grad_blowup_factor,
            front_cells_min: self.front_cells_min,
            tail_ratio_max: self.tail_ratio_max,
            hyperbolicity_eps: self.hyperbolicity_eps,
            snapshot_stride: self.snapshot_stride,
            fixed_dt: self.fixed_dt,
            reverse_time: self.reverse_time,
            max_steps: self.max_steps,
        }
    }

    pub fn grid(&self) -> CliResult<PeriodicGrid> {
        PeriodicGrid::new(self.n).map_err(|e| CliError::config("n", e.to_string()))
    }

    /// Checks everything that can be checked without running; returns
    /// non-fatal warnings.
    pub fn validate(&self) -> CliResult<Vec<String>> {
        if !self.n.is_power_of_two() || !(N_MIN..=N_MAX).contains(&self.n) {
            return Err(CliError::config("n", format!("must be a power of two in [{N_MIN}, {N_MAX}], got {}", self.n)));
        }
        self.law()?;
        self.initial_data().validate().map_err(|e| CliError::config("preset", e.to_string()))?;
        let warnings = self
            .solver_config()
            .validate(self.t0)
            .map_err(|e| CliError::config("solver", e.to_string()))?;
        if self.seeds == 0 {
            return Err(CliError::config("seeds", "must be at least 1"));
        }
        if !(self.growth_factor > 1.0) || !(self.eps_b > 0.0) {
            return Err(CliError::config("growth_factor/eps_b", "need growth_factor > 1 and eps_b > 0"));
        }
        if self.output_dir.is_empty() {
            return Err(CliError::config("output_dir", "must not be empty"));
        }
        Ok(warnings)
    }

    /// Hash of the resolved configuration, excluding the output location.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir.clear();
        output::config_hash(&toml::to_string(&c).expect("flat config serializes"))
    }
}

fn parse_value(raw: &str) -> Option<toml::Value> {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v"),
        Err(_) if !raw.is_empty() && raw.chars().all(|c| c.is_ascii_alphanumeric() || "_-./".contains(c)) => {
            Some(toml::Value::String(raw.to_string()))
        }
        Err(_) => None,
    }
}

fn insert_entry(
    table: &mut toml::Table,
    origins: &mut BTreeMap<String, String>,
    entry: &str,
    origin: String,
    allow_override: bool,
) -> CliResult<()> {
    let (key, raw) = entry
        .split_once('=')
        .ok_or_else(|| CliError::config(&origin, format!("expected `key = value`, got `{entry}`")))?;
    let key = key.trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
        return Err(CliError::config(&origin, format!("invalid key `{key}`")));
    }
    let value = parse_value(raw.trim())
        .ok_or_else(|| CliError::config(&origin, format!("cannot parse value `{}` for `{key}`", raw.trim())))?;
    if !allow_override && table.contains_key(key) {
        return Err(CliError::config(&origin, format!("duplicate key `{key}`")));
    }
    table.insert(key.to_string(), value);
    origins.insert(key.to_string(), origin);
    Ok(())
}

/// Builds a validated configuration from optional file text and overrides.
/// `source` names the file in diagnostics.
pub fn parse_config(file: Option<(&str, &str)>, sets: &[String]) -> CliResult<(RunConfig, Vec<String>)> {
    let mut table = toml::Table::new();
    let mut origins = BTreeMap::new();
    if let Some((source, text)) = file {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            insert_entry(&mut table, &mut origins, line, format!("{source}:{}", i + 1), false)?;
        }
    }
    for s in sets {
        insert_entry(&mut table, &mut origins, s, format!("--set {s}"), true)?;
    }
    let config: RunConfig = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| {
        let msg = e.message().to_string();
        if let Some(rest) = msg.strip_prefix("unknown field `") {
            let key = rest.split('`').next().unwrap_or_default().to_string();
            let origin = origins.get(&key).cloned().unwrap_or_else(|| "config".into());
            return CliError::UnknownKey { key, origin };
        }
        let origin = origins
            .iter()
            .find(|(k, _)| msg.contains(&format!("`{k}`")))
            .map(|(_, o)| o.clone())
            .unwrap_or_else(|| "config".into());
        CliError::config(origin, msg)
    })?;
    let warnings = config.validate()?;
    Ok((config, warnings))
}

#[derive(Debug, Parser)]
#[command(name = "psystem", version, about = "Numerical laboratory for the mixed-type p-system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set n=512`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub sets: Vec<String>,
    /// Output directory; overrides `output_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the solver; writes series.csv, snapshots.csv and run.json.
    Simulate,
    /// Trace characteristics from equispaced seeds; writes curve CSVs and classification.json.
    Trace,
    /// Blow-up prediction per seed; writes predict.csv.
    Predict,
    /// Elliptic energy diagnostics of the initial field; writes energy.json.
    Energy,
    /// Run the scenario suite; writes verify.json.
    Verify,
    /// Check the pressure law on [u_min, u_max]; writes validate_law.json.
    ValidateLaw,
}

struct Ctx {
    config: RunConfig,
    hash: String,
    out: PathBuf,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn csv(&self, name: &str, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> CliResult<PathBuf> {
        let path = self.path(name);
        write_csv(&path, &self.hash, columns, rows).map_err(|source| CliError::Io { path: path.clone(), source })?;
        Ok(path)
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let path = self.path(name);
        write_json(&path, &self.hash, value).map_err(|source| CliError::Io { path: path.clone(), source })?;
        Ok(path)
    }

    fn initial_state(&self) -> CliResult<(PressureLaw, StateField)> {
        let law = self.config.law()?;
        let state = self.config.initial_data().realize(&law, &self.config.grid()?)?;
        Ok((law, state))
    }

    fn simulate(&self) -> CliResult<Trajectory> {
        let (law, state) = self.initial_state()?;
        Ok(solver::run(&law, &state, self.config.t0, &self.config.solver_config())?)
    }
}

#[derive(Serialize)]
struct RunSummary<'a> {
    #[serde(flatten)]
    status: TrajectoryStatus,
    steps: usize,
    t_end: f64,
    time_reversed: bool,
    law: PressureLaw,
    n: usize,
    warnings: &'a [String],
}

fn cmd_simulate(ctx: &Ctx, warnings: &[String]) -> CliResult<i32> {
    let traj = ctx.simulate()?;
    ctx.csv(
        "series.csv",
        &["t", "max_u", "min_u", "max_abs_ux", "max_abs_vx", "tail_ratio"],
        traj.series.iter().map(|r| vec![r.t, r.max_u, r.min_u, r.max_abs_ux, r.max_abs_vx, r.tail_ratio]),
    )?;
    ctx.csv(
        "snapshots.csv",
        &["t", "x", "u", "v"],
        traj.snapshots.iter().flat_map(|s| {
            let g = s.state.grid();
            (0..g.n()).map(move |j| vec![s.t, g.node(j), s.state.u[j], s.state.v[j]])
        }),
    )?;
    let summary = RunSummary {
        status: traj.status,
        steps: traj.steps,
        t_end: traj.t_end(),
        time_reversed: traj.time_reversed,
        law: traj.law,
        n: ctx.config.n,
        warnings,
    };
    let path = ctx.json("run.json", &summary)?;
    println!("status={} steps={} t_end={} -> {}", traj.status.name(), traj.steps, output::fmt_g17(traj.t_end()), path.display());
    Ok(0)
}

#[derive(Serialize)]
struct CurveRecord {
    x0: f64,
    family: Family,
    direction: Direction,
    label: characteristics::ClassLabel,
    termination: characteristics::Termination,
    invariant_drift: f64,
    file: String,
}

#[derive(Serialize)]
struct Classification {
    growth_factor: f64,
    eps_b: f64,
    horizon: f64,
    curves: Vec<CurveRecord>,
    skipped_elliptic_seeds: Vec<f64>,
}

fn window(tracer: &Tracer, dir: Direction) -> (f64, f64) {
    match dir {
        Direction::Forward => (tracer.t_first(), tracer.t_last()),
        Direction::Backward => (tracer.t_last(), tracer.t_first()),
    }
}

fn cmd_trace(ctx: &Ctx) -> CliResult<i32> {
    let c = &ctx.config;
    let traj = ctx.simulate()?;
    let tracer = Tracer::new(&traj)?;
    let (t_start, horizon) = window(&tracer, c.direction);
    let opts = TraceOptions { eps_b: c.eps_b, ..Default::default() };
    let mut report =
        Classification { growth_factor: c.growth_factor, eps_b: c.eps_b, horizon, curves: Vec::new(), skipped_elliptic_seeds: Vec::new() };
    for j in 0..c.seeds {
        let x0 = j as f64 / c.seeds as f64;
        if !(tracer.u_at(t_start, x0) < -c.eps_b) {
            report.skipped_elliptic_seeds.push(x0);
            continue;
        }
        for fam in c.family.families() {
            let curve = tracer.trace(x0, fam, c.direction, &opts)?;
            let name = format!("curve_r{}_{:?}_{j:04}.csv", fam.index(), c.direction).to_lowercase();
            ctx.csv(
                &name,
                &["t", "x", "u", "r1", "r2", "beta", "K_accum"],
                curve.samples.iter().map(|s| vec![s.t, s.x, s.u, s.r1, s.r2, s.beta, s.k_accum]),
            )?;
            report.curves.push(CurveRecord {
                x0,
                family: fam,
                direction: c.direction,
                label: characteristics::classify(&curve, horizon, c.growth_factor, c.eps_b),
                termination: curve.termination,
                invariant_drift: characteristics::invariant_drift(&curve),
                file: name,
            });
        }
    }
    let path = ctx.json("classification.json", &report)?;
    println!("traced {} curves ({} seeds skipped) -> {}", report.curves.len(), report.skipped_elliptic_seeds.len(), path.display());
    Ok(0)
}

fn cmd_predict(ctx: &Ctx) -> CliResult<i32> {
    let c = &ctx.config;
    let traj = ctx.simulate()?;
    let tracer = Tracer::new(&traj)?;
    let (t_start, _) = window(&tracer, c.direction);
    let opts = TraceOptions { eps_b: c.eps_b, ..Default::default() };
    let mut rows = Vec::new();
    let mut earliest = f64::INFINITY;
    for j in 0..c.seeds {
        let x0 = j as f64 / c.seeds as f64;
        if !(tracer.u_at(t_start, x0) < -c.eps_b) {
            continue;
        }
        for fam in c.family.families() {
            let curve = tracer.trace(x0, fam, c.direction, &opts)?;
            let beta0 = curve.start().beta;
            let inside = characteristics::predict_blowup(&curve, beta0).unwrap_or(f64::NAN);
            let extrapolated = characteristics::predict_blowup_extrapolated(&traj.law, &curve, beta0).unwrap_or(f64::NAN);
            earliest = earliest.min(extrapolated);
            rows.push(vec![x0, fam.index() as f64, beta0, inside, extrapolated]);
        }
    }
    let path = ctx.csv("predict.csv", &["x0", "family", "beta0", "t_window", "t_extrapolated"], rows)?;
    println!(
        "status={} earliest_predicted={} -> {}",
        traj.status.name(),
        output::fmt_g17(if earliest.is_finite() { earliest } else { f64::NAN }),
        path.display()
    );
    Ok(0)
}

#[derive(Serialize)]
struct EnergyReport {
    #[serde(flatten)]
    diagnostics: EnergyDiagnostics,
    gauge: ConcaveGauge,
}

fn cmd_energy(ctx: &Ctx) -> CliResult<i32> {
    let (law, state) = ctx.initial_state()?;
    let diagnostics = energy::diagnostics(&law, &state, ctx.config.gauge)?;
    let path = ctx.json("energy.json", &EnergyReport { diagnostics, gauge: ctx.config.gauge })?;
    println!(
        "E={} ddot_formula={} identity_gap={} -> {}",
        output::fmt_g17(diagnostics.e),
        output::fmt_g17(diagnostics.ddot_formula),
        output::fmt_g17(diagnostics.identity_gap),
        path.display()
    );
    Ok(0)
}

/// A fast subset of the default suite.
pub fn quick_suite() -> Vec<Scenario> {
    let quad = PressureLaw::Quadratic;
    vec![
        Scenario::Constant { law: quad, u0: -1.0, v0: 0.0, t_max: 10.0 },
        Scenario::Sweep { law: quad, params: SweepParams { n_seeds: 2, n: 256, ..Default::default() } },
        Scenario::LinearResidual,
        Scenario::Riccati { law: quad, profile: verify::UProfile::Constant { u0: -1.0 }, t_end: 2.0 },
        Scenario::Energy { law: quad, n_fields: 5, seed: 42 },
    ]
}

fn cmd_verify(ctx: &Ctx) -> CliResult<i32> {
    let scenarios = match ctx.config.suite {
        SuiteName::Default => verify::default_suite(),
        SuiteName::Quick => quick_suite(),
    };
    let mut summary = verify::run_suite(&scenarios);
    let path = ctx.path("verify.json");
    for r in &mut summary.reports {
        r.artifacts.push(path.display().to_string());
    }
    ctx.json("verify.json", &summary)?;
    for r in &summary.reports {
        println!("{:<34} {:?}", r.scenario_id, r.verdict);
    }
    println!("{}/{} passed -> {}", summary.passed, summary.total, path.display());
    Ok(if summary.all_pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct LawReport {
    law: PressureLaw,
    valid: bool,
    report: ValidationReport,
}

fn cmd_validate_law(ctx: &Ctx) -> CliResult<i32> {
    let c = &ctx.config;
    let law = c.law()?;
    let report = pressure::validate_law(&law, c.u_min, c.u_max, c.samples)
        .map_err(|e| CliError::config("u_min/u_max/samples", e.to_string()))?;
    let valid = report.is_valid();
    let path = ctx.json("validate_law.json", &LawReport { law, valid, report })?;
    println!("{law}: {} -> {}", if valid { "valid" } else { "violations found" }, path.display());
    Ok(if valid { 0 } else { 1 })
}

fn prepare(cli: &Cli) -> CliResult<(Ctx, Vec<String>)> {
    let text = match &cli.config {
        Some(p) => Some(fs::read_to_string(p).map_err(|e| CliError::config(p.display().to_string(), e.to_string()))?),
        None => None,
    };
    let source = cli.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let (mut config, warnings) = parse_config(text.as_deref().map(|t| (source.as_str(), t)), &cli.sets)?;
    if let Some(out) = &cli.out {
        config.output_dir = out.display().to_string();
    }
    let out = PathBuf::from(&config.output_dir);
    fs::create_dir_all(&out).map_err(|e| CliError::config("output_dir", format!("{}: {e}", out.display())))?;
    let hash = config.hash();
    let ctx = Ctx { config, hash, out };
    write_run_log(&ctx, cli.command, &warnings)?;
    Ok((ctx, warnings))
}

fn write_run_log(ctx: &Ctx, command: Command, warnings: &[String]) -> CliResult<()> {
    let path = ctx.path("run.log");
    let mut text = format!("# {}\n# command: {command:?}\n", output::header_text(&ctx.hash));
    text.push_str(&toml::to_string(&ctx.config).expect("flat config serializes"));
    for w in warnings {
        text.push_str(&format!("# warning: {w}\n"));
    }
    fs::write(&path, text).map_err(|source| CliError::config("output_dir", format!("{}: {source}", path.display())))
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let (ctx, warnings) = prepare(cli)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    match cli.command {
        Command::Simulate => cmd_simulate(&ctx, &warnings),
        Command::Trace => cmd_trace(&ctx),
        Command::Predict => cmd_predict(&ctx),
        Command::Energy => cmd_energy(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::ValidateLaw => cmd_validate_law(&ctx),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Reads a config file from `path` for tests and tools.
pub fn load_config(path: &Path, sets: &[String]) -> CliResult<(RunConfig, Vec<String>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(path.display().to_string(), e.to_string()))?;
    parse_config(Some((&path.display().to_string(), &text)), sets)
}
