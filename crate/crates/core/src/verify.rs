//! Reproducible scenarios assembling the solver, the tracer and the energy
//! diagnostics, each producing a self-describing [`ScenarioReport`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristics::{self, Direction, TraceOptions, Tracer};
use crate::energy::{self, ConcaveGauge};
use crate::error::{Error, Result};
use crate::field::{self, PeriodicGrid, StateField};
use crate::numerics;
use crate::pressure::{Pressure, PressureLaw};
use crate::riemann::{self, Family};
use crate::solver::{self, SolverConfig, TrajectoryStatus};

/// Random data keeps `max u` at or below this.
pub const HYPERBOLIC_CEILING: f64 = -0.05;
/// Data whose relative amplitude is below this is numerically constant.
pub const INCONCLUSIVE_AMPLITUDE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum InitialData {
    Constant { u0: f64, v0: f64 },
    /// `u = u_center + amplitude·sin(2π·mode·x)`, `v = -q(u)`, so `r2 ≡ 0`.
    SimpleWave { u_center: f64, amplitude: f64, mode: u32 },
    /// Sum of `modes` Fourier modes with uniform coefficients damped by `1/m`,
    /// normalised to `max|·| = amplitude` on the grid. The amplitude of `u`
    /// is capped so that `max u <= HYPERBOLIC_CEILING`.
    RandomTrig { seed: u64, modes: u32, amplitude: f64, u_offset: f64 },
    /// `u = u0 + amplitude·sin(2π·mode·x)`, `v = v0 + v_amplitude·cos(2π·mode·x)`
    /// with no sign restriction; used for the static elliptic diagnostics.
    Trig { u0: f64, amplitude: f64, mode: u32, v0: f64, v_amplitude: f64 },
}

impl InitialData {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            InitialData::Constant { u0, v0 } => {
                if !(u0 < 0.0) || !v0.is_finite() {
                    return bad(format!("constant preset needs u0 < 0, got u0={u0}, v0={v0}"));
                }
            }
            InitialData::SimpleWave { u_center, amplitude, mode } => {
                if !(u_center + amplitude.abs() < 0.0) || mode == 0 {
                    return bad(format!(
                        "simple wave needs u_center + |amplitude| < 0 and mode >= 1, got {u_center}, {amplitude}, {mode}"
                    ));
                }
            }
            InitialData::RandomTrig { modes, amplitude, u_offset, .. } => {
                if !(u_offset < HYPERBOLIC_CEILING) || modes == 0 || !(amplitude >= 0.0) {
                    return bad(format!(
                        "random_trig needs u_offset < {HYPERBOLIC_CEILING}, modes >= 1 and amplitude >= 0"
                    ));
                }
            }
            InitialData::Trig { u0, amplitude, v0, v_amplitude, .. } => {
                if ![u0, amplitude, v0, v_amplitude].iter().all(|x| x.is_finite()) {
                    return bad("trig preset needs finite parameters".into());
                }
            }
        }
        Ok(())
    }

    pub fn realize(&self, law: &PressureLaw, grid: &PeriodicGrid) -> Result<StateField> {
        self.validate()?;
        match *self {
            InitialData::Constant { u0, v0 } => StateField::constant(grid.clone(), u0, v0),
            InitialData::SimpleWave { u_center, amplitude, mode } => {
                let u = grid.sample(|x| u_center + amplitude * (2.0 * PI * mode as f64 * x).sin());
                let v = u.iter().map(|&u| q_neg(law, u)).collect::<Result<Vec<_>>>()?;
                StateField::new(grid.clone(), u, v)
            }
            InitialData::RandomTrig { seed, modes, amplitude, u_offset } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let gu = random_profile(&mut rng, grid, modes);
                let gv = random_profile(&mut rng, grid, modes);
                let au = amplitude.min(HYPERBOLIC_CEILING - u_offset);
                let u = gu.iter().map(|g| u_offset + au * g).collect();
                let v = gv.iter().map(|g| amplitude * g).collect();
                StateField::new(grid.clone(), u, v)
            }
            InitialData::Trig { u0, amplitude, mode, v0, v_amplitude } => {
                let w = 2.0 * PI * mode as f64;
                StateField::from_fn(grid.clone(), |x| u0 + amplitude * (w * x).sin(), |x| v0 + v_amplitude * (w * x).cos())
            }
        }
    }
}

fn q_neg(law: &PressureLaw, u: f64) -> Result<f64> {
    Ok(-riemann::q_of_u(law, u)?)
}

/// Zero-mean trigonometric sum normalised to `max|g| = 1` on the grid.
fn random_profile(rng: &mut ChaCha8Rng, grid: &PeriodicGrid, modes: u32) -> Vec<f64> {
    let coeffs: Vec<(f64, f64)> = (0..modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let g = grid.sample(|x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let m = (i + 1) as f64;
                (a * (2.0 * PI * m * x).cos() + b * (2.0 * PI * m * x).sin()) / m
            })
            .sum()
    });
    let peak = g.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
    if peak > 0.0 {
        g.iter().map(|x| x / peak).collect()
    } else {
        g
    }
}

/// Oscillation of the state relative to its mean level.
pub fn relative_amplitude(state: &StateField) -> f64 {
    let osc = |w: &[f64]| {
        let (lo, hi) = w.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        hi - lo
    };
    let scale = field::mean(&state.u).abs().max(field::mean(&state.v).abs()).max(1.0);
    osc(&state.u).max(osc(&state.v)) / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario_id: String,
    pub law: PressureLaw,
    /// Base seed; 0 for scenarios without randomness.
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub verdict: Verdict,
    pub thresholds: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ScenarioReport {
    fn new(id: impl Into<String>, law: PressureLaw, seed: u64) -> Self {
        ScenarioReport {
            scenario_id: id.into(),
            law,
            seed,
            metrics: BTreeMap::new(),
            verdict: Verdict::Inconclusive,
            thresholds: BTreeMap::new(),
            artifacts: Vec::new(),
            reason: None,
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn threshold(&mut self, key: &str, value: f64) {
        self.thresholds.insert(key.to_string(), value);
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Fail;
        self.reason = Some(reason.into());
        self
    }

    fn decide(&mut self, pass: bool) {
        self.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn finish(report: ScenarioReport, body: impl FnOnce(&mut ScenarioReport) -> Result<()>) -> ScenarioReport {
    let mut report = report;
    match body(&mut report) {
        Ok(()) => report,
        Err(e) => report.fail(e.to_string()),
    }
}

pub const CONSTANT_DEVIATION_MAX: f64 = 1e-10;

pub fn scenario_constant(law: PressureLaw, u0: f64, v0: f64, t_max: f64) -> ScenarioReport {
    finish(ScenarioReport::new("constant", law, 0), |r| {
        r.threshold("deviation_max", CONSTANT_DEVIATION_MAX);
        r.metric("u0", u0);
        r.metric("v0", v0);
        r.metric("t_max", t_max);
        let grid = PeriodicGrid::new(64)?;
        let state = InitialData::Constant { u0, v0 }.realize(&law, &grid)?;
        let cfg = SolverConfig { t_max, snapshot_stride: usize::MAX, ..Default::default() };
        let traj = solver::run(&law, &state, 0.0, &cfg)?;
        let last = &traj.snapshots.last().expect("at least one snapshot").state;
        let deviation = last.max_abs_diff(&state);
        r.metric("deviation", deviation);
        r.metric("t_end", traj.t_end());
        r.metric("steps", traj.steps as f64);
        r.decide(traj.status == TrajectoryStatus::Completed && deviation < CONSTANT_DEVIATION_MAX);
        Ok(())
    })
}

/// Crossing time `-1/min ∂_x λ₁` of the initial simple wave from `samples`
/// equispaced points; `None` if `λ₁` is nowhere decreasing.
pub fn burgers_oracle(law: &PressureLaw, u_center: f64, amplitude: f64, mode: u32, samples: usize) -> Option<f64> {
    let w = 2.0 * PI * mode as f64;
    let slope = (0..samples)
        .map(|j| {
            let x = j as f64 / samples as f64;
            let u = u_center + amplitude * (w * x).sin();
            let ux = amplitude * w * (w * x).cos();
            // λ₁ = √(-p'(u)), ∂_x λ₁ = -p''(u) u_x / (2 λ₁)
            -law.ddp(u) * ux / (2.0 * riemann::sound_speed(law, u))
        })
        .fold(f64::INFINITY, f64::min);
    (slope < 0.0).then(|| -1.0 / slope)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleWaveParams {
    pub u_center: f64,
    pub amplitude: f64,
    pub mode: u32,
    pub n: usize,
    /// Defaults to twice the oracle time.
    pub t_max: Option<f64>,
    pub seeds: usize,
    pub oracle_samples: usize,
}

impl Default for SimpleWaveParams {
    fn default() -> Self {
        SimpleWaveParams {
            u_center: -1.0,
            amplitude: 0.3,
            mode: 1,
            n: 1024,
            t_max: None,
            seeds: 64,
            oracle_samples: 100_000,
        }
    }
}

pub const TIME_GAP_MAX: f64 = 0.05;
pub const DRIFT_MAX: f64 = 1e-4;
pub const DRIFT_GRADIENT_FACTOR: f64 = 10.0;
pub const PAIR_CHECK_SEEDS: usize = 16;

pub fn scenario_simple_wave_blowup(law: PressureLaw, p: SimpleWaveParams) -> ScenarioReport {
    finish(ScenarioReport::new("simple_wave_blowup", law, 0), |r| {
        r.threshold("relative_gap_max", TIME_GAP_MAX);
        r.threshold("invariant_drift_max", DRIFT_MAX);
        r.threshold("drift_gradient_factor", DRIFT_GRADIENT_FACTOR);
        r.metric("u_center", p.u_center);
        r.metric("amplitude", p.amplitude);
        r.metric("mode", p.mode as f64);
        r.metric("n", p.n as f64);
        let data = InitialData::SimpleWave { u_center: p.u_center, amplitude: p.amplitude, mode: p.mode };
        data.validate()?;
        if p.amplitude == 0.0 {
            r.verdict = Verdict::Inconclusive;
            r.reason = Some("zero amplitude: constant data, no blow-up to compare".into());
            return Ok(());
        }
        let t_oracle = burgers_oracle(&law, p.u_center, p.amplitude, p.mode, p.oracle_samples)
            .ok_or_else(|| Error::InvalidParameter("simple wave has no compressive part".into()))?;
        r.metric("t_oracle", t_oracle);

        let grid = PeriodicGrid::new(p.n)?;
        let state = data.realize(&law, &grid)?;
        let cfg = SolverConfig { t_max: p.t_max.unwrap_or(2.0 * t_oracle), snapshot_stride: 2, ..Default::default() };
        let traj = solver::run(&law, &state, 0.0, &cfg)?;
        r.metric("steps", traj.steps as f64);
        let t_detect = match traj.status {
            TrajectoryStatus::BlowUpDetected { t_detect } => t_detect,
            other => {
                r.verdict = Verdict::Fail;
                r.reason = Some(format!("solver ended with status {}", other.name()));
                return Ok(());
            }
        };
        r.metric("t_detect", t_detect);

        let tracer = Tracer::new(&traj)?;
        let opts = TraceOptions::default();
        let jobs: Vec<(usize, Family)> =
            (0..p.seeds).flat_map(|j| Family::BOTH.into_iter().map(move |f| (j, f))).collect();
        let curves = jobs
            .par_iter()
            .map(|&(j, fam)| tracer.trace(j as f64 / p.seeds as f64, fam, Direction::Forward, &opts))
            .collect::<Result<Vec<_>>>()?;
        let t_predicted = curves
            .iter()
            .filter(|c| c.family == Family::First)
            .filter_map(|c| characteristics::predict_blowup_extrapolated(&law, c, c.start().beta))
            .fold(f64::INFINITY, f64::min);
        r.metric("t_predicted", t_predicted);

        let t_limit = traj.time_gradient_exceeds(DRIFT_GRADIENT_FACTOR).unwrap_or(traj.t_end());
        r.metric("t_gradient_10x", t_limit);
        for fam in Family::BOTH {
            let drift = curves
                .iter()
                .filter(|c| c.family == fam)
                .map(|c| characteristics::invariant_drift_until(c, t_limit))
                .fold(0.0, f64::max);
            r.metric(&format!("drift_r{}", fam.index()), drift);
        }

        let pairs = characteristics::same_direction_check(&traj, PAIR_CHECK_SEEDS)?;
        r.metric("same_direction_b_pairs", pairs.violations.len() as f64);

        let gap = |a: f64, b: f64| (a - b).abs() / b;
        r.metric("gap_detect_oracle", gap(t_detect, t_oracle));
        r.metric("gap_predicted_oracle", gap(t_predicted, t_oracle));
        r.metric("gap_detect_predicted", gap(t_detect, t_predicted));
        let m = &r.metrics;
        let pass = m["gap_detect_oracle"] < TIME_GAP_MAX
            && m["gap_predicted_oracle"] < TIME_GAP_MAX
            && m["gap_detect_predicted"] < TIME_GAP_MAX
            && m["drift_r1"] < DRIFT_MAX
            && m["drift_r2"] < DRIFT_MAX
            && pairs.violations.is_empty();
        r.decide(pass);
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    pub n_seeds: u64,
    pub first_seed: u64,
    pub t_max: f64,
    pub n: usize,
    pub modes: u32,
    pub amplitude: f64,
    pub u_offset: f64,
    /// Evolve the reflected system, so the sweep runs backward in time.
    pub reverse_time: bool,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            n_seeds: 20,
            first_seed: 1,
            t_max: 50.0,
            n: 512,
            modes: 4,
            amplitude: 0.15,
            u_offset: -1.0,
            reverse_time: false,
        }
    }
}

pub fn scenario_random_hyperbolic_sweep(law: PressureLaw, p: SweepParams) -> ScenarioReport {
    let id = if p.reverse_time { "random_hyperbolic_sweep_backward" } else { "random_hyperbolic_sweep" };
    finish(ScenarioReport::new(id, law, p.first_seed), |r| {
        if p.n_seeds == 0 {
            return Err(Error::InvalidParameter("n_seeds must be at least 1".into()));
        }
        r.threshold("t_max", p.t_max);
        r.threshold("inconclusive_amplitude", INCONCLUSIVE_AMPLITUDE);
        r.metric("n_seeds", p.n_seeds as f64);
        r.metric("n", p.n as f64);
        let grid = PeriodicGrid::new(p.n)?;
        let outcomes = (p.first_seed..p.first_seed + p.n_seeds)
            .into_par_iter()
            .map(|seed| -> Result<(u64, Option<(TrajectoryStatus, usize)>)> {
                let data = InitialData::RandomTrig { seed, modes: p.modes, amplitude: p.amplitude, u_offset: p.u_offset };
                let state = data.realize(&law, &grid)?;
                if relative_amplitude(&state) < INCONCLUSIVE_AMPLITUDE {
                    return Ok((seed, None));
                }
                let cfg = SolverConfig { t_max: p.t_max, reverse_time: p.reverse_time, ..Default::default() };
                let traj = solver::run(&law, &state, 0.0, &cfg)?;
                let violations = characteristics::same_direction_check(&traj, PAIR_CHECK_SEEDS)?.violations.len();
                Ok((seed, Some((traj.status, violations))))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut counts = BTreeMap::from([("blow_up", 0), ("resolution_lost", 0), ("completed", 0), ("other", 0)]);
        let (mut inconclusive, mut violations, mut t_latest) = (0, 0, 0.0f64);
        for (seed, outcome) in outcomes {
            let Some((status, v)) = outcome else {
                inconclusive += 1;
                continue;
            };
            violations += v;
            let key = match status {
                TrajectoryStatus::BlowUpDetected { .. } => "blow_up",
                TrajectoryStatus::ResolutionLost { .. } => "resolution_lost",
                TrajectoryStatus::Completed => "completed",
                TrajectoryStatus::AdmissionRefused => "other",
            };
            *counts.get_mut(key).unwrap() += 1;
            let t_stop = status.t_stop().unwrap_or(f64::NAN);
            t_latest = t_latest.max(t_stop);
            r.metric(&format!("t_stop_seed_{seed}"), t_stop);
        }
        for (k, v) in &counts {
            r.metric(&format!("n_{k}"), *v as f64);
        }
        r.metric("n_inconclusive", inconclusive as f64);
        r.metric("t_stop_latest", t_latest);
        r.metric("same_direction_b_pairs", violations as f64);
        let terminated = counts["blow_up"] + counts["resolution_lost"];
        if terminated + inconclusive == p.n_seeds as usize && inconclusive > 0 && violations == 0 {
            r.verdict = Verdict::Inconclusive;
            r.reason = Some(format!("{inconclusive} seed(s) below the amplitude floor"));
        } else {
            r.decide(terminated == p.n_seeds as usize && t_latest < p.t_max && violations == 0);
        }
        Ok(())
    })
}

/// Residuals of the system for `(u, v) = (t, -x)` under the quadratic law.
pub fn scenario_linear_residual(law: PressureLaw) -> ScenarioReport {
    finish(ScenarioReport::new("linear_residual", law, 0), |r| {
        if !law.is_quadratic() {
            return Err(Error::InvalidParameter("the (t, -x) solution needs the quadratic law".into()));
        }
        r.threshold("residual_max", 0.0);
        // u = t, v = -x: u_t = 1, u_x = 0, v_t = 0, v_x = -1
        let (u_t, u_x, v_t, v_x) = (1.0f64, 0.0f64, 0.0f64, -1.0f64);
        let u = |t: f64, _x: f64| t;
        let v = |x: f64| -x;
        let (mut res1, mut res2, mut u_period) = (0.0f64, 0.0f64, 0.0f64);
        let mut v_jumps = Vec::new();
        for i in 0..=16 {
            let t = -2.0 + 0.25 * i as f64;
            for j in 0..8 {
                let x = j as f64 / 8.0;
                res1 = res1.max((u_t + v_x).abs());
                res2 = res2.max((v_t - law.dp(u(t, x)) * u_x).abs());
                u_period = u_period.max((u(t, x + 1.0) - u(t, x)).abs());
                v_jumps.push(v(x + 1.0) - v(x));
            }
        }
        let v_period = if v_jumps.iter().all(|&d| d == v_jumps[0]) { v_jumps[0] } else { f64::NAN };
        r.metric("residual_1", res1);
        r.metric("residual_2", res2);
        r.metric("u_period_jump", u_period);
        r.metric("v_period_jump", v_period);
        r.decide(res1 == 0.0 && res2 == 0.0 && u_period == 0.0 && v_period == -1.0);
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum UProfile {
    /// `u(t) = u0`
    Constant { u0: f64 },
    /// `u(t) = u0 - rate·t`
    Ramp { u0: f64, rate: f64 },
}

impl UProfile {
    pub fn at(self, t: f64) -> f64 {
        match self {
            UProfile::Constant { u0 } => u0,
            UProfile::Ramp { u0, rate } => u0 - rate * t,
        }
    }
}

pub const RICCATI_GAP_MAX: f64 = 1e-6;

/// Integrates `β' = -k(u(t)) β²` on `[0, t_end]` and compares with the closed
/// form at several times, over the grid `β₀ ∈ {0, -2, -0.5, 0.1, 0.9 β_crit}`.
pub fn scenario_riccati_crosscheck(law: PressureLaw, profile: UProfile, t_end: f64) -> ScenarioReport {
    let id = match profile {
        UProfile::Constant { .. } => "riccati_crosscheck_constant",
        UProfile::Ramp { .. } => "riccati_crosscheck_ramp",
    };
    finish(ScenarioReport::new(id, law, 0), |r| {
        r.threshold("relative_gap_max", RICCATI_GAP_MAX);
        if !(t_end > 0.0) || (0..=64).any(|i| !(profile.at(t_end * i as f64 / 64.0) < 0.0)) {
            return Err(Error::InvalidParameter("profile must stay hyperbolic on the window".into()));
        }
        let k = |t: f64| riemann::riccati_k(&law, profile.at(t)).unwrap_or(f64::NAN);
        let k_of = |t: f64| numerics::integrate(k, 0.0, t, 1e-13);
        let k_total = k_of(t_end);
        let beta_crit = -1.0 / k_total;
        r.metric("K_total", k_total);
        r.metric("beta_crit", beta_crit);
        let mut worst = 0.0f64;
        for beta0 in [0.0, -2.0, -0.5, 0.1, 0.9 * beta_crit] {
            for i in 1..=4 {
                let t = t_end * i as f64 / 4.0;
                let closed = riemann::riccati_evolve(beta0, k_of(t))?;
                let ode = numerics::dopri5(|s, b| -k(s) * b * b, 0.0, beta0, t, 1e-12, 1e-14)
                    .ok_or_else(|| Error::NonFinite(format!("Riccati ODE escaped for beta0={beta0}")))?;
                let gap = if closed == 0.0 { ode.abs() } else { ((ode - closed) / closed).abs() };
                worst = worst.max(gap);
            }
            let end = riemann::riccati_evolve(beta0, k_total)?;
            r.metric(&format!("beta_end[beta0={beta0}]"), end);
        }
        r.metric("relative_gap", worst);
        r.decide(worst < RICCATI_GAP_MAX);
        Ok(())
    })
}

pub const ENERGY_GAP_MAX: f64 = 1e-8;
pub const CONCAVITY_MAX: f64 = 1e-10;

/// Random elliptic field with `u ∈ [0.1, 3]`.
pub fn random_elliptic_field(rng: &mut ChaCha8Rng, grid: &PeriodicGrid, modes: u32) -> Result<StateField> {
    let gu = random_profile(rng, grid, modes);
    let gv = random_profile(rng, grid, modes);
    let v_scale = rng.gen_range(0.1..2.0);
    let u = gu.iter().map(|g| 1.55 + 1.45 * g).collect();
    let v = gv.iter().map(|g| v_scale * g).collect();
    StateField::new(grid.clone(), u, v)
}

/// Energy identity and concavity on explicit fields, all gauges.
pub fn scenario_energy_fields(law: PressureLaw, fields: &[StateField], seed: u64) -> ScenarioReport {
    finish(ScenarioReport::new("energy_identity", law, seed), |r| {
        r.threshold("identity_gap_max", ENERGY_GAP_MAX);
        r.threshold("ddot_formula_max", CONCAVITY_MAX);
        r.metric("n_fields", fields.len() as f64);
        let (mut gap, mut ddot_max) = (0.0f64, f64::NEG_INFINITY);
        for state in fields {
            for gauge in ConcaveGauge::ALL {
                let d = energy::diagnostics(&law, state, gauge)?;
                gap = gap.max(d.identity_gap);
                ddot_max = ddot_max.max(d.ddot_formula);
            }
        }
        r.metric("identity_gap", gap);
        r.metric("ddot_formula_max", ddot_max);
        let grid = PeriodicGrid::new(64)?;
        let analytic = StateField::from_fn(grid, |_| 1.0, |x| (2.0 * PI * x).sin())?;
        let ddot = energy::energy_ddot_formula(&PressureLaw::Quadratic, &analytic, ConcaveGauge::Log1p)?;
        r.metric("analytic_gap", (ddot + PI * PI / 2.0).abs());
        r.decide(gap < ENERGY_GAP_MAX && ddot_max <= CONCAVITY_MAX && r.metrics["analytic_gap"] < ENERGY_GAP_MAX);
        Ok(())
    })
}

pub fn scenario_energy_identity(law: PressureLaw, n_fields: usize, seed: u64) -> ScenarioReport {
    let built = (|| -> Result<Vec<StateField>> {
        if n_fields == 0 {
            return Err(Error::InvalidParameter("n_fields must be at least 1".into()));
        }
        let grid = PeriodicGrid::new(256)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n_fields).map(|_| random_elliptic_field(&mut rng, &grid, 4)).collect()
    })();
    match built {
        Ok(fields) => scenario_energy_fields(law, &fields, seed),
        Err(e) => ScenarioReport::new("energy_identity", law, seed).fail(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Constant { law: PressureLaw, u0: f64, v0: f64, t_max: f64 },
    SimpleWave { law: PressureLaw, params: SimpleWaveParams },
    Sweep { law: PressureLaw, params: SweepParams },
    LinearResidual,
    Riccati { law: PressureLaw, profile: UProfile, t_end: f64 },
    Energy { law: PressureLaw, n_fields: usize, seed: u64 },
}

impl Scenario {
    pub fn run(&self) -> ScenarioReport {
        match self.clone() {
            Scenario::Constant { law, u0, v0, t_max } => scenario_constant(law, u0, v0, t_max),
            Scenario::SimpleWave { law, params } => scenario_simple_wave_blowup(law, params),
            Scenario::Sweep { law, params } => scenario_random_hyperbolic_sweep(law, params),
            Scenario::LinearResidual => scenario_linear_residual(PressureLaw::Quadratic),
            Scenario::Riccati { law, profile, t_end } => scenario_riccati_crosscheck(law, profile, t_end),
            Scenario::Energy { law, n_fields, seed } => scenario_energy_identity(law, n_fields, seed),
        }
    }
}

pub fn default_suite() -> Vec<Scenario> {
    let quad = PressureLaw::Quadratic;
    let quart = |a: f64| PressureLaw::Quartic { a };
    vec![
        Scenario::Constant { law: quad, u0: -1.0, v0: 0.0, t_max: 10.0 },
        Scenario::Constant { law: quad, u0: -4.0, v0: 2.5, t_max: 10.0 },
        Scenario::Constant { law: quart(0.1), u0: -1.0, v0: 0.0, t_max: 10.0 },
        Scenario::SimpleWave { law: quad, params: SimpleWaveParams::default() },
        Scenario::SimpleWave {
            law: quart(0.05),
            params: SimpleWaveParams { amplitude: 0.2, ..Default::default() },
        },
        Scenario::Sweep { law: quad, params: SweepParams::default() },
        Scenario::Sweep { law: quad, params: SweepParams { n_seeds: 10, reverse_time: true, ..Default::default() } },
        Scenario::Sweep { law: quart(0.1), params: SweepParams { n_seeds: 10, ..Default::default() } },
        Scenario::LinearResidual,
        Scenario::Riccati { law: quad, profile: UProfile::Constant { u0: -1.0 }, t_end: 2.0 },
        Scenario::Riccati { law: quad, profile: UProfile::Ramp { u0: -1.0, rate: 1.0 }, t_end: 2.0 },
        Scenario::Energy { law: quad, n_fields: 50, seed: 42 },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub all_pass: bool,
    pub reports: Vec<ScenarioReport>,
}

/// Runs scenarios in parallel; reports keep the input order.
pub fn run_suite(scenarios: &[Scenario]) -> SuiteSummary {
    let reports: Vec<ScenarioReport> = scenarios.par_iter().map(Scenario::run).collect();
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    SuiteSummary {
        total: reports.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        inconclusive: count(Verdict::Inconclusive),
        all_pass: reports.iter().all(ScenarioReport::passed),
        reports,
    }
}
