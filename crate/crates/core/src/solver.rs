//! Method-of-lines integration of `u_t = -v_x`, `v_t = (p(u))_x` on the
//! periodic grid: pseudo-spectral derivatives, classical RK4 in time, an
//! exponential high-mode filter after each step, and gradient blow-up
//! monitoring.
//!
//! Only strictly hyperbolic data is evolved. The initial-value problem is
//! ill-posed where `u > 0`, so such data is refused at admission.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{self, PeriodicGrid, StateField};
use crate::pressure::{Pressure, PressureLaw};
use crate::riemann::sound_speed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub cfl_safety: f64,
    pub t_max: f64,
    /// Blow-up when `max|u_x|` exceeds this multiple of the initial scale.
    pub grad_blowup_factor: f64,
    /// Blow-up when the steepest front, `osc(u) / max|u_x|`, is narrower than
    /// this many grid cells.
    pub front_cells_min: f64,
    /// Resolution lost when the spectral tail ratio of `u` exceeds this.
    pub tail_ratio_max: f64,
    pub hyperbolicity_eps: f64,
    pub snapshot_stride: usize,
    /// Fixed time step; `None` recomputes the CFL step every step.
    pub fixed_dt: Option<f64>,
    /// Integrate the reflected system `(t, v) → (-t, -v)`.
    pub reverse_time: bool,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl_safety: 0.4,
            t_max: 1.0,
            grad_blowup_factor: 1e4,
            front_cells_min: 6.0,
            tail_ratio_max: 0.1,
            hyperbolicity_eps: 1e-3,
            snapshot_stride: 1,
            fixed_dt: None,
            reverse_time: false,
            max_steps: 10_000_000,
        }
    }
}

impl SolverConfig {
    /// Checks the thresholds and returns non-fatal warnings.
    pub fn validate(&self, t0: f64) -> Result<Vec<String>> {
        let positive = [
            ("grad_blowup_factor", self.grad_blowup_factor),
            ("front_cells_min", self.front_cells_min),
            ("tail_ratio_max", self.tail_ratio_max),
            ("hyperbolicity_eps", self.hyperbolicity_eps),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidParameter(format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety)));
        }
        if !(self.t_max > t0) {
            return Err(Error::InvalidParameter(format!("t_max = {} must exceed t0 = {t0}", self.t_max)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter("snapshot_stride must be >= 1".into()));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return Err(Error::InvalidParameter(format!("fixed_dt must be positive, got {dt}")));
            }
        }
        let mut warnings = Vec::new();
        if self.snapshot_stride > 5 {
            warnings.push(format!(
                "snapshot_stride = {} exceeds 5 steps; characteristic tracing loses accuracy",
                self.snapshot_stride
            ));
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrajectoryStatus {
    Completed,
    BlowUpDetected { t_detect: f64 },
    AdmissionRefused,
    ResolutionLost { t: f64 },
}

impl TrajectoryStatus {
    pub fn name(&self) -> &'static str {
        match self {
            TrajectoryStatus::Completed => "completed",
            TrajectoryStatus::BlowUpDetected { .. } => "blow_up_detected",
            TrajectoryStatus::AdmissionRefused => "admission_refused",
            TrajectoryStatus::ResolutionLost { .. } => "resolution_lost",
        }
    }

    /// Time at which the run stopped early, if it did.
    pub fn t_stop(&self) -> Option<f64> {
        match *self {
            TrajectoryStatus::BlowUpDetected { t_detect } => Some(t_detect),
            TrajectoryStatus::ResolutionLost { t } => Some(t),
            _ => None,
        }
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRecord {
    pub t: f64,
    pub max_u: f64,
    pub min_u: f64,
    pub max_abs_ux: f64,
    pub max_abs_vx: f64,
    pub tail_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub state: StateField,
}

/// Result of [`run`]. When `time_reversed` is set, times and `v` are those of
/// the reflected system, `τ = 2t₀ - t` and `-v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub law: PressureLaw,
    pub t0: f64,
    pub snapshots: Vec<Snapshot>,
    pub status: TrajectoryStatus,
    pub series: Vec<SeriesRecord>,
    pub steps: usize,
    pub initial_scale: f64,
    pub time_reversed: bool,
}

impl Trajectory {
    /// Builds a trajectory from prescribed snapshots, for tests and
    /// diagnostics on fields that need not solve the system.
    pub fn from_snapshots(law: PressureLaw, snapshots: Vec<Snapshot>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::WindowTooShort(0));
        }
        if snapshots.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::InvalidParameter("snapshot times must be strictly increasing".into()));
        }
        let series = snapshots.iter().map(|s| reading(s.t, &s.state)).collect::<Result<Vec<_>>>()?;
        let initial_scale = series[0].max_abs_ux.max(1.0);
        Ok(Trajectory {
            law,
            t0: snapshots[0].t,
            status: TrajectoryStatus::Completed,
            steps: snapshots.len() - 1,
            snapshots,
            series,
            initial_scale,
            time_reversed: false,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.snapshots.last().map(|s| s.t).unwrap_or(self.t0)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.snapshots[0].state.grid()
    }

    /// First recorded time at which `max|u_x|` exceeds `factor` times its
    /// initial value; `None` if it never does.
    pub fn time_gradient_exceeds(&self, factor: f64) -> Option<f64> {
        let first = self.series.first()?.max_abs_ux;
        self.series.iter().find(|r| r.max_abs_ux > factor * first).map(|r| r.t)
    }
}

pub fn rhs(law: &PressureLaw, state: &StateField) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = state.grid();
    let du = field::spectral_derivative(grid, &state.v)?.into_iter().map(|d| -d).collect();
    let pu: Vec<f64> = state.u.iter().map(|&u| law.p(u)).collect();
    let dv = field::spectral_derivative(grid, &pu)?;
    Ok((du, dv))
}

/// `cfl_safety · Δx / max_j sqrt(-p'(u_j))`.
///
/// When the largest speed is below `1e-12` the error carries the fallback
/// step `cfl_safety · Δx`.
pub fn cfl_dt(law: &PressureLaw, state: &StateField, cfl_safety: f64) -> Result<f64> {
    let max_speed = state.u.iter().map(|&u| sound_speed(law, u)).fold(0.0, f64::max);
    let dx = state.grid().dx();
    if max_speed < 1e-12 {
        return Err(Error::DegenerateSpeed { fallback_dt: cfl_safety * dx });
    }
    Ok(cfl_safety * dx / max_speed)
}

/// Exponential filter `σ(m) = exp(-36 (|m| / (n/2))^36)`.
pub fn filter_factor(grid: &PeriodicGrid, m: i64) -> f64 {
    let ratio = m.unsigned_abs() as f64 / grid.nyquist() as f64;
    (-36.0 * ratio.powi(36)).exp()
}

fn apply_filter(grid: &PeriodicGrid, samples: &[f64]) -> Result<Vec<f64>> {
    grid.apply_symbol(samples, |m| Complex64::new(filter_factor(grid, m), 0.0))
}

fn axpy(base: &StateField, dt: f64, k: &(Vec<f64>, Vec<f64>)) -> StateField {
    let u = base.u.iter().zip(&k.0).map(|(a, b)| a + dt * b).collect();
    let v = base.v.iter().zip(&k.1).map(|(a, b)| a + dt * b).collect();
    // stage states are not checked for finiteness; the final state is
    StateField::new(base.grid().clone(), u, v).unwrap_or_else(|_| base.clone())
}

/// Advances one unfiltered RK4 step.
fn rk4_raw(law: &PressureLaw, state: &StateField, dt: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let k1 = rhs(law, state)?;
    let k2 = rhs(law, &axpy(state, 0.5 * dt, &k1))?;
    let k3 = rhs(law, &axpy(state, 0.5 * dt, &k2))?;
    let k4 = rhs(law, &axpy(state, dt, &k3))?;
    let combine = |y: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..y.len()).map(|j| y[j] + dt / 6.0 * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j])).collect()
    };
    let u = combine(&state.u, &k1.0, &k2.0, &k3.0, &k4.0);
    let v = combine(&state.v, &k1.1, &k2.1, &k3.1, &k4.1);
    Ok((u, v))
}

/// One classical RK4 step followed by the exponential filter. `dt` may be
/// negative for backward stepping.
pub fn step_rk4(law: &PressureLaw, state: &StateField, dt: f64) -> Result<StateField> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be finite and nonzero, got {dt}")));
    }
    let (u, v) = rk4_raw(law, state, dt)?;
    if u.iter().chain(&v).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("RK4 step produced a non-finite entry".into()));
    }
    let grid = state.grid();
    let u = apply_filter(grid, &u)?;
    let v = apply_filter(grid, &v)?;
    StateField::new(grid.clone(), u, v)
}

/// `steps` fixed RK4 steps of size `t / steps`.
pub fn integrate_fixed(law: &PressureLaw, state: &StateField, t: f64, steps: usize) -> Result<StateField> {
    let dt = t / steps as f64;
    let mut s = state.clone();
    for _ in 0..steps {
        s = step_rk4(law, &s, dt)?;
    }
    Ok(s)
}

/// Ratio of the errors at `t` with `steps` and `2·steps` fixed steps, both
/// against a `16·steps` reference. A fourth-order scheme gives about 16.
pub fn convergence_ratio(law: &PressureLaw, state: &StateField, t: f64, steps: usize) -> Result<f64> {
    let reference = integrate_fixed(law, state, t, 16 * steps)?;
    let coarse = integrate_fixed(law, state, t, steps)?.max_abs_diff(&reference);
    let fine = integrate_fixed(law, state, t, 2 * steps)?.max_abs_diff(&reference);
    Ok(coarse / fine)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonitorStatus {
    Quiet,
    BlowUp,
    ResolutionLost,
}

/// Diagnostics of one state at time `t`.
pub fn reading(t: f64, state: &StateField) -> Result<SeriesRecord> {
    let grid = state.grid();
    let ux = field::spectral_derivative(grid, &state.u)?;
    let vx = field::spectral_derivative(grid, &state.v)?;
    let max_abs = |s: &[f64]| s.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(SeriesRecord {
        t,
        max_u: state.max_u(),
        min_u: state.min_u(),
        max_abs_ux: max_abs(&ux),
        max_abs_vx: max_abs(&vx),
        tail_ratio: field::tail_ratio(grid, &state.u)?,
    })
}

/// Classifies a reading against the thresholds.
///
/// Blow-up fires when `max|u_x|` exceeds `grad_blowup_factor · initial_scale`
/// or when the steepest front `osc(u)/max|u_x|` has collapsed below
/// `front_cells_min` cells. Resolution is lost when the tail ratio exceeds
/// `tail_ratio_max`. Blow-up takes precedence.
pub fn classify_reading(
    rec: &SeriesRecord,
    grid: &PeriodicGrid,
    initial_scale: f64,
    config: &SolverConfig,
) -> MonitorStatus {
    let osc = rec.max_u - rec.min_u;
    let collapsed = rec.max_abs_ux > 0.0 && osc / rec.max_abs_ux < config.front_cells_min * grid.dx();
    if rec.max_abs_ux > config.grad_blowup_factor * initial_scale || collapsed {
        MonitorStatus::BlowUp
    } else if rec.tail_ratio > config.tail_ratio_max {
        MonitorStatus::ResolutionLost
    } else {
        MonitorStatus::Quiet
    }
}

pub fn blowup_monitor(state: &StateField, initial_scale: f64, config: &SolverConfig) -> Result<MonitorStatus> {
    if !(initial_scale > 0.0) {
        return Err(Error::InvalidParameter(format!("initial_scale must be positive, got {initial_scale}")));
    }
    let rec = reading(0.0, state)?;
    Ok(classify_reading(&rec, state.grid(), initial_scale, config))
}

/// Integrates from `t0` to `config.t_max` unless a monitor fires first.
///
/// Data with `max u > -hyperbolicity_eps` is refused. All failure modes are
/// reported through the trajectory status.
pub fn run(law: &PressureLaw, state0: &StateField, t0: f64, config: &SolverConfig) -> Result<Trajectory> {
    config.validate(t0)?;
    let mut state = state0.clone();
    if config.reverse_time {
        state.v.iter_mut().for_each(|v| *v = -*v);
    }
    let first = reading(t0, &state)?;
    let initial_scale = first.max_abs_ux.max(1.0);
    let mut traj = Trajectory {
        law: *law,
        t0,
        snapshots: vec![Snapshot { t: t0, state: state.clone() }],
        status: TrajectoryStatus::Completed,
        series: vec![first],
        steps: 0,
        initial_scale,
        time_reversed: config.reverse_time,
    };
    if field::hyperbolicity_margin(state0) > -config.hyperbolicity_eps {
        traj.status = TrajectoryStatus::AdmissionRefused;
        return Ok(traj);
    }

    let grid = state.grid().clone();
    let t_max = config.t_max;
    let mut t = t0;
    let end_tol = 1e-13 * t_max.abs().max(1.0);
    while t < t_max - end_tol && traj.steps < config.max_steps {
        let mut dt = match config.fixed_dt {
            Some(dt) => dt,
            None => match cfl_dt(law, &state, config.cfl_safety) {
                Ok(dt) => dt,
                Err(Error::DegenerateSpeed { fallback_dt }) => fallback_dt,
                Err(e) => return Err(e),
            },
        };
        if t + dt > t_max - end_tol {
            dt = t_max - t;
        }
        let t_next = t + dt;
        state = match step_rk4(law, &state, dt) {
            Ok(s) => s,
            Err(Error::NonFinite(_)) => {
                traj.status = TrajectoryStatus::ResolutionLost { t: t_next };
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        t = t_next;
        traj.steps += 1;
        let rec = reading(t, &state)?;
        traj.series.push(rec);
        let verdict = classify_reading(&rec, &grid, initial_scale, config);
        let last_step = t >= t_max - end_tol;
        if verdict != MonitorStatus::Quiet || last_step || traj.steps % config.snapshot_stride == 0 {
            traj.snapshots.push(Snapshot { t, state: state.clone() });
        }
        match verdict {
            MonitorStatus::BlowUp => {
                traj.status = TrajectoryStatus::BlowUpDetected { t_detect: t };
                return Ok(traj);
            }
            MonitorStatus::ResolutionLost => {
                traj.status = TrajectoryStatus::ResolutionLost { t };
                return Ok(traj);
            }
            MonitorStatus::Quiet => {}
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const QUAD: PressureLaw = PressureLaw::Quadratic;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let s = StateField::constant(grid(32), -1.3, 0.7).unwrap();
        let (du, dv) = rhs(&QUAD, &s).unwrap();
        assert!(du.iter().chain(&dv).all(|x| x.abs() < 1e-13));

        let s = StateField::from_fn(grid(64), |_| -1.0, |x| (2.0 * PI * x).sin()).unwrap();
        let (du, dv) = rhs(&QUAD, &s).unwrap();
        for (j, d) in du.iter().enumerate() {
            let x = j as f64 / 64.0;
            assert!((d + 2.0 * PI * (2.0 * PI * x).cos()).abs() < 1e-10);
        }
        assert!(dv.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn cfl_examples() {
        let s = StateField::constant(grid(256), -1.0, 0.0).unwrap();
        assert!((cfl_dt(&QUAD, &s, 0.4).unwrap() - 0.0015625).abs() < 1e-18);
        let s = StateField::constant(grid(256), -4.0, 0.0).unwrap();
        assert!((cfl_dt(&QUAD, &s, 0.4).unwrap() - 0.00078125).abs() < 1e-18);
        let s = StateField::constant(grid(16), -1.0, 0.0).unwrap();
        assert_eq!(cfl_dt(&QUAD, &s, 1.0).unwrap(), 0.0625);
        let s = StateField::constant(grid(16), 0.0, 0.0).unwrap();
        assert_eq!(cfl_dt(&QUAD, &s, 0.5), Err(Error::DegenerateSpeed { fallback_dt: 0.5 / 16.0 }));
    }

    #[test]
    fn filter_keeps_mean_and_low_modes() {
        let g = grid(128);
        assert_eq!(filter_factor(&g, 0), 1.0);
        assert!(1.0 - filter_factor(&g, 20) < 1e-15);
        assert!(filter_factor(&g, 64) < 1e-15);
    }

    #[test]
    fn constant_state_is_fixed_point() {
        let s = StateField::constant(grid(64), -2.0, 0.3).unwrap();
        let next = step_rk4(&QUAD, &s, 0.01).unwrap();
        assert!(next.max_abs_diff(&s) < 1e-14);
    }

    #[test]
    fn small_amplitude_follows_linear_wave() {
        // about u = -1 the quadratic law linearises to w_tt = w_xx; with
        // v₀ = 0 the solution is -1 + ε sin(2π x) cos(2π t)
        let eps = 0.01;
        let g = grid(64);
        let mut s = StateField::from_fn(g, |x| -1.0 + eps * (2.0 * PI * x).sin(), |_| 0.0).unwrap();
        let dt = 1e-3;
        let steps = 100;
        for _ in 0..steps {
            s = step_rk4(&QUAD, &s, dt).unwrap();
        }
        let t = dt * steps as f64;
        for (j, u) in s.u.iter().enumerate() {
            let x = j as f64 / 64.0;
            let lin = -1.0 + eps * (2.0 * PI * x).sin() * (2.0 * PI * t).cos();
            assert!((u - lin).abs() < 5.0 * eps * eps, "{j}: {u} vs {lin}");
        }
    }

    #[test]
    fn forward_then_backward_returns() {
        let g = grid(64);
        let s0 = StateField::from_fn(
            g,
            |x| -1.0 + 0.1 * (2.0 * PI * x).sin(),
            |x| 0.05 * (4.0 * PI * x).cos(),
        )
        .unwrap();
        let s1 = step_rk4(&QUAD, &s0, 1e-3).unwrap();
        let back = step_rk4(&QUAD, &s1, -1e-3).unwrap();
        assert!(back.max_abs_diff(&s0) < 1e-9);
    }

    #[test]
    fn step_rejects_bad_dt_and_blowup() {
        let s = StateField::constant(grid(16), -1.0, 0.0).unwrap();
        assert!(step_rk4(&QUAD, &s, 0.0).is_err());
        let huge = StateField::from_fn(grid(16), |x| -1e200 * (1.5 + (2.0 * PI * x).sin()), |_| 0.0).unwrap();
        assert!(matches!(step_rk4(&QUAD, &huge, 1.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn monitor_examples() {
        let cfg = SolverConfig { grad_blowup_factor: 1e6, tail_ratio_max: 0.5, ..Default::default() };
        let smooth = StateField::from_fn(grid(256), |x| -1.0 + 0.2 * (2.0 * PI * x).sin(), |_| 0.0).unwrap();
        assert_eq!(blowup_monitor(&smooth, 1.0, &cfg).unwrap(), MonitorStatus::Quiet);

        // max|u_x| = 1e5 · scale against factor 1e4
        let steep = StateField::from_fn(grid(256), |x| -1.0 + (1e5 / (2.0 * PI)) * (2.0 * PI * x).sin(), |_| 0.0)
            .unwrap();
        let cfg = SolverConfig::default();
        assert_eq!(blowup_monitor(&steep, 1.0, &cfg).unwrap(), MonitorStatus::BlowUp);

        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = grid(256);
        // noise with amplitude small enough that the front test stays quiet
        let noise: Vec<f64> = (0..256).map(|_| -1.0 + 1e-3 * rng.gen_range(-1.0..1.0)).collect();
        let s = StateField::new(g, noise, vec![0.0; 256]).unwrap();
        let cfg = SolverConfig { front_cells_min: 1e-3, ..Default::default() };
        assert_eq!(blowup_monitor(&s, 1.0, &cfg).unwrap(), MonitorStatus::ResolutionLost);
        assert!(blowup_monitor(&s, 0.0, &cfg).is_err());
    }

    #[test]
    fn admission_control() {
        let s = StateField::constant(grid(32), 1.0, 0.0).unwrap();
        let traj = run(&QUAD, &s, 0.0, &SolverConfig { t_max: 1.0, ..Default::default() }).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::AdmissionRefused);
        assert_eq!(traj.snapshots.len(), 1);
        // inside the eps band is refused too
        let s = StateField::constant(grid(32), -1e-4, 0.0).unwrap();
        let traj = run(&QUAD, &s, 0.0, &SolverConfig { t_max: 1.0, ..Default::default() }).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::AdmissionRefused);
    }

    #[test]
    fn constant_run_completes() {
        let s = StateField::constant(grid(64), -1.0, 0.0).unwrap();
        let cfg = SolverConfig { t_max: 2.0, snapshot_stride: 50, ..Default::default() };
        let traj = run(&QUAD, &s, 0.0, &cfg).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::Completed);
        let last = traj.snapshots.last().unwrap();
        assert!((last.t - 2.0).abs() < 1e-12);
        assert!(last.state.max_abs_diff(&s) < 1e-12);
        assert!(traj.snapshots.windows(2).all(|w| w[1].t > w[0].t));
    }

    fn smooth(n: usize) -> StateField {
        StateField::from_fn(grid(n), |x| -1.0 + 0.2 * (2.0 * PI * x).sin(), |x| 0.1 * (2.0 * PI * x).cos()).unwrap()
    }

    #[test]
    fn rk4_is_fourth_order() {
        let ratio = convergence_ratio(&QUAD, &smooth(64), 0.2, 8).unwrap();
        assert!((ratio - 16.0).abs() < 2.0, "{ratio}");
    }

    #[test]
    fn integrals_are_conserved() {
        let s0 = smooth(128);
        let cfg = SolverConfig { t_max: 0.5, ..Default::default() };
        let traj = run(&QUAD, &s0, 0.0, &cfg).unwrap();
        assert_eq!(traj.status, TrajectoryStatus::Completed);
        let (mu, mv) = (field::mean(&s0.u), field::mean(&s0.v));
        for snap in &traj.snapshots {
            let tol = 1e-10 * snap.t.max(1e-3);
            assert!((field::mean(&snap.state.u) - mu).abs() < tol);
            assert!((field::mean(&snap.state.v) - mv).abs() < tol);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig { t_max: 0.0, ..Default::default() }.validate(0.0).is_err());
        assert!(SolverConfig { cfl_safety: 1.5, ..Default::default() }.validate(0.0).is_err());
        assert!(SolverConfig { tail_ratio_max: -1.0, ..Default::default() }.validate(0.0).is_err());
        let w = SolverConfig { snapshot_stride: 8, ..Default::default() }.validate(0.0).unwrap();
        assert_eq!(w.len(), 1);
    }
}
