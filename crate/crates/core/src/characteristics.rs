//! Characteristic curves traced through a computed trajectory.
//!
//! A curve of family `i` solves `dx/dt = λ_i(u(t, x))`. The field is
//! evaluated between grid nodes by trigonometric interpolation and between
//! snapshots by cubic Lagrange interpolation in `t` (four nearest
//! snapshots). Along the curve we record the Riemann invariants, the Riccati
//! variable `β` of the curve's family and the accumulated `K = ∫ k ds`.
//!
//! On a time-reversed trajectory every quantity lives in the reflected frame
//! `(τ, -v)`; a forward curve there is a backward curve of the original
//! solution.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, StateField};
use crate::pressure::{Pressure, PressureLaw};
use crate::riemann::{self, Family};
use crate::solver::Trajectory;

/// Boundary threshold: a curve stops once the interpolated `u > -EPS_B`.
pub const DEFAULT_EPS_B: f64 = 1e-3;
pub const DEFAULT_GROWTH_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    ReachedHorizon,
    ReachedBoundary { t_hit: f64 },
    LeftTrajectoryWindow,
}

/// One point of a traced curve. `x` is the lifted coordinate (not reduced
/// modulo 1). Invariants and `β` are NaN at a final boundary sample with
/// `u >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub x: f64,
    pub u: f64,
    pub v: f64,
    pub r1: f64,
    pub r2: f64,
    pub beta: f64,
    pub k_accum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicCurve {
    pub family: Family,
    pub direction: Direction,
    pub samples: Vec<CurveSample>,
    pub termination: Termination,
}

impl CharacteristicCurve {
    pub fn start(&self) -> &CurveSample {
        &self.samples[0]
    }

    pub fn end(&self) -> &CurveSample {
        self.samples.last().expect("curves hold at least one sample")
    }

    /// The curve's own invariant at every sample.
    pub fn own_invariant(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(move |s| match self.family {
            Family::First => s.r1,
            Family::Second => s.r2,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ClassLabel {
    #[serde(rename = "A_plus")]
    APlus,
    #[serde(rename = "A_minus")]
    AMinus,
    #[serde(rename = "B_plus")]
    BPlus,
    #[serde(rename = "B_minus")]
    BMinus,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl ClassLabel {
    pub fn is_b(self) -> bool {
        matches!(self, ClassLabel::BPlus | ClassLabel::BMinus)
    }

    fn a(dir: Direction) -> Self {
        match dir {
            Direction::Forward => ClassLabel::APlus,
            Direction::Backward => ClassLabel::AMinus,
        }
    }

    fn b(dir: Direction) -> Self {
        match dir {
            Direction::Forward => ClassLabel::BPlus,
            Direction::Backward => ClassLabel::BMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Start time; defaults to the first snapshot (forward) or the last
    /// snapshot (backward).
    pub t_start: Option<f64>,
    /// Time at which tracing stops; defaults to the end of the window in the
    /// direction of travel.
    pub horizon: Option<f64>,
    pub eps_b: f64,
    /// Upper bound on the tracer step; snapshot intervals are subdivided to
    /// respect it.
    pub max_step: Option<f64>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { t_start: None, horizon: None, eps_b: DEFAULT_EPS_B, max_step: None }
    }
}

/// `β` of family `fam` at every node of a snapshot, from spectral gradients:
/// `r_x = v_x ∓ q'(u) u_x`. NaN where `u >= 0`.
pub fn beta_field(law: &PressureLaw, state: &StateField, fam: Family) -> Result<Vec<f64>> {
    let grid = state.grid();
    let ux = field::spectral_derivative(grid, &state.u)?;
    let vx = field::spectral_derivative(grid, &state.v)?;
    Ok((0..grid.n())
        .map(|j| beta_at(law, state.u[j], ux[j], vx[j], fam))
        .collect())
}

fn beta_at(law: &PressureLaw, u: f64, ux: f64, vx: f64, fam: Family) -> f64 {
    if !(u < 0.0) {
        return f64::NAN;
    }
    // r1 = v - q(u), r2 = v + q(u), q' = -c
    let c = riemann::sound_speed(law, u);
    let r_x = vx + fam.sign() * c * ux;
    riemann::beta_from_gradient(law, u, r_x).unwrap_or(f64::NAN)
}

/// Precomputed spectra of every snapshot of a trajectory.
pub struct Tracer<'a> {
    traj: &'a Trajectory,
    times: Vec<f64>,
    /// rows `[u, v, u_x, v_x]` per mode, per snapshot
    spectra: Vec<Vec<[Complex64; 4]>>,
}

impl<'a> Tracer<'a> {
    pub fn new(traj: &'a Trajectory) -> Result<Self> {
        if traj.snapshots.len() < 2 {
            return Err(Error::WindowTooShort(traj.snapshots.len()));
        }
        let spectra = traj
            .snapshots
            .iter()
            .map(|s| {
                let grid = s.state.grid();
                let u = field::half_spectrum(grid, &s.state.u)?;
                let v = field::half_spectrum(grid, &s.state.v)?;
                let nyq = grid.nyquist();
                Ok((0..=nyq)
                    .map(|m| {
                        // Nyquist derivative coefficient is dropped, matching
                        // the spectral derivative on the grid
                        let d = if m == nyq {
                            Complex64::new(0.0, 0.0)
                        } else {
                            Complex64::new(0.0, 2.0 * std::f64::consts::PI * m as f64)
                        };
                        [u[m], v[m], u[m] * d, v[m] * d]
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tracer { traj, times: traj.snapshots.iter().map(|s| s.t).collect(), spectra })
    }

    pub fn trajectory(&self) -> &Trajectory {
        self.traj
    }

    pub fn t_first(&self) -> f64 {
        self.times[0]
    }

    pub fn t_last(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Lagrange weights of the (up to) four snapshots nearest to `t`.
    fn time_weights(&self, t: f64) -> ([(usize, f64); 4], usize) {
        let len = self.times.len();
        let i = match self.times.binary_search_by(|s| s.partial_cmp(&t).unwrap()) {
            Ok(i) => {
                let mut out = [(0, 0.0); 4];
                out[0] = (i, 1.0);
                return (out, 1);
            }
            Err(i) => i.clamp(1, len - 1) - 1,
        };
        let width = len.min(4);
        let lo = i.saturating_sub(1).min(len - width);
        let mut out = [(0, 0.0); 4];
        for a in 0..width {
            let ia = lo + a;
            let mut w = 1.0;
            for b in 0..width {
                if a != b {
                    let ib = lo + b;
                    w *= (t - self.times[ib]) / (self.times[ia] - self.times[ib]);
                }
            }
            out[a] = (ia, w);
        }
        (out, width)
    }

    fn eval<const K: usize>(&self, t: f64, x: f64) -> [f64; K] {
        let (weights, count) = self.time_weights(t);
        let weights = &weights[..count];
        let nmodes = self.spectra[0].len();
        let nyq = nmodes - 1;
        let theta = 2.0 * std::f64::consts::PI * x.rem_euclid(1.0);
        let z = Complex64::from_polar(1.0, theta);
        let combined = |m: usize, q: usize| -> Complex64 {
            weights.iter().map(|&(i, w)| self.spectra[i][m][q] * w).sum()
        };
        let mut out = [0.0; K];
        for (q, o) in out.iter_mut().enumerate() {
            *o = combined(0, q).re;
        }
        let mut w = Complex64::new(1.0, 0.0);
        for m in 1..nyq {
            w = if m % 32 == 0 { Complex64::from_polar(1.0, theta * m as f64) } else { w * z };
            for (q, o) in out.iter_mut().enumerate() {
                let c = combined(m, q);
                *o += 2.0 * (c.re * w.re - c.im * w.im);
            }
        }
        let cn = (theta * nyq as f64).cos();
        for (q, o) in out.iter_mut().enumerate() {
            *o += combined(nyq, q).re * cn;
        }
        out
    }

    /// Interpolated `u` at `(t, x)`.
    pub fn u_at(&self, t: f64, x: f64) -> f64 {
        self.eval::<1>(t, x)[0]
    }

    /// Interpolated `(u, v, u_x, v_x)` at `(t, x)`.
    pub fn fields_at(&self, t: f64, x: f64) -> [f64; 4] {
        self.eval::<4>(t, x)
    }

    fn sample(&self, t: f64, x: f64, k_accum: f64, fam: Family) -> CurveSample {
        let law = &self.traj.law;
        let [u, v, ux, vx] = self.fields_at(t, x);
        let (r1, r2) = match riemann::riemann_from_state(law, u, v) {
            Ok(p) => (p.r1, p.r2),
            Err(_) => (f64::NAN, f64::NAN),
        };
        CurveSample { t, x, u, v, r1, r2, beta: beta_at(law, u, ux, vx, fam), k_accum }
    }

    /// Traces the characteristic of `fam` through `x0` in direction `dir`.
    pub fn trace(&self, x0: f64, fam: Family, dir: Direction, opts: &TraceOptions) -> Result<CharacteristicCurve> {
        let law = self.traj.law;
        let sgn = dir.sign();
        let (t_first, t_last) = (self.t_first(), self.t_last());
        let t_start = opts.t_start.unwrap_or(match dir {
            Direction::Forward => t_first,
            Direction::Backward => t_last,
        });
        if t_start < t_first || t_start > t_last {
            return Err(Error::InvalidParameter(format!(
                "trace start {t_start} outside the window [{t_first}, {t_last}]"
            )));
        }
        let window_end = match dir {
            Direction::Forward => t_last,
            Direction::Backward => t_first,
        };
        let (t_stop, horizon_in_window) = match opts.horizon {
            Some(h) if (h - window_end) * sgn > 0.0 => (window_end, false),
            Some(h) => (h, true),
            None => (window_end, true),
        };

        let first = self.sample(t_start, x0, 0.0, fam);
        if !(first.u < 0.0) {
            return Err(Error::EllipticStart { u: first.u });
        }
        let mut samples = vec![first];

        // step boundaries: snapshot times strictly between start and stop
        let mut marks: Vec<f64> = self
            .times
            .iter()
            .copied()
            .filter(|&s| (s - t_start) * sgn > 0.0 && (t_stop - s) * sgn > 0.0)
            .collect();
        if sgn < 0.0 {
            marks.reverse();
        }
        marks.push(t_stop);

        let speed = |t: f64, x: f64| -> (f64, f64) {
            let u = self.u_at(t, x);
            let uc = u.min(-1e-300);
            let lam = fam.sign() * riemann::sound_speed(&law, u);
            let k = -law.ddp(uc) / (4.0 * (-law.dp(uc)).max(0.0).powf(1.25));
            (lam, k)
        };

        let mut t = t_start;
        let mut x = x0;
        let mut k_accum = 0.0;
        for &mark in &marks {
            let span = mark - t;
            let pieces = match opts.max_step {
                Some(h) if h > 0.0 => (span.abs() / h).ceil().max(1.0) as usize,
                _ => 1,
            };
            let h = span / pieces as f64;
            for piece in 0..pieces {
                let (a1, b1) = speed(t, x);
                let (a2, b2) = speed(t + 0.5 * h, x + 0.5 * h * a1);
                let (a3, b3) = speed(t + 0.5 * h, x + 0.5 * h * a2);
                let (a4, b4) = speed(t + h, x + h * a3);
                x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
                k_accum += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
                t = if piece + 1 == pieces { mark } else { t + h };
                let s = self.sample(t, x, k_accum, fam);
                samples.push(s);
                if !(s.u < -opts.eps_b) {
                    return Ok(CharacteristicCurve {
                        family: fam,
                        direction: dir,
                        samples,
                        termination: Termination::ReachedBoundary { t_hit: t },
                    });
                }
            }
        }
        Ok(CharacteristicCurve {
            family: fam,
            direction: dir,
            samples,
            termination: if horizon_in_window {
                Termination::ReachedHorizon
            } else {
                Termination::LeftTrajectoryWindow
            },
        })
    }
}

/// Convenience wrapper tracing a single curve with default options.
pub fn trace(traj: &Trajectory, x0: f64, fam: Family, dir: Direction) -> Result<CharacteristicCurve> {
    Tracer::new(traj)?.trace(x0, fam, dir, &TraceOptions::default())
}

/// `max |r_fam(t) - r_fam(t_start)|` over the curve's samples.
pub fn invariant_drift(curve: &CharacteristicCurve) -> f64 {
    invariant_drift_until(curve, f64::INFINITY)
}

/// Drift restricted to samples no further than `limit` from the start in
/// the direction of travel (`limit` is an absolute time).
pub fn invariant_drift_until(curve: &CharacteristicCurve, limit: f64) -> f64 {
    let sgn = curve.direction.sign();
    let r0 = curve.own_invariant().next().unwrap_or(f64::NAN);
    curve
        .samples
        .iter()
        .zip(curve.own_invariant())
        .filter(|(s, r)| (limit - s.t) * sgn >= 0.0 && r.is_finite())
        .map(|(_, r)| (r - r0).abs())
        .fold(0.0, f64::max)
}

/// Earliest time on the curve where `1 + β₀ K_accum <= 0`, with `K_accum`
/// interpolated linearly between samples.
pub fn predict_blowup(curve: &CharacteristicCurve, beta0: f64) -> Option<f64> {
    if beta0 == 0.0 || !beta0.is_finite() {
        return None;
    }
    let d = |s: &CurveSample| 1.0 + beta0 * s.k_accum;
    curve.samples.windows(2).find_map(|w| {
        let (d0, d1) = (d(&w[0]), d(&w[1]));
        if d1 <= 0.0 && d0 > 0.0 {
            Some(w[0].t + (w[1].t - w[0].t) * d0 / (d0 - d1))
        } else {
            None
        }
    })
}

/// Like [`predict_blowup`], but when the root lies beyond the traced window
/// it continues `K_accum` with the slope `k(u_end)` of the final sample, that
/// is with `u` frozen along the curve after the window ends.
pub fn predict_blowup_extrapolated(law: &PressureLaw, curve: &CharacteristicCurve, beta0: f64) -> Option<f64> {
    if let Some(t) = predict_blowup(curve, beta0) {
        return Some(t);
    }
    if beta0 == 0.0 || !beta0.is_finite() {
        return None;
    }
    let end = curve.end();
    let k_end = riemann::riccati_k(law, end.u).ok()?;
    let denom = 1.0 + beta0 * end.k_accum;
    if denom <= 0.0 {
        return None;
    }
    let t_star = end.t - denom / (beta0 * k_end);
    ((t_star - end.t) * curve.direction.sign() > 0.0).then_some(t_star)
}

/// Finite-horizon version of the A/B dichotomy.
///
/// * `A±` if the curve hit the boundary `u > -eps_b`, or reached the horizon
///   with `-u` never exceeding `growth_factor · (-u(start))`;
/// * `B±` if it reached the horizon with `-u(end) > growth_factor · (-u(start))`
///   and `-u` increasing over the final quarter of the window;
/// * `undetermined` otherwise.
pub fn classify(curve: &CharacteristicCurve, horizon: f64, growth_factor: f64, eps_b: f64) -> ClassLabel {
    let dir = curve.direction;
    let start = curve.start();
    let end = curve.end();
    if matches!(curve.termination, Termination::ReachedBoundary { .. })
        || curve.samples.iter().any(|s| !(s.u < -eps_b))
    {
        return ClassLabel::a(dir);
    }
    let span = (horizon - start.t).abs();
    let tol = 1e-9 * span.max(1.0);
    if (end.t - start.t).abs() < span - tol {
        return ClassLabel::Undetermined;
    }
    let base = -start.u;
    let travelled = (end.t - start.t).abs();
    let tail: Vec<f64> = curve
        .samples
        .iter()
        .filter(|s| (s.t - start.t).abs() >= 0.75 * travelled)
        .map(|s| -s.u)
        .collect();
    let increasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1] >= w[0]) && tail[tail.len() - 1] > tail[0];
    if -end.u > growth_factor * base && increasing {
        return ClassLabel::b(dir);
    }
    let peak = curve.samples.iter().map(|s| -s.u).fold(f64::NEG_INFINITY, f64::max);
    if peak <= growth_factor * base {
        return ClassLabel::a(dir);
    }
    ClassLabel::Undetermined
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub x0: f64,
    pub family: Family,
    pub direction: Direction,
    pub label: ClassLabel,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SameDirectionPair {
    pub direction: Direction,
    pub x0_first: f64,
    pub x0_second: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SameDirectionReport {
    pub seeds: usize,
    pub curves: Vec<CurveSummary>,
    pub violations: Vec<SameDirectionPair>,
    pub growth_factor: f64,
    pub eps_b: f64,
}

impl SameDirectionReport {
    pub fn count(&self, label: ClassLabel) -> usize {
        self.curves.iter().filter(|c| c.label == label).count()
    }
}

/// Traces both families in both directions from `sample_points` equispaced
/// seeds and reports every same-direction pair labelled `(B, B)` across the
/// two families.
pub fn same_direction_check(traj: &Trajectory, sample_points: usize) -> Result<SameDirectionReport> {
    let tracer = Tracer::new(traj)?;
    let eps_b = DEFAULT_EPS_B;
    let growth = DEFAULT_GROWTH_FACTOR;
    let mut jobs = Vec::new();
    for dir in [Direction::Forward, Direction::Backward] {
        let t_start = match dir {
            Direction::Forward => tracer.t_first(),
            Direction::Backward => tracer.t_last(),
        };
        for j in 0..sample_points {
            let x0 = j as f64 / sample_points as f64;
            if tracer.u_at(t_start, x0) < -eps_b {
                for fam in Family::BOTH {
                    jobs.push((x0, fam, dir));
                }
            }
        }
    }
    let curves = jobs
        .par_iter()
        .map(|&(x0, fam, dir)| {
            let curve = tracer.trace(x0, fam, dir, &TraceOptions::default())?;
            let horizon = match dir {
                Direction::Forward => tracer.t_last(),
                Direction::Backward => tracer.t_first(),
            };
            Ok(CurveSummary {
                x0,
                family: fam,
                direction: dir,
                label: classify(&curve, horizon, growth, eps_b),
                termination: curve.termination,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    for dir in [Direction::Forward, Direction::Backward] {
        let b_of = |fam: Family| {
            curves
                .iter()
                .filter(move |c| c.direction == dir && c.family == fam && c.label.is_b())
                .map(|c| c.x0)
        };
        for x1 in b_of(Family::First) {
            for x2 in b_of(Family::Second) {
                violations.push(SameDirectionPair { direction: dir, x0_first: x1, x0_second: x2 });
            }
        }
    }
    Ok(SameDirectionReport { seeds: sample_points, curves, violations, growth_factor: growth, eps_b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PeriodicGrid;
    use crate::solver::Snapshot;
    use std::f64::consts::PI;

    const QUAD: PressureLaw = PressureLaw::Quadratic;

    fn synthetic<F: Fn(f64, f64) -> f64, G: Fn(f64, f64) -> f64>(
        n: usize,
        times: &[f64],
        u: F,
        v: G,
    ) -> Trajectory {
        let grid = PeriodicGrid::new(n).unwrap();
        let snaps = times
            .iter()
            .map(|&t| Snapshot { t, state: StateField::from_fn(grid.clone(), |x| u(t, x), |x| v(t, x)).unwrap() })
            .collect();
        Trajectory::from_snapshots(QUAD, snaps).unwrap()
    }

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn constant_state_curves() {
        let traj = synthetic(32, &linspace(0.0, 3.0, 31), |_, _| -1.0, |_, _| 0.25);
        let tracer = Tracer::new(&traj).unwrap();
        let c1 = tracer.trace(0.3, Family::First, Direction::Forward, &TraceOptions::default()).unwrap();
        assert_eq!(c1.termination, Termination::ReachedHorizon);
        for s in &c1.samples {
            assert!((s.x - (0.3 + s.t)).abs() < 1e-12);
            assert!((s.k_accum + 0.25 * s.t).abs() < 1e-12);
            assert!((s.beta - c1.samples[0].beta).abs() < 1e-12);
        }
        assert!(invariant_drift(&c1) < 1e-12);
        let c2 = tracer.trace(0.3, Family::Second, Direction::Forward, &TraceOptions::default()).unwrap();
        for s in &c2.samples {
            assert!((s.x - (0.3 - s.t)).abs() < 1e-12);
        }
        assert_eq!(classify(&c1, 3.0, 10.0, 1e-3), ClassLabel::APlus);
    }

    #[test]
    fn prediction_on_constant_state() {
        let traj = synthetic(16, &linspace(0.0, 4.0, 41), |_, _| -1.0, |_, _| 0.0);
        let curve = trace(&traj, 0.5, Family::First, Direction::Forward).unwrap();
        let t = predict_blowup(&curve, 2.0).unwrap();
        assert!((t - 2.0).abs() < 1e-8);
        assert_eq!(predict_blowup(&curve, 0.0), None);
        assert_eq!(predict_blowup(&curve, -1.0), None);
        // root beyond the window: 1 - 0.25 β₀ t = 0 at t = 8 for β₀ = 0.5
        assert_eq!(predict_blowup(&curve, 0.5), None);
        let t = predict_blowup_extrapolated(&QUAD, &curve, 0.5).unwrap();
        assert!((t - 8.0).abs() < 1e-8);
        assert_eq!(predict_blowup_extrapolated(&QUAD, &curve, -0.5), None);
    }

    #[test]
    fn predicted_time_matches_closed_form_for_constant_states() {
        for &u0 in &[-0.5, -1.0, -3.0] {
            let traj = synthetic(16, &linspace(0.0, 10.0, 101), move |_, _| u0, |_, _| 0.0);
            let curve = trace(&traj, 0.1, Family::Second, Direction::Forward).unwrap();
            let k = riemann::riccati_k(&QUAD, u0).unwrap();
            let beta0 = riemann::beta_from_gradient(&QUAD, u0, 0.7).unwrap();
            let want = 1.0 / (beta0 * k.abs());
            let got = predict_blowup_extrapolated(&QUAD, &curve, beta0).unwrap();
            assert!((got - want).abs() < 1e-8, "{u0}: {got} vs {want}");
        }
    }

    #[test]
    fn growing_depth_is_class_b() {
        let times = linspace(0.0, 20.0, 201);
        let traj = synthetic(16, &times, |t, _| -(1.0 + t), |_, _| 0.0);
        let tracer = Tracer::new(&traj).unwrap();
        for fam in Family::BOTH {
            let c = tracer.trace(0.0, fam, Direction::Forward, &TraceOptions::default()).unwrap();
            assert_eq!(classify(&c, 20.0, 10.0, 1e-3), ClassLabel::BPlus);
            // K_accum is non-increasing forward in time
            assert!(c.samples.windows(2).all(|w| w[1].k_accum <= w[0].k_accum));
        }
        let report = same_direction_check(&traj, 4).unwrap();
        assert!(!report.violations.is_empty());
        assert!(report.violations.iter().all(|p| p.direction == Direction::Forward));
    }

    #[test]
    fn boundary_hit_is_class_a() {
        // static mixed-type field, elliptic on (7/12, 11/12); from x0 = 0.3
        // family 1 runs right into the elliptic patch
        let traj = synthetic(64, &linspace(0.0, 2.0, 81), |_, x| -0.5 - (2.0 * PI * x).sin(), |_, _| 0.0);
        let c = trace(&traj, 0.3, Family::First, Direction::Forward).unwrap();
        assert!(matches!(c.termination, Termination::ReachedBoundary { .. }));
        assert!(c.samples[..c.samples.len() - 1].iter().all(|s| s.u < 0.0));
        assert_eq!(classify(&c, 2.0, 10.0, 1e-3), ClassLabel::APlus);
        // family-1 lift increases, family-2 decreases
        assert!(c.samples.windows(2).all(|w| w[1].x >= w[0].x));
        let c2 = trace(&traj, 0.3, Family::Second, Direction::Forward).unwrap();
        assert!(c2.samples.windows(2).all(|w| w[1].x <= w[0].x));
    }

    #[test]
    fn backward_curves_and_windows() {
        let traj = synthetic(16, &linspace(0.0, 2.0, 21), |_, _| -4.0, |_, _| 0.0);
        let tracer = Tracer::new(&traj).unwrap();
        let c = tracer.trace(0.2, Family::First, Direction::Backward, &TraceOptions::default()).unwrap();
        assert!(c.samples.windows(2).all(|w| w[1].t < w[0].t));
        // speed 2 backward from t = 2
        assert!((c.end().x - (0.2 - 4.0)).abs() < 1e-12);
        assert_eq!(classify(&c, 0.0, 10.0, 1e-3), ClassLabel::AMinus);

        let opts = TraceOptions { horizon: Some(5.0), ..Default::default() };
        let c = tracer.trace(0.2, Family::First, Direction::Forward, &opts).unwrap();
        assert_eq!(c.termination, Termination::LeftTrajectoryWindow);
        assert_eq!(classify(&c, 5.0, 10.0, 1e-3), ClassLabel::Undetermined);
        let opts = TraceOptions { horizon: Some(1.0), ..Default::default() };
        let c = tracer.trace(0.2, Family::First, Direction::Forward, &opts).unwrap();
        assert_eq!(c.termination, Termination::ReachedHorizon);
        assert!((c.end().t - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_errors() {
        let traj = synthetic(16, &[0.0, 1.0], |_, _| 0.5, |_, _| 0.0);
        assert!(matches!(
            trace(&traj, 0.0, Family::First, Direction::Forward),
            Err(Error::EllipticStart { .. })
        ));
        let one = synthetic(16, &[0.0], |_, _| -1.0, |_, _| 0.0);
        assert_eq!(Tracer::new(&one).err(), Some(Error::WindowTooShort(1)));
    }

    #[test]
    fn constant_trajectory_has_no_violations() {
        let traj = synthetic(16, &linspace(0.0, 5.0, 11), |_, _| -1.0, |_, _| 0.0);
        let rep = same_direction_check(&traj, 8).unwrap();
        assert!(rep.violations.is_empty());
        assert_eq!(rep.curves.len(), 32);
        assert_eq!(rep.count(ClassLabel::APlus) + rep.count(ClassLabel::AMinus), 32);
    }

    #[test]
    fn cubic_time_interpolation_is_exact_for_cubics() {
        let times = [0.0, 0.3, 0.7, 1.2, 1.5, 2.1];
        let traj = synthetic(16, &times, |t, _| -1.0 - t * t * t, |_, _| 0.0);
        let tracer = Tracer::new(&traj).unwrap();
        for &t in &[0.1, 0.5, 1.0, 1.9] {
            assert!((tracer.u_at(t, 0.3) + 1.0 + t * t * t).abs() < 1e-12);
        }
    }
}
