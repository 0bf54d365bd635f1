//! Uniform periodic grid on the circle of period 1, pseudo-spectral
//! differentiation, trigonometric interpolation and sampled `(u, v)` fields.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// `n` equispaced nodes `x_j = j/n` on `[0, 1)`. Holds its FFT plans, which
/// are immutable and shareable across threads.
#[derive(Clone)]
pub struct PeriodicGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl PeriodicGrid {
    pub const MIN_N: usize = 16;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_N || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        let mut planner = FftPlanner::new();
        Ok(PeriodicGrid {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Samples `f` at the nodes.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n).map(|j| f(self.node(j))).collect()
    }

    /// Highest resolved mode, `n/2` (the Nyquist mode).
    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    /// Signed mode number of FFT bin `k`; the Nyquist bin maps to `+n/2`.
    pub fn mode(&self, k: usize) -> i64 {
        if k <= self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    fn check_len(&self, samples: &[f64]) -> Result<()> {
        if samples.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: samples.len() });
        }
        Ok(())
    }

    /// Unnormalised forward DFT.
    pub fn forward(&self, samples: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(samples)?;
        let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// Inverse DFT including the `1/n` normalisation; returns the real part.
    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut spectrum);
        let scale = 1.0 / self.n as f64;
        spectrum.iter().map(|c| c.re * scale).collect()
    }

    /// Multiplies every bin by `symbol(mode)` and transforms back.
    pub fn apply_symbol<F: Fn(i64) -> Complex64>(&self, samples: &[f64], symbol: F) -> Result<Vec<f64>> {
        let mut coeffs = self.forward(samples)?;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= symbol(self.mode(k));
        }
        Ok(self.inverse(coeffs))
    }
}

/// Fourier symbol of `d/dx` with the Nyquist mode removed.
fn derivative_symbol(nyquist: i64, m: i64) -> Complex64 {
    if m == nyquist {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, 2.0 * PI * m as f64)
    }
}

/// Derivative of the trigonometric interpolant at the nodes. The Nyquist
/// coefficient of the derivative is zero.
pub fn spectral_derivative(grid: &PeriodicGrid, samples: &[f64]) -> Result<Vec<f64>> {
    let nyq = grid.nyquist() as i64;
    grid.apply_symbol(samples, |m| derivative_symbol(nyq, m))
}

/// Second derivative, the square of the first-derivative symbol.
pub fn spectral_second_derivative(grid: &PeriodicGrid, samples: &[f64]) -> Result<Vec<f64>> {
    let nyq = grid.nyquist() as i64;
    grid.apply_symbol(samples, |m| {
        let d = derivative_symbol(nyq, m);
        d * d
    })
}

/// Normalised half spectrum `c_0 ..= c_{n/2}` of the samples.
pub fn half_spectrum(grid: &PeriodicGrid, samples: &[f64]) -> Result<Vec<Complex64>> {
    let coeffs = grid.forward(samples)?;
    let scale = 1.0 / grid.n() as f64;
    Ok(coeffs[..=grid.nyquist()].iter().map(|c| c * scale).collect())
}

/// Evaluates `K` trigonometric series that share the same grid at `x`.
///
/// Each row of `coeffs` holds the normalised coefficient `c_m` of the `K`
/// series for mode `m = 0 ..= n/2`. The Nyquist term enters as
/// `Re(c_{n/2}) cos(π n x)`, which makes the series interpolate the samples.
pub fn eval_half_spectra<const K: usize>(coeffs: &[[Complex64; K]], x: f64) -> [f64; K] {
    let nyq = coeffs.len() - 1;
    let theta = 2.0 * PI * x;
    let z = Complex64::from_polar(1.0, theta);
    let mut out = [0.0; K];
    for (o, c) in out.iter_mut().zip(&coeffs[0]) {
        *o = c.re;
    }
    let mut w = Complex64::new(1.0, 0.0);
    for (m, row) in coeffs.iter().enumerate().take(nyq).skip(1) {
        // periodic re-anchoring keeps the power recurrence accurate
        w = if m % 32 == 0 { Complex64::from_polar(1.0, theta * m as f64) } else { w * z };
        for (o, c) in out.iter_mut().zip(row) {
            *o += 2.0 * (c.re * w.re - c.im * w.im);
        }
    }
    let cn = (theta * nyq as f64).cos();
    for (o, c) in out.iter_mut().zip(&coeffs[nyq]) {
        *o += c.re * cn;
    }
    out
}

/// Reusable trigonometric interpolant of one sampled function.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    samples: Vec<f64>,
    coeffs: Vec<[Complex64; 1]>,
}

impl TrigInterpolant {
    pub fn new(grid: &PeriodicGrid, samples: &[f64]) -> Result<Self> {
        let coeffs = half_spectrum(grid, samples)?.into_iter().map(|c| [c]).collect();
        Ok(TrigInterpolant { samples: samples.to_vec(), coeffs })
    }

    /// Value at `x` (taken modulo 1); returns the stored sample exactly at
    /// nodes.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.samples.len();
        let xm = x.rem_euclid(1.0);
        let s = xm * n as f64;
        if s.fract() == 0.0 {
            return self.samples[(s as usize) % n];
        }
        eval_half_spectra(&self.coeffs, xm)[0]
    }
}

pub fn interpolate(grid: &PeriodicGrid, samples: &[f64], x: f64) -> Result<f64> {
    Ok(TrigInterpolant::new(grid, samples)?.eval(x))
}

/// Fraction of the fluctuation energy (all modes except the mean) carried by
/// the top third of the resolved modes, `|m| > n/3`.
pub fn tail_ratio(grid: &PeriodicGrid, samples: &[f64]) -> Result<f64> {
    let coeffs = grid.forward(samples)?;
    let cutoff = 2.0 * grid.nyquist() as f64 / 3.0;
    let (mut tail, mut total) = (0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let e = c.norm_sqr();
        total += e;
        if grid.mode(k).unsigned_abs() as f64 > cutoff {
            tail += e;
        }
    }
    // a field with no fluctuation has nothing unresolved
    if total <= f64::MIN_POSITIVE || total.sqrt() <= 1e-13 * coeffs[0].norm().max(1.0) {
        return Ok(0.0);
    }
    Ok(tail / total)
}

/// Mean over the nodes, equal to the trapezoid rule on the circle.
pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Sampled pair `(u, v)` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    grid: PeriodicGrid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl StateField {
    pub fn new(grid: PeriodicGrid, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        grid.check_len(&u)?;
        grid.check_len(&v)?;
        if let Some(j) = u.iter().chain(&v).position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("state entry {j} is not finite")));
        }
        Ok(StateField { grid, u, v })
    }

    pub fn from_fn<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(grid: PeriodicGrid, u: F, v: G) -> Result<Self> {
        let us = grid.sample(u);
        let vs = grid.sample(v);
        StateField::new(grid, us, vs)
    }

    pub fn constant(grid: PeriodicGrid, u0: f64, v0: f64) -> Result<Self> {
        let n = grid.n();
        StateField::new(grid, vec![u0; n], vec![v0; n])
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn max_u(&self) -> f64 {
        self.u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_u(&self) -> f64 {
        self.u.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest absolute difference to `other` over both components.
    pub fn max_abs_diff(&self, other: &StateField) -> f64 {
        self.u
            .iter()
            .zip(&other.u)
            .chain(self.v.iter().zip(&other.v))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `max_j u_j`: the field is strictly hyperbolic iff this is negative.
pub fn hyperbolicity_margin(state: &StateField) -> f64 {
    state.max_u()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_err(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    fn random_band_limited(grid: &PeriodicGrid, rng: &mut ChaCha8Rng, modes: usize) -> (Vec<f64>, Vec<(f64, f64)>) {
        let ab: Vec<(f64, f64)> = (0..modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let s = grid.sample(|x| {
            ab.iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let m = (i + 1) as f64;
                    a * (2.0 * PI * m * x).cos() + b * (2.0 * PI * m * x).sin()
                })
                .sum()
        });
        (s, ab)
    }

    #[test]
    fn grid_validation() {
        assert!(PeriodicGrid::new(64).is_ok());
        assert_eq!(PeriodicGrid::new(100).unwrap_err(), Error::InvalidGrid(100));
        assert!(PeriodicGrid::new(8).is_err());
        let g = PeriodicGrid::new(16).unwrap();
        assert_eq!(g.nodes()[4], 0.25);
        assert_eq!(g.mode(8), 8);
        assert_eq!(g.mode(9), -7);
    }

    #[test]
    fn derivative_examples() {
        let g = PeriodicGrid::new(64).unwrap();
        let d = spectral_derivative(&g, &vec![3.5; 64]).unwrap();
        assert!(d.iter().all(|x| x.abs() < 1e-13));

        let s = g.sample(|x| (2.0 * PI * x).sin());
        let want = g.sample(|x| 2.0 * PI * (2.0 * PI * x).cos());
        assert!(max_err(&spectral_derivative(&g, &s).unwrap(), &want) < 1e-10);

        let s = g.sample(|x| (2.0 * PI * x).sin() + 0.5 * (4.0 * PI * x).cos());
        let want = g.sample(|x| 2.0 * PI * (2.0 * PI * x).cos() - 2.0 * PI * (4.0 * PI * x).sin());
        assert!(max_err(&spectral_derivative(&g, &s).unwrap(), &want) < 1e-10);

        assert!(matches!(
            spectral_derivative(&g, &[1.0; 10]),
            Err(Error::LengthMismatch { expected: 64, got: 10 })
        ));
    }

    #[test]
    fn second_derivative_of_cosine() {
        let g = PeriodicGrid::new(64).unwrap();
        let s = g.sample(|x| (6.0 * PI * x).cos());
        let want = g.sample(|x| -(6.0 * PI).powi(2) * (6.0 * PI * x).cos());
        assert!(max_err(&spectral_second_derivative(&g, &s).unwrap(), &want) < 1e-9);
    }

    #[test]
    fn derivative_linearity_and_zero_mean() {
        let g = PeriodicGrid::new(128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (a, _) = random_band_limited(&g, &mut rng, 10);
            let (b, _) = random_band_limited(&g, &mut rng, 10);
            let da = spectral_derivative(&g, &a).unwrap();
            let db = spectral_derivative(&g, &b).unwrap();
            let combo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - 3.0 * y).collect();
            let dc = spectral_derivative(&g, &combo).unwrap();
            let want: Vec<f64> = da.iter().zip(&db).map(|(x, y)| 2.0 * x - 3.0 * y).collect();
            assert!(max_err(&dc, &want) < 1e-11);
            assert!(mean(&da).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval_energy_of_derivative() {
        // mean of (f')² equals Σ_m (2πm)² (a_m² + b_m²)/2 for a real series
        let g = PeriodicGrid::new(128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (s, ab) = random_band_limited(&g, &mut rng, 12);
            let d = spectral_derivative(&g, &s).unwrap();
            let energy = mean(&d.iter().map(|x| x * x).collect::<Vec<_>>());
            let want: f64 = ab
                .iter()
                .enumerate()
                .map(|(i, (a, b))| (2.0 * PI * (i + 1) as f64).powi(2) * (a * a + b * b) / 2.0)
                .sum();
            assert!((energy - want).abs() < 1e-10 * want.max(1.0));
        }
    }

    #[test]
    fn interpolation_examples() {
        let g = PeriodicGrid::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for j in 0..64 {
            assert_eq!(interpolate(&g, &s, g.node(j)).unwrap().to_bits(), s[j].to_bits());
            assert_eq!(interpolate(&g, &s, g.node(j) + 3.0).unwrap().to_bits(), s[j].to_bits());
        }
        let sine = g.sample(|x| (2.0 * PI * x).sin());
        let got = interpolate(&g, &sine, 0.125).unwrap();
        assert!((got - (PI / 4.0).sin()).abs() < 1e-10);
        let got = interpolate(&g, &sine, 0.3071).unwrap();
        assert!((got - (2.0 * PI * 0.3071).sin()).abs() < 1e-12);
        let c = vec![2.25; 64];
        assert!((interpolate(&g, &c, 0.777).unwrap() - 2.25).abs() < 1e-14);
        assert!(interpolate(&g, &[1.0; 3], 0.1).is_err());
    }

    #[test]
    fn interpolant_handles_high_modes() {
        let g = PeriodicGrid::new(256).unwrap();
        let f = |x: f64| (2.0 * PI * 97.0 * x).sin() + (2.0 * PI * 3.0 * x).cos();
        let interp = TrigInterpolant::new(&g, &g.sample(f)).unwrap();
        for &x in &[0.01, 0.2345, 0.5, 0.91] {
            assert!((interp.eval(x) - f(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn margin_examples() {
        let g = PeriodicGrid::new(64).unwrap();
        assert_eq!(hyperbolicity_margin(&StateField::constant(g.clone(), -1.0, 0.0).unwrap()), -1.0);
        assert_eq!(hyperbolicity_margin(&StateField::constant(g, 0.5, 0.0).unwrap()), 0.5);
        let g = PeriodicGrid::new(1024).unwrap();
        let s = StateField::from_fn(g, |x| -1.0 + 0.3 * (2.0 * PI * x).sin(), |_| 0.0).unwrap();
        assert!((hyperbolicity_margin(&s) + 0.7).abs() < 1e-3);
    }

    #[test]
    fn state_rejects_bad_input() {
        let g = PeriodicGrid::new(16).unwrap();
        assert!(StateField::new(g.clone(), vec![0.0; 15], vec![0.0; 16]).is_err());
        let mut u = vec![0.0; 16];
        u[3] = f64::NAN;
        assert!(matches!(StateField::new(g, u, vec![0.0; 16]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn tail_ratio_extremes() {
        let g = PeriodicGrid::new(256).unwrap();
        let smooth = g.sample(|x| -1.0 + 0.2 * (2.0 * PI * x).sin());
        assert!(tail_ratio(&g, &smooth).unwrap() < 1e-20);
        assert_eq!(tail_ratio(&g, &[4.0; 256]).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noise: Vec<f64> = (0..256).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // white noise spreads evenly, so about a third sits in the tail
        let r = tail_ratio(&g, &noise).unwrap();
        assert!(r > 0.25 && r < 0.42, "{r}");
    }

    fn band_limited(coeffs: &[(f64, f64)], n: usize) -> Vec<f64> {
        PeriodicGrid::new(n).unwrap().sample(|x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let w = 2.0 * PI * (i + 1) as f64;
                    a * (w * x).cos() + b * (w * x).sin()
                })
                .sum()
        })
    }

    proptest::proptest! {
        #[test]
        fn interpolant_reproduces_nodes(
            coeffs in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8),
            c0 in -5.0..5.0f64,
        ) {
            let g = PeriodicGrid::new(32).unwrap();
            let s: Vec<f64> = band_limited(&coeffs, 32).iter().map(|x| x + c0).collect();
            let it = TrigInterpolant::new(&g, &s).unwrap();
            for (j, sj) in s.iter().enumerate() {
                proptest::prop_assert!((it.eval(g.node(j)) - sj).abs() < 1e-12);
                proptest::prop_assert!((it.eval(g.node(j) + 3.0) - sj).abs() < 1e-11);
            }
        }

        #[test]
        fn derivative_is_linear_with_zero_mean(
            a in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6),
            b in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6),
            k in -3.0..3.0f64,
        ) {
            let g = PeriodicGrid::new(64).unwrap();
            let (fa, fb) = (band_limited(&a, 64), band_limited(&b, 64));
            let mix: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| x + k * y).collect();
            let (da, db) = (spectral_derivative(&g, &fa).unwrap(), spectral_derivative(&g, &fb).unwrap());
            let dm = spectral_derivative(&g, &mix).unwrap();
            for j in 0..64 {
                proptest::prop_assert!((dm[j] - (da[j] + k * db[j])).abs() < 1e-10);
            }
            proptest::prop_assert!(mean(&dm).abs() < 1e-12);
        }
    }
}
