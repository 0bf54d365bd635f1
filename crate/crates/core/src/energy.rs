//! Static diagnostics for the elliptic region `u >= 0`.
//!
//! For a concave gauge `f` (`f(0) = 0`, `f > 0` on `u > 0`, `f'' < 0`) the
//! energy `E(t) = ∫ f(u) dx` satisfies
//! `E'' = ∫ f''(u) ((v_x)² + p'(u)(u_x)²) dx`, which is non-positive where
//! `u >= 0`. Both sides are evaluated from a single snapshot, with the time
//! derivatives expressed through the system: `u_t = -v_x`,
//! `u_tt = -(p(u))_xx`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, StateField};
use crate::pressure::{Pressure, PressureLaw};

/// Tolerance of the `u >= 0` gate, absorbing roundoff at the interface.
pub const DOMAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ConcaveGauge {
    /// `f(u) = ln(1 + u)`
    #[default]
    Log1p,
    /// `f(u) = u / (1 + u)`
    Rational,
}

impl ConcaveGauge {
    pub const ALL: [ConcaveGauge; 2] = [ConcaveGauge::Log1p, ConcaveGauge::Rational];

    pub fn f(self, u: f64) -> f64 {
        match self {
            ConcaveGauge::Log1p => u.ln_1p(),
            ConcaveGauge::Rational => u / (1.0 + u),
        }
    }

    pub fn df(self, u: f64) -> f64 {
        match self {
            ConcaveGauge::Log1p => 1.0 / (1.0 + u),
            ConcaveGauge::Rational => 1.0 / (1.0 + u).powi(2),
        }
    }

    pub fn ddf(self, u: f64) -> f64 {
        match self {
            ConcaveGauge::Log1p => -1.0 / (1.0 + u).powi(2),
            ConcaveGauge::Rational => -2.0 / (1.0 + u).powi(3),
        }
    }
}

fn check_domain(state: &StateField) -> Result<()> {
    if let Some((j, u)) = state.u.iter().enumerate().find(|(_, &u)| u < -DOMAIN_TOL) {
        return Err(Error::Domain(format!(
            "elliptic diagnostics need u >= 0, but u[{j}] = {u}"
        )));
    }
    Ok(())
}

/// `E = ∫ f(u) dx` by the trapezoid rule on the circle.
pub fn energy(state: &StateField, gauge: ConcaveGauge) -> Result<f64> {
    check_domain(state)?;
    Ok(field::mean(&state.u.iter().map(|&u| gauge.f(u.max(0.0))).collect::<Vec<_>>()))
}

/// `∫ f''(u) ((v_x)² + p'(u)(u_x)²) dx` with spectral derivatives.
pub fn energy_ddot_formula(law: &PressureLaw, state: &StateField, gauge: ConcaveGauge) -> Result<f64> {
    check_domain(state)?;
    let grid = state.grid();
    let ux = field::spectral_derivative(grid, &state.u)?;
    let vx = field::spectral_derivative(grid, &state.v)?;
    let integrand: Vec<f64> = (0..grid.n())
        .map(|j| {
            let u = state.u[j];
            gauge.ddf(u) * (vx[j] * vx[j] + law.dp(u) * ux[j] * ux[j])
        })
        .collect();
    Ok(field::mean(&integrand))
}

/// `∫ f''(u) u_t² + f'(u) u_tt dx` with `u_t = -v_x` and
/// `u_tt = -(p(u))_xx`, i.e. the second derivative before integrating by
/// parts.
pub fn energy_ddot_direct(law: &PressureLaw, state: &StateField, gauge: ConcaveGauge) -> Result<f64> {
    check_domain(state)?;
    let grid = state.grid();
    let vx = field::spectral_derivative(grid, &state.v)?;
    let pu: Vec<f64> = state.u.iter().map(|&u| law.p(u)).collect();
    let pxx = field::spectral_second_derivative(grid, &pu)?;
    let integrand: Vec<f64> = (0..grid.n())
        .map(|j| {
            let u = state.u[j];
            let ut = -vx[j];
            let utt = -pxx[j];
            gauge.ddf(u) * ut * ut + gauge.df(u) * utt
        })
        .collect();
    Ok(field::mean(&integrand))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDiagnostics {
    #[serde(rename = "E")]
    pub e: f64,
    pub ddot_formula: f64,
    pub ddot_direct: f64,
    pub identity_gap: f64,
}

pub fn diagnostics(law: &PressureLaw, state: &StateField, gauge: ConcaveGauge) -> Result<EnergyDiagnostics> {
    let e = energy(state, gauge)?;
    let ddot_formula = energy_ddot_formula(law, state, gauge)?;
    let ddot_direct = energy_ddot_direct(law, state, gauge)?;
    Ok(EnergyDiagnostics { e, ddot_formula, ddot_direct, identity_gap: (ddot_direct - ddot_formula).abs() })
}
