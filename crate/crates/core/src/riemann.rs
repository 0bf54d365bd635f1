//! Change of variables in the hyperbolic region `u <= 0`.
//!
//! With `q(u) = ∫_u^0 sqrt(-p'(s)) ds` the Riemann invariants are
//! `r1 = v - q(u)` and `r2 = v + q(u)`. The characteristic speeds are
//! `λ1 = +sqrt(-p'(u))` and `λ2 = -sqrt(-p'(u))`; `r1` is constant along
//! `dx/dt = λ1` and `r2` along `dx/dt = λ2`.
//!
//! The gradient variable `β = r_x (-p'(u))^{1/4}` obeys the Riccati equation
//! `β' + k β² = 0` along its characteristic, where
//! `k(u) = -p''(u) / (4 (-p'(u))^{5/4})` is the same for both families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics;
use crate::pressure::{Pressure, PressureLaw};

/// Absolute tolerance of the quadrature behind [`q_of_u`].
pub const Q_QUAD_TOL: f64 = 1e-12;
/// Residual tolerance `|q(u) - y|` of [`u_of_q`].
pub const Q_INVERSE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiemannPair {
    pub r1: f64,
    pub r2: f64,
}

/// Characteristic family. `First` carries the upper sign, `λ1 = +sqrt(-p')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    First,
    Second,
}

impl Family {
    pub const BOTH: [Family; 2] = [Family::First, Family::Second];

    pub fn sign(self) -> f64 {
        match self {
            Family::First => 1.0,
            Family::Second => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Family::First => 1,
            Family::Second => 2,
        }
    }

    /// Picks this family's invariant out of a pair.
    pub fn invariant(self, pair: RiemannPair) -> f64 {
        match self {
            Family::First => pair.r1,
            Family::Second => pair.r2,
        }
    }
}

fn require_nonpositive(u: f64, what: &str) -> Result<()> {
    if u > 0.0 || u.is_nan() {
        return Err(Error::Domain(format!("{what} requires u <= 0, got {u}")));
    }
    Ok(())
}

fn require_negative(u: f64, what: &str) -> Result<()> {
    if !(u < 0.0) {
        return Err(Error::Domain(format!("{what} requires u < 0, got {u}")));
    }
    Ok(())
}

/// Characteristic speed magnitude `sqrt(-p'(u))`, clamped to zero where the
/// system is not hyperbolic.
pub fn sound_speed(law: &PressureLaw, u: f64) -> f64 {
    (-law.dp(u)).max(0.0).sqrt()
}

/// `q(u) = ∫_u^0 sqrt(-p'(s)) ds` for `u <= 0`.
///
/// Closed form `(2/3)(-u)^{3/2}` for the quadratic law. Otherwise the
/// substitution `s = -w²` turns the square-root endpoint singularity into the
/// smooth integrand `2w sqrt(-p'(-w²))` on `[0, sqrt(-u)]`, which is then
/// integrated by the double-exponential rule.
pub fn q_of_u(law: &PressureLaw, u: f64) -> Result<f64> {
    require_nonpositive(u, "q_of_u")?;
    if u == 0.0 {
        return Ok(0.0);
    }
    if law.is_quadratic() {
        return Ok(2.0 / 3.0 * (-u).powf(1.5));
    }
    let upper = (-u).sqrt();
    Ok(numerics::integrate(
        |w| 2.0 * w * (-law.dp(-w * w)).max(0.0).sqrt(),
        0.0,
        upper,
        Q_QUAD_TOL,
    ))
}

/// `q'(u) = -sqrt(-p'(u))`.
pub fn q_prime(law: &PressureLaw, u: f64) -> Result<f64> {
    require_nonpositive(u, "q_prime")?;
    Ok(-sound_speed(law, u))
}

/// Inverse of [`q_of_u`]: the unique `u <= 0` with `q(u) = y`.
pub fn u_of_q(law: &PressureLaw, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("u_of_q requires y >= 0, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if law.is_quadratic() {
        return Ok(-(1.5 * y).powf(2.0 / 3.0));
    }
    // q grows at least like the quadratic case, so this bracket usually holds
    let mut left = -(1.0f64).max(2.0 * (1.5 * y).powf(2.0 / 3.0));
    let mut expansions = 0;
    while q_of_u(law, left)? < y {
        left *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::Domain(format!("u_of_q could not bracket y = {y}")));
        }
    }
    numerics::brent(|u| q_of_u(law, u).unwrap_or(f64::NAN) - y, left, 0.0, Q_INVERSE_TOL)
}

pub fn riemann_from_state(law: &PressureLaw, u: f64, v: f64) -> Result<RiemannPair> {
    require_nonpositive(u, "riemann_from_state")?;
    let q = q_of_u(law, u)?;
    Ok(RiemannPair { r1: v - q, r2: v + q })
}

/// Recovers `(u, v)` from the invariants: `v = (r1 + r2)/2`,
/// `u = q⁻¹((r2 - r1)/2)`.
pub fn state_from_riemann(law: &PressureLaw, pair: RiemannPair) -> Result<(f64, f64)> {
    if !(pair.r2 >= pair.r1) {
        return Err(Error::Domain(format!(
            "state_from_riemann requires r2 >= r1, got r1 = {}, r2 = {}",
            pair.r1, pair.r2
        )));
    }
    let v = 0.5 * (pair.r1 + pair.r2);
    let u = u_of_q(law, 0.5 * (pair.r2 - pair.r1))?;
    Ok((u, v))
}

pub fn eigenvalue(law: &PressureLaw, u: f64, fam: Family) -> Result<f64> {
    require_nonpositive(u, "eigenvalue")?;
    Ok(fam.sign() * sound_speed(law, u))
}

/// `∂λ1/∂r1 = ∂λ2/∂r2 = p''(u) / (4 p'(u))`; unbounded as `u → 0⁻`.
pub fn genuine_nonlinearity(law: &PressureLaw, u: f64) -> Result<f64> {
    require_negative(u, "genuine_nonlinearity")?;
    Ok(law.ddp(u) / (4.0 * law.dp(u)))
}

/// Riccati coefficient `k(u) = -p''(u) / (4 (-p'(u))^{5/4})`.
pub fn riccati_k(law: &PressureLaw, u: f64) -> Result<f64> {
    require_negative(u, "riccati_k")?;
    Ok(-law.ddp(u) / (4.0 * (-law.dp(u)).powf(1.25)))
}

/// `β = r_x (-p'(u))^{1/4}`.
pub fn beta_from_gradient(law: &PressureLaw, u: f64, r_x: f64) -> Result<f64> {
    require_negative(u, "beta_from_gradient")?;
    Ok(r_x * (-law.dp(u)).powf(0.25))
}

/// Closed-form Riccati solution `β = β0 / (1 + β0 K)` with `K = ∫ k ds`.
///
/// A non-positive denominator means the gradient has already become
/// infinite somewhere before the accumulated `K`.
pub fn riccati_evolve(beta0: f64, k_accum: f64) -> Result<f64> {
    let denominator = 1.0 + beta0 * k_accum;
    if denominator <= 0.0 {
        return Err(Error::BlowUp { denominator });
    }
    Ok(beta0 / denominator)
}
