//! Quadratic-like pressure laws: `p'' > 0` everywhere, minimum value zero at
//! `u = 0`. The sign of `p'(u)` decides the local type of the system
//! (hyperbolic for `u < 0`, elliptic for `u > 0`).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Evaluators of a pressure function and its first two derivatives.
pub trait Pressure {
    fn p(&self, u: f64) -> f64;
    fn dp(&self, u: f64) -> f64;
    fn ddp(&self, u: f64) -> f64;
}

/// Built-in pressure laws.
///
/// `Quadratic` is `p(u) = u²/2`; `Quartic { a }` is `p(u) = u²/2 + a·u⁴`
/// with `a >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "lowercase")]
pub enum PressureLaw {
    Quadratic,
    Quartic {
        #[serde(rename = "quartic_a")]
        a: f64,
    },
}

impl PressureLaw {
    pub fn quartic(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter(format!("quartic_a must be finite and >= 0, got {a}")));
        }
        Ok(PressureLaw::Quartic { a })
    }

    /// `true` when the law reduces to `u²/2`.
    pub fn is_quadratic(&self) -> bool {
        match *self {
            PressureLaw::Quadratic => true,
            PressureLaw::Quartic { a } => a == 0.0,
        }
    }
}

impl Pressure for PressureLaw {
    fn p(&self, u: f64) -> f64 {
        match *self {
            PressureLaw::Quadratic => 0.5 * u * u,
            PressureLaw::Quartic { a } => {
                let u2 = u * u;
                0.5 * u2 + a * u2 * u2
            }
        }
    }

    fn dp(&self, u: f64) -> f64 {
        match *self {
            PressureLaw::Quadratic => u,
            PressureLaw::Quartic { a } => u + 4.0 * a * u * u * u,
        }
    }

    fn ddp(&self, u: f64) -> f64 {
        match *self {
            PressureLaw::Quadratic => 1.0,
            PressureLaw::Quartic { a } => 1.0 + 12.0 * a * u * u,
        }
    }
}

impl fmt::Display for PressureLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PressureLaw::Quadratic => write!(f, "quadratic"),
            PressureLaw::Quartic { a } => write!(f, "quartic(a={a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    /// `p''(u) <= 0` at a sample.
    NotConvex { u: f64, ddp: f64 },
    /// `p(0) != 0`.
    NonzeroMinimum { p0: f64 },
    /// `p'(0) != 0`.
    NonzeroSlope { dp0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub u_min: f64,
    pub u_max: f64,
    pub n_samples: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `law` on `n_samples` equispaced points of `[u_min, u_max]` and
/// collects every violation of the quadratic-like assumptions.
pub fn validate_law<P: Pressure + ?Sized>(
    law: &P,
    u_min: f64,
    u_max: f64,
    n_samples: usize,
) -> Result<ValidationReport> {
    if !(u_min < u_max) || n_samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "validate_law needs u_min < u_max and n_samples >= 2 (got [{u_min}, {u_max}], {n_samples})"
        )));
    }
    let mut violations = Vec::new();
    let p0 = law.p(0.0);
    if p0 != 0.0 {
        violations.push(Violation::NonzeroMinimum { p0 });
    }
    let dp0 = law.dp(0.0);
    if dp0 != 0.0 {
        violations.push(Violation::NonzeroSlope { dp0 });
    }
    let h = (u_max - u_min) / (n_samples - 1) as f64;
    for i in 0..n_samples {
        let u = u_min + h * i as f64;
        let ddp = law.ddp(u);
        if !(ddp > 0.0) {
            violations.push(Violation::NotConvex { u, ddp });
        }
    }
    Ok(ValidationReport { u_min, u_max, n_samples, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laws() -> Vec<PressureLaw> {
        vec![
            PressureLaw::Quadratic,
            PressureLaw::quartic(0.0).unwrap(),
            PressureLaw::quartic(0.1).unwrap(),
            PressureLaw::quartic(0.05).unwrap(),
        ]
    }

    #[test]
    fn pointwise_values() {
        let q = PressureLaw::Quadratic;
        let r = PressureLaw::quartic(0.1).unwrap();
        assert_eq!(q.p(0.0), 0.0);
        assert_eq!(q.p(-2.0), 2.0);
        assert!((r.p(1.0) - 0.6).abs() < 1e-15);
        assert_eq!(q.dp(0.0), 0.0);
        assert_eq!(q.dp(-4.0), -4.0);
        assert!((r.dp(-1.0) + 1.4).abs() < 1e-15);
        assert_eq!(q.ddp(37.0), 1.0);
        assert_eq!(PressureLaw::quartic(0.0).unwrap().ddp(-3.0), 1.0);
        assert!((r.ddp(1.0) - 2.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_quartic_coefficient() {
        assert!(PressureLaw::quartic(-0.1).is_err());
        assert!(PressureLaw::quartic(f64::NAN).is_err());
    }

    #[test]
    fn convex_with_zero_minimum_on_wide_range() {
        for law in laws() {
            assert_eq!(law.p(0.0), 0.0);
            assert_eq!(law.dp(0.0), 0.0);
            for i in 0..=2000 {
                let u = -100.0 + 0.1 * i as f64;
                assert!(law.ddp(u) > 0.0, "{law} at {u}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for law in laws() {
            for _ in 0..100 {
                let u: f64 = rng.gen_range(-5.0..5.0);
                let fd1 = (law.p(u + h) - law.p(u - h)) / (2.0 * h);
                let fd2 = (law.dp(u + h) - law.dp(u - h)) / (2.0 * h);
                assert!((fd1 - law.dp(u)).abs() < 1e-8, "{law} dp at {u}: {fd1}");
                assert!((fd2 - law.ddp(u)).abs() < 1e-8, "{law} ddp at {u}: {fd2}");
            }
        }
    }

    #[test]
    fn validation_reports() {
        let rep = validate_law(&PressureLaw::Quadratic, -10.0, 10.0, 1001).unwrap();
        assert!(rep.is_valid());
        let rep = validate_law(&PressureLaw::quartic(0.1).unwrap(), -10.0, 10.0, 1001).unwrap();
        assert!(rep.is_valid());
        assert!(validate_law(&PressureLaw::Quadratic, 1.0, 1.0, 10).is_err());
        assert!(validate_law(&PressureLaw::Quadratic, 0.0, 1.0, 1).is_err());
    }

    struct DoubleWell;
    impl Pressure for DoubleWell {
        // (u² - 1)² has p'' < 0 near the origin and p(0) = 1
        fn p(&self, u: f64) -> f64 {
            (u * u - 1.0).powi(2)
        }
        fn dp(&self, u: f64) -> f64 {
            4.0 * u * (u * u - 1.0)
        }
        fn ddp(&self, u: f64) -> f64 {
            12.0 * u * u - 4.0
        }
    }

    #[test]
    fn detector_fires_on_nonconvex_law() {
        let rep = validate_law(&DoubleWell, -2.0, 2.0, 101).unwrap();
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::NotConvex { .. })));
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::NonzeroMinimum { .. })));
    }
}
