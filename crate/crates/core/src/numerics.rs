//! Small numerical utilities shared by the modules: quadrature on finite
//! intervals, bracketed root finding and an adaptive Dormand-Prince stepper.

use crate::error::{Error, Result};

/// Integrates `f` over `[a, b]` with the double-exponential rule, bisecting
/// the interval until every piece meets its share of `abs_tol`.
///
/// The double-exponential rule tolerates integrable endpoint singularities
/// such as `sqrt(|s|)` behaviour.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    integrate_rec(&f, a, b, abs_tol, 0)
}

fn integrate_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, depth: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let out = quadrature::double_exponential::integrate(f, a, b, abs_tol);
    // roundoff floor: the estimate cannot drop far below ulps of the value
    let floor = 64.0 * f64::EPSILON * out.integral.abs();
    if out.error_estimate <= abs_tol.max(floor) || depth >= 12 {
        return out.integral;
    }
    let mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, 0.5 * abs_tol, depth + 1)
        + integrate_rec(f, mid, b, 0.5 * abs_tol, depth + 1)
}

/// Finds a root of `f` in `[lo, hi]` by Brent's method.
///
/// Requires a sign change across the bracket. Stops once `|f(x)| <= f_tol`
/// or the bracket has shrunk to a few ulps.
pub fn brent<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, f_tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "root not bracketed in [{lo}, {hi}]: f = ({fa}, {fb})"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb.abs() <= f_tol || (b - a).abs() <= 4.0 * f64::EPSILON * b.abs().max(1e-300) {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lower = (3.0 * a + b) / 4.0;
        let outside = !((s > lower.min(b)) && (s < lower.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0
        };
        if outside || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

/// Integrates the scalar ODE `y' = f(t, y)` from `t0` to `t1` with the
/// Dormand-Prince 5(4) pair and step-size control.
///
/// Returns `None` when the solution leaves the finite range or the step size
/// underflows (finite-time escape).
pub fn dopri5<F: Fn(f64, f64) -> f64>(f: F, t0: f64, y0: f64, t1: f64, rtol: f64, atol: f64) -> Option<f64> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    // difference between the 5th and embedded 4th order weights
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    if t1 == t0 {
        return Some(y0);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * span * 1e-3;
    let mut k = [0.0; 7];
    k[0] = f(t, y);
    for _ in 0..1_000_000 {
        if (t1 - t) * dir <= 0.0 {
            return Some(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut acc = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += h * A[s][j] * kj;
            }
            k[s] = f(t + C[s] * h, acc);
        }
        let y_new = y + h * A[6].iter().zip(&k).map(|(a, kk)| a * kk).sum::<f64>();
        let err_abs = (h * E.iter().zip(&k).map(|(e, kk)| e * kk).sum::<f64>()).abs();
        let scale = atol + rtol * y.abs().max(y_new.abs());
        let err = err_abs / scale;
        if !y_new.is_finite() {
            h *= 0.25;
        } else if err <= 1.0 {
            t += h;
            y = y_new;
            // FSAL: last stage is f at the accepted point
            k[0] = k[6];
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
        if h.abs() < 1e-14 * span.max(1.0) {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrate_sqrt_endpoint() {
        // ∫_0^1 sqrt(s) ds = 2/3
        let v = integrate(|s: f64| s.sqrt(), 0.0, 1.0, 1e-13);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn brent_cubic() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn dopri5_exponential() {
        let y = dopri5(|_, y| -y, 0.0, 1.0, 3.0, 1e-12, 1e-14).unwrap();
        assert!((y - (-3f64).exp()).abs() < 1e-11);
        let back = dopri5(|_, y| -y, 3.0, y, 0.0, 1e-12, 1e-14).unwrap();
        assert!((back - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dopri5_reports_escape() {
        // y' = y^2, y(0) = 1 escapes at t = 1
        assert!(dopri5(|_, y| y * y, 0.0, 1.0, 2.0, 1e-10, 1e-12).is_none());
    }
}
