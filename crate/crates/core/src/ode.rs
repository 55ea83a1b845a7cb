//! Scalar adaptive Dormand–Prince 4(5) integrator for autonomous phase-line
//! orbits `z′ = f(z)` that run from an interior point toward an attracting
//! equilibrium. Integration stops when the orbit enters an ε-band around the
//! target value, when the arc length exceeds a cap, or when the step size
//! underflows (the last two mark the orbit as truncated).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-size control for the orbit integrator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepControl {
    /// Relative error tolerance per step.
    pub rtol: f64,
    /// Absolute error tolerance per step.
    pub atol: f64,
    /// Initial trial step.
    pub h_init: f64,
    /// Hard cap on the step size. Besides accuracy, the cap bounds the output
    /// sample spacing so downstream finite differences of the sampled orbit
    /// stay accurate where the dynamics are slow.
    pub h_max: f64,
    /// Step-size underflow threshold; going below truncates the orbit.
    pub h_min: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h_init: 1e-4,
            h_max: 2e-3,
            h_min: 1e-12,
        }
    }
}

/// One monotone orbit: samples `z(s)` on the ascending internal parameter
/// `s ≥ 0` (the caller maps `s` to ±ξ).
#[derive(Debug, Clone)]
pub(crate) struct Orbit {
    pub s: Vec<f64>,
    pub z: Vec<f64>,
    /// True when stopped by the arc-length cap or step underflow instead of
    /// reaching the ε-band around the target.
    pub truncated: bool,
}

// Dormand–Prince 4(5) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 4_000_000;

/// Integrate `z′ = f(z)` from `z0` until `|z − target| ≤ eps` or `s > s_max`.
///
/// `f` must keep a fixed sign along the orbit (monotone approach to the
/// equilibrium); a sign flip is reported as an internal-consistency error.
pub(crate) fn integrate_orbit<F>(
    f: F,
    z0: f64,
    target: f64,
    eps: f64,
    s_max: f64,
    ctrl: &StepControl,
) -> Result<Orbit>
where
    F: Fn(f64) -> Result<f64>,
{
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::precondition(format!(
            "eps_trunc must be positive, got {eps}"
        )));
    }
    if s_max <= 0.0 || !s_max.is_finite() {
        return Err(Error::precondition(format!(
            "xi_max must be positive, got {s_max}"
        )));
    }
    let mut s = 0.0;
    let mut z = z0;
    let mut h = ctrl.h_init.min(ctrl.h_max);
    let mut out = Orbit {
        s: vec![0.0],
        z: vec![z0],
        truncated: false,
    };
    if (z0 - target).abs() <= eps {
        return Ok(out);
    }
    let expected_sign = f(z0)?.signum();
    if expected_sign == 0.0 {
        return Err(Error::numeric(format!(
            "orbit starts at a stationary point: F({z0}) = 0"
        )));
    }

    for _ in 0..MAX_STEPS {
        if h < ctrl.h_min {
            out.truncated = true;
            return Ok(out);
        }
        h = h.min(ctrl.h_max);

        let k1 = f(z)?;
        let k2 = f(z + h * A2[0] * k1)?;
        let k3 = f(z + h * (A3[0] * k1 + A3[1] * k2))?;
        let k4 = f(z + h * (A4[0] * k1 + A4[1] * k2 + A4[2] * k3))?;
        let k5 = f(z + h * (A5[0] * k1 + A5[1] * k2 + A5[2] * k3 + A5[3] * k4))?;
        let k6 = f(z + h * (A6[0] * k1 + A6[1] * k2 + A6[2] * k3 + A6[3] * k4 + A6[4] * k5))?;
        let incr5 = B5[0] * k1 + B5[2] * k3 + B5[3] * k4 + B5[4] * k5 + B5[5] * k6;
        let z5 = z + h * incr5;
        let k7 = f(z5)?;
        let incr4 = B4[0] * k1 + B4[2] * k3 + B4[3] * k4 + B4[4] * k5 + B4[5] * k6 + B4[6] * k7;
        let err = (h * (incr5 - incr4)).abs();
        let tol = ctrl.atol + ctrl.rtol * z.abs().max(z5.abs());

        if err <= tol {
            // accepted
            if k7 != 0.0 && k7.signum() != expected_sign {
                return Err(Error::numeric(format!(
                    "non-monotone orbit step near z = {z5}: F changed sign"
                )));
            }
            s += h;
            z = z5;
            out.s.push(s);
            out.z.push(z);
            if (z - target).abs() <= eps {
                return Ok(out);
            }
            if s >= s_max {
                out.truncated = true;
                return Ok(out);
            }
        }
        // PI-free classic step-size update, clamped to sane growth
        let scale = if err > 0.0 {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= scale;
    }
    Err(Error::numeric("orbit integration exceeded the step budget"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn relaxation_orbit_matches_exponential() {
        // z' = −2(z − 1) from z=3: z(s) = 1 + 2e^{−2s}
        let ctrl = StepControl::default();
        let orbit =
            integrate_orbit(|z| Ok(-2.0 * (z - 1.0)), 3.0, 1.0, 1e-8, 100.0, &ctrl).unwrap();
        assert!(!orbit.truncated);
        for (s, z) in orbit.s.iter().zip(&orbit.z) {
            assert_abs_diff_eq!(*z, 1.0 + 2.0 * (-2.0 * s).exp(), epsilon = 1e-8);
        }
        let last = *orbit.z.last().unwrap();
        assert!((last - 1.0).abs() <= 1e-8 * 1.5);
    }

    #[test]
    fn arc_length_cap_marks_truncation() {
        let ctrl = StepControl::default();
        // slow crawl never reaches the band within s_max
        let orbit = integrate_orbit(|_| Ok(-1e-6), 0.5, 0.0, 1e-12, 1.0, &ctrl).unwrap();
        assert!(orbit.truncated);
        assert!(*orbit.s.last().unwrap() >= 1.0);
    }

    #[test]
    fn sign_flip_is_an_error() {
        use std::cell::Cell;
        // F flips sign along the orbit: the first evaluation is positive,
        // all later ones negative but tiny, so the step is accepted on
        // accuracy grounds and only the monotone guard can catch the flip
        let calls = Cell::new(0u32);
        let f = |_z: f64| {
            calls.set(calls.get() + 1);
            Ok(if calls.get() == 1 { 1e-20 } else { -1e-20 })
        };
        let ctrl = StepControl::default();
        let res = integrate_orbit(f, 0.5, 1.0, 1e-3, 50.0, &ctrl);
        assert!(res.is_err());
    }
}
