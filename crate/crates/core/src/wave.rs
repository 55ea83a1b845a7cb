//! Traveling-wave construction on the phase line.
//!
//! A monotone wave `φ(x,t) = v(x + c(T−t))` with far-field limits
//! `v(−∞) = v_left`, `v(+∞) = v_right` satisfies the first integral
//!
//! ```text
//!     −c·v + (A(v))′ + B(v) = K₀ ,
//! ```
//!
//! so both limits are roots of the chord defect `G(v) = K₀ + c·v − B(v)`,
//! which fixes speed and intercept from the limits alone:
//!
//! ```text
//!     c  = (B(v_right) − B(v_left)) / (v_right − v_left),
//!     K₀ = B(v_left) − c·v_left .
//! ```
//!
//! In the transformed variable `z = A(v)` the profile is a heteroclinic orbit
//! of the scalar ODE `z′ = F(z) = G(A⁻¹(z))` between `z_left` and `z_right`.
//! The connection exists iff `F` keeps the travel sign strictly between the
//! two z-images (negative for decreasing waves, positive for increasing
//! ones), has no interior root, and the endpoint slopes satisfy
//! `F′(z_left) > 0` (repelling, the ξ→−∞ end) and `F′(z_right) < 0`
//! (attracting, the ξ→+∞ end). [`validate_connection`] checks exactly these
//! three conditions; [`integrate_profile`] then shoots the orbit both ways
//! from the mid-level `z(0) = (z_left + z_right)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseLine, Variant};
use crate::num::{bisect, newton_bisect};
use crate::ode::{integrate_orbit, StepControl};

/// Default z-distance from the far-field limits at which profile tails stop.
pub const DEFAULT_EPS_TRUNC: f64 = 1e-8;
/// Default cap on |ξ| for each profile tail.
pub const DEFAULT_XI_MAX: f64 = 200.0;

/// Scan resolution per closure branch in [`find_phi_roots`].
const SCAN_BRACKETS: usize = 4096;
/// Relative bracket tolerance for root refinement.
const ROOT_TOL: f64 = 1e-12;
/// |G′| below this at a root ⇒ the root is reported as tangential.
const DEGENERATE_GP_TOL: f64 = 1e-7;
/// |G| below this (times a chord scale) at an extremum of G ⇒ double root.
const EXTREMUM_ZERO_TOL: f64 = 1e-10;
/// Roots closer than this (times max(1, v)) are merged.
const ROOT_MERGE_TOL: f64 = 1e-7;
/// Interior sample count used by the connection check.
const INTERIOR_SAMPLES: usize = 10_001;

/// Travel direction of the profile in ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `v_left > v_right`; the orbit runs downhill, `F < 0` inside.
    Decreasing,
    /// `v_left < v_right`; the orbit runs uphill, `F > 0` inside.
    Increasing,
}

/// Phase-line character of a root of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    /// `G′ > 0`: repelling equilibrium, candidate ξ→−∞ limit.
    Unstable,
    /// `G′ < 0`: attracting equilibrium, candidate ξ→+∞ limit.
    Stable,
    /// `G = G′ = 0` (tangential double root); never a wave endpoint.
    Degenerate,
}

/// A root of the chord defect `G`, with its local slope.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhiRoot {
    pub v: f64,
    pub g_prime: f64,
    pub stability: Stability,
}

/// A fully determined wave: model, limits, speed, intercept, z-images, and
/// endpoint slopes of `F`.
#[derive(Debug, Clone, Serialize)]
pub struct WaveSpec {
    pub params: ModelParams,
    /// Far-field limit as ξ → −∞.
    pub v_left: f64,
    /// Far-field limit as ξ → +∞.
    pub v_right: f64,
    /// Wave speed: the profile argument is ξ = x + c(T−t).
    pub c: f64,
    /// First-integral constant.
    pub k0: f64,
    /// `A(v_left)`.
    pub z_left: f64,
    /// `A(v_right)`.
    pub z_right: f64,
    /// `F′(z_left) = G′(v_left)/A′(v_left)`; must be > 0 for a valid wave.
    pub f_prime_left: f64,
    /// `F′(z_right)`; must be < 0 for a valid wave.
    pub f_prime_right: f64,
    pub direction: Direction,
}

impl WaveSpec {
    /// The `(G, F)` pair of this wave's chord.
    pub fn phase_line(&self) -> PhaseLine<'_> {
        PhaseLine::new(&self.params, self.c, self.k0)
    }
}

/// Outcome of the three-part heteroclinic connection check.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionReport {
    pub valid: bool,
    pub endpoint_slopes_ok: bool,
    pub interior_sign_ok: bool,
    pub no_interior_roots: bool,
    pub f_prime_left: f64,
    pub f_prime_right: f64,
    /// Names the first violated condition when `valid` is false.
    pub message: Option<String>,
}

/// Analytic z-roots for the `Simple` variant (`ω`, decreasing waves with
/// `c > 0` and `K₀ + c < 0`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZRootsSimple {
    /// Constrained-branch root, in (0, 1/2).
    pub z_plus: f64,
    /// Unconstrained-branch root, in (1/2, 1).
    pub z_minus: f64,
}

// ════════════════════════════ spec construction ══════════════════════════

/// Compute speed, intercept, z-images, and endpoint slopes from the limits —
/// without checking that the connection exists.
///
/// Fails with [`Error::InvalidLimits`] when the limits are non-positive,
/// equal, or lie strictly on the same side of the control-saturation level
/// φ = 1 (a limit exactly at 1 is admissible; the closures are C¹ there).
pub fn build_wave_spec(params: &ModelParams, v_left: f64, v_right: f64) -> Result<WaveSpec> {
    for (name, v) in [("v_left", v_left), ("v_right", v_right)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidLimits(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    if v_left == v_right {
        return Err(Error::InvalidLimits(format!(
            "limits must differ, got v_left = v_right = {v_left}"
        )));
    }
    if (v_left - 1.0) * (v_right - 1.0) > 0.0 {
        return Err(Error::InvalidLimits(format!(
            "limits {v_left} and {v_right} lie strictly on the same side of the \
             saturation level 1; the wave must cross the constrained/unconstrained junction"
        )));
    }
    let c = (params.b(v_right)? - params.b(v_left)?) / (v_right - v_left);
    let k0 = params.b(v_left)? - c * v_left;
    let pl = PhaseLine::new(params, c, k0);
    let f_prime_left = pl.g_prime(v_left)? / params.a_prime(v_left)?;
    let f_prime_right = pl.g_prime(v_right)? / params.a_prime(v_right)?;
    Ok(WaveSpec {
        params: *params,
        v_left,
        v_right,
        c,
        k0,
        z_left: params.a(v_left)?,
        z_right: params.a(v_right)?,
        f_prime_left,
        f_prime_right,
        direction: if v_left > v_right {
            Direction::Decreasing
        } else {
            Direction::Increasing
        },
    })
}

/// [`build_wave_spec`] followed by [`validate_connection`]; the returned spec
/// is guaranteed to carry a heteroclinic orbit.
pub fn compute_wave_spec(params: &ModelParams, v_left: f64, v_right: f64) -> Result<WaveSpec> {
    let spec = build_wave_spec(params, v_left, v_right)?;
    validate_connection(&spec)?;
    Ok(spec)
}

// ═══════════════════════════ connection checks ═══════════════════════════

/// Run the three-part connection check and report every sub-verdict.
pub fn connection_report(spec: &WaveSpec) -> Result<ConnectionReport> {
    let mut endpoint_slopes_ok = true;
    let mut interior_sign_ok = true;
    let mut no_interior_roots = true;
    let mut message: Option<String> = None;
    let note = |msg: String, message: &mut Option<String>| {
        if message.is_none() {
            *message = Some(msg);
        }
    };

    // (a) endpoint slopes: repelling on the left, attracting on the right
    let (fl, fr) = (spec.f_prime_left, spec.f_prime_right);
    if fl.abs() < DEGENERATE_GP_TOL || fr.abs() < DEGENERATE_GP_TOL {
        endpoint_slopes_ok = false;
        note(
            format!("tangential endpoint: F'(z_left) = {fl:.3e}, F'(z_right) = {fr:.3e}"),
            &mut message,
        );
    } else if fl <= 0.0 || fr >= 0.0 {
        endpoint_slopes_ok = false;
        note(
            format!(
                "endpoint slopes have the wrong sign: need F'(z_left) > 0 > F'(z_right), \
                 got {fl:.6e} and {fr:.6e}"
            ),
            &mut message,
        );
    }

    // (b) interior sign of F between the z-images
    let expected: f64 = match spec.direction {
        Direction::Decreasing => -1.0,
        Direction::Increasing => 1.0,
    };
    let (zl, zr) = (spec.z_left, spec.z_right);
    let pl = spec.phase_line();
    for i in 1..=INTERIOR_SAMPLES {
        let t = i as f64 / (INTERIOR_SAMPLES + 1) as f64;
        let z = zl + (zr - zl) * t;
        let f = pl.f(z)?;
        if f == 0.0 || f.signum() != expected {
            interior_sign_ok = false;
            note(
                format!(
                    "F has the wrong sign inside the connection interval: F({z:.9}) = {f:.6e}, \
                     expected sign {expected:+.0}"
                ),
                &mut message,
            );
            break;
        }
    }

    // (c) no interior roots of G strictly between the limits; skipped when an
    // endpoint is tangential (the scan precondition — endpoints are not
    // roots — would then fail spuriously, and the wave spec is already invalid)
    if endpoint_slopes_ok {
        let (vlo, vhi) = if spec.v_left < spec.v_right {
            (spec.v_left, spec.v_right)
        } else {
            (spec.v_right, spec.v_left)
        };
        let off = 1e-6 * (vhi - vlo);
        let interior = find_phi_roots(&spec.params, spec.c, spec.k0, (vlo + off, vhi - off))?;
        if !interior.is_empty() {
            no_interior_roots = false;
            note(
                format!(
                    "G has {} interior root(s) between the limits, first at v = {:.9}",
                    interior.len(),
                    interior[0].v
                ),
                &mut message,
            );
        }
    }

    Ok(ConnectionReport {
        valid: endpoint_slopes_ok && interior_sign_ok && no_interior_roots,
        endpoint_slopes_ok,
        interior_sign_ok,
        no_interior_roots,
        f_prime_left: spec.f_prime_left,
        f_prime_right: spec.f_prime_right,
        message,
    })
}

/// Error (naming the violated condition) unless the wave spec carries a valid
/// heteroclinic connection.
pub fn validate_connection(spec: &WaveSpec) -> Result<ConnectionReport> {
    let report = connection_report(spec)?;
    if report.valid {
        Ok(report)
    } else {
        Err(Error::NoWave(
            report
                .message
                .clone()
                .unwrap_or_else(|| "connection check failed".into()),
        ))
    }
}

// ═══════════════════════════════ z-roots ═════════════════════════════════

/// Closed-form z-roots of `F` for the `Simple` variant.
///
/// Requires `c > 0` and `K₀ + c < 0` (the parameter region of decreasing
/// waves). The constrained-branch root solves the quadratic
/// `K₀ + 2cz + (ω/2)(1−2z)² = 0`; the unconstrained one solves
/// `K₀ + c/(2(1−z)) = 0`.
pub fn analytic_z_roots_simple(omega: f64, c: f64, k0: f64) -> Result<ZRootsSimple> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::precondition(format!(
            "omega must be positive, got {omega}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::precondition(format!(
            "wave speed must be positive, got c = {c}"
        )));
    }
    if !(k0 + c < 0.0) {
        return Err(Error::precondition(format!(
            "need K0 + c < 0 for a decreasing wave, got {}",
            k0 + c
        )));
    }
    let z_minus = 1.0 + c / (2.0 * k0);
    let disc = (c / omega) * (c / omega) - 2.0 * (c + k0) / omega;
    if disc < 0.0 {
        return Err(Error::NoWave(
            "negative discriminant: the constrained branch has no root".into(),
        ));
    }
    let z_plus = 0.5 - c / (2.0 * omega) - 0.5 * disc.sqrt();
    if !(0.0 < z_plus && z_plus < 0.5 && 0.5 < z_minus && z_minus < 1.0) {
        return Err(Error::NoWave(format!(
            "z-root ordering violated: need 0 < z+ < 1/2 < z- < 1, got z+ = {z_plus}, \
             z- = {z_minus}"
        )));
    }
    Ok(ZRootsSimple { z_plus, z_minus })
}

// ═══════════════════════════ root scanning ═══════════════════════════════

/// All roots of the chord defect `G(v) = K₀ + c·v − B(v)` on the open
/// interval, ascending, each with its `G′` value and stability class.
///
/// Scans each closure branch separately (the split at v = 1 keeps every scan
/// cell inside one smooth formula), refines sign changes with the
/// bisection+Newton hybrid, and additionally refines extrema of `G` to catch
/// tangential double roots, which produce no sign change.
pub fn find_phi_roots(
    params: &ModelParams,
    c: f64,
    k0: f64,
    interval: (f64, f64),
) -> Result<Vec<PhiRoot>> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::precondition(format!(
            "root-scan interval must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    if !(c.is_finite() && k0.is_finite()) {
        return Err(Error::precondition("c and K0 must be finite"));
    }
    let g = |v: f64| k0 + c * v - params.b_raw(v);
    let gp = |v: f64| c - params.b_prime_raw(v);
    let scale = |v: f64| 1.0 + k0.abs() + (c * v).abs();
    for (name, v) in [("lo", lo), ("hi", hi)] {
        if g(v).abs() <= 1e-12 * scale(v) {
            return Err(Error::precondition(format!(
                "interval endpoint {name} = {v} is (numerically) a root of G"
            )));
        }
    }

    let mut segments: Vec<(f64, f64)> = Vec::new();
    if hi <= 1.0 || lo >= 1.0 {
        segments.push((lo, hi));
    } else {
        segments.push((lo, 1.0));
        segments.push((1.0, hi));
    }

    let mut roots: Vec<PhiRoot> = Vec::new();
    let classify = |v: f64| {
        let gpv = gp(v);
        let stability = if gpv.abs() < DEGENERATE_GP_TOL {
            Stability::Degenerate
        } else if gpv > 0.0 {
            Stability::Unstable
        } else {
            Stability::Stable
        };
        PhiRoot {
            v,
            g_prime: gpv,
            stability,
        }
    };

    for (a, b) in segments {
        let n = SCAN_BRACKETS;
        let nodes: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        let gv: Vec<f64> = nodes.iter().map(|&v| g(v)).collect();
        let gpv: Vec<f64> = nodes.iter().map(|&v| gp(v)).collect();
        // exact zeros at scan nodes (interval endpoints are excluded by the
        // precondition above; a zero at the shared branch node v = 1 may be
        // pushed by both segments and is merged by the dedup pass below)
        for j in 0..=n {
            if gv[j] == 0.0 {
                roots.push(classify(nodes[j]));
            }
        }
        for j in 0..n {
            if gv[j] != 0.0 && gv[j + 1] != 0.0 && gv[j].signum() != gv[j + 1].signum() {
                let v = newton_bisect(g, gp, nodes[j], nodes[j + 1], ROOT_TOL)?;
                roots.push(classify(v));
            }
        }
        // extremum pass: a double root sits at an extremum of G with G ≈ 0
        for j in 0..n {
            if gpv[j] != 0.0 && gpv[j].signum() != gpv[j + 1].signum() {
                let ve = bisect(gp, nodes[j], nodes[j + 1])?;
                if g(ve).abs() <= EXTREMUM_ZERO_TOL * scale(ve) {
                    roots.push(PhiRoot {
                        v: ve,
                        g_prime: gp(ve),
                        stability: Stability::Degenerate,
                    });
                }
            }
        }
    }

    roots.sort_by(|p, q| p.v.total_cmp(&q.v));
    let mut merged: Vec<PhiRoot> = Vec::new();
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.v - last.v).abs() <= ROOT_MERGE_TOL * last.v.abs().max(1.0) => {
                // keep the degenerate classification if either member carries it
                if r.stability == Stability::Degenerate {
                    *last = r;
                }
            }
            _ => merged.push(r),
        }
    }
    Ok(merged)
}

/// Largest admissible upper limit `v̄⁺` for an increasing wave out of
/// `v_minus`, for the `General` variant with `α = β = 0` and `1 < m < 2`.
///
/// `v̄⁺` is the unique point above 1 where the tangent to `B` at `v_minus`
/// re-intersects `B`; chords to limits beyond it no longer stay above `B`.
/// Requires `m/2 < v_minus < 1` strictly (the tangency point `m/2` itself
/// yields a degenerate root).
pub fn secant_threshold(params: &ModelParams, v_minus: f64) -> Result<f64> {
    if params.variant != Variant::General {
        return Err(Error::precondition(
            "secant_threshold applies to the General variant only",
        ));
    }
    if params.alpha != 0.0 || params.beta != 0.0 {
        return Err(Error::precondition(format!(
            "secant_threshold requires alpha = beta = 0, got alpha = {}, beta = {}",
            params.alpha, params.beta
        )));
    }
    let m = params.m;
    if !(1.0 < m && m < 2.0) {
        return Err(Error::precondition(format!(
            "increasing waves require 1 < m < 2 (B must turn convex past the junction), got m = {m}"
        )));
    }
    if !(m / 2.0 < v_minus && v_minus < 1.0) {
        return Err(Error::precondition(format!(
            "need m/2 < v_minus < 1 strictly, got v_minus = {v_minus} with m/2 = {}",
            m / 2.0
        )));
    }
    let b_vm = params.b(v_minus)?;
    let bp_vm = params.b_prime(v_minus)?;
    let h = |v: f64| params.b_raw(v) - b_vm - bp_vm * (v - v_minus);
    let hp = |v: f64| params.b_prime_raw(v) - bp_vm;
    if h(1.0) >= 0.0 {
        return Err(Error::numeric(
            "tangent line fails to dominate B at the junction; preconditions violated numerically",
        ));
    }
    let mut hi = 2.0;
    let mut grow = 0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::numeric("secant threshold bracket growth failed"));
        }
    }
    newton_bisect(h, hp, 1.0, hi, ROOT_TOL)
}

// ═══════════════════════════ profile integration ═════════════════════════

/// Sampled heteroclinic profile: ascending ξ with `z`, `v = A⁻¹(z)`, and the
/// induced optimal control `θ = θ*(v)` at every sample.
#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile {
    pub xi: Vec<f64>,
    pub z: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
    pub eps_trunc: f64,
    pub xi_max: f64,
    /// True when a tail stopped at `xi_max` or at step underflow instead of
    /// entering the eps-band around its limit.
    pub truncated: bool,
}

impl WaveProfile {
    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn xi_span(&self) -> (f64, f64) {
        (self.xi[0], *self.xi.last().unwrap())
    }

    /// Linear interpolation of v at ξ, clamped to the end samples outside.
    pub fn v_at(&self, xi: f64) -> f64 {
        crate::num::interp_clamped(&self.xi, &self.v, xi)
    }

    /// Linear interpolation of z at ξ, clamped.
    pub fn z_at(&self, xi: f64) -> f64 {
        crate::num::interp_clamped(&self.xi, &self.z, xi)
    }

    /// Linear interpolation of θ at ξ, clamped.
    pub fn theta_at(&self, xi: f64) -> f64 {
        crate::num::interp_clamped(&self.xi, &self.theta, xi)
    }

    /// ξ at which v crosses `level`, by linear interpolation; `None` when the
    /// level is outside the sampled range.
    pub fn level_crossing(&self, level: f64) -> Option<f64> {
        for i in 1..self.len() {
            let (a, b) = (self.v[i - 1], self.v[i]);
            if (a - level) * (b - level) <= 0.0 && a != b {
                let t = (level - a) / (b - a);
                return Some(self.xi[i - 1] + t * (self.xi[i] - self.xi[i - 1]));
            }
        }
        None
    }
}

/// Options for profile integration; `Default` gives the standard truncation
/// band, span cap and step control.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Integration stops once `z` is within this distance of a limit image.
    pub eps_trunc: f64,
    /// Hard cap on `|xi|` in either direction.
    pub xi_max: f64,
    /// Adaptive step control for the orbit integrator.
    pub ctrl: StepControl,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            eps_trunc: DEFAULT_EPS_TRUNC,
            xi_max: DEFAULT_XI_MAX,
            ctrl: StepControl::default(),
        }
    }
}

/// Integrate the profile from the normalization point
/// `z(0) = (z_left + z_right)/2`.  `None` options select the defaults.
pub fn integrate_profile(spec: &WaveSpec, opts: Option<&ProfileOptions>) -> Result<WaveProfile> {
    integrate_profile_from(spec, 0.5 * (spec.z_left + spec.z_right), opts)
}

/// Integrate the profile from an arbitrary interior starting value `z0`
/// (the orbit is shift-covariant: different `z0` reproduce the same profile
/// up to a ξ-translation).
pub fn integrate_profile_from(
    spec: &WaveSpec,
    z0: f64,
    opts: Option<&ProfileOptions>,
) -> Result<WaveProfile> {
    let default_opts;
    let opts = match opts {
        Some(o) => o,
        None => {
            default_opts = ProfileOptions::default();
            &default_opts
        }
    };
    let (eps_trunc, xi_max, ctrl) = (opts.eps_trunc, opts.xi_max, &opts.ctrl);
    let (zlo, zhi) = if spec.z_left < spec.z_right {
        (spec.z_left, spec.z_right)
    } else {
        (spec.z_right, spec.z_left)
    };
    if !(z0 > zlo && z0 < zhi) {
        return Err(Error::precondition(format!(
            "starting value z0 = {z0} must lie strictly between the z-images ({zlo}, {zhi})"
        )));
    }
    if !(eps_trunc > 0.0 && eps_trunc < 0.25 * (zhi - zlo)) {
        return Err(Error::precondition(format!(
            "eps_trunc = {eps_trunc} must be positive and small against the z-gap {}",
            zhi - zlo
        )));
    }
    let pl = spec.phase_line();
    let f0 = pl.f(z0)?;
    if f0 == 0.0 || f0.signum() != (spec.z_right - z0).signum() {
        return Err(Error::numeric(format!(
            "phase-line flow at z0 = {z0} does not run toward the right limit (F = {f0:.3e})"
        )));
    }

    let forward = integrate_orbit(|z| pl.f(z), z0, spec.z_right, eps_trunc, xi_max, ctrl)?;
    let backward = integrate_orbit(
        |z| pl.f(z).map(|f| -f),
        z0,
        spec.z_left,
        eps_trunc,
        xi_max,
        ctrl,
    )?;

    let n = forward.z.len() + backward.z.len() - 1;
    let mut xi = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    for i in (1..backward.s.len()).rev() {
        xi.push(-backward.s[i]);
        z.push(backward.z[i]);
    }
    xi.push(0.0);
    z.push(z0);
    for i in 1..forward.s.len() {
        xi.push(forward.s[i]);
        z.push(forward.z[i]);
    }

    let dir = (spec.z_right - spec.z_left).signum();
    for w in z.windows(2) {
        let dz = w[1] - w[0];
        if dz == 0.0 || dz.signum() != dir {
            return Err(Error::numeric(format!(
                "profile lost strict monotonicity near z = {}",
                w[0]
            )));
        }
    }

    let mut v = Vec::with_capacity(z.len());
    let mut theta = Vec::with_capacity(z.len());
    for &zi in &z {
        let vi = spec.params.invert_a(zi)?;
        theta.push(spec.params.theta_star(vi)?);
        v.push(vi);
    }

    Ok(WaveProfile {
        xi,
        z,
        v,
        theta,
        eps_trunc,
        xi_max,
        truncated: forward.truncated || backward.truncated,
    })
}
