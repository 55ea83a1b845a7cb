//! Independent finite-difference verifier for the constrained field equation.
//!
//! The field `phi(x, tau)` obeys, in backward time `tau`,
//!
//! ```text
//!     d phi / d tau = d^2/dx^2 A(phi) + d/dx B(phi)
//! ```
//!
//! on a uniform cell-centered grid with zero-gradient boundary conditions.
//! The update is written in conservation form: every cell exchanges interface
//! fluxes with its neighbours, so the discrete integral of `phi` changes only
//! through the advective flux at the two boundary interfaces.  This module
//! knows nothing about the travelling-wave construction; it is used to check
//! wave profiles against a direct evolution of the field equation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::num::{derivative_nonuniform, KahanSum};
use crate::wave::{WaveProfile, WaveSpec};

/// Hard cap on explicit time steps in a single [`evolve`] call.
const MAX_PDE_STEPS: u64 = 20_000_000;
/// Number of sample points used to bound `A'`, `B'` over the field's range.
const RANGE_SCAN_SAMPLES: usize = 2001;
/// Cell Peclet number above which the advective flux switches to upwinding.
const PECLET_SWITCH: f64 = 2.0;

/// Uniform cell-centered spatial grid on `[x_lo, x_hi]` with `n` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n: usize,
}

impl SpatialGrid {
    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::precondition(format!(
                "grid interval must be finite with x_lo < x_hi, got [{x_lo}, {x_hi}]"
            )));
        }
        if n < 16 {
            return Err(Error::precondition(format!(
                "grid must have at least 16 cells, got {n}"
            )));
        }
        Ok(Self { x_lo, x_hi, n })
    }

    /// Cell width.
    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.n as f64
    }

    /// Cell-center coordinates `x_i = x_lo + (i + 1/2) dx`.
    pub fn centers(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n)
            .map(|i| self.x_lo + (i as f64 + 0.5) * dx)
            .collect()
    }
}

/// Spatial discretisation of the advective flux `d/dx B(phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxScheme {
    /// Choose between `Centered` and `Upwind` from the cell Peclet number
    /// `|B'| dx / A'` bounded over the initial data's range (switch at 2).
    Auto,
    /// Second-order centered interface flux `(B_i + B_{i+1}) / 2`.
    Centered,
    /// First-order upwind interface flux selected by the sign of `B'`.
    Upwind,
}

/// Options for [`evolve`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Backward times at which the field is recorded; strictly increasing,
    /// all `>= 0`.  The evolution ends at the last entry.
    pub snapshot_times: Vec<f64>,
    /// Safety factor applied to the explicit stability bound (default 0.45).
    pub cfl: f64,
    /// Advective flux discretisation (default [`FluxScheme::Auto`]).
    pub flux: FluxScheme,
    /// The evolution aborts if the field leaves the initial range widened by
    /// this margin on both sides.  `None` selects `0.05 * range + 1e-3`.
    pub blowup_margin: Option<f64>,
}

impl EvolveOptions {
    pub fn new(snapshot_times: Vec<f64>) -> Self {
        Self {
            snapshot_times,
            cfl: 0.45,
            flux: FluxScheme::Auto,
            blowup_margin: None,
        }
    }
}

/// Result of [`evolve`]: recorded snapshots plus run diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct FieldEvolution {
    /// Cell-center coordinates shared by all snapshots.
    pub x: Vec<f64>,
    /// Cell width.
    pub dx: f64,
    /// Backward times of the recorded snapshots.
    pub times: Vec<f64>,
    /// Field values at each recorded time.
    pub snapshots: Vec<Vec<f64>>,
    /// Number of explicit steps taken.
    pub steps: u64,
    /// Scheme actually used for the advective flux (`Auto` is resolved).
    pub scheme: FluxScheme,
    /// Smallest field value seen at any step.
    pub min_seen: f64,
    /// Largest field value seen at any step.
    pub max_seen: f64,
    /// Difference between the change of the discrete integral of `phi` and
    /// the time-integrated boundary flux; zero up to rounding by
    /// construction of the conservation-form update.
    pub conservation_defect: f64,
}

/// Wave-speed estimate from tracking a level crossing across snapshots.
#[derive(Debug, Clone, Serialize)]
pub struct SpeedEstimate {
    /// Measured wave speed (sign convention of the travelling-wave ansatz:
    /// the level set moves as `x(tau) = x(0) - c tau`).
    pub c_measured: f64,
    /// Field level that was tracked.
    pub level: f64,
    /// `(tau, x)` pairs of the detected crossings.
    pub crossings: Vec<(f64, f64)>,
    /// Root-mean-square residual of the linear fit through the crossings.
    pub fit_rms: f64,
}

/// Outcome of the max-principle check ([`check_bounds`]).
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub ok: bool,
    /// Admissible band (initial range widened by `tol`).
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub min_seen: f64,
    pub max_seen: f64,
    /// Largest excursion outside `[lo - tol, hi + tol]`; zero when `ok`.
    pub max_violation: f64,
}

fn validate_inputs(grid: &SpatialGrid, phi0: &[f64], opts: &EvolveOptions) -> Result<()> {
    SpatialGrid::new(grid.x_lo, grid.x_hi, grid.n)?;
    if phi0.len() != grid.n {
        return Err(Error::precondition(format!(
            "initial data has {} values but the grid has {} cells",
            phi0.len(),
            grid.n
        )));
    }
    if let Some(&bad) = phi0.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::domain(format!(
            "initial data must be finite and positive, found {bad}"
        )));
    }
    if opts.snapshot_times.is_empty() {
        return Err(Error::precondition(
            "at least one snapshot time is required",
        ));
    }
    if opts.snapshot_times[0] < 0.0
        || opts.snapshot_times.windows(2).any(|w| !(w[0] < w[1]))
        || opts.snapshot_times.iter().any(|t| !t.is_finite())
    {
        return Err(Error::precondition(
            "snapshot times must be finite, non-negative and strictly increasing",
        ));
    }
    if !(opts.cfl > 0.0 && opts.cfl < 1.0) {
        return Err(Error::precondition(format!(
            "cfl safety factor must lie in (0, 1), got {}",
            opts.cfl
        )));
    }
    Ok(())
}

/// Bounds on `A'`, `|B'|` and the pointwise ratio `|B'|/A'` over `[lo, hi]`.
fn range_bounds(params: &ModelParams, lo: f64, hi: f64) -> (f64, f64, f64) {
    let mut max_ap = 0.0f64;
    let mut max_bp = 0.0f64;
    let mut max_ratio = 0.0f64;
    for k in 0..RANGE_SCAN_SAMPLES {
        let phi = lo + (hi - lo) * k as f64 / (RANGE_SCAN_SAMPLES - 1) as f64;
        let ap = params.a_prime_raw(phi);
        let bp = params.b_prime_raw(phi).abs();
        max_ap = max_ap.max(ap);
        max_bp = max_bp.max(bp);
        max_ratio = max_ratio.max(bp / ap);
    }
    (max_ap, max_bp, max_ratio)
}

/// Evolve `phi0` under the conservation-form field equation, recording the
/// state at every requested backward time.
pub fn evolve(
    params: &ModelParams,
    grid: &SpatialGrid,
    phi0: &[f64],
    opts: &EvolveOptions,
) -> Result<FieldEvolution> {
    validate_inputs(grid, phi0, opts)?;
    let n = grid.n;
    let dx = grid.dx();

    let init_min = phi0.iter().cloned().fold(f64::INFINITY, f64::min);
    let init_max = phi0.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let margin = opts
        .blowup_margin
        .unwrap_or_else(|| 0.05 * (init_max - init_min) + 1e-3);
    let guard_hi = init_max + margin;
    let mut guard_lo = init_min - margin;
    if guard_lo <= 0.0 {
        guard_lo = 0.5 * init_min;
    }

    let (max_ap, max_bp, max_ratio) = range_bounds(params, guard_lo, guard_hi);
    if !(max_ap.is_finite() && max_ap > 0.0 && max_bp.is_finite()) {
        return Err(Error::numeric(format!(
            "closure derivatives are not finite over the field range [{guard_lo}, {guard_hi}]"
        )));
    }
    let scheme = match opts.flux {
        FluxScheme::Centered => FluxScheme::Centered,
        FluxScheme::Upwind => FluxScheme::Upwind,
        FluxScheme::Auto => {
            if max_ratio * dx > PECLET_SWITCH {
                FluxScheme::Upwind
            } else {
                FluxScheme::Centered
            }
        }
    };
    let mut dt_stable = opts.cfl * dx * dx / (2.0 * max_ap);
    if max_bp > 0.0 {
        dt_stable = dt_stable.min(opts.cfl * dx / max_bp);
    }

    let mut phi = phi0.to_vec();
    let mut phi_next = vec![0.0f64; n];
    let mut a = vec![0.0f64; n];
    let mut b = vec![0.0f64; n];

    let mut times = Vec::with_capacity(opts.snapshot_times.len());
    let mut snapshots = Vec::with_capacity(opts.snapshot_times.len());
    let mut target_idx = 0usize;
    if opts.snapshot_times[0] == 0.0 {
        times.push(0.0);
        snapshots.push(phi.clone());
        target_idx = 1;
    }

    let mut tau = if opts.snapshot_times[0] == 0.0 && opts.snapshot_times.len() == 1 {
        // only the initial state was requested
        return Ok(FieldEvolution {
            x: grid.centers(),
            dx,
            times,
            snapshots,
            steps: 0,
            scheme,
            min_seen: init_min,
            max_seen: init_max,
            conservation_defect: 0.0,
        });
    } else {
        0.0f64
    };

    let mut steps = 0u64;
    let mut min_seen = init_min;
    let mut max_seen = init_max;
    let mut boundary_flux = KahanSum::default();
    let mass = |field: &[f64]| -> f64 {
        let mut s = KahanSum::default();
        for &v in field {
            s.add(v);
        }
        s.value() * dx
    };
    let mass0 = mass(&phi);

    let inv_dx = 1.0 / dx;
    while target_idx < opts.snapshot_times.len() {
        let target = opts.snapshot_times[target_idx];
        let dt = dt_stable.min(target - tau);
        if steps >= MAX_PDE_STEPS {
            return Err(Error::numeric(format!(
                "field evolution exceeded {MAX_PDE_STEPS} steps before tau = {target}"
            )));
        }

        for i in 0..n {
            a[i] = params.a_raw(phi[i]);
            b[i] = params.b_raw(phi[i]);
        }
        boundary_flux.add(dt * (b[n - 1] - b[0]));

        // interface fluxes; ghost cells copy the boundary values, so the
        // diffusive flux vanishes at the ends and the advective flux reduces
        // to the boundary `B` value for either scheme
        let r = dt * inv_dx;
        let mut flux_left = b[0]; // interface -1/2: ghost copy, no diffusive part
        for i in 0..n {
            let (diff_right, adv_right) = if i + 1 < n {
                let d = (a[i + 1] - a[i]) * inv_dx;
                let h = match scheme {
                    FluxScheme::Centered => 0.5 * (b[i] + b[i + 1]),
                    _ => {
                        let bp = params.b_prime_raw(0.5 * (phi[i] + phi[i + 1]));
                        if bp > 0.0 {
                            b[i + 1]
                        } else {
                            b[i]
                        }
                    }
                };
                (d, h)
            } else {
                (0.0, b[n - 1])
            };
            let flux_right = diff_right + adv_right;
            phi_next[i] = phi[i] + r * (flux_right - flux_left);
            flux_left = flux_right;
        }

        std::mem::swap(&mut phi, &mut phi_next);
        tau += dt;
        steps += 1;

        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &phi {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || lo < guard_lo || hi > guard_hi {
            return Err(Error::numeric(format!(
                "field left the guarded range [{guard_lo:.6}, {guard_hi:.6}] at tau = {tau:.6} \
                 (min {lo:.6}, max {hi:.6}); the explicit scheme is no longer trustworthy"
            )));
        }
        min_seen = min_seen.min(lo);
        max_seen = max_seen.max(hi);

        if tau >= target - 1e-12 {
            times.push(target);
            snapshots.push(phi.clone());
            tau = target;
            target_idx += 1;
        }
    }

    let defect = ((mass(&phi) - mass0) - boundary_flux.value()).abs();
    Ok(FieldEvolution {
        x: grid.centers(),
        dx,
        times,
        snapshots,
        steps,
        scheme,
        min_seen,
        max_seen,
        conservation_defect: defect,
    })
}

/// Estimate the wave speed by tracking where each snapshot crosses `level`
/// and fitting a line through the crossing positions.
///
/// With the travelling-wave sign convention the level set moves as
/// `x(tau) = x(0) - c tau`, so the fitted slope is `-c`.
pub fn estimate_speed(evolution: &FieldEvolution, level: f64) -> Result<SpeedEstimate> {
    if !level.is_finite() {
        return Err(Error::precondition("tracking level must be finite"));
    }
    let x = &evolution.x;
    let mut crossings: Vec<(f64, f64)> = Vec::new();
    for (tau, field) in evolution.times.iter().zip(&evolution.snapshots) {
        for i in 0..field.len().saturating_sub(1) {
            let d0 = field[i] - level;
            let d1 = field[i + 1] - level;
            if d0 == d1 {
                continue;
            }
            if d0 * d1 <= 0.0 {
                let t = d0 / (d0 - d1);
                crossings.push((*tau, x[i] + t * (x[i + 1] - x[i])));
                break;
            }
        }
    }
    if crossings.len() < 2 {
        return Err(Error::numeric(format!(
            "level {level} was crossed in only {} snapshot(s); cannot fit a speed",
            crossings.len()
        )));
    }
    let n = crossings.len() as f64;
    let t_mean = crossings.iter().map(|c| c.0).sum::<f64>() / n;
    let x_mean = crossings.iter().map(|c| c.1).sum::<f64>() / n;
    let mut stt = 0.0;
    let mut stx = 0.0;
    for &(t, xc) in &crossings {
        stt += (t - t_mean) * (t - t_mean);
        stx += (t - t_mean) * (xc - x_mean);
    }
    if stt == 0.0 {
        return Err(Error::numeric(
            "all level crossings share the same time; cannot fit a speed",
        ));
    }
    let slope = stx / stt;
    let mut ss = 0.0;
    for &(t, xc) in &crossings {
        let resid = xc - (x_mean + slope * (t - t_mean));
        ss += resid * resid;
    }
    Ok(SpeedEstimate {
        c_measured: -slope,
        level,
        fit_rms: (ss / n).sqrt(),
        crossings,
    })
}

/// Check the discrete max principle: at every step the field must stay inside
/// `[lo - tol, hi + tol]`, where `[lo, hi]` is the initial range.
pub fn check_bounds(evolution: &FieldEvolution, lo: f64, hi: f64, tol: f64) -> BoundsReport {
    let below = (lo - tol) - evolution.min_seen;
    let above = evolution.max_seen - (hi + tol);
    let max_violation = below.max(above).max(0.0);
    BoundsReport {
        ok: max_violation == 0.0,
        lo,
        hi,
        tol,
        min_seen: evolution.min_seen,
        max_seen: evolution.max_seen,
        max_violation,
    }
}

/// Evaluate how well a wave profile satisfies the first integral of the
/// travelling-wave equation: `-c v + dz/dxi + B(v)` must equal the constant
/// `K0` along the whole profile.  Returns the maximum absolute deviation,
/// with `dz/dxi` taken by finite differences of the sampled `z` so that the
/// check does not reuse the phase-line function `F` that built the profile.
pub fn residual_constant(spec: &WaveSpec, profile: &WaveProfile) -> Result<f64> {
    if profile.len() < 3 {
        return Err(Error::precondition(
            "profile needs at least 3 samples for a finite-difference residual",
        ));
    }
    let dz = derivative_nonuniform(&profile.xi, &profile.z);
    let mut worst = 0.0f64;
    for i in 0..profile.len() {
        let q = -spec.c * profile.v[i] + dz[i] + spec.params.b(profile.v[i])?;
        worst = worst.max((q - spec.k0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::wave::{compute_wave_spec, integrate_profile};
    use approx::assert_abs_diff_eq;

    fn simple() -> ModelParams {
        ModelParams::simple(1.0).unwrap()
    }

    fn sample_profile_on(profile: &WaveProfile, grid: &SpatialGrid) -> Vec<f64> {
        grid.centers().iter().map(|&x| profile.v_at(x)).collect()
    }

    #[test]
    fn constant_field_is_an_exact_fixed_point() {
        let grid = SpatialGrid::new(0.0, 1.0, 64).unwrap();
        let phi0 = vec![0.7; 64];
        let opts = EvolveOptions::new(vec![0.0, 0.25, 0.5]);
        let ev = evolve(&simple(), &grid, &phi0, &opts).unwrap();
        assert_eq!(ev.snapshots.len(), 3);
        for snap in &ev.snapshots {
            for &v in snap {
                assert_eq!(v, 0.7);
            }
        }
        assert_eq!(ev.conservation_defect, 0.0);
    }

    #[test]
    fn discrete_mass_changes_only_through_boundary_flux() {
        let grid = SpatialGrid::new(-4.0, 4.0, 128).unwrap();
        let phi0: Vec<f64> = grid
            .centers()
            .iter()
            .map(|&x| 0.8 + 0.6 * (-x * x).exp())
            .collect();
        let opts = EvolveOptions::new(vec![0.3]);
        let ev = evolve(&simple(), &grid, &phi0, &opts).unwrap();
        assert!(ev.steps > 10);
        assert!(
            ev.conservation_defect < 1e-10,
            "conservation defect {} should vanish to rounding",
            ev.conservation_defect
        );
    }

    #[test]
    fn snapshots_land_exactly_on_requested_times() {
        let grid = SpatialGrid::new(-2.0, 2.0, 64).unwrap();
        let phi0 = vec![1.3; 64];
        let targets = vec![0.1, 0.17, 0.32];
        let opts = EvolveOptions::new(targets.clone());
        let ev = evolve(&simple(), &grid, &phi0, &opts).unwrap();
        assert_eq!(ev.times, targets);
        assert_eq!(ev.snapshots.len(), 3);
    }

    #[test]
    fn wave_profile_translates_at_the_predicted_speed() {
        let params = simple();
        let spec = compute_wave_spec(&params, 2.0, 0.5).unwrap();
        let profile = integrate_profile(&spec, None).unwrap();
        let grid = SpatialGrid::new(-30.0, 30.0, 1024).unwrap();
        let phi0 = sample_profile_on(&profile, &grid);
        let tau_end = 2.0;
        let targets: Vec<f64> = (0..=10).map(|k| k as f64 * tau_end / 10.0).collect();
        let ev = evolve(&params, &grid, &phi0, &EvolveOptions::new(targets)).unwrap();
        assert_eq!(ev.scheme, FluxScheme::Centered);

        // the evolved field should match the translated profile ...
        let last = ev.snapshots.last().unwrap();
        let mut err = 0.0f64;
        for (i, &x) in ev.x.iter().enumerate() {
            // interior only: the clamped tails interact with the boundary
            if x.abs() < 25.0 {
                err = err.max((last[i] - profile.v_at(x + spec.c * tau_end)).abs());
            }
        }
        assert!(err < 2e-3, "translation error {err} too large");

        // ... and the tracked level crossing should recover the speed
        let est = estimate_speed(&ev, 1.0).unwrap();
        assert!(
            (est.c_measured - spec.c).abs() < 0.01,
            "measured speed {} vs chord speed {}",
            est.c_measured,
            spec.c
        );
        assert!(est.crossings.len() == 11);

        // max principle within a dx^2-sized tolerance
        let report = check_bounds(&ev, 0.5, 2.0, 1e-6 + 10.0 * ev.dx * ev.dx);
        assert!(report.ok, "bounds violated by {}", report.max_violation);
    }

    #[test]
    fn auto_flux_switches_to_upwind_at_large_peclet() {
        // omega = 40 makes |B'|/A' = 2 omega |1 - phi| large; with dx = 0.125
        // the cell Peclet far exceeds 2
        let params = ModelParams::simple(40.0).unwrap();
        let grid = SpatialGrid::new(0.0, 8.0, 64).unwrap();
        let phi0: Vec<f64> = grid
            .centers()
            .iter()
            .map(|&x| 0.55 + 0.35 * ((x - 4.0) / 0.8).tanh())
            .collect();
        let opts = EvolveOptions::new(vec![0.05]);
        let ev = evolve(&params, &grid, &phi0, &opts).unwrap();
        assert_eq!(ev.scheme, FluxScheme::Upwind);
        // upwinding is monotone: no overshoot beyond the initial range
        let report = check_bounds(&ev, 0.2, 0.9, 1e-9);
        assert!(
            report.ok,
            "upwind run violated bounds by {}",
            report.max_violation
        );
    }

    #[test]
    fn evolve_rejects_bad_inputs() {
        let grid = SpatialGrid::new(0.0, 1.0, 32).unwrap();
        let params = simple();
        let good = vec![1.0; 32];

        let short = vec![1.0; 31];
        assert!(evolve(&params, &grid, &short, &EvolveOptions::new(vec![0.1])).is_err());

        let mut negative = good.clone();
        negative[3] = -0.2;
        assert!(evolve(&params, &grid, &negative, &EvolveOptions::new(vec![0.1])).is_err());

        assert!(evolve(&params, &grid, &good, &EvolveOptions::new(vec![])).is_err());
        assert!(evolve(&params, &grid, &good, &EvolveOptions::new(vec![0.2, 0.1])).is_err());

        let mut opts = EvolveOptions::new(vec![0.1]);
        opts.cfl = 1.5;
        assert!(evolve(&params, &grid, &good, &opts).is_err());

        assert!(SpatialGrid::new(1.0, 0.0, 64).is_err());
        assert!(SpatialGrid::new(0.0, 1.0, 4).is_err());
    }

    #[test]
    fn speed_estimate_requires_crossings() {
        let grid = SpatialGrid::new(0.0, 1.0, 32).unwrap();
        let phi0 = vec![0.7; 32];
        let ev = evolve(&simple(), &grid, &phi0, &EvolveOptions::new(vec![0.0, 0.1])).unwrap();
        // constant field never crosses 1.5
        assert!(estimate_speed(&ev, 1.5).is_err());
    }

    #[test]
    fn first_integral_residual_is_small_on_a_wave_profile() {
        let params = simple();
        let spec = compute_wave_spec(&params, 2.0, 0.5).unwrap();
        let profile = integrate_profile(&spec, None).unwrap();
        let resid = residual_constant(&spec, &profile).unwrap();
        assert!(resid < 1e-6, "first-integral residual {resid} too large");
    }

    #[test]
    fn residual_detects_a_profile_that_is_not_a_wave() {
        let params = simple();
        let spec = compute_wave_spec(&params, 2.0, 0.5).unwrap();
        let mut profile = integrate_profile(&spec, None).unwrap();
        // corrupt the profile: stretch xi, which changes dz/dxi everywhere
        for xi in &mut profile.xi {
            *xi *= 1.25;
        }
        let resid = residual_constant(&spec, &profile).unwrap();
        assert!(
            resid > 1e-3,
            "corrupted profile should have a visible residual, got {resid}"
        );
    }

    #[test]
    fn bounds_report_flags_excursions() {
        let grid = SpatialGrid::new(0.0, 1.0, 32).unwrap();
        let phi0 = vec![0.7; 32];
        let ev = evolve(&simple(), &grid, &phi0, &EvolveOptions::new(vec![0.1])).unwrap();
        // artificially tight band around a value below the field
        let report = check_bounds(&ev, 0.1, 0.2, 1e-3);
        assert!(!report.ok);
        assert_abs_diff_eq!(report.max_violation, 0.7 - 0.201, epsilon = 1e-12);
    }
}
