//! Value-function reconstruction from a transformed field.
//!
//! The transformed field is a logarithmic-derivative statistic of the value
//! function's slope.  Integrating it twice recovers the marginal value `V_x`
//! and the value `V` up to the usual normalisations, which is an independent
//! consistency check on any candidate field: the reconstructed `V` must be
//! strictly increasing with decreasing slope wherever the model says so, and
//! re-deriving the field from `V_x` must return the input.
//!
//! The module also synthesises a terminal utility from a wave profile: a
//! tabulated concave payout whose induced control problem is solved by the
//! wave, with matched exponential tails so the payout is defined (and stays
//! concave and increasing) on the whole real line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Variant};
use crate::num::{cumtrapz, derivative_nonuniform, interp_clamped, KahanSum};
use crate::wave::{WaveProfile, WaveSpec};

/// Marginal value and value samples reconstructed from a field.
#[derive(Debug, Clone, Serialize)]
pub struct ValueCurve {
    /// Grid (strictly increasing).
    pub x: Vec<f64>,
    /// Marginal value `V_x`, normalised to 1 at the anchor node.
    pub vx: Vec<f64>,
    /// Value `V`, anchored at 0 at the first node.
    pub v: Vec<f64>,
    /// Anchor actually used (the grid node nearest to the requested one).
    pub x0: f64,
}

/// Outcome of [`check_value_assumptions`].
#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    /// `V_x > 0` everywhere and the value samples never decrease.  (When
    /// `V_x` spans many orders of magnitude the running integral can exhaust
    /// the floating-point resolution of `V`, so exact ties between adjacent
    /// `V` samples are tolerated; positivity of `V_x` carries the strict
    /// statement.)
    pub increasing_ok: bool,
    /// `V_x` is strictly decreasing across all nodes (discrete concavity);
    /// robust in floating point because adjacent `V_x` samples differ
    /// relatively, not absolutely.
    pub concave_ok: bool,
    pub min_vx: f64,
    pub max_vx: f64,
    pub message: Option<String>,
}

fn validate_grid_field(x: &[f64], phi: &[f64]) -> Result<()> {
    if x.len() < 3 {
        return Err(Error::precondition(format!(
            "need at least 3 grid nodes, got {}",
            x.len()
        )));
    }
    if phi.len() != x.len() {
        return Err(Error::precondition(format!(
            "field has {} samples but the grid has {} nodes",
            phi.len(),
            x.len()
        )));
    }
    if x.windows(2).any(|w| !(w[0] < w[1])) || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::precondition(
            "grid must be finite and strictly increasing",
        ));
    }
    if let Some(&bad) = phi.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::domain(format!(
            "field values must be finite and positive, found {bad}"
        )));
    }
    Ok(())
}

/// The log-slope of the marginal value implied by a field value, per variant:
/// `d(ln V_x)/dx = -omega phi` in the plain models and `1 - omega phi` in the
/// quadratic-drift model.
fn log_slope_shift(variant: Variant) -> f64 {
    match variant {
        Variant::QuadraticDrift => 1.0,
        _ => 0.0,
    }
}

/// Reconstruct the marginal value and value on `x` from field samples `phi`,
/// anchoring `V_x = 1` at the grid node nearest `x0`.
pub fn marginal_from_phi(
    params: &ModelParams,
    x: &[f64],
    phi: &[f64],
    x0: f64,
) -> Result<ValueCurve> {
    validate_grid_field(x, phi)?;
    if !x0.is_finite() {
        return Err(Error::precondition("anchor x0 must be finite"));
    }
    let s = cumtrapz(x, phi);
    // snap the anchor to the nearest grid node so the normalisation is exact
    let j0 = match x.binary_search_by(|g| g.total_cmp(&x0)) {
        Ok(j) => j,
        Err(j) => {
            if j == 0 {
                0
            } else if j >= x.len() {
                x.len() - 1
            } else if (x[j] - x0).abs() < (x0 - x[j - 1]).abs() {
                j
            } else {
                j - 1
            }
        }
    };
    let x0_snapped = x[j0];
    let s0 = s[j0];
    let shift = log_slope_shift(params.variant);
    let vx: Vec<f64> = x
        .iter()
        .zip(&s)
        .map(|(&xi, &si)| (shift * (xi - x0_snapped) - params.omega * (si - s0)).exp())
        .collect();
    if vx.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric(
            "marginal value overflowed; shrink the grid or re-anchor",
        ));
    }
    let v = cumtrapz(x, &vx);
    Ok(ValueCurve {
        x: x.to_vec(),
        vx,
        v,
        x0: x0_snapped,
    })
}

/// Invert the reconstruction: recover the field from the marginal value by
/// numerically differentiating `ln V_x`.
pub fn reconstruct_phi(params: &ModelParams, curve: &ValueCurve) -> Result<Vec<f64>> {
    validate_grid_field(&curve.x, &curve.vx)?;
    let dvx = derivative_nonuniform(&curve.x, &curve.vx);
    let shift = log_slope_shift(params.variant);
    let phi: Vec<f64> = curve
        .vx
        .iter()
        .zip(&dvx)
        .map(|(&vx, &d)| (shift - d / vx) / params.omega)
        .collect();
    Ok(phi)
}

/// Check the qualitative shape of a reconstructed value curve: strictly
/// increasing value, strictly decreasing marginal value.
pub fn check_value_assumptions(curve: &ValueCurve) -> ValueReport {
    let mut increasing_ok = true;
    let mut concave_ok = true;
    let mut message = None;
    if curve.vx.iter().any(|&v| !(v > 0.0)) {
        increasing_ok = false;
        message = Some("marginal value is not everywhere positive".into());
    }
    if curve.v.windows(2).any(|w| !(w[0] <= w[1])) {
        increasing_ok = false;
        message.get_or_insert_with(|| "value samples decrease somewhere".into());
    }
    if curve.vx.windows(2).any(|w| !(w[0] > w[1])) {
        concave_ok = false;
        message.get_or_insert_with(|| "marginal value is not strictly decreasing".into());
    }
    let min_vx = curve.vx.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_vx = curve.vx.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ValueReport {
        increasing_ok,
        concave_ok,
        min_vx,
        max_vx,
        message,
    }
}

/// Tabulated terminal utility with matched exponential (CARA-style) tails.
///
/// Inside the table the payout is linearly interpolated; outside it continues
/// with `C^1` exponential tails whose local absolute risk aversion equals the
/// model's limiting value on that side, so the extension is strictly
/// increasing, concave and bounded above.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UtilitySpec {
    /// Wealth grid (strictly increasing).
    pub x: Vec<f64>,
    /// Payout samples, normalised so the payout vanishes at `x = 0`.
    pub u: Vec<f64>,
    /// Payout slope samples, normalised to 1 at `x = 0`.
    pub du: Vec<f64>,
    /// Tail risk-aversion on the left of the table (`> 0`).
    pub lambda_left: f64,
    /// Tail risk-aversion on the right of the table (`> 0`).
    pub lambda_right: f64,
}

impl UtilitySpec {
    /// Evaluate the payout anywhere on the real line.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x < self.x[0] {
            let u0 = self.u[0];
            let du0 = self.du[0];
            let l = self.lambda_left;
            return u0 - du0 * ((l * (self.x[0] - x)).exp() - 1.0) / l;
        }
        if x > self.x[n - 1] {
            let un = self.u[n - 1];
            let dun = self.du[n - 1];
            let l = self.lambda_right;
            return un + dun * (1.0 - (-l * (x - self.x[n - 1])).exp()) / l;
        }
        interp_clamped(&self.x, &self.u, x)
    }

    /// Upper bound of the payout over the whole real line.
    pub fn upper_bound(&self) -> f64 {
        let n = self.x.len();
        self.u[n - 1] + self.du[n - 1] / self.lambda_right
    }
}

/// Synthesise the terminal utility for which the given wave is the optimal
/// policy's fixed shape at the terminal time.
///
/// The construction integrates the profile twice (matching the marginal-value
/// reconstruction for the wave spec's variant), normalises slope 1 and value 0 at
/// `xi = 0`, and attaches exponential tails with the limiting risk aversions.
pub fn synth_terminal_utility(spec: &WaveSpec, profile: &WaveProfile) -> Result<UtilitySpec> {
    if profile.is_empty() || profile.len() < 3 {
        return Err(Error::precondition(
            "profile is too short to synthesise a payout",
        ));
    }
    let omega = spec.params.omega;
    let shift = log_slope_shift(spec.params.variant);
    let lambda_left = omega * spec.v_left - shift;
    let lambda_right = omega * spec.v_right - shift;
    if !(lambda_left > 0.0 && lambda_right > 0.0) {
        return Err(Error::precondition(format!(
            "tail slopes must be positive for a concave increasing payout, \
             got lambda_left = {lambda_left}, lambda_right = {lambda_right}"
        )));
    }

    let x = &profile.xi;
    let s = cumtrapz(x, &profile.v);
    // xi = 0 is an exact profile node (the orbit starts there)
    let j0 = x
        .binary_search_by(|g| g.total_cmp(&0.0))
        .map_err(|_| Error::precondition("profile does not contain the node xi = 0"))?;
    let s0 = s[j0];
    let du: Vec<f64> = x
        .iter()
        .zip(&s)
        .map(|(&xi, &si)| (shift * xi - omega * (si - s0)).exp())
        .collect();
    if du.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric(
            "payout slope overflowed on the profile span",
        ));
    }
    // integrate the slope outward from the anchor in both directions: the
    // slope reaches enormous magnitudes in the far left tail, and anchoring
    // by subtraction after a left-to-right pass would wipe out the payout's
    // resolution near the anchor
    let mut u = vec![0.0f64; x.len()];
    let mut acc = KahanSum::default();
    for i in j0 + 1..x.len() {
        acc.add(0.5 * (x[i] - x[i - 1]) * (du[i] + du[i - 1]));
        u[i] = acc.value();
    }
    acc = KahanSum::default();
    for i in (0..j0).rev() {
        acc.add(-0.5 * (x[i + 1] - x[i]) * (du[i] + du[i + 1]));
        u[i] = acc.value();
    }
    Ok(UtilitySpec {
        x: x.clone(),
        u,
        du,
        lambda_left,
        lambda_right,
    })
}
