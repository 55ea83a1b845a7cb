//! JSON report bodies.  Field layout is frozen by the schemas under
//! `schemas/` at the repository root; keep the two in lockstep.

use hjbwave_core::{
    BoundsReport, ConnectionReport, Direction, ModelParams, PhiRoot, SdeConfig, SimResult,
    Stability, Variant, WaveSpec,
};
use serde::Serialize;

pub fn variant_str(v: Variant) -> &'static str {
    match v {
        Variant::Simple => "simple",
        Variant::QuadraticDrift => "quadratic-drift",
        Variant::General => "general",
    }
}

fn direction_str(d: Direction) -> &'static str {
    match d {
        Direction::Decreasing => "decreasing",
        Direction::Increasing => "increasing",
    }
}

fn stability_str(s: Stability) -> &'static str {
    match s {
        Stability::Unstable => "unstable",
        Stability::Stable => "stable",
        Stability::Degenerate => "degenerate",
    }
}

/// Model block shared by every report; `alpha`, `beta`, `m` are null unless
/// the variant is `general`.
#[derive(Serialize)]
pub struct ModelBlock {
    pub variant: &'static str,
    pub omega: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub m: Option<f64>,
}

impl ModelBlock {
    pub fn new(params: &ModelParams) -> Self {
        let general = params.variant == Variant::General;
        Self {
            variant: variant_str(params.variant),
            omega: params.omega,
            alpha: general.then_some(params.alpha),
            beta: general.then_some(params.beta),
            m: general.then_some(params.m),
        }
    }
}

#[derive(Serialize)]
pub struct RootEntry {
    pub v: f64,
    pub g_prime: f64,
    pub stability: &'static str,
}

impl RootEntry {
    pub fn from_roots(roots: &[PhiRoot]) -> Vec<Self> {
        roots
            .iter()
            .map(|r| Self {
                v: r.v,
                g_prime: r.g_prime,
                stability: stability_str(r.stability),
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct SpecReport {
    pub command: &'static str,
    pub model: ModelBlock,
    pub v_left: f64,
    pub v_right: f64,
    pub c: f64,
    pub k0: f64,
    pub z_left: f64,
    pub z_right: f64,
    pub f_prime_left: f64,
    pub f_prime_right: f64,
    pub direction: &'static str,
    pub secant_threshold: Option<f64>,
    pub scan_interval: [f64; 2],
    pub roots: Vec<RootEntry>,
    pub valid: bool,
    pub reason: Option<String>,
}

impl SpecReport {
    pub fn new(
        spec: &WaveSpec,
        report: &ConnectionReport,
        roots: &[PhiRoot],
        scan: (f64, f64),
        secant_threshold: Option<f64>,
    ) -> Self {
        Self {
            command: "spec",
            model: ModelBlock::new(&spec.params),
            v_left: spec.v_left,
            v_right: spec.v_right,
            c: spec.c,
            k0: spec.k0,
            z_left: spec.z_left,
            z_right: spec.z_right,
            f_prime_left: spec.f_prime_left,
            f_prime_right: spec.f_prime_right,
            direction: direction_str(spec.direction),
            secant_threshold,
            scan_interval: [scan.0, scan.1],
            roots: RootEntry::from_roots(roots),
            valid: report.valid,
            reason: report.message.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct GridBlock {
    pub x_lo: f64,
    pub x_hi: f64,
    pub cells: usize,
    pub dx: f64,
}

#[derive(Serialize)]
pub struct BoundsBlock {
    pub ok: bool,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub min_seen: f64,
    pub max_seen: f64,
    pub max_violation: f64,
}

impl From<&BoundsReport> for BoundsBlock {
    fn from(b: &BoundsReport) -> Self {
        Self {
            ok: b.ok,
            lo: b.lo,
            hi: b.hi,
            tol: b.tol,
            min_seen: b.min_seen,
            max_seen: b.max_seen,
            max_violation: b.max_violation,
        }
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub model: ModelBlock,
    pub v_left: f64,
    pub v_right: f64,
    pub c_spec: f64,
    pub c_measured: f64,
    pub rel_speed_error: f64,
    pub speed_tol: f64,
    pub speed_ok: bool,
    pub residual_max: f64,
    pub residual_tol: f64,
    pub residual_ok: bool,
    pub bounds: BoundsBlock,
    pub grid: GridBlock,
    pub wave_width: f64,
    pub travel_widths: f64,
    pub tau_end: f64,
    pub scheme: &'static str,
    pub steps: u64,
    pub crossings: usize,
    pub fit_rms: f64,
    pub conservation_defect: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct PolicyResult {
    pub policy: String,
    pub mean_utility: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub flagged_paths: usize,
}

impl From<&SimResult> for PolicyResult {
    fn from(r: &SimResult) -> Self {
        Self {
            policy: r.policy.clone(),
            mean_utility: r.mean_utility,
            std_error: r.std_error,
            n_paths: r.n_paths,
            flagged_paths: r.flagged_paths,
        }
    }
}

#[derive(Serialize)]
pub struct Comparison {
    pub policy: String,
    /// `(wave mean − constant mean) / combined standard error`.
    pub z_score: f64,
    pub favours_wave: bool,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub model: ModelBlock,
    pub v_left: f64,
    pub v_right: f64,
    pub config: SdeConfig,
    pub utility: String,
    pub policies: Vec<PolicyResult>,
    pub comparisons: Vec<Comparison>,
}

pub fn to_json(report: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization is infallible");
    s.push('\n');
    s
}
