//! The five subcommands: resolve options, call the library, emit CSV/JSON.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::ValueEnum;
use hjbwave_core::{
    build_wave_spec, check_bounds, compute_wave_spec, connection_report, estimate_speed, evolve,
    find_phi_roots, integrate_profile, policy_from_wave, residual_constant, secant_threshold,
    simulate, synth_terminal_utility, EvolveOptions, FluxScheme, ModelParams, PhiRoot, PolicyField,
    ProfileOptions, SdeConfig, SpatialGrid, StepControl, Utility, Variant,
};

use crate::config::FileConfig;
use crate::fail::{CliResult, Failure};
use crate::fmt::{csv_field, fmt_g17};
use crate::report::{
    self, BoundsBlock, Comparison, GridBlock, ModelBlock, PolicyResult, SimulateReport, SpecReport,
    VerifyReport,
};
use crate::{
    CommonArgs, FluxArg, LimitArgs, ModelArgs, ProfileArgs, SimulateArgs, SpecArgs, SweepArgs,
    SweepModeArg, UtilityArg, VariantArg, VerifyArgs,
};

// ──────────────────────────── shared plumbing ─────────────────────────────

fn value_enum_from_cfg<T: ValueEnum>(
    cfg: &FileConfig,
    key: &str,
    flag: Option<T>,
) -> CliResult<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.raw(key) {
        None => Ok(None),
        Some(text) => T::from_str(text, true)
            .map(Some)
            .map_err(|_| Failure::invalid(format!("config key `{key}`: unknown value `{text}`"))),
    }
}

fn resolve_model(args: &ModelArgs, cfg: &FileConfig) -> CliResult<ModelParams> {
    let variant = value_enum_from_cfg(cfg, "variant", args.variant)?.unwrap_or(VariantArg::Simple);
    let omega = cfg.resolve("omega", args.omega, 1.0)?;
    let params = match variant {
        VariantArg::Simple => ModelParams::simple(omega),
        VariantArg::QuadraticDrift => ModelParams::quadratic_drift(omega),
        VariantArg::General => {
            let alpha = cfg.resolve("alpha", args.alpha, 0.0)?;
            let beta = cfg.resolve("beta", args.beta, 0.0)?;
            let m = cfg
                .resolve_opt("m", args.m)?
                .ok_or_else(|| Failure::invalid("the general variant requires --m"))?;
            ModelParams::general(omega, alpha, beta, m)
        }
    };
    params.map_err(Into::into)
}

fn resolve_limits(args: &LimitArgs, cfg: &FileConfig) -> CliResult<(f64, f64)> {
    let v_left = cfg.resolve_required("v-left", args.v_left)?;
    let v_right = cfg.resolve_required("v-right", args.v_right)?;
    Ok((v_left, v_right))
}

fn default_scan(v_left: f64, v_right: f64) -> (f64, f64) {
    let lo = 0.02 * 1.0f64.min(v_left).min(v_right);
    let hi = 6.0 * 1.0f64.max(v_left).max(v_right);
    (lo, hi)
}

fn resolve_out(common: &CommonArgs) -> Option<PathBuf> {
    let out = common.out.as_ref()?;
    if out.is_relative() {
        if let Some(dir) = std::env::var_os("HJBWAVE_OUT_DIR") {
            return Some(PathBuf::from(dir).join(out));
        }
    }
    Some(out.clone())
}

fn emit(common: &CommonArgs, content: &str) -> CliResult<()> {
    match resolve_out(common) {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&path, content)?;
            Ok(())
        }
    }
}

fn configure_threads(common: &CommonArgs, cfg: &FileConfig) -> CliResult<()> {
    if let Some(threads) = cfg.resolve_opt("threads", common.threads)? {
        if threads == 0 {
            return Err(Failure::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::invalid(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

// ─────────────────────────────── subcommands ──────────────────────────────

pub fn cmd_spec(args: SpecArgs) -> CliResult<ExitCode> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let params = resolve_model(&args.model, &cfg)?;
    let (v_left, v_right) = resolve_limits(&args.limits, &cfg)?;

    let spec = build_wave_spec(&params, v_left, v_right)?;
    let verdict = connection_report(&spec)?;

    let (def_lo, def_hi) = default_scan(v_left, v_right);
    let scan = (
        cfg.resolve("scan-lo", args.scan_lo, def_lo)?,
        cfg.resolve("scan-hi", args.scan_hi, def_hi)?,
    );
    let roots = find_phi_roots(&params, spec.c, spec.k0, scan)?;

    // The chord-tangency gate only exists for increasing waves of the
    // general family with 1 < m < 2; elsewhere it is undefined.
    let secant = if params.variant == Variant::General && params.m < 2.0 && v_left < v_right {
        secant_threshold(&params, v_left).ok()
    } else {
        None
    };

    let doc = SpecReport::new(&spec, &verdict, &roots, scan, secant);
    emit(&args.common, &report::to_json(&doc))?;
    if verdict.valid {
        Ok(ExitCode::SUCCESS)
    } else {
        let reason = verdict
            .message
            .unwrap_or_else(|| "connection check failed".to_string());
        eprintln!("no traveling wave: {reason}");
        Ok(ExitCode::from(3))
    }
}

pub fn cmd_profile(args: ProfileArgs) -> CliResult<ExitCode> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let params = resolve_model(&args.model, &cfg)?;
    let (v_left, v_right) = resolve_limits(&args.limits, &cfg)?;
    let eps_trunc = cfg.resolve("eps-trunc", args.eps_trunc, 1e-8)?;
    let xi_max = cfg.resolve("xi-max", args.xi_max, 200.0)?;
    if !(eps_trunc.is_finite() && eps_trunc > 0.0) {
        return Err(Failure::invalid(format!(
            "--eps-trunc must be positive, got {eps_trunc}"
        )));
    }
    if !(xi_max.is_finite() && xi_max > 0.0) {
        return Err(Failure::invalid(format!(
            "--xi-max must be positive, got {xi_max}"
        )));
    }

    let spec = compute_wave_spec(&params, v_left, v_right)?;
    let opts = ProfileOptions {
        eps_trunc,
        xi_max,
        ctrl: StepControl::default(),
    };
    let profile = integrate_profile(&spec, Some(&opts))?;

    let mut out = String::with_capacity(32 * 4 * profile.len() + 16);
    out.push_str("xi,z,v,theta\n");
    for i in 0..profile.len() {
        out.push_str(&fmt_g17(profile.xi[i]));
        out.push(',');
        out.push_str(&fmt_g17(profile.z[i]));
        out.push(',');
        out.push_str(&fmt_g17(profile.v[i]));
        out.push(',');
        out.push_str(&fmt_g17(profile.theta[i]));
        out.push('\n');
    }
    emit(&args.common, &out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let params = resolve_model(&args.model, &cfg)?;
    let (v_left, v_right) = resolve_limits(&args.limits, &cfg)?;
    let cells = cfg.resolve("cells", args.cells, 1024)?;
    let travel_widths = cfg.resolve("travel-widths", args.travel_widths, 10.0)?;
    let pad = cfg.resolve("pad", args.pad, 8.0)?;
    let cfl = cfg.resolve("cfl", args.cfl, 0.45)?;
    let flux = value_enum_from_cfg(&cfg, "flux", args.flux)?.unwrap_or(FluxArg::Auto);
    let snapshots = cfg.resolve("snapshots", args.snapshots, 17)?;
    let speed_tol = cfg.resolve("speed-tol", args.speed_tol, 0.02)?;
    let residual_tol = cfg.resolve("residual-tol", args.residual_tol, 1e-6)?;
    if snapshots < 2 {
        return Err(Failure::invalid("--snapshots must be at least 2"));
    }
    if !(travel_widths > 0.0 && pad >= 0.0) {
        return Err(Failure::invalid(
            "--travel-widths must be positive and --pad non-negative",
        ));
    }

    let spec = compute_wave_spec(&params, v_left, v_right)?;
    let profile = integrate_profile(&spec, None)?;
    let residual_max = residual_constant(&spec, &profile)?;

    let (xa, xb) = profile.xi_span();
    let (vmin, vmax) = (v_left.min(v_right), v_left.max(v_right));
    let wave_width = {
        let lo = profile
            .level_crossing(vmin + 0.1 * (vmax - vmin))
            .ok_or_else(|| Failure::numeric("profile does not cross its 10% level"))?;
        let hi = profile
            .level_crossing(vmin + 0.9 * (vmax - vmin))
            .ok_or_else(|| Failure::numeric("profile does not cross its 90% level"))?;
        (hi - lo).abs()
    };
    let travel = travel_widths * wave_width;
    let tau_end = travel / spec.c.abs();
    let (x_lo, x_hi) = if spec.c > 0.0 {
        (xa - travel - pad, xb + pad)
    } else {
        (xa - pad, xb + travel + pad)
    };
    let grid = SpatialGrid::new(x_lo, x_hi, cells)?;
    let phi0: Vec<f64> = grid.centers().iter().map(|&x| profile.v_at(x)).collect();
    let lo0 = phi0.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi0 = phi0.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut opts = EvolveOptions::new(
        (0..snapshots)
            .map(|k| tau_end * k as f64 / (snapshots - 1) as f64)
            .collect(),
    );
    opts.cfl = cfl;
    opts.flux = match flux {
        FluxArg::Auto => FluxScheme::Auto,
        FluxArg::Centered => FluxScheme::Centered,
        FluxArg::Upwind => FluxScheme::Upwind,
    };
    let ev = evolve(&params, &grid, &phi0, &opts)?;
    let est = estimate_speed(&ev, profile.v_at(0.0))?;
    let rel_speed_error = ((est.c_measured - spec.c) / spec.c).abs();
    let dx = grid.dx();
    let bounds = check_bounds(&ev, lo0, hi0, 1e-6 + 10.0 * dx * dx);

    let speed_ok = rel_speed_error <= speed_tol;
    let residual_ok = residual_max <= residual_tol;
    let pass = speed_ok && residual_ok && bounds.ok;
    let doc = VerifyReport {
        command: "verify",
        model: ModelBlock::new(&params),
        v_left,
        v_right,
        c_spec: spec.c,
        c_measured: est.c_measured,
        rel_speed_error,
        speed_tol,
        speed_ok,
        residual_max,
        residual_tol,
        residual_ok,
        bounds: BoundsBlock::from(&bounds),
        grid: GridBlock {
            x_lo,
            x_hi,
            cells,
            dx,
        },
        wave_width,
        travel_widths,
        tau_end,
        scheme: match ev.scheme {
            FluxScheme::Centered => "centered",
            FluxScheme::Upwind => "upwind",
            FluxScheme::Auto => "auto",
        },
        steps: ev.steps,
        crossings: est.crossings.len(),
        fit_rms: est.fit_rms,
        conservation_defect: ev.conservation_defect,
        pass,
    };
    emit(&args.common, &report::to_json(&doc))?;
    if pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::numeric(format!(
            "verification failed: speed_ok={speed_ok}, residual_ok={residual_ok}, bounds_ok={}",
            bounds.ok
        )))
    }
}

fn parse_thetas(text: &str) -> CliResult<Vec<f64>> {
    let mut thetas = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let theta: f64 = piece
            .parse()
            .map_err(|e| Failure::invalid(format!("--thetas entry `{piece}`: {e}")))?;
        if !(theta.is_finite() && theta > 0.0 && theta <= 1.0) {
            return Err(Failure::invalid(format!(
                "--thetas entries must lie in (0, 1], got {theta}"
            )));
        }
        thetas.push(theta);
    }
    if thetas.is_empty() {
        return Err(Failure::invalid("--thetas must name at least one exposure"));
    }
    Ok(thetas)
}

pub fn cmd_simulate(args: SimulateArgs) -> CliResult<ExitCode> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    configure_threads(&args.common, &cfg)?;
    let params = resolve_model(&args.model, &cfg)?;
    let (v_left, v_right) = resolve_limits(&args.limits, &cfg)?;
    let config = SdeConfig {
        x0: cfg.resolve("x0", args.x0, 0.0)?,
        t0: cfg.resolve("t0", args.t0, 0.0)?,
        t_end: cfg.resolve("t-end", args.t_end, 2.0)?,
        n_steps: cfg.resolve("steps", args.steps, 400)?,
        n_paths: cfg.resolve("paths", args.paths, 20_000)?,
        seed: cfg.resolve("seed", args.common.seed, 42)?,
    };
    config.validate()?;
    let thetas_text = cfg
        .resolve_opt("thetas", args.thetas.clone())?
        .unwrap_or_else(|| "0.25,0.5,0.75,1".to_string());
    let thetas = parse_thetas(&thetas_text)?;
    let utility_arg =
        value_enum_from_cfg(&cfg, "utility", args.utility)?.unwrap_or(UtilityArg::Wave);
    let lambda = cfg.resolve("lambda", args.lambda, 1.0)?;

    let spec = compute_wave_spec(&params, v_left, v_right)?;
    let profile = integrate_profile(&spec, None)?;
    let (utility, utility_label) = match utility_arg {
        UtilityArg::Wave => (
            Utility::Tabulated(synth_terminal_utility(&spec, &profile)?),
            "wave-synthesized".to_string(),
        ),
        UtilityArg::Cara => (
            Utility::Cara { lambda },
            format!("cara(lambda={})", fmt_g17(lambda)),
        ),
    };

    let wave_policy = policy_from_wave(&spec, &profile, config.t_end);
    let wave = simulate(&params, &config, &wave_policy, &utility)?;
    let mut policies = vec![PolicyResult::from(&wave)];
    let mut comparisons = Vec::new();
    for &theta in &thetas {
        let res = simulate(&params, &config, &PolicyField::Constant { theta }, &utility)?;
        let combined = wave.std_error.hypot(res.std_error);
        let z_score = (wave.mean_utility - res.mean_utility) / combined;
        comparisons.push(Comparison {
            policy: res.policy.clone(),
            z_score,
            favours_wave: z_score >= 0.0,
        });
        policies.push(PolicyResult::from(&res));
    }

    let doc = SimulateReport {
        command: "simulate",
        model: ModelBlock::new(&params),
        v_left,
        v_right,
        config,
        utility: utility_label,
        policies,
        comparisons,
    };
    emit(&args.common, &report::to_json(&doc))?;
    Ok(ExitCode::SUCCESS)
}

// ─────────────────────────────── sweep ────────────────────────────────────

struct Range {
    from: f64,
    to: f64,
    steps: usize,
}

impl Range {
    fn resolve(
        cfg: &FileConfig,
        name: &str,
        from: Option<f64>,
        to: Option<f64>,
        steps: Option<usize>,
    ) -> CliResult<Self> {
        let from = cfg.resolve_required(&format!("{name}-from"), from)?;
        let to = cfg.resolve(&format!("{name}-to"), to, from)?;
        let steps = cfg.resolve(&format!("{name}-steps"), steps, 1)?;
        if steps == 0 {
            return Err(Failure::invalid(format!(
                "--{name}-steps must be at least 1"
            )));
        }
        if steps > 1 && to == from {
            return Err(Failure::invalid(format!(
                "--{name}-steps > 1 needs --{name}-to different from --{name}-from"
            )));
        }
        Ok(Self { from, to, steps })
    }

    fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        (0..self.steps)
            .map(|i| self.from + (self.to - self.from) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// A chord `(c, K0)` carries a wave iff some adjacent equilibrium pair forms
/// a validated heteroclinic connection; orientation follows the endpoint
/// stabilities.
fn chord_has_wave(params: &ModelParams, roots: &[PhiRoot]) -> bool {
    for w in roots.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let pair = if a.g_prime > 0.0 && b.g_prime < 0.0 {
            Some((a.v, b.v))
        } else if a.g_prime < 0.0 && b.g_prime > 0.0 {
            Some((b.v, a.v))
        } else {
            None
        };
        if let Some((vl, vr)) = pair {
            if let Ok(spec) = build_wave_spec(params, vl, vr) {
                if let Ok(rep) = connection_report(&spec) {
                    if rep.valid {
                        return true;
                    }
                }
            }
        }
    }
    false
}

struct SweepRow {
    v_left: Option<f64>,
    v_right: Option<f64>,
    c: Option<f64>,
    k0: Option<f64>,
    root_count: Option<usize>,
    wave_exists: bool,
    note: String,
}

fn push_row(out: &mut String, params: &ModelParams, row: &SweepRow) {
    let opt = |x: Option<f64>| x.map(fmt_g17).unwrap_or_default();
    let general = params.variant == Variant::General;
    let fields = [
        report::variant_str(params.variant).to_string(),
        fmt_g17(params.omega),
        if general {
            fmt_g17(params.alpha)
        } else {
            String::new()
        },
        if general {
            fmt_g17(params.beta)
        } else {
            String::new()
        },
        if general {
            fmt_g17(params.m)
        } else {
            String::new()
        },
        opt(row.v_left),
        opt(row.v_right),
        opt(row.c),
        opt(row.k0),
        row.root_count.map(|n| n.to_string()).unwrap_or_default(),
        row.wave_exists.to_string(),
        csv_field(&row.note),
    ];
    out.push_str(&fields.join(","));
    out.push('\n');
}

pub fn cmd_sweep(args: SweepArgs) -> CliResult<ExitCode> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let params = resolve_model(&args.model, &cfg)?;
    let mode = value_enum_from_cfg(&cfg, "mode", args.mode)?.unwrap_or(SweepModeArg::Limits);

    let mut out = String::new();
    out.push_str("variant,omega,alpha,beta,m,v_left,v_right,c,k0,root_count,wave_exists,note\n");

    match mode {
        SweepModeArg::Limits => {
            let vl = Range::resolve(
                &cfg,
                "v-left",
                args.v_left_from,
                args.v_left_to,
                args.v_left_steps,
            )?;
            let vr = Range::resolve(
                &cfg,
                "v-right",
                args.v_right_from,
                args.v_right_to,
                args.v_right_steps,
            )?;
            for &v_left in &vl.points() {
                for &v_right in &vr.points() {
                    let mut row = SweepRow {
                        v_left: Some(v_left),
                        v_right: Some(v_right),
                        c: None,
                        k0: None,
                        root_count: None,
                        wave_exists: false,
                        note: String::new(),
                    };
                    match build_wave_spec(&params, v_left, v_right) {
                        Err(e) => row.note = e.to_string(),
                        Ok(spec) => {
                            row.c = Some(spec.c);
                            row.k0 = Some(spec.k0);
                            let (def_lo, def_hi) = default_scan(v_left, v_right);
                            let scan = (
                                cfg.resolve("scan-lo", args.scan_lo, def_lo)?,
                                cfg.resolve("scan-hi", args.scan_hi, def_hi)?,
                            );
                            match find_phi_roots(&params, spec.c, spec.k0, scan) {
                                Err(e) => row.note = e.to_string(),
                                Ok(roots) => row.root_count = Some(roots.len()),
                            }
                            match connection_report(&spec) {
                                Err(e) => {
                                    if row.note.is_empty() {
                                        row.note = e.to_string();
                                    }
                                }
                                Ok(rep) => {
                                    row.wave_exists = rep.valid;
                                    if let (true, Some(msg)) = (row.note.is_empty(), rep.message) {
                                        row.note = msg;
                                    }
                                }
                            }
                        }
                    }
                    push_row(&mut out, &params, &row);
                }
            }
        }
        SweepModeArg::Chord => {
            let cr = Range::resolve(&cfg, "c", args.c_from, args.c_to, args.c_steps)?;
            let kr = Range::resolve(&cfg, "k0", args.k0_from, args.k0_to, args.k0_steps)?;
            let scan = (
                cfg.resolve("scan-lo", args.scan_lo, 0.02)?,
                cfg.resolve("scan-hi", args.scan_hi, 20.0)?,
            );
            for &c in &cr.points() {
                for &k0 in &kr.points() {
                    let mut row = SweepRow {
                        v_left: None,
                        v_right: None,
                        c: Some(c),
                        k0: Some(k0),
                        root_count: None,
                        wave_exists: false,
                        note: String::new(),
                    };
                    match find_phi_roots(&params, c, k0, scan) {
                        Err(e) => row.note = e.to_string(),
                        Ok(roots) => {
                            row.root_count = Some(roots.len());
                            row.wave_exists = chord_has_wave(&params, &roots);
                        }
                    }
                    push_row(&mut out, &params, &row);
                }
            }
        }
    }

    emit(&args.common, &out)?;
    Ok(ExitCode::SUCCESS)
}
